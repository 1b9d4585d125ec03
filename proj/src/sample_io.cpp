#include "confdom/sample_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace confdom {

namespace {

std::string trim(const std::string& line) {
  std::size_t begin = 0;
  std::size_t end = line.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(line[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(line[end - 1]))) --end;
  return line.substr(begin, end - begin);
}

}  // namespace

std::vector<double> read_samples(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string token = trim(line);
    if (token.empty() || token[0] == '#') continue;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v)) {
      throw std::runtime_error("line " + std::to_string(lineno) +
                               ": expected one finite decimal float, got \"" + token + "\"");
    }
    values.push_back(v);
  }
  return values;
}

Sample load_sample_file(const std::string& path) {
  if (path == "-") return Sample(read_samples(std::cin));
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open data file: " + path);
  try {
    return Sample(read_samples(file));
  } catch (const std::invalid_argument&) {
    throw std::runtime_error("data file " + path + " contains no values");
  }
}

}  // namespace confdom
