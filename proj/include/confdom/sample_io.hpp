#pragma once

#include <istream>
#include <string>
#include <vector>

#include "confdom/measurement.hpp"

namespace confdom {

// Sample file format: UTF-8 text, one finite decimal float per line; blank
// lines and lines starting with '#' are ignored. Anything else (multiple
// tokens, non-numeric text, nan/inf) is rejected.
std::vector<double> read_samples(std::istream& in);

// Reads a whole file in the format above; path "-" means stdin.
Sample load_sample_file(const std::string& path);

}  // namespace confdom
