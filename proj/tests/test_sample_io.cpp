#include "confdom/sample_io.hpp"

#include <sstream>
#include <stdexcept>

#include "doctest.h"

using namespace confdom;

TEST_SUITE("sample_io") {

TEST_CASE("one float per line, comments and blanks ignored") {
  std::istringstream in(
      "# measured values\n"
      "1.5\n"
      "\n"
      "  -2.25  \n"
      "   # indented comment\n"
      "3e-2\n");
  auto values = read_samples(in);
  REQUIRE(values.size() == 3);
  CHECK(values[0] == 1.5);
  CHECK(values[1] == -2.25);
  CHECK(values[2] == 0.03);
}

TEST_CASE("carriage returns are tolerated") {
  std::istringstream in("1.0\r\n2.0\r\n");
  auto values = read_samples(in);
  REQUIRE(values.size() == 2);
  CHECK(values[1] == 2.0);
}

TEST_CASE("malformed lines are rejected") {
  {
    std::istringstream in("1.0\nbogus\n");
    CHECK_THROWS_AS(read_samples(in), std::runtime_error);
  }
  {
    std::istringstream in("1.0 2.0\n");
    CHECK_THROWS_AS(read_samples(in), std::runtime_error);
  }
  {
    std::istringstream in("nan\n");
    CHECK_THROWS_AS(read_samples(in), std::runtime_error);
  }
  {
    std::istringstream in("inf\n");
    CHECK_THROWS_AS(read_samples(in), std::runtime_error);
  }
  {
    std::istringstream in("1.5suffix\n");
    CHECK_THROWS_AS(read_samples(in), std::runtime_error);
  }
}

TEST_CASE("missing files and empty files fail loudly") {
  CHECK_THROWS_AS(load_sample_file("/no/such/file.dat"), std::runtime_error);
}

}  // TEST_SUITE
