#pragma once

#include <stdexcept>
#include <string>

namespace confdom {

// Raised when an estimate or interval collapses because the sample carries no
// dispersion (all values equal): the maximizing sigma would be 0, which lies
// outside the state space R x R_+.
class degenerate_error : public std::runtime_error {
 public:
  explicit degenerate_error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

}  // namespace confdom
