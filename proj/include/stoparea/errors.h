#pragma once

#include <stdexcept>

namespace stoparea {

// Thrown when a numerical routine cannot certify the requested tolerance
// (mapped to exit code 3 by the CLI).
struct ToleranceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace stoparea
