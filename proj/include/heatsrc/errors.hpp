#pragma once

#include <stdexcept>

namespace heatsrc {

// Bad user-facing input: config files, CLI arguments, malformed parameter sets.
// The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Runtime numerical failure: non-finite integrand values, non-finite field
// entries, diverged accumulations. The CLI maps this to exit code 3.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace heatsrc
