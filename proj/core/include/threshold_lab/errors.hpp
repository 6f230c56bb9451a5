#pragma once

#include <stdexcept>
#include <string>

namespace threshold_lab {

// Bad input: malformed files, out-of-range parameters, trivial families
// where a non-trivial one is required.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configured enumeration or search cap was hit. The message names the cap
// and the fallback the caller should use instead.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace threshold_lab
