#pragma once

#include <stdexcept>
#include <string>

namespace lrcorr {

// Invalid parameters, configurations, or preconditions. Maps to CLI exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// File system failures. Maps to CLI exit code 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lrcorr
