#pragma once

#include <stdexcept>

namespace qpoi {

// Invalid run/experiment configuration (unknown names, shape mismatches, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numerical breakdown that survived internal mitigation (Cholesky failure
// after jitter escalation, probability results outside tolerance, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Training inputs contain (near-)duplicate rows, which a noise-free
// interpolating model cannot accept.
class DuplicateRowsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace qpoi
