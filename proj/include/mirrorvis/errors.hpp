#pragma once

#include <stdexcept>
#include <string>

namespace mirrorvis {

// Parameter values that violate a documented precondition, malformed
// configuration input, mismatched dimensions.
class InvalidParams : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Integration blow-up, non-finite intermediates, loss of positivity
// beyond the monitoring tolerance.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Coherent-state amplitude does not fit in the requested truncation.
// Carries the probability weight lost outside the basis.
class TruncationLeakage : public InvalidParams {
 public:
  TruncationLeakage(const std::string& msg, double leaked)
      : InvalidParams(msg), leaked_probability(leaked) {}

  double leaked_probability;
};

}  // namespace mirrorvis
