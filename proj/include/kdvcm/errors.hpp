#pragma once

#include <stdexcept>
#include <string>

namespace kdv {

/// Raised when a numerical stage cannot produce a trustworthy result
/// (singular systems, resonant forcing, blow-up, non-convergence).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ResonanceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace kdv
