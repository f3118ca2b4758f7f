#pragma once

// Problem constants for the KdV equation on the critical interval [0, L],
// L = 2*pi*sqrt(7/3) (the (j, l) = (1, 2) member of the critical-length set).
//
// Every constant is evaluated once in extended precision from its defining
// formula and then rounded to double; nothing here is a transcribed decimal.

namespace kdv {

struct Constants {
  double length;     // L = 2 pi sqrt(7/3)
  double sqrt21;     // sqrt(21); every eigenfunction frequency is k / sqrt(21)
  double q;          // imaginary eigenvalue 20 / (21 sqrt(21))
  double theta;      // eigenfunction normalization (1/sqrt(14 pi)) (3/7)^(1/4)
  double c1;         // 177147 / (392392 pi) sqrt(1/(2 pi)) (3/7)^(1/4)
  double sqrt3;

  /// Frequency k / sqrt(21), rounded from extended precision.
  double freq(int k) const;
};

/// Process-wide cached constants.
const Constants& constants();

/// Published reference values the pipeline is checked against.
/// Each carries the tolerance used by the acceptance suite.
namespace golden {

// First Lyapunov coefficient (real part of the normal-form coefficient rho).
inline constexpr double kRho1 = -0.014325;
inline constexpr double kRho1Tol = 5e-4;

// Boundary slope c'(0) of the quadratic manifold coefficient c.
inline constexpr double kCPrime0 = 0.0118;
inline constexpr double kCPrime0Tol = 5e-4;
inline constexpr double kCPrime0OracleTol = 1e-3;

// Determinant of the Sylvester matrix of the two boundary quadratics.
inline constexpr double kSylvesterDet = -0.0197;
inline constexpr double kSylvesterDetTol = 5e-3;

}  // namespace golden

}  // namespace kdv
