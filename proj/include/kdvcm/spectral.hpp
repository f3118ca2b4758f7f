#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kdvcm/exptrig.hpp"

namespace kdv {

/// Interval length 2 pi sqrt((j^2 + l^2 + j l) / 3) at which the linearized
/// KdV operator acquires imaginary-axis eigenvalues.
struct CriticalLength {
  int j;
  int l;
  double value;
};

/// All (j, l) in [1, max_index]^2, deduplicated by value (1e-12), ascending.
/// The first pair found (smallest j) is kept for each distinct value.
std::vector<CriticalLength> critical_lengths(int max_index);

/// Eigenvalue pair +-iq of A phi = -phi' - phi''' with phi(0)=phi(L)=phi'(L)=0,
/// and the real orthonormal eigenfunctions spanning the center eigenspace.
struct EigenPair {
  double q;
  ExpTrigPoly phi1;
  ExpTrigPoly phi2;
  double theta;
};

EigenPair build_eigen_pair();

struct EigenResidual {
  double first;   // sup |phi1' + phi1''' + q phi2|
  double second;  // sup |phi2' + phi2''' - q phi1|
};

EigenResidual eigen_residual(const EigenPair& pair, int points = 2000);

/// A closed-form integral of products of phi1, phi2 and their derivatives,
/// together with its exact value.
struct IntegralIdentity {
  std::string name;
  double computed;
  double expected;
};

/// Orthonormality plus the bilinear and trilinear identities feeding the
/// reduced vector field (eleven in total).
std::vector<IntegralIdentity> integral_identities(const EigenPair& pair, double c1);

struct SpectrumReport {
  int grid_size = 0;
  std::vector<std::complex<double>> eigenvalues;  // sorted by real part, descending
  std::complex<double> nearest_pair;              // eigenvalue closest to +iq
  double gap = 0.0;      // max Re over resolved eigenvalues, excluding +-iq pair
  double raw_gap = 0.0;  // same over every eigenvalue, grid-scale modes included
  double resolved_cutoff = 0.0;  // |lambda| bound defining "resolved"
};

/// Finite-difference matrix of A on `grid_size` uniform intervals: centered
/// second-order stencils inside, one-sided second-order third-derivative
/// stencils at the two nodes next to each end, and the constraints
/// y(0) = y(L) = 0, y'(L) = 0 eliminating y_0, y_N and y_{N-1}.
Eigen::MatrixXd discrete_operator(int grid_size);

/// Dense eigen-decomposition of discrete_operator. Throws std::invalid_argument
/// for grid_size < 64 and NumericalError if the matrix is singular.
SpectrumReport discrete_spectrum(int grid_size);

}  // namespace kdv
