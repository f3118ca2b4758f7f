#pragma once

#include <complex>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "kdvcm/manifold.hpp"
#include "kdvcm/spectral.hpp"

namespace kdv {

struct CubicCoefficients {
  double A1 = 0.0, B1 = 0.0, C1 = 0.0, D1 = 0.0;
  double A2 = 0.0, B2 = 0.0, C2 = 0.0, D2 = 0.0;
};

/// The eight integrals of a, b, c against phi_i phi_j', computed exactly.
CubicCoefficients cubic_coefficients(const ManifoldCoeffs& mc, const EigenPair& pair);

struct NormalForm {
  std::complex<double> g20, g11, g02, g21;
  std::complex<double> rho;
  double rho1 = 0.0;  // Re rho, i.e. (3A1 + C1 + B2 + 3D2) / 8
  double rho2 = 0.0;  // Im rho
  // (A1 + C1 + B2 + 3D2) / 8, the other reading of the first Lyapunov coefficient.
  double rho1_single_a1 = 0.0;
};

NormalForm normal_form(const CubicCoefficients& k, double q, double c1);

struct ModalState {
  double m1 = 0.0;
  double m2 = 0.0;
  double norm() const { return std::hypot(m1, m2); }
};

struct ReducedModel {
  double q = 0.0;
  double c1 = 0.0;
  CubicCoefficients cubic;
  double chart_radius = 0.1;  // radius of the chart on which F is trusted
};

ReducedModel make_reduced_model(const ManifoldCoeffs& mc, const EigenPair& pair, double c1);

/// Cubic truncation of the reduced field. Throws std::domain_error
/// ("outside manifold chart") when |m| exceeds the chart radius.
ModalState vector_field(const ModalState& m, const ReducedModel& model);

/// Same polynomial without the chart check.
ModalState vector_field_unchecked(const ModalState& m, const ReducedModel& model);

/// dF/dm at m.
Eigen::Matrix2d jacobian(const ModalState& m, const ReducedModel& model);

struct Trajectory {
  std::vector<double> times;
  std::vector<ModalState> states;
  double step_size = 0.0;
  bool escaped = false;  // stopped early because |m| left the chart
};

/// Classic fourth-order Runge-Kutta. Every `stride`-th step is recorded, plus
/// the initial state; a final partial stride is recorded too.
Trajectory integrate(const ModalState& m0, double horizon, double dt, const ReducedModel& model,
                     int stride = 1);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares of y on x. Throws std::invalid_argument if fewer
/// than two points. A constant y gives slope 0 and r_squared 1.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

/// Fit of r(t)^-2 against t; the slope estimates -2 rho1.
/// Throws std::invalid_argument with fewer than 10 samples or r = 0.
LinearFit decay_fit(const Trajectory& traj);

/// Slope of the unwrapped polar angle against t.
double rotation_rate(const Trajectory& traj);

/// Both readings of rho1 compared with the decay rate measured by direct
/// integration of F.
struct Rho1Arbitration {
  double rho1_three_a1 = 0.0;
  double rho1_single_a1 = 0.0;
  double rho1_fit = 0.0;  // -slope / 2
  double fit_r_squared = 0.0;
  bool three_a1_matches_golden = false;
  bool single_a1_matches_golden = false;
  bool fit_prefers_three_a1 = false;  // |fit - 3A1 variant| < |fit - A1 variant|
};

Rho1Arbitration arbitrate_rho1(const ReducedModel& model, const NormalForm& nf, const Trajectory& traj);

/// CSV with header t,m1,m2,r,theta and 17 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace kdv
