#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "kdvcm/manifold.hpp"
#include "kdvcm/reduced.hpp"
#include "kdvcm/spectral.hpp"

namespace kdv {

/// n interior nodes x_i = i dx, i = 1..n, with dx = L / (n + 1).
struct Grid {
  int n = 0;
  double dx = 0.0;
  std::vector<double> nodes;  // all n + 2 nodes, ends included

  static Grid make(int n, double length);
};

struct StateField {
  Eigen::VectorXd values;  // interior samples; y(0) = y(L) = 0 implicitly
  double time = 0.0;
};

struct RunReport {
  std::vector<double> times;
  std::vector<double> energy;  // 1/2 ||y||^2 in the discrete norm
  std::vector<double> flux;    // y_x(t, 0)^2 from a one-sided difference
  std::vector<double> m1;
  std::vector<double> m2;
  std::vector<double> distance;  // to the quadratic surrogate, if one was given
  double max_energy_increase = 0.0;  // largest E_{k+1} - E_k over all steps, relative to E(0)
  long long steps = 0;
  StateField final_state;
};

/// Method of lines for y_t + y_x + y y_x + y_xxx = 0 with y(0) = y(L) = 0 and
/// y_x(L) = 0. Space: fourth-order interior / second-order boundary
/// summation-by-parts first derivative, cubed for y_xxx, the outflow condition
/// y_x(L) = 0 imposed by a penalty term, the nonlinearity in skew-symmetric
/// form. Time: implicit midpoint rule with the nonlinear stage resolved by
/// fixed-point iteration against one sparse LU factorization. The discrete
/// energy then obeys E_{k+1} - E_k = -dt/2 (u_0^2 + u_N^2) at the midpoint.
class KdvSolver {
 public:
  struct Options {
    double max_initial_norm = 5e-2;
    double fixed_point_tol = 1e-14;
    int max_fixed_point_iterations = 60;
  };

  /// `surrogate` enables the distance series. Throws std::invalid_argument for
  /// n < 63 or dt <= 0.
  KdvSolver(int n, double dt, const EigenPair& pair, const ManifoldCoeffs* surrogate = nullptr);
  KdvSolver(int n, double dt, const EigenPair& pair, const ManifoldCoeffs* surrogate, Options opts);
  ~KdvSolver();
  KdvSolver(KdvSolver&&) noexcept;
  KdvSolver& operator=(KdvSolver&&) noexcept;

  const Grid& grid() const { return grid_; }
  double dt() const { return dt_; }

  /// Samples f at the interior nodes.
  StateField sample(const std::function<double(double)>& f) const;
  StateField sample(const ExpTrigPoly& f) const;
  /// m1 phi1 + m2 phi2 + m1^2 a + m1 m2 b + m2^2 c; needs a surrogate.
  StateField on_surrogate(const ModalState& m) const;

  /// One implicit-midpoint step. Throws NumericalError if the fixed point does
  /// not converge or the state is no longer finite.
  StateField step(const StateField& y) const;

  /// Integrates to `horizon`, recording every `sample_every`-th step. Throws
  /// std::invalid_argument if ||y0|| exceeds the smallness bound and
  /// NumericalError (the "instability" message) if ||y|| passes 2 ||y0||.
  RunReport solve(const StateField& y0, double horizon, int sample_every = 1) const;

  double energy(const StateField& y) const;
  double norm(const StateField& y) const;
  /// (4 y_1 - y_2) / (2 dx), independent of the scheme's own boundary derivative.
  double boundary_slope(const StateField& y) const;
  /// Scheme's first derivative at x = 0 and x = L.
  std::pair<double, double> scheme_boundary_slopes(const StateField& y) const;
  ModalState project_modal(const StateField& y) const;
  double distance_to_surrogate(const StateField& y) const;

  /// Interior linear operator (without the nonlinearity).
  const Eigen::SparseMatrix<double>& linear_operator() const { return a_int_; }
  /// Diagonal quadrature weights on the interior nodes.
  const Eigen::VectorXd& weights() const { return h_int_; }

 private:
  Eigen::VectorXd nonlinear(const Eigen::VectorXd& y) const;
  Eigen::VectorXd full(const Eigen::VectorXd& y) const;

  Grid grid_;
  double dt_;
  Options opts_;
  Eigen::SparseMatrix<double> d1_;     // full-node first derivative
  Eigen::VectorXd h_full_;
  Eigen::VectorXd h_int_;
  Eigen::SparseMatrix<double> a_int_;
  struct Factor;
  std::unique_ptr<Factor> lu_;
  Eigen::VectorXd phi1_, phi2_;
  bool has_surrogate_ = false;
  Eigen::VectorXd a_, b_, c_;
};

/// Summation-by-parts first-derivative matrix on N + 1 uniform nodes and its
/// diagonal norm. Exposed for testing.
Eigen::SparseMatrix<double> sbp_first_derivative(int intervals, double h);
Eigen::VectorXd sbp_norm(int intervals, double h);

/// max over interior samples of |dE/dt + flux/2| / E(0), with dE/dt by centered
/// differences. Returns 0 for a zero solution. Throws std::invalid_argument
/// with fewer than 100 samples.
double energy_identity_check(const RunReport& report);

/// Exponential fit of the distance series over the transient: samples from
/// t = 0 until d first drops below `fraction` d(0) (or all samples in the
/// first `window` of the run if it never does).
struct AttractionFit {
  double omega_hat = 0.0;  // -slope of log d
  double r_squared = 0.0;
  double window_end = 0.0;
  bool reached_fraction = false;
  bool monotone = false;  // d non-increasing across the window samples
};

AttractionFit attraction_fit(const RunReport& report, double fraction = 0.05, double window = 0.2);

/// Fit of ||y(t)||^-2 = 1 / (2 E) against t; the slope estimates -2 rho1.
LinearFit norm_decay_fit(const RunReport& report);

void write_energy_csv(std::ostream& os, const RunReport& r);
void write_modal_csv(std::ostream& os, const RunReport& r);
void write_distance_csv(std::ostream& os, const RunReport& r);

}  // namespace kdv
