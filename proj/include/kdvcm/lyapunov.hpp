#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "kdvcm/manifold.hpp"
#include "kdvcm/reduced.hpp"

namespace kdv {

struct LyapunovData {
  double a_p0 = 0.0;  // a'(0)
  double b_p0 = 0.0;  // b'(0)
  double c_p0 = 0.0;  // c'(0)
  double mu = 1e-3;   // coupling in V = E - mu K Kdot, must lie in (0, 1/4]
  double sylvester_det = 0.0;
};

/// Builds the data from the manifold coefficients; throws std::invalid_argument
/// for mu outside (0, 1/4].
LyapunovData make_lyapunov_data(const ManifoldCoeffs& mc, double mu);

/// K(m) = a'(0) m1^2 + b'(0) m1 m2 + c'(0) m2^2.
double ktilde(const ModalState& m, const LyapunovData& d);
Eigen::Vector2d ktilde_gradient(const ModalState& m, const LyapunovData& d);

/// Leading-order derivative of K along the rotation m' = q (-m2, m1):
/// q b'(0) m1^2 + 2q (c'(0) - a'(0)) m1 m2 - q b'(0) m2^2.
double ktilde_dot(const ModalState& m, const LyapunovData& d, double q);
Eigen::Vector2d ktilde_dot_gradient(const ModalState& m, const LyapunovData& d, double q);

Eigen::Matrix4d sylvester_matrix(double a, double b, double c);

/// Expanded determinant as usually quoted. It equals det(sylvester_matrix)
/// only on a + c = 0 (the general difference is -a b (a - b)(a + c)); the
/// manifold has a'(0) = -c'(0), so the two agree there.
double sylvester_closed_form(double a, double b, double c);

struct SylvesterResult {
  double explicit_det;
  double closed_form;
};

/// Both routes; throws NumericalError if they differ by more than 1e-10 * scale,
/// which happens off a + c = 0.
SylvesterResult sylvester_det(double a, double b, double c);

struct NondegeneracyReport {
  bool verdict = false;      // c'(0) != 0 and det(S) != 0
  double sphere_min = 0.0;   // min over unit directions of K^2 + (Kdot/q)^2
  ModalState argmin;
  int directions = 0;
};

NondegeneracyReport nondegeneracy_check(const LyapunovData& d, double q, int directions = 10000);

/// E(m) = 1/2 || m1 phi1 + m2 phi2 + m1^2 a + m1 m2 b + m2^2 c ||^2 through the
/// Gram matrix of {phi1, phi2, a, b, c}.
class SurrogateEnergy {
 public:
  SurrogateEnergy(const ManifoldCoeffs& mc, const EigenPair& pair);
  double value(const ModalState& m) const;
  Eigen::Vector2d gradient(const ModalState& m) const;
  const Eigen::Matrix<double, 5, 5>& gram() const { return gram_; }

 private:
  Eigen::Matrix<double, 5, 5> gram_;
};

/// dE/dt along the cubic field F.
double energy_dot(const ModalState& m, const SurrogateEnergy& e, const ReducedModel& model);

/// V = E - mu K Kdot.
double vtilde(const ModalState& m, const LyapunovData& d, const SurrogateEnergy& e, double q);

/// dV/dt along the cubic field F, by the chain rule.
double vtilde_dot(const ModalState& m, const LyapunovData& d, const SurrogateEnergy& e,
                  const ReducedModel& model);

struct ScanReport {
  double radius = 0.0;
  double mu = 0.0;
  int samples = 0;
  double max_vdot = 0.0;  // should be negative
  ModalState argmax;
  double eta1_estimate = 0.0;
};

/// Evaluates dV/dt on the annulus radius/2 <= |m| <= radius. Without a seed the
/// samples form a polar lattice (radii x angles); with a seed they are drawn
/// uniformly in area from a fixed-seed generator. Throws std::invalid_argument
/// for samples < 1000 or radius above the chart radius.
ScanReport vtilde_dot_scan(const LyapunovData& d, const SurrogateEnergy& e, const ReducedModel& model,
                           double radius, int samples, std::optional<std::uint64_t> seed = std::nullopt);

/// The same scan for each mu in the list.
std::vector<ScanReport> mu_sweep(const LyapunovData& d, const SurrogateEnergy& e,
                                 const ReducedModel& model, double radius, int samples,
                                 const std::vector<double>& mus);

}  // namespace kdv
