#include "kdvcm/pde.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <Eigen/SparseLU>

#include "kdvcm/errors.hpp"

namespace kdv {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// Boundary block of the 4-2 diagonal-norm operator (rows 0..3, columns 0..5).
constexpr double kBoundary[4][6] = {
    {-24.0 / 17.0, 59.0 / 34.0, -4.0 / 17.0, -3.0 / 34.0, 0.0, 0.0},
    {-0.5, 0.0, 0.5, 0.0, 0.0, 0.0},
    {4.0 / 43.0, -59.0 / 86.0, 0.0, 59.0 / 86.0, -4.0 / 43.0, 0.0},
    {3.0 / 98.0, 0.0, -59.0 / 98.0, 0.0, 32.0 / 49.0, -4.0 / 49.0},
};
constexpr double kNorm[4] = {17.0 / 48.0, 59.0 / 48.0, 43.0 / 48.0, 49.0 / 48.0};

}  // namespace

Grid Grid::make(int n, double length) {
  if (n < 63) throw std::invalid_argument("Grid: need at least 63 interior points");
  Grid g;
  g.n = n;
  g.dx = length / (n + 1);
  g.nodes.resize(static_cast<std::size_t>(n + 2));
  for (int i = 0; i <= n + 1; ++i) g.nodes[static_cast<std::size_t>(i)] = i * g.dx;
  g.nodes.back() = length;
  return g;
}

Eigen::SparseMatrix<double> sbp_first_derivative(int intervals, double h) {
  const int nn = intervals;
  if (nn < 12) throw std::invalid_argument("sbp_first_derivative: need at least 12 intervals");
  Triplets t;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 6; ++j) {
      if (kBoundary[i][j] == 0.0) continue;
      t.emplace_back(i, j, kBoundary[i][j] / h);
      t.emplace_back(nn - i, nn - j, -kBoundary[i][j] / h);
    }
  }
  const double w[5] = {1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0};
  for (int i = 4; i <= nn - 4; ++i) {
    for (int k = 0; k < 5; ++k) {
      if (w[k] != 0.0) t.emplace_back(i, i - 2 + k, w[k] / h);
    }
  }
  Eigen::SparseMatrix<double> d(nn + 1, nn + 1);
  d.setFromTriplets(t.begin(), t.end());
  return d;
}

Eigen::VectorXd sbp_norm(int intervals, double h) {
  Eigen::VectorXd hv = Eigen::VectorXd::Constant(intervals + 1, h);
  for (int i = 0; i < 4; ++i) {
    hv(i) = kNorm[i] * h;
    hv(intervals - i) = kNorm[i] * h;
  }
  return hv;
}

struct KdvSolver::Factor {
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
};

KdvSolver::KdvSolver(int n, double dt, const EigenPair& pair, const ManifoldCoeffs* surrogate)
    : KdvSolver(n, dt, pair, surrogate, Options{}) {}

KdvSolver::KdvSolver(int n, double dt, const EigenPair& pair, const ManifoldCoeffs* surrogate,
                     Options opts)
    : grid_(Grid::make(n, pair.phi1.domain_length())), dt_(dt), opts_(opts) {
  if (!(dt > 0.0)) throw std::invalid_argument("KdvSolver: dt must be positive");
  const int nn = n + 1;  // intervals
  const double h = grid_.dx;
  d1_ = sbp_first_derivative(nn, h);
  h_full_ = sbp_norm(nn, h);
  h_int_ = h_full_.segment(1, n);

  // -(D + D^3) - H^{-1} D^T e_N e_N^T D: the last term makes the energy
  // balance lose the spurious +u_N^2 / 2 from the right boundary.
  Eigen::SparseMatrix<double> d3 = d1_ * d1_ * d1_;
  Eigen::SparseMatrix<double> a = -(d1_ + d3);
  {
    Eigen::SparseVector<double> rown = d1_.row(nn).transpose();
    Eigen::SparseMatrix<double> d1t = d1_.transpose();
    Triplets t;
    for (Eigen::SparseVector<double>::InnerIterator rj(rown); rj; ++rj) {
      for (Eigen::SparseMatrix<double>::InnerIterator ci(d1t, nn); ci; ++ci) {
        t.emplace_back(ci.row(), rj.index(), -ci.value() * rj.value() / h_full_(ci.row()));
      }
    }
    Eigen::SparseMatrix<double> sat(nn + 1, nn + 1);
    sat.setFromTriplets(t.begin(), t.end());
    a += sat;
  }
  a_int_ = a.block(1, 1, n, n);

  Eigen::SparseMatrix<double> eye(n, n);
  eye.setIdentity();
  Eigen::SparseMatrix<double> m = eye - (0.5 * dt) * a_int_;
  m.makeCompressed();
  lu_ = std::make_unique<Factor>();
  lu_->lu.compute(m);
  if (lu_->lu.info() != Eigen::Success) throw NumericalError("KdvSolver: factorization failed");

  phi1_ = sample(pair.phi1).values;
  phi2_ = sample(pair.phi2).values;
  if (surrogate != nullptr) {
    has_surrogate_ = true;
    a_ = sample(surrogate->a).values;
    b_ = sample(surrogate->b).values;
    c_ = sample(surrogate->c).values;
  }
}

KdvSolver::~KdvSolver() = default;
KdvSolver::KdvSolver(KdvSolver&&) noexcept = default;
KdvSolver& KdvSolver::operator=(KdvSolver&&) noexcept = default;

StateField KdvSolver::sample(const std::function<double(double)>& f) const {
  StateField s;
  s.values.resize(grid_.n);
  for (int i = 0; i < grid_.n; ++i) s.values(i) = f(grid_.nodes[static_cast<std::size_t>(i + 1)]);
  return s;
}

StateField KdvSolver::sample(const ExpTrigPoly& f) const {
  return sample([&f](double x) { return f(x); });
}

StateField KdvSolver::on_surrogate(const ModalState& m) const {
  if (!has_surrogate_) throw std::logic_error("KdvSolver: no surrogate manifold supplied");
  StateField s;
  s.values = m.m1 * phi1_ + m.m2 * phi2_ + (m.m1 * m.m1) * a_ + (m.m1 * m.m2) * b_ + (m.m2 * m.m2) * c_;
  return s;
}

Eigen::VectorXd KdvSolver::full(const Eigen::VectorXd& y) const {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(grid_.n + 2);
  f.segment(1, grid_.n) = y;
  return f;
}

// -(1/3) (D(y^2) + y D y): contributes nothing to the discrete energy.
Eigen::VectorXd KdvSolver::nonlinear(const Eigen::VectorXd& y) const {
  const Eigen::VectorXd f = full(y);
  const Eigen::VectorXd dy2 = d1_ * f.cwiseProduct(f);
  const Eigen::VectorXd dy = d1_ * f;
  return (-1.0 / 3.0) * (dy2 + f.cwiseProduct(dy)).segment(1, grid_.n);
}

StateField KdvSolver::step(const StateField& y) const {
  const Eigen::VectorXd& yn = y.values;
  Eigen::VectorXd mid = lu_->lu.solve(yn + (0.5 * dt_) * nonlinear(yn));
  const double scale = std::max(yn.cwiseAbs().maxCoeff(), 1e-300);
  bool converged = false;
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opts_.max_fixed_point_iterations; ++it) {
    Eigen::VectorXd next = lu_->lu.solve(yn + (0.5 * dt_) * nonlinear(mid));
    const double change = (next - mid).cwiseAbs().maxCoeff();
    mid = std::move(next);
    // Stop at the tolerance, or once the iteration has stalled at roundoff.
    if (change <= opts_.fixed_point_tol * scale ||
        (change <= 1e3 * opts_.fixed_point_tol * scale && change >= 0.5 * prev)) {
      converged = true;
      break;
    }
    prev = change;
  }
  if (!converged) throw NumericalError("KdvSolver: implicit stage did not converge, reduce dt");
  StateField out{2.0 * mid - yn, y.time + dt_};
  if (!out.values.allFinite()) throw NumericalError("instability — reduce dt");
  return out;
}

double KdvSolver::energy(const StateField& y) const {
  return 0.5 * y.values.cwiseProduct(h_int_).dot(y.values);
}

double KdvSolver::norm(const StateField& y) const { return std::sqrt(2.0 * energy(y)); }

double KdvSolver::boundary_slope(const StateField& y) const {
  return (4.0 * y.values(0) - y.values(1)) / (2.0 * grid_.dx);
}

std::pair<double, double> KdvSolver::scheme_boundary_slopes(const StateField& y) const {
  const Eigen::VectorXd u = d1_ * full(y.values);
  return {u(0), u(grid_.n + 1)};
}

ModalState KdvSolver::project_modal(const StateField& y) const {
  const Eigen::VectorXd w = y.values.cwiseProduct(h_int_);
  return {w.dot(phi1_), w.dot(phi2_)};
}

double KdvSolver::distance_to_surrogate(const StateField& y) const {
  const ModalState m = project_modal(y);
  StateField diff;
  diff.values = y.values - on_surrogate(m).values;
  return norm(diff);
}

RunReport KdvSolver::solve(const StateField& y0, double horizon, int sample_every) const {
  if (sample_every < 1) throw std::invalid_argument("solve: sample_every must be >= 1");
  if (!(horizon >= 0.0)) throw std::invalid_argument("solve: horizon must be non-negative");
  if (y0.values.size() != grid_.n) throw std::invalid_argument("solve: state size does not match grid");
  const double n0 = norm(y0);
  if (n0 > opts_.max_initial_norm) {
    throw std::invalid_argument("solve: initial norm exceeds the smallness bound");
  }

  RunReport rep;
  const double e0 = energy(y0);
  const auto record = [&](const StateField& s, double e) {
    rep.times.push_back(s.time);
    rep.energy.push_back(e);
    const double k = boundary_slope(s);
    rep.flux.push_back(k * k);
    const ModalState m = project_modal(s);
    rep.m1.push_back(m.m1);
    rep.m2.push_back(m.m2);
    if (has_surrogate_) rep.distance.push_back(distance_to_surrogate(s));
  };

  const auto steps = static_cast<long long>(std::llround(horizon / dt_));
  StateField y = y0;
  double e = e0;
  record(y, e);
  for (long long k = 1; k <= steps; ++k) {
    y = step(y);
    const double en = energy(y);
    if (e0 > 0.0) rep.max_energy_increase = std::max(rep.max_energy_increase, (en - e) / e0);
    e = en;
    if (std::sqrt(2.0 * e) > 2.0 * n0) throw NumericalError("instability — reduce dt");
    if (k % sample_every == 0 || k == steps) record(y, e);
  }
  rep.steps = steps;
  rep.final_state = y;
  return rep;
}

double energy_identity_check(const RunReport& r) {
  if (r.times.size() < 100) throw std::invalid_argument("energy_identity_check: need >= 100 samples");
  const double e0 = r.energy.front();
  if (e0 == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < r.times.size(); ++k) {
    const double de = (r.energy[k + 1] - r.energy[k - 1]) / (r.times[k + 1] - r.times[k - 1]);
    worst = std::max(worst, std::abs(de + 0.5 * r.flux[k]));
  }
  return worst / e0;
}

AttractionFit attraction_fit(const RunReport& r, double fraction, double window) {
  if (r.distance.size() < 3) throw std::invalid_argument("attraction_fit: no distance series");
  const double d0 = r.distance.front();
  if (!(d0 > 0.0)) throw std::invalid_argument("attraction_fit: zero initial distance");
  const double t_limit = r.times.front() + window * (r.times.back() - r.times.front());
  AttractionFit fit;
  std::size_t end = 0;
  for (std::size_t k = 0; k < r.distance.size(); ++k) {
    if (r.times[k] > t_limit) break;
    end = k;
    if (r.distance[k] < fraction * d0) {
      fit.reached_fraction = true;
      break;
    }
  }
  if (end < 2) throw std::invalid_argument("attraction_fit: transient window has fewer than 3 samples");
  std::vector<double> t(r.times.begin(), r.times.begin() + static_cast<long>(end + 1));
  std::vector<double> ld(end + 1);
  fit.monotone = true;
  for (std::size_t k = 0; k <= end; ++k) {
    ld[k] = std::log(r.distance[k]);
    if (k > 0 && r.distance[k] > r.distance[k - 1]) fit.monotone = false;
  }
  const LinearFit lf = linear_fit(t, ld);
  fit.omega_hat = -lf.slope;
  fit.r_squared = lf.r_squared;
  fit.window_end = t.back();
  return fit;
}

LinearFit norm_decay_fit(const RunReport& r) {
  std::vector<double> inv(r.energy.size());
  for (std::size_t k = 0; k < inv.size(); ++k) {
    if (!(r.energy[k] > 0.0)) throw std::invalid_argument("norm_decay_fit: zero energy sample");
    inv[k] = 1.0 / (2.0 * r.energy[k]);
  }
  return linear_fit(r.times, inv);
}

namespace {

void write_rows(std::ostream& os, const char* header, const std::vector<double>& t,
                std::initializer_list<const std::vector<double>*> cols) {
  os << header << '\n';
  char buf[64];
  for (std::size_t k = 0; k < t.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", t[k]);
    os << buf;
    for (const auto* c : cols) {
      std::snprintf(buf, sizeof buf, ",%.17g", (*c)[k]);
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace

void write_energy_csv(std::ostream& os, const RunReport& r) {
  write_rows(os, "t,E,flux", r.times, {&r.energy, &r.flux});
}

void write_modal_csv(std::ostream& os, const RunReport& r) {
  write_rows(os, "t,m1,m2", r.times, {&r.m1, &r.m2});
}

void write_distance_csv(std::ostream& os, const RunReport& r) {
  if (r.distance.size() != r.times.size()) throw std::invalid_argument("write_distance_csv: no distance series");
  write_rows(os, "t,d", r.times, {&r.distance});
}

}  // namespace kdv
