#include "kdvcm/reduced.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "kdvcm/constants.hpp"

namespace kdv {

CubicCoefficients cubic_coefficients(const ManifoldCoeffs& mc, const EigenPair& pair) {
  const ExpTrigPoly d1 = differentiate(pair.phi1);
  const ExpTrigPoly d2 = differentiate(pair.phi2);
  const ExpTrigPoly p11 = pair.phi1 * d1;
  const ExpTrigPoly p21 = pair.phi2 * d1;
  const ExpTrigPoly p12 = pair.phi1 * d2;
  const ExpTrigPoly p22 = pair.phi2 * d2;
  const auto I = [](const ExpTrigPoly& u, const ExpTrigPoly& w) { return inner_product(u, w); };
  CubicCoefficients k;
  k.A1 = I(mc.a, p11);
  k.B1 = I(mc.b, p11) + I(mc.a, p21);
  k.C1 = I(mc.c, p11) + I(mc.b, p21);
  k.D1 = I(mc.c, p21);
  k.A2 = I(mc.a, p12);
  k.B2 = I(mc.b, p12) + I(mc.a, p22);
  k.C2 = I(mc.c, p12) + I(mc.b, p22);
  k.D2 = I(mc.c, p22);
  return k;
}

NormalForm normal_form(const CubicCoefficients& k, double q, double c1) {
  using C = std::complex<double>;
  const double s3 = constants().sqrt3;
  const C i{0.0, 1.0};
  NormalForm nf;
  nf.g20 = -c1 * C{s3, 1.0};
  nf.g11 = 0.5 * c1 * C{s3, -1.0};
  nf.g02 = 0.0;
  nf.g21 = 0.25 * (3.0 * k.A1 + 3.0 * i * k.A2 - i * k.B1 + k.B2 + k.C1 + i * k.C2 - 3.0 * i * k.D1 +
                   3.0 * k.D2);
  const double n11 = std::norm(nf.g11);
  const double n02 = std::norm(nf.g02);
  nf.rho = (i / (2.0 * q)) * (nf.g20 * nf.g11 - 2.0 * n11 - n02 / 3.0) + 0.5 * nf.g21;
  nf.rho1 = nf.rho.real();
  nf.rho2 = nf.rho.imag();
  nf.rho1_single_a1 = (k.A1 + k.C1 + k.B2 + 3.0 * k.D2) / 8.0;
  return nf;
}

ReducedModel make_reduced_model(const ManifoldCoeffs& mc, const EigenPair& pair, double c1) {
  ReducedModel model;
  model.q = pair.q;
  model.c1 = c1;
  model.cubic = cubic_coefficients(mc, pair);
  return model;
}

ModalState vector_field_unchecked(const ModalState& m, const ReducedModel& model) {
  const double s3 = constants().sqrt3;
  const double q = model.q;
  const double c1 = model.c1;
  const auto& k = model.cubic;
  const double x = m.m1;
  const double y = m.m2;
  const double x2 = x * x, y2 = y * y, xy = x * y;
  return {-q * y + s3 * c1 * y2 + c1 * xy + k.A1 * x2 * x + k.B1 * x2 * y + k.C1 * x * y2 + k.D1 * y2 * y,
          q * x - c1 * x2 - s3 * c1 * xy + k.A2 * x2 * x + k.B2 * x2 * y + k.C2 * x * y2 + k.D2 * y2 * y};
}

ModalState vector_field(const ModalState& m, const ReducedModel& model) {
  if (!(m.norm() <= model.chart_radius)) throw std::domain_error("outside manifold chart");
  return vector_field_unchecked(m, model);
}

Eigen::Matrix2d jacobian(const ModalState& m, const ReducedModel& model) {
  const double s3 = constants().sqrt3;
  const double q = model.q;
  const double c1 = model.c1;
  const auto& k = model.cubic;
  const double x = m.m1;
  const double y = m.m2;
  Eigen::Matrix2d j;
  j(0, 0) = c1 * y + 3 * k.A1 * x * x + 2 * k.B1 * x * y + k.C1 * y * y;
  j(0, 1) = -q + 2 * s3 * c1 * y + c1 * x + k.B1 * x * x + 2 * k.C1 * x * y + 3 * k.D1 * y * y;
  j(1, 0) = q - 2 * c1 * x - s3 * c1 * y + 3 * k.A2 * x * x + 2 * k.B2 * x * y + k.C2 * y * y;
  j(1, 1) = -s3 * c1 * x + k.B2 * x * x + 2 * k.C2 * x * y + 3 * k.D2 * y * y;
  return j;
}

Trajectory integrate(const ModalState& m0, double horizon, double dt, const ReducedModel& model,
                     int stride) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
  if (!(horizon >= 0.0)) throw std::invalid_argument("integrate: horizon must be non-negative");
  if (stride < 1) throw std::invalid_argument("integrate: stride must be >= 1");
  if (!(m0.norm() <= model.chart_radius)) throw std::domain_error("outside manifold chart");

  const auto steps = static_cast<long long>(std::llround(horizon / dt));
  Trajectory tr;
  tr.step_size = dt;
  tr.times.reserve(static_cast<std::size_t>(steps / stride + 2));
  tr.states.reserve(tr.times.capacity());
  tr.times.push_back(0.0);
  tr.states.push_back(m0);

  const auto axpy = [](const ModalState& a, double s, const ModalState& b) {
    return ModalState{a.m1 + s * b.m1, a.m2 + s * b.m2};
  };
  ModalState m = m0;
  for (long long n = 1; n <= steps; ++n) {
    const ModalState k1 = vector_field_unchecked(m, model);
    const ModalState k2 = vector_field_unchecked(axpy(m, 0.5 * dt, k1), model);
    const ModalState k3 = vector_field_unchecked(axpy(m, 0.5 * dt, k2), model);
    const ModalState k4 = vector_field_unchecked(axpy(m, dt, k3), model);
    m.m1 += dt / 6.0 * (k1.m1 + 2.0 * k2.m1 + 2.0 * k3.m1 + k4.m1);
    m.m2 += dt / 6.0 * (k1.m2 + 2.0 * k2.m2 + 2.0 * k3.m2 + k4.m2);
    const bool out = !(m.norm() <= model.chart_radius);
    if (n % stride == 0 || n == steps || out) {
      tr.times.push_back(static_cast<double>(n) * dt);
      tr.states.push_back(m);
    }
    if (out) {
      tr.escaped = true;
      break;
    }
  }
  return tr;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("linear_fit: need at least two paired samples");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("linear_fit: abscissae are all equal");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

LinearFit decay_fit(const Trajectory& traj) {
  if (traj.states.size() < 10) throw std::invalid_argument("decay_fit: fewer than 10 samples");
  std::vector<double> inv(traj.states.size());
  for (std::size_t i = 0; i < inv.size(); ++i) {
    const double r = traj.states[i].norm();
    if (!(r > 0.0)) throw std::invalid_argument("decay_fit: trajectory passes through the origin");
    inv[i] = 1.0 / (r * r);
  }
  return linear_fit(traj.times, inv);
}

double rotation_rate(const Trajectory& traj) {
  if (traj.states.size() < 2) throw std::invalid_argument("rotation_rate: need at least two samples");
  std::vector<double> theta(traj.states.size());
  double prev = 0.0, offset = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double a = std::atan2(traj.states[i].m2, traj.states[i].m1);
    if (i > 0) {
      if (a - prev > std::numbers::pi) offset -= 2.0 * std::numbers::pi;
      if (a - prev < -std::numbers::pi) offset += 2.0 * std::numbers::pi;
    }
    prev = a;
    theta[i] = a + offset;
  }
  return linear_fit(traj.times, theta).slope;
}

Rho1Arbitration arbitrate_rho1(const ReducedModel& model, const NormalForm& nf, const Trajectory& traj) {
  (void)model;
  Rho1Arbitration r;
  r.rho1_three_a1 = nf.rho1;
  r.rho1_single_a1 = nf.rho1_single_a1;
  const LinearFit fit = decay_fit(traj);
  r.rho1_fit = -0.5 * fit.slope;
  r.fit_r_squared = fit.r_squared;
  r.three_a1_matches_golden = std::abs(nf.rho1 - golden::kRho1) <= golden::kRho1Tol;
  r.single_a1_matches_golden = std::abs(nf.rho1_single_a1 - golden::kRho1) <= golden::kRho1Tol;
  r.fit_prefers_three_a1 =
      std::abs(r.rho1_fit - r.rho1_three_a1) < std::abs(r.rho1_fit - r.rho1_single_a1);
  return r;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,m1,m2,r,theta\n";
  char buf[160];
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const auto& m = traj.states[i];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", traj.times[i], m.m1, m.m2,
                  m.norm(), std::atan2(m.m2, m.m1));
    os << buf;
  }
}

}  // namespace kdv
