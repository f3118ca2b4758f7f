#include "kdvcm/lyapunov.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "kdvcm/errors.hpp"

namespace kdv {

namespace {

Eigen::Matrix<double, 5, 1> monomials(const ModalState& m) {
  Eigen::Matrix<double, 5, 1> v;
  v << m.m1, m.m2, m.m1 * m.m1, m.m1 * m.m2, m.m2 * m.m2;
  return v;
}

Eigen::Matrix<double, 5, 2> monomial_jacobian(const ModalState& m) {
  Eigen::Matrix<double, 5, 2> j;
  j << 1.0, 0.0, 0.0, 1.0, 2.0 * m.m1, 0.0, m.m2, m.m1, 0.0, 2.0 * m.m2;
  return j;
}

Eigen::Vector2d as_vec(const ModalState& m) { return {m.m1, m.m2}; }

}  // namespace

LyapunovData make_lyapunov_data(const ManifoldCoeffs& mc, double mu) {
  if (!(mu > 0.0 && mu <= 0.25)) throw std::invalid_argument("lyapunov: mu must lie in (0, 1/4]");
  LyapunovData d;
  d.a_p0 = mc.a_prime0;
  d.b_p0 = mc.b_prime0;
  d.c_p0 = mc.c_prime0;
  d.mu = mu;
  d.sylvester_det = sylvester_det(d.a_p0, d.b_p0, d.c_p0).explicit_det;
  return d;
}

double ktilde(const ModalState& m, const LyapunovData& d) {
  return d.a_p0 * m.m1 * m.m1 + d.b_p0 * m.m1 * m.m2 + d.c_p0 * m.m2 * m.m2;
}

Eigen::Vector2d ktilde_gradient(const ModalState& m, const LyapunovData& d) {
  return {2.0 * d.a_p0 * m.m1 + d.b_p0 * m.m2, d.b_p0 * m.m1 + 2.0 * d.c_p0 * m.m2};
}

double ktilde_dot(const ModalState& m, const LyapunovData& d, double q) {
  return q * (d.b_p0 * m.m1 * m.m1 + 2.0 * (d.c_p0 - d.a_p0) * m.m1 * m.m2 - d.b_p0 * m.m2 * m.m2);
}

Eigen::Vector2d ktilde_dot_gradient(const ModalState& m, const LyapunovData& d, double q) {
  const double s = 2.0 * (d.c_p0 - d.a_p0);
  return {q * (2.0 * d.b_p0 * m.m1 + s * m.m2), q * (s * m.m1 - 2.0 * d.b_p0 * m.m2)};
}

Eigen::Matrix4d sylvester_matrix(double a, double b, double c) {
  // Rows of c t^2 + b t + a and -b t^2 + 2(c - a) t + b, with t = m2 / m1.
  Eigen::Matrix4d s;
  s << c, b, a, 0.0,
       0.0, c, b, a,
       -b, -2.0 * (a - c), b, 0.0,
       0.0, -b, -2.0 * (a - c), b;
  return s;
}

double sylvester_closed_form(double a, double b, double c) {
  return a * a * a * (b + 4.0 * c) + a * a * (-2.0 * b * b + b * c - 8.0 * c * c) +
         a * (5.0 * b * b * c + 4.0 * c * c * c) - b * b * c * c - b * b * b * b;
}

SylvesterResult sylvester_det(double a, double b, double c) {
  SylvesterResult r{sylvester_matrix(a, b, c).determinant(), sylvester_closed_form(a, b, c)};
  const double scale = std::pow(std::max({std::abs(a), std::abs(b), std::abs(c)}), 4);
  if (std::abs(r.explicit_det - r.closed_form) > 1e-10 * std::max(scale, 1e-300)) {
    throw NumericalError("sylvester_det: explicit and closed-form determinants disagree");
  }
  return r;
}

NondegeneracyReport nondegeneracy_check(const LyapunovData& d, double q, int directions) {
  if (directions < 1) throw std::invalid_argument("nondegeneracy_check: directions must be >= 1");
  NondegeneracyReport rep;
  rep.directions = directions;
  rep.verdict = std::abs(d.c_p0) > 1e-10 && std::abs(d.sylvester_det) > 1e-10;
  rep.sphere_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < directions; ++i) {
    const double t = 2.0 * std::numbers::pi * i / directions;
    const ModalState m{std::cos(t), std::sin(t)};
    const double k = ktilde(m, d);
    const double kd = ktilde_dot(m, d, q) / q;
    const double v = k * k + kd * kd;
    if (v < rep.sphere_min) {
      rep.sphere_min = v;
      rep.argmin = m;
    }
  }
  return rep;
}

SurrogateEnergy::SurrogateEnergy(const ManifoldCoeffs& mc, const EigenPair& pair) {
  const ExpTrigPoly* f[5] = {&pair.phi1, &pair.phi2, &mc.a, &mc.b, &mc.c};
  for (int i = 0; i < 5; ++i) {
    for (int j = i; j < 5; ++j) {
      gram_(i, j) = gram_(j, i) = inner_product(*f[i], *f[j]);
    }
  }
}

double SurrogateEnergy::value(const ModalState& m) const {
  const auto v = monomials(m);
  return 0.5 * v.dot(gram_ * v);
}

Eigen::Vector2d SurrogateEnergy::gradient(const ModalState& m) const {
  return monomial_jacobian(m).transpose() * (gram_ * monomials(m));
}

double energy_dot(const ModalState& m, const SurrogateEnergy& e, const ReducedModel& model) {
  return e.gradient(m).dot(as_vec(vector_field_unchecked(m, model)));
}

double vtilde(const ModalState& m, const LyapunovData& d, const SurrogateEnergy& e, double q) {
  return e.value(m) - d.mu * ktilde(m, d) * ktilde_dot(m, d, q);
}

double vtilde_dot(const ModalState& m, const LyapunovData& d, const SurrogateEnergy& e,
                  const ReducedModel& model) {
  const double q = model.q;
  const Eigen::Vector2d grad = e.gradient(m) - d.mu * (ktilde_dot(m, d, q) * ktilde_gradient(m, d) +
                                                       ktilde(m, d) * ktilde_dot_gradient(m, d, q));
  return grad.dot(as_vec(vector_field_unchecked(m, model)));
}

ScanReport vtilde_dot_scan(const LyapunovData& d, const SurrogateEnergy& e, const ReducedModel& model,
                           double radius, int samples, std::optional<std::uint64_t> seed) {
  if (samples < 1000) throw std::invalid_argument("vtilde_dot_scan: samples must be >= 1000");
  if (!(radius > 0.0 && radius <= model.chart_radius)) {
    throw std::invalid_argument("vtilde_dot_scan: radius must lie in (0, chart radius]");
  }
  ScanReport rep;
  rep.radius = radius;
  rep.mu = d.mu;
  rep.max_vdot = -std::numeric_limits<double>::infinity();
  rep.eta1_estimate = nondegeneracy_check(d, model.q).sphere_min;

  const auto visit = [&](const ModalState& m) {
    const double v = vtilde_dot(m, d, e, model);
    if (v > rep.max_vdot) {
      rep.max_vdot = v;
      rep.argmax = m;
    }
    ++rep.samples;
  };

  const double r0 = 0.5 * radius;
  if (!seed) {
    const int nr = 20;
    const int nt = (samples + nr - 1) / nr;
    for (int i = 0; i < nr; ++i) {
      const double r = r0 + (radius - r0) * i / (nr - 1);
      for (int j = 0; j < nt; ++j) {
        const double t = 2.0 * std::numbers::pi * j / nt;
        visit({r * std::cos(t), r * std::sin(t)});
      }
    }
  } else {
    std::mt19937_64 gen(*seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < samples; ++i) {
      const double r = std::sqrt(r0 * r0 + (radius * radius - r0 * r0) * u01(gen));
      const double t = 2.0 * std::numbers::pi * u01(gen);
      visit({r * std::cos(t), r * std::sin(t)});
    }
  }
  return rep;
}

std::vector<ScanReport> mu_sweep(const LyapunovData& d, const SurrogateEnergy& e,
                                 const ReducedModel& model, double radius, int samples,
                                 const std::vector<double>& mus) {
  std::vector<ScanReport> out;
  for (double mu : mus) {
    LyapunovData dm = d;
    if (!(mu > 0.0 && mu <= 0.25)) throw std::invalid_argument("mu_sweep: mu must lie in (0, 1/4]");
    dm.mu = mu;
    out.push_back(vtilde_dot_scan(dm, e, model, radius, samples));
  }
  return out;
}

}  // namespace kdv
