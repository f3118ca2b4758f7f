#include "kdvcm/exptrig.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "kdvcm/constants.hpp"
#include "kdvcm/errors.hpp"

namespace kdv {

namespace {

using cplx = std::complex<double>;

// (A - iB) encodes a term as Re[(A - iB) e^{(sigma + i omega) x}].
cplx phasor(const ExpTrigTerm& t) { return {t.coef_cos, -t.coef_sin}; }

ExpTrigTerm from_phasor(double sigma, double omega, cplx c) {
  return {sigma, omega, c.real(), -c.imag()};
}

double snap_frequency(double omega) {
  const double s21 = constants().sqrt21;
  const double k = std::round(omega * s21);
  if (std::abs(omega * s21 - k) < 1e-9) {
    return constants().freq(static_cast<int>(k));
  }
  return omega;
}

void check_same_domain(const ExpTrigPoly& a, const ExpTrigPoly& b) {
  if (a.domain_length() != b.domain_length()) {
    throw std::invalid_argument("ExpTrigPoly: mismatched domain lengths " +
                                std::to_string(a.domain_length()) + " and " +
                                std::to_string(b.domain_length()));
  }
}

// (e^{zL} - 1) / z, continuous through z = 0.
cplx exp_ratio(cplx z, double length) {
  const cplx zl = z * length;
  if (std::abs(zl) < 1e-4) {
    // 1 + zL/2 + (zL)^2/6 + (zL)^3/24 + (zL)^4/120
    return length * (1.0 + zl * (0.5 + zl * (1.0 / 6.0 + zl * (1.0 / 24.0 + zl / 120.0))));
  }
  return (std::exp(zl) - 1.0) / z;
}

}  // namespace

ExpTrigPoly::ExpTrigPoly(double domain_length) : length_(domain_length) {
  if (!(domain_length > 0.0)) {
    throw std::invalid_argument("ExpTrigPoly: domain length must be positive");
  }
}

ExpTrigPoly::ExpTrigPoly(double domain_length, std::vector<ExpTrigTerm> terms)
    : ExpTrigPoly(domain_length) {
  terms_ = std::move(terms);
  canonicalize();
}

ExpTrigPoly ExpTrigPoly::constant(double domain_length, double value) {
  return ExpTrigPoly(domain_length, {{0.0, 0.0, value, 0.0}});
}

ExpTrigPoly ExpTrigPoly::cosine(double domain_length, double omega, double amplitude) {
  return ExpTrigPoly(domain_length, {{0.0, omega, amplitude, 0.0}});
}

ExpTrigPoly ExpTrigPoly::sine(double domain_length, double omega, double amplitude) {
  return ExpTrigPoly(domain_length, {{0.0, omega, 0.0, amplitude}});
}

ExpTrigPoly ExpTrigPoly::exp_cos(double domain_length, double sigma, double omega,
                                 double amplitude) {
  return ExpTrigPoly(domain_length, {{sigma, omega, amplitude, 0.0}});
}

ExpTrigPoly ExpTrigPoly::exp_sin(double domain_length, double sigma, double omega,
                                 double amplitude) {
  return ExpTrigPoly(domain_length, {{sigma, omega, 0.0, amplitude}});
}

void ExpTrigPoly::canonicalize() {
  for (auto& t : terms_) {
    if (t.omega < 0.0) {
      t.omega = -t.omega;
      t.coef_sin = -t.coef_sin;
    }
    t.omega = snap_frequency(t.omega);
    if (std::abs(t.sigma) < kKeyTolerance) t.sigma = 0.0;
    if (t.omega < kKeyTolerance) {
      t.omega = 0.0;
      t.coef_sin = 0.0;
    }
  }
  std::sort(terms_.begin(), terms_.end(), [](const ExpTrigTerm& a, const ExpTrigTerm& b) {
    if (a.sigma != b.sigma) return a.sigma < b.sigma;
    return a.omega < b.omega;
  });

  std::vector<ExpTrigTerm> merged;
  merged.reserve(terms_.size());
  for (const auto& t : terms_) {
    // Keys within tolerance are adjacent after sorting unless another sigma
    // lies in between; search back over the run of near-equal sigmas.
    bool absorbed = false;
    for (auto it = merged.rbegin(); it != merged.rend(); ++it) {
      if (t.sigma - it->sigma > kKeyTolerance) break;
      if (std::abs(it->omega - t.omega) <= kKeyTolerance) {
        it->coef_cos += t.coef_cos;
        it->coef_sin += t.coef_sin;
        absorbed = true;
        break;
      }
    }
    if (!absorbed) merged.push_back(t);
  }
  std::erase_if(merged, [](const ExpTrigTerm& t) {
    return std::abs(t.coef_cos) < kPruneThreshold && std::abs(t.coef_sin) < kPruneThreshold;
  });
  terms_ = std::move(merged);
}

double ExpTrigPoly::max_amplitude() const {
  double m = 0.0;
  for (const auto& t : terms_) m = std::max(m, std::abs(t.coef_cos) + std::abs(t.coef_sin));
  return m;
}

double ExpTrigPoly::operator()(double x) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    const double e = t.sigma == 0.0 ? 1.0 : std::exp(t.sigma * x);
    if (t.omega == 0.0) {
      sum += e * t.coef_cos;
    } else {
      sum += e * (t.coef_cos * std::cos(t.omega * x) + t.coef_sin * std::sin(t.omega * x));
    }
  }
  return sum;
}

ExpTrigPoly ExpTrigPoly::operator-() const { return -1.0 * *this; }

ExpTrigPoly operator+(const ExpTrigPoly& a, const ExpTrigPoly& b) {
  check_same_domain(a, b);
  std::vector<ExpTrigTerm> terms(a.terms_);
  terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
  return ExpTrigPoly(a.length_, std::move(terms));
}

ExpTrigPoly operator-(const ExpTrigPoly& a, const ExpTrigPoly& b) { return a + (-1.0) * b; }

ExpTrigPoly operator*(double s, const ExpTrigPoly& p) {
  std::vector<ExpTrigTerm> terms(p.terms_);
  for (auto& t : terms) {
    t.coef_cos *= s;
    t.coef_sin *= s;
  }
  return ExpTrigPoly(p.length_, std::move(terms));
}

ExpTrigPoly operator*(const ExpTrigPoly& a, const ExpTrigPoly& b) { return multiply(a, b); }

ExpTrigPoly differentiate(const ExpTrigPoly& p, int order) {
  if (order < 1 || order > 6) {
    throw std::invalid_argument("differentiate: order must be in 1..6");
  }
  std::vector<ExpTrigTerm> terms(p.terms().begin(), p.terms().end());
  for (int k = 0; k < order; ++k) {
    for (auto& t : terms) {
      const double c = t.sigma * t.coef_cos + t.omega * t.coef_sin;
      const double s = t.sigma * t.coef_sin - t.omega * t.coef_cos;
      t.coef_cos = c;
      t.coef_sin = s;
    }
  }
  return ExpTrigPoly(p.domain_length(), std::move(terms));
}

ExpTrigPoly multiply(const ExpTrigPoly& p, const ExpTrigPoly& q) {
  check_same_domain(p, q);
  std::vector<ExpTrigTerm> out;
  out.reserve(2 * p.size() * q.size());
  for (const auto& s : p.terms()) {
    for (const auto& t : q.terms()) {
      const double sigma = s.sigma + t.sigma;
      const double a1 = s.coef_cos, b1 = s.coef_sin, a2 = t.coef_cos, b2 = t.coef_sin;
      out.push_back({sigma, s.omega + t.omega, 0.5 * (a1 * a2 - b1 * b2), 0.5 * (a1 * b2 + b1 * a2)});
      out.push_back({sigma, s.omega - t.omega, 0.5 * (a1 * a2 + b1 * b2), 0.5 * (b1 * a2 - a1 * b2)});
    }
  }
  return ExpTrigPoly(p.domain_length(), std::move(out));
}

double integrate(const ExpTrigPoly& p) {
  const double len = p.domain_length();
  double sum = 0.0;
  for (const auto& t : p.terms()) {
    if (t.sigma == 0.0 && t.omega == 0.0) {
      sum += t.coef_cos * len;
      continue;
    }
    sum += (phasor(t) * exp_ratio({t.sigma, t.omega}, len)).real();
  }
  return sum;
}

ExpTrigPoly integrate_indefinite(const ExpTrigPoly& p) {
  std::vector<ExpTrigTerm> out;
  out.reserve(p.size());
  for (const auto& t : p.terms()) {
    if (t.sigma == 0.0 && t.omega == 0.0) {
      throw std::invalid_argument("integrate_indefinite: constant term has no exp-trig primitive");
    }
    const cplx z{t.sigma, t.omega};
    out.push_back(from_phasor(t.sigma, t.omega, phasor(t) / z));
  }
  return ExpTrigPoly(p.domain_length(), std::move(out));
}

double evaluate(const ExpTrigPoly& p, double x) { return p(x); }

FlaggedValue evaluate_flagged(const ExpTrigPoly& p, double x) {
  return {p(x), x < 0.0 || x > p.domain_length()};
}

double inner_product(const ExpTrigPoly& p, const ExpTrigPoly& q) {
  return integrate(multiply(p, q));
}

std::vector<double> uniform_grid(double length, int points) {
  if (points < 2) throw std::invalid_argument("uniform_grid: need at least 2 points");
  std::vector<double> x(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) x[static_cast<std::size_t>(i)] = length * i / (points - 1);
  return x;
}

double sup_norm(const ExpTrigPoly& p, int points) {
  double m = 0.0;
  for (double x : uniform_grid(p.domain_length(), points)) m = std::max(m, std::abs(p(x)));
  return m;
}

ExpTrigPoly apply_operator(const ExpTrigPoly& p, std::span<const double> coeffs) {
  ExpTrigPoly out(p.domain_length());
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] == 0.0) continue;
    out = out + coeffs[k] * (k == 0 ? p : differentiate(p, static_cast<int>(k)));
  }
  return out;
}

std::complex<double> characteristic(std::span<const double> coeffs, std::complex<double> z) {
  cplx v = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 0;) v = v * z + coeffs[k];
  return v;
}

ExpTrigPoly particular_solution(const ExpTrigPoly& rhs, std::span<const double> coeffs) {
  std::vector<ExpTrigTerm> out;
  out.reserve(rhs.size());
  for (const auto& t : rhs.terms()) {
    const cplx z{t.sigma, t.omega};
    const cplx pz = characteristic(coeffs, z);
    double scale = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      scale += std::abs(coeffs[k]) * std::pow(std::abs(z), static_cast<double>(k));
    }
    if (std::abs(pz) < 1e-12 * std::max(1.0, scale)) {
      throw ResonanceError("resonant forcing frequency: sigma=" + std::to_string(t.sigma) +
                           " omega=" + std::to_string(t.omega));
    }
    out.push_back(from_phasor(t.sigma, t.omega, phasor(t) / pz));
  }
  return ExpTrigPoly(rhs.domain_length(), std::move(out));
}

}  // namespace kdv
