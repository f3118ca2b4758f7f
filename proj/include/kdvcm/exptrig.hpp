#pragma once

#include <complex>
#include <span>
#include <vector>

namespace kdv {

/// One term e^(sigma x) (coef_cos cos(omega x) + coef_sin sin(omega x)).
///
/// Canonical form: omega >= 0, and coef_sin == 0 whenever omega == 0.
struct ExpTrigTerm {
  double sigma = 0.0;
  double omega = 0.0;
  double coef_cos = 0.0;
  double coef_sin = 0.0;
};

/// Exact finite sum of exponential-trigonometric terms on [0, L].
///
/// The set is closed under addition, scaling, differentiation and
/// multiplication, and every member has a closed-form definite integral over
/// [0, L]. Terms are kept sorted by (sigma, omega); keys closer than
/// kKeyTolerance are merged and amplitudes below kPruneThreshold dropped.
/// Frequencies within 1e-9 of a multiple of 1/sqrt(21) are snapped onto it.
///
/// Instances are immutable values; all operations return new polynomials.
class ExpTrigPoly {
 public:
  static constexpr double kKeyTolerance = 1e-12;
  static constexpr double kPruneThreshold = 1e-15;

  /// Zero polynomial on [0, domain_length]. Throws if domain_length <= 0.
  explicit ExpTrigPoly(double domain_length);
  ExpTrigPoly(double domain_length, std::vector<ExpTrigTerm> terms);

  static ExpTrigPoly constant(double domain_length, double value);
  static ExpTrigPoly cosine(double domain_length, double omega, double amplitude = 1.0);
  static ExpTrigPoly sine(double domain_length, double omega, double amplitude = 1.0);
  static ExpTrigPoly exp_cos(double domain_length, double sigma, double omega,
                             double amplitude = 1.0);
  static ExpTrigPoly exp_sin(double domain_length, double sigma, double omega,
                             double amplitude = 1.0);

  double domain_length() const { return length_; }
  std::span<const ExpTrigTerm> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  /// Largest |coef_cos| + |coef_sin| over all terms (0 for the zero polynomial).
  double max_amplitude() const;

  double operator()(double x) const;

  ExpTrigPoly operator-() const;
  friend ExpTrigPoly operator+(const ExpTrigPoly& a, const ExpTrigPoly& b);
  friend ExpTrigPoly operator-(const ExpTrigPoly& a, const ExpTrigPoly& b);
  friend ExpTrigPoly operator*(double s, const ExpTrigPoly& p);
  friend ExpTrigPoly operator*(const ExpTrigPoly& p, double s) { return s * p; }
  friend ExpTrigPoly operator*(const ExpTrigPoly& a, const ExpTrigPoly& b);

 private:
  void canonicalize();

  double length_;
  std::vector<ExpTrigTerm> terms_;
};

/// Exact derivative of the given order (1..6).
ExpTrigPoly differentiate(const ExpTrigPoly& p, int order = 1);

/// Exact product via product-to-sum identities.
ExpTrigPoly multiply(const ExpTrigPoly& p, const ExpTrigPoly& q);

/// Exact definite integral over [0, L].
double integrate(const ExpTrigPoly& p);

/// Antiderivative F with F' = p. Throws std::invalid_argument when p has a
/// constant term, whose primitive (a multiple of x) is outside the family.
ExpTrigPoly integrate_indefinite(const ExpTrigPoly& p);

double evaluate(const ExpTrigPoly& p, double x);

struct FlaggedValue {
  double value;
  bool outside_domain;
};

/// Evaluation that also reports whether x lies outside [0, L].
FlaggedValue evaluate_flagged(const ExpTrigPoly& p, double x);

/// L2(0, L) inner product, computed exactly.
double inner_product(const ExpTrigPoly& p, const ExpTrigPoly& q);

/// Uniform sample grid x_i = i L / (points - 1), i = 0..points-1.
std::vector<double> uniform_grid(double length, int points);

/// max |p(x)| over uniform_grid(L, points).
double sup_norm(const ExpTrigPoly& p, int points = 2000);

/// Value of the linear operator sum_k coeffs[k] D^k applied to p.
ExpTrigPoly apply_operator(const ExpTrigPoly& p, std::span<const double> coeffs);

/// Characteristic polynomial sum_k coeffs[k] z^k.
std::complex<double> characteristic(std::span<const double> coeffs, std::complex<double> z);

/// Particular solution y of sum_k coeffs[k] D^k y = rhs by undetermined
/// coefficients. Throws ResonanceError when a forcing exponent is (within
/// 1e-12 relative) a root of the characteristic polynomial.
ExpTrigPoly particular_solution(const ExpTrigPoly& rhs, std::span<const double> coeffs);

}  // namespace kdv
