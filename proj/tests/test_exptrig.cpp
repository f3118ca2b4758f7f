#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"
#include "kdvcm/constants.hpp"
#include "kdvcm/errors.hpp"
#include "kdvcm/exptrig.hpp"

using namespace kdv;

namespace {

const double L = constants().length;

double quad(const std::function<double(double)>& f) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, L, 15, 1e-14);
}

// Random polynomial with frequencies on the k/sqrt(21) lattice plus a few
// exponential rates, the shapes that show up in the manifold problem.
ExpTrigPoly random_poly(std::mt19937_64& gen, int terms) {
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_int_distribution<int> k(0, 8);
  std::uniform_real_distribution<double> sig(-0.3, 0.3);
  std::vector<ExpTrigTerm> t;
  for (int i = 0; i < terms; ++i) {
    const double sigma = (i % 3 == 0) ? sig(gen) : 0.0;
    const double omega = constants().freq(k(gen));
    t.push_back({sigma, omega, amp(gen), omega == 0.0 ? 0.0 : amp(gen)});
  }
  return ExpTrigPoly(L, std::move(t));
}

}  // namespace

TEST_CASE("constructors validate the domain") {
  CHECK_THROWS_AS(ExpTrigPoly(0.0), std::invalid_argument);
  CHECK_THROWS_AS(ExpTrigPoly(-1.0), std::invalid_argument);
  CHECK(ExpTrigPoly(L).is_zero());
}

TEST_CASE("mismatched domains are rejected") {
  const auto a = ExpTrigPoly::cosine(1.0, 2.0);
  const auto b = ExpTrigPoly::cosine(2.0, 2.0);
  CHECK_THROWS_AS(a + b, std::invalid_argument);
  CHECK_THROWS_AS(a * b, std::invalid_argument);
}

TEST_CASE("canonical form merges keys and prunes tiny amplitudes") {
  ExpTrigPoly p(L, {{0.0, 1.0, 1.0, 0.0}, {0.0, 1.0, 2.0, 0.5}, {0.1, 2.0, 1e-17, 0.0}});
  REQUIRE(p.size() == 1);
  CHECK(p.terms()[0].coef_cos == doctest::Approx(3.0));
  CHECK(p.terms()[0].coef_sin == doctest::Approx(0.5));

  // Negative frequency folds onto omega >= 0.
  ExpTrigPoly n(L, {{0.0, -2.0, 1.0, 1.0}});
  REQUIRE(n.size() == 1);
  CHECK(n.terms()[0].omega == 2.0);
  CHECK(n.terms()[0].coef_sin == -1.0);

  // Zero frequency carries no sine coefficient.
  ExpTrigPoly z(L, {{0.5, 0.0, 1.0, 7.0}});
  CHECK(z.terms()[0].coef_sin == 0.0);

  CHECK((p - p).is_zero());
}

TEST_CASE("frequencies near the lattice are snapped onto it") {
  const double w = constants().freq(3);
  ExpTrigPoly p(L, {{0.0, w + 1e-10, 1.0, 0.0}, {0.0, w, 1.0, 0.0}});
  REQUIRE(p.size() == 1);
  CHECK(p.terms()[0].omega == w);
}

TEST_CASE("derivatives match closed forms") {
  const double s = 0.3, w = 1.7;
  const auto p = ExpTrigPoly::exp_sin(L, s, w);
  for (double x : {0.0, 0.4, 2.5, L}) {
    const double d1 = std::exp(s * x) * (s * std::sin(w * x) + w * std::cos(w * x));
    CHECK(differentiate(p)(x) == doctest::Approx(d1).epsilon(1e-13));
  }
  CHECK_THROWS_AS(differentiate(p, 0), std::invalid_argument);
  CHECK_THROWS_AS(differentiate(p, 7), std::invalid_argument);
  CHECK(differentiate(ExpTrigPoly::constant(L, 3.0)).is_zero());
}

TEST_CASE("definite integrals agree with adaptive quadrature") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_poly(gen, 6);
    CHECK(integrate(p) == doctest::Approx(quad([&](double x) { return p(x); })).epsilon(1e-12).scale(1.0));
  }
  // Constant term: exact length scaling.
  CHECK(integrate(ExpTrigPoly::constant(L, 2.0)) == doctest::Approx(2.0 * L));
}

TEST_CASE("property: products, sums and inner products are pointwise exact") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> xs(0.0, L);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = random_poly(gen, 4);
    const auto q = random_poly(gen, 5);
    const auto prod = p * q;
    const auto sum = p + q;
    for (int i = 0; i < 10; ++i) {
      const double x = xs(gen);
      const double scale = 1.0 + std::abs(p(x)) * std::abs(q(x));
      CHECK(std::abs(prod(x) - p(x) * q(x)) <= 1e-12 * scale);
      CHECK(std::abs(sum(x) - (p(x) + q(x))) <= 1e-12 * (1.0 + std::abs(p(x)) + std::abs(q(x))));
    }
    const double ip = inner_product(p, q);
    CHECK(ip == doctest::Approx(quad([&](double x) { return p(x) * q(x); })).epsilon(1e-11).scale(1.0));
    CHECK(ip == doctest::Approx(inner_product(q, p)).epsilon(1e-14).scale(1.0));
    // Leibniz rule as an algebraic identity.
    const auto lhs = differentiate(prod);
    const auto rhs = differentiate(p) * q + p * differentiate(q);
    CHECK((lhs - rhs).max_amplitude() <= 1e-12 * (1.0 + lhs.max_amplitude()));
  }
}

TEST_CASE("indefinite integral inverts differentiation") {
  const auto p = ExpTrigPoly::exp_cos(L, -0.2, 0.9, 2.0) + ExpTrigPoly::sine(L, 0.5);
  const auto P = integrate_indefinite(p);
  CHECK((differentiate(P) - p).max_amplitude() < 1e-14);
  CHECK(P(L) - P(0.0) == doctest::Approx(integrate(p)).epsilon(1e-13));
  CHECK_THROWS_AS(integrate_indefinite(ExpTrigPoly::constant(L, 1.0)), std::invalid_argument);
}

TEST_CASE("flagged evaluation reports points outside the domain") {
  const auto p = ExpTrigPoly::cosine(L, 1.0);
  CHECK_FALSE(evaluate_flagged(p, 0.5 * L).outside_domain);
  CHECK(evaluate_flagged(p, -0.1).outside_domain);
  CHECK(evaluate_flagged(p, L + 0.1).outside_domain);
  CHECK(evaluate_flagged(p, L + 0.1).value == doctest::Approx(std::cos(L + 0.1)));
  CHECK(evaluate(p, 1.0) == doctest::Approx(std::cos(1.0)));
}

TEST_CASE("particular solutions satisfy the operator exactly") {
  const double q = constants().q;
  const std::array<double, 7> minus = {4 * q * q, 0, 1, 0, 2, 0, 1};
  const std::array<double, 4> plus = {0, 1, 0, 1};
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 10; ++trial) {
    // Avoid omega = 0 and omega = 1 for the plus operator (its kernel).
    std::vector<ExpTrigTerm> t;
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    for (int k : {2, 3, 5, 6, 8}) t.push_back({0.0, constants().freq(k), amp(gen), amp(gen)});
    t.push_back({-0.25, 0.7, amp(gen), amp(gen)});
    const ExpTrigPoly rhs(L, t);
    for (std::span<const double> op : {std::span<const double>(minus), std::span<const double>(plus)}) {
      const auto y = particular_solution(rhs, op);
      const auto residual = apply_operator(y, op) - rhs;
      CHECK(residual.max_amplitude() <= 1e-12);
    }
  }
}

TEST_CASE("resonant forcing raises") {
  const std::array<double, 4> plus = {0, 1, 0, 1};
  CHECK_THROWS_AS(particular_solution(ExpTrigPoly::cosine(L, 1.0), plus), ResonanceError);
  CHECK_THROWS_AS(particular_solution(ExpTrigPoly::constant(L, 1.0), plus), ResonanceError);
}

TEST_CASE("characteristic polynomial evaluation") {
  const std::array<double, 4> c = {1.0, -2.0, 0.0, 3.0};
  const std::complex<double> z{0.5, -1.0};
  CHECK(std::abs(characteristic(c, z) - (1.0 - 2.0 * z + 3.0 * z * z * z)) < 1e-14);
}

TEST_CASE("grids and sup norms") {
  const auto g = uniform_grid(L, 5);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == doctest::Approx(L));
  CHECK_THROWS_AS(uniform_grid(L, 1), std::invalid_argument);
  CHECK(sup_norm(ExpTrigPoly::sine(L, std::numbers::pi / L, 3.0)) == doctest::Approx(3.0).epsilon(1e-5));
}
