#include <cmath>
#include <complex>

#include "doctest.h"
#include "kdvcm/constants.hpp"
#include "kdvcm/errors.hpp"
#include "kdvcm/manifold.hpp"

using namespace kdv;

namespace {

const EigenPair& pair() {
  static const EigenPair p = build_eigen_pair();
  return p;
}

const ManifoldSolution& solution() {
  static const ManifoldSolution s = solve_manifold(pair(), constants().c1);
  return s;
}

double worst(const std::array<double, 3>& a) { return std::max({a[0], a[1], a[2]}); }

}  // namespace

TEST_CASE("fundamental basis roots solve the characteristic equations") {
  const auto& b = solution().basis;
  const double q = pair().q;
  const auto op = minus_operator(q);
  for (const std::complex<double> z : {std::complex<double>(b.alpha1, b.beta1),
                                       std::complex<double>(-b.alpha1, b.beta1),
                                       std::complex<double>(0.0, b.beta2)}) {
    CHECK(std::abs(characteristic(op, z)) < 1e-13);
  }
  CHECK(b.alpha1 == doctest::Approx(0.132764062387).epsilon(1e-10));
  CHECK(b.beta1 == doctest::Approx(0.582416316238).epsilon(1e-10));
  CHECK(b.beta2 == doctest::Approx(2.0 * b.beta1).epsilon(1e-12));
  CHECK(b.alpha1_radical == doctest::Approx(b.alpha1).epsilon(1e-9));
  CHECK(b.beta1_radical == doctest::Approx(b.beta1).epsilon(1e-9));
  CHECK(b.beta2_radical == doctest::Approx(b.beta2).epsilon(1e-9));
  REQUIRE(b.plus.size() == 3);
  REQUIRE(b.minus.size() == 6);
  for (const auto& h : b.minus) CHECK(apply_operator(h, op).max_amplitude() < 1e-12);
  for (const auto& h : b.plus) CHECK(apply_operator(h, plus_operator()).max_amplitude() < 1e-14);
}

TEST_CASE("boundary systems are nonsingular") {
  const auto& s = solution();
  CHECK(std::abs(s.plus.system.det) > 1e-3);
  CHECK(std::abs(s.minus.system.det) > 1e-3);
  // Cramer's rule reproduces the LU coefficients.
  for (const auto* sys : {&s.plus.system, &s.minus.system}) {
    for (std::size_t l = 0; l < sys->cramer_dets.size(); ++l) {
      CHECK(sys->cramer_dets[l] / sys->det ==
            doctest::Approx(sys->coefficients(static_cast<Eigen::Index>(l))).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("closed-form coefficients satisfy the manifold equations") {
  const auto& mc = solution().coeffs;
  const auto r = residuals(mc, pair(), constants().c1, pair().q);
  CHECK(r.a_eq <= 1e-9);
  CHECK(r.b_eq <= 1e-9);
  CHECK(r.c_eq <= 1e-9);
  for (double v : boundary_values(mc)) CHECK(std::abs(v) <= 1e-10);
}

TEST_CASE("coefficients are orthogonal to the center eigenspace") {
  for (double v : orthogonality(solution().coeffs, pair())) CHECK(std::abs(v) <= 1e-12);
}

TEST_CASE("boundary slopes") {
  const auto& mc = solution().coeffs;
  CHECK(mc.c_prime0 == doctest::Approx(golden::kCPrime0).epsilon(golden::kCPrime0Tol / golden::kCPrime0));
  CHECK(std::abs(mc.c_prime0 - golden::kCPrime0) <= golden::kCPrime0Tol);
  CHECK(mc.a_prime0 == doctest::Approx(-mc.c_prime0).epsilon(1e-9));
  CHECK(mc.a_prime0 == doctest::Approx(differentiate(mc.a)(0.0)).epsilon(1e-14));
}

TEST_CASE("printed sixth-order boundary entry is flagged") {
  const auto& s = solution();
  CHECK_FALSE(s.printed_b_minus4_agrees);
  CHECK(std::abs(s.printed_b_minus4) > 1e-3);
  CHECK(std::abs(minus_functionals(s.minus.f)[3]) < 1e-12);
}

TEST_CASE("finite-difference oracle converges to the closed form") {
  const auto& mc = solution().coeffs;
  const double c1 = constants().c1;
  const auto coarse = bvp_oracle(pair(), c1, pair().q, 400);
  const auto fine = bvp_oracle(pair(), c1, pair().q, 800);
  const double e1 = worst(oracle_disagreement(mc, coarse));
  const double e2 = worst(oracle_disagreement(mc, fine));
  CHECK(e1 < 1e-4);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
  CHECK(std::abs(fine.c_prime0 - mc.c_prime0) < 1e-4);
  // Richardson removes the h^2 term.
  CHECK(worst(oracle_disagreement(mc, richardson(coarse, fine))) < 1e-6);
  CHECK_THROWS_AS(bvp_oracle(pair(), c1, pair().q, 100), std::invalid_argument);
}

TEST_CASE("decoupled oracle agrees with the coupled one") {
  const auto& mc = solution().coeffs;
  const double c1 = constants().c1;
  const auto d = bvp_oracle_decoupled(pair(), c1, pair().q, 800);
  CHECK(worst(oracle_disagreement(mc, d)) < 5e-5);
  CHECK(std::abs(d.c_prime0 - golden::kCPrime0) <= golden::kCPrime0OracleTol);
}
