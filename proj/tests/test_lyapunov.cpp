#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "kdvcm/constants.hpp"
#include "kdvcm/errors.hpp"
#include "kdvcm/lyapunov.hpp"

using namespace kdv;

namespace {

const EigenPair& pair() {
  static const EigenPair p = build_eigen_pair();
  return p;
}

const ManifoldCoeffs& coeffs() {
  static const ManifoldCoeffs mc = solve_manifold(pair(), constants().c1).coeffs;
  return mc;
}

const ReducedModel& model() {
  static const ReducedModel m = make_reduced_model(coeffs(), pair(), constants().c1);
  return m;
}

}  // namespace

TEST_CASE("property: closed form equals the explicit determinant when a = -c") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double b = u(gen), c = u(gen);
    const double e = sylvester_matrix(-c, b, c).determinant();
    const double f = sylvester_closed_form(-c, b, c);
    CHECK(std::abs(e - f) <= 1e-12 * std::max(1.0, std::abs(f)));
  }
}

TEST_CASE("property: off a = -c the closed form misses a factor of a + c") {
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double a = u(gen), b = u(gen), c = u(gen);
    const double e = sylvester_matrix(a, b, c).determinant();
    const double f = sylvester_closed_form(a, b, c);
    CHECK(e - f == doctest::Approx(-a * b * (a - b) * (a + c)).epsilon(1e-10).scale(1.0));
  }
  CHECK_THROWS_AS(sylvester_det(0.5, 0.3, 0.2), NumericalError);
}

TEST_CASE("Sylvester determinant vanishes on a shared root") {
  // K = (m1 - m2)^2 makes K and its rotation derivative share the root m1 = m2.
  CHECK(std::abs(sylvester_matrix(1.0, -2.0, 1.0).determinant()) < 1e-14);
  // a = c, b = 0: K is a multiple of |m|^2 and Kdot vanishes identically.
  CHECK(std::abs(sylvester_matrix(0.3, 0.0, 0.3).determinant()) < 1e-14);
  CHECK(std::abs(sylvester_closed_form(-0.3, 0.0, 0.3)) > 1e-3);
}

TEST_CASE("Sylvester determinant on the computed manifold") {
  const auto d = make_lyapunov_data(coeffs(), 1e-3);
  const auto s = sylvester_det(d.a_p0, d.b_p0, d.c_p0);
  CHECK(std::abs(s.explicit_det - golden::kSylvesterDet) <= golden::kSylvesterDetTol);
  CHECK(std::abs(s.explicit_det - s.closed_form) <= 1e-12 * std::abs(s.closed_form));
  CHECK(d.sylvester_det == s.explicit_det);
}

TEST_CASE("mu must lie in (0, 1/4]") {
  CHECK_THROWS_AS(make_lyapunov_data(coeffs(), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_lyapunov_data(coeffs(), 0.3), std::invalid_argument);
  CHECK_NOTHROW(make_lyapunov_data(coeffs(), 0.25));
}

TEST_CASE("property: Kdot is the derivative of K along the rotation") {
  const auto d = make_lyapunov_data(coeffs(), 1e-3);
  const double q = pair().q;
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const ModalState m{u(gen), u(gen)};
    const Eigen::Vector2d g = ktilde_gradient(m, d);
    CHECK(ktilde_dot(m, d, q) == doctest::Approx(g.dot(Eigen::Vector2d(-q * m.m2, q * m.m1))).epsilon(1e-12));
    const double h = 1e-6;
    const double fd = (ktilde_dot({m.m1 + h, m.m2}, d, q) - ktilde_dot({m.m1 - h, m.m2}, d, q)) / (2 * h);
    CHECK(ktilde_dot_gradient(m, d, q)(0) == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("nondegeneracy: sphere minimum is positive") {
  const auto d = make_lyapunov_data(coeffs(), 1e-3);
  const auto rep = nondegeneracy_check(d, pair().q);
  CHECK(rep.verdict);
  CHECK(rep.directions == 10000);
  CHECK(rep.sphere_min > 1e-3);
  // A degenerate form has a zero on the circle.
  LyapunovData bad = d;
  bad.a_p0 = 1.0;
  bad.b_p0 = -2.0;
  bad.c_p0 = 1.0;
  CHECK(nondegeneracy_check(bad, 1.0, 4000).sphere_min < 1e-12);
}

TEST_CASE("surrogate energy Gram matrix") {
  const SurrogateEnergy e(coeffs(), pair());
  const auto& G = e.gram();
  CHECK((G - G.transpose()).norm() == 0.0);
  CHECK(G(0, 0) == doctest::Approx(1.0));
  CHECK(G(1, 1) == doctest::Approx(1.0));
  CHECK(std::abs(G(0, 2)) < 1e-12);
  CHECK(Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 5, 5>>(G).eigenvalues().minCoeff() > 0.0);
  const ModalState m{0.01, 0.02};
  CHECK(e.value(m) == doctest::Approx(0.5 * 5e-4).epsilon(0.05));
}

TEST_CASE("energy decays at fourth order on the manifold") {
  const SurrogateEnergy e(coeffs(), pair());
  const auto d = make_lyapunov_data(coeffs(), 1e-3);
  // dE/dt + K^2/2 is a higher-order remainder.
  double prev = 0.0;
  for (double r : {1e-2, 5e-3}) {
    double worst = 0.0;
    for (int i = 0; i < 64; ++i) {
      const double t = 2.0 * std::numbers::pi * i / 64;
      const ModalState m{r * std::cos(t), r * std::sin(t)};
      const double k = ktilde(m, d);
      worst = std::max(worst, std::abs(energy_dot(m, e, model()) + 0.5 * k * k));
    }
    if (prev > 0.0) CHECK(prev / worst > 24.0);
    prev = worst;
  }
}

TEST_CASE("vtilde_dot is the derivative of vtilde along the flow") {
  const SurrogateEnergy e(coeffs(), pair());
  const auto d = make_lyapunov_data(coeffs(), 0.1);
  const ModalState m{0.006, -0.004};
  const auto f = vector_field(m, model());
  const double h = 1e-4;
  const double fd = (vtilde({m.m1 + h * f.m1, m.m2 + h * f.m2}, d, e, model().q) -
                     vtilde({m.m1 - h * f.m1, m.m2 - h * f.m2}, d, e, model().q)) /
                    (2 * h);
  CHECK(vtilde_dot(m, d, e, model()) == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("scan: negative at moderate mu, quartic scaling, validated input") {
  const SurrogateEnergy e(coeffs(), pair());
  const auto d = make_lyapunov_data(coeffs(), 0.1);
  const auto outer = vtilde_dot_scan(d, e, model(), 1e-2, 10000);
  const auto inner = vtilde_dot_scan(d, e, model(), 5e-3, 10000);
  CHECK(outer.samples >= 10000);
  CHECK(outer.max_vdot < 0.0);
  CHECK(inner.max_vdot < 0.0);
  const double ratio = outer.max_vdot / inner.max_vdot;
  CHECK(ratio >= 12.0);
  CHECK(ratio <= 20.0);
  CHECK(outer.argmax.norm() <= 1e-2 + 1e-15);
  CHECK(outer.argmax.norm() >= 5e-3 - 1e-15);
  CHECK_THROWS_AS(vtilde_dot_scan(d, e, model(), 1e-2, 999), std::invalid_argument);
  CHECK_THROWS_AS(vtilde_dot_scan(d, e, model(), 0.5, 1000), std::invalid_argument);
}

TEST_CASE("seeded scans are reproducible") {
  const SurrogateEnergy e(coeffs(), pair());
  const auto d = make_lyapunov_data(coeffs(), 0.1);
  const auto a = vtilde_dot_scan(d, e, model(), 1e-2, 2000, 42);
  const auto b = vtilde_dot_scan(d, e, model(), 1e-2, 2000, 42);
  CHECK(a.max_vdot == b.max_vdot);
  CHECK(a.argmax.m1 == b.argmax.m1);
  CHECK(a.samples == 2000);
}

TEST_CASE("mu sweep") {
  const SurrogateEnergy e(coeffs(), pair());
  const auto d = make_lyapunov_data(coeffs(), 1e-3);
  const auto s = mu_sweep(d, e, model(), 1e-2, 1000, {1e-2, 0.1});
  REQUIRE(s.size() == 2);
  CHECK(s[0].mu == 1e-2);
  CHECK(s[1].max_vdot < s[0].max_vdot);
  CHECK_THROWS_AS(mu_sweep(d, e, model(), 1e-2, 1000, {0.5}), std::invalid_argument);
}
