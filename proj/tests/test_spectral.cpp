#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "kdvcm/constants.hpp"
#include "kdvcm/spectral.hpp"

using namespace kdv;

TEST_CASE("critical lengths are sorted, unique and start at 2 pi") {
  const auto cl = critical_lengths(4);
  REQUIRE_FALSE(cl.empty());
  CHECK(cl.front().value == doctest::Approx(2.0 * std::numbers::pi));
  for (std::size_t i = 1; i < cl.size(); ++i) CHECK(cl[i].value > cl[i - 1].value + 1e-12);
  bool found = false;
  for (const auto& c : cl) {
    const double expect = 2.0 * std::numbers::pi * std::sqrt((c.j * c.j + c.l * c.l + c.j * c.l) / 3.0);
    CHECK(c.value == doctest::Approx(expect).epsilon(1e-14));
    if (c.j == 1 && c.l == 2) {
      found = true;
      CHECK(c.value == doctest::Approx(9.5977231).epsilon(1e-7));
      CHECK(c.value == doctest::Approx(constants().length).epsilon(1e-15));
    }
  }
  CHECK(found);
  CHECK_THROWS_AS(critical_lengths(0), std::invalid_argument);
}

TEST_CASE("eigenpair is orthonormal and clamped") {
  const auto pair = build_eigen_pair();
  CHECK(pair.q == doctest::Approx(20.0 / (21.0 * std::sqrt(21.0))).epsilon(1e-15));
  CHECK(pair.q == doctest::Approx(0.2078265621).epsilon(1e-9));
  CHECK(pair.theta == doctest::Approx(0.1220019717).epsilon(1e-9));
  CHECK(inner_product(pair.phi1, pair.phi1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(inner_product(pair.phi2, pair.phi2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(inner_product(pair.phi1, pair.phi2)) < 1e-12);
  const double L = constants().length;
  for (const auto* phi : {&pair.phi1, &pair.phi2}) {
    const auto d = differentiate(*phi);
    CHECK(std::abs((*phi)(0.0)) < 1e-12);
    CHECK(std::abs((*phi)(L)) < 1e-12);
    CHECK(std::abs(d(0.0)) < 1e-12);
    CHECK(std::abs(d(L)) < 1e-12);
  }
}

TEST_CASE("eigen residuals vanish") {
  const auto r = eigen_residual(build_eigen_pair());
  CHECK(r.first <= 1e-10);
  CHECK(r.second <= 1e-10);
}

TEST_CASE("integral identities hold exactly") {
  const auto ids = integral_identities(build_eigen_pair(), constants().c1);
  CHECK(ids.size() >= 9);
  for (const auto& id : ids) {
    INFO(id.name);
    CHECK(std::abs(id.computed - id.expected) <= 1e-12);
  }
}

TEST_CASE("discrete spectrum finds the imaginary pair and a negative gap") {
  const auto rep = discrete_spectrum(256);
  const double q = constants().q;
  CHECK(rep.grid_size == 256);
  CHECK(std::abs(rep.nearest_pair - std::complex<double>(0.0, q)) < 1e-2);
  CHECK(rep.gap < 0.0);
  CHECK(rep.raw_gap >= rep.gap);
  for (std::size_t i = 1; i < rep.eigenvalues.size(); ++i) {
    CHECK(rep.eigenvalues[i].real() <= rep.eigenvalues[i - 1].real());
  }
  CHECK_THROWS_AS(discrete_spectrum(32), std::invalid_argument);
}

TEST_CASE("nearest pair converges at second order") {
  const double q = constants().q;
  const double e1 = std::abs(discrete_spectrum(128).nearest_pair - std::complex<double>(0.0, q));
  const double e2 = std::abs(discrete_spectrum(256).nearest_pair - std::complex<double>(0.0, q));
  CHECK(e1 / e2 > 3.0);
}
