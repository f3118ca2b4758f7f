#include "kdvcm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "kdvcm/constants.hpp"
#include "kdvcm/errors.hpp"
#include "kdvcm/fd.hpp"

namespace kdv {

std::vector<CriticalLength> critical_lengths(int max_index) {
  if (max_index < 1) throw std::invalid_argument("critical_lengths: max_index must be >= 1");
  std::vector<CriticalLength> all;
  for (int j = 1; j <= max_index; ++j) {
    for (int l = 1; l <= max_index; ++l) {
      const long double v =
          2 * std::numbers::pi_v<long double> * std::sqrt((j * j + l * l + j * l) / 3.0L);
      all.push_back({j, l, static_cast<double>(v)});
    }
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const auto& a, const auto& b) { return a.value < b.value; });
  std::vector<CriticalLength> out;
  for (const auto& c : all) {
    if (out.empty() || std::abs(c.value - out.back().value) > 1e-12) out.push_back(c);
  }
  return out;
}

EigenPair build_eigen_pair() {
  const auto& k = constants();
  const double len = k.length;
  const double th = k.theta;
  const auto c = [&](int n, double a) { return ExpTrigPoly::cosine(len, k.freq(n), a); };
  const auto s = [&](int n, double a) { return ExpTrigPoly::sine(len, k.freq(n), a); };
  EigenPair pair{k.q, ExpTrigPoly(len), ExpTrigPoly(len), th};
  pair.phi1 = c(5, th) + c(1, -3 * th) + c(4, 2 * th);
  pair.phi2 = s(5, -th) + s(1, -3 * th) + s(4, 2 * th);
  return pair;
}

EigenResidual eigen_residual(const EigenPair& pair, int points) {
  const ExpTrigPoly r1 = differentiate(pair.phi1) + differentiate(pair.phi1, 3) + pair.q * pair.phi2;
  const ExpTrigPoly r2 = differentiate(pair.phi2) + differentiate(pair.phi2, 3) - pair.q * pair.phi1;
  return {sup_norm(r1, points), sup_norm(r2, points)};
}

std::vector<IntegralIdentity> integral_identities(const EigenPair& pair, double c1) {
  const auto& p1 = pair.phi1;
  const auto& p2 = pair.phi2;
  const ExpTrigPoly d1 = differentiate(p1);
  const ExpTrigPoly d2 = differentiate(p2);
  const double s3 = constants().sqrt3;
  const double v = 10.0 / (7.0 * constants().sqrt21);
  return {
      {"<phi1,phi2>", inner_product(p1, p2), 0.0},
      {"<phi1,phi1>", inner_product(p1, p1), 1.0},
      {"<phi2,phi2>", inner_product(p2, p2), 1.0},
      {"int phi1 phi2'", inner_product(p1, d2), v},
      {"int phi2 phi1'", inner_product(p2, d1), -v},
      {"int phi1^2 phi1'", integrate(p1 * p1 * d1), 0.0},
      {"int phi2^2 phi2'", integrate(p2 * p2 * d2), 0.0},
      {"int phi1^2 phi2'", integrate(p1 * p1 * d2), -2.0 * c1},
      {"int phi2^2 phi1'", integrate(p2 * p2 * d1), 2.0 * s3 * c1},
      {"int phi1 phi2 phi1'", integrate(p1 * p2 * d1), c1},
      {"int phi1 phi2 phi2'", integrate(p1 * p2 * d2), -s3 * c1},
  };
}

Eigen::MatrixXd discrete_operator(int grid_size) {
  const int n_int = grid_size;
  if (n_int < 64) throw std::invalid_argument("discrete_spectrum: grid_size must be >= 64");
  const double h = constants().length / n_int;
  const int nodes = n_int + 1;

  // Operator on the full node vector y_0..y_N, rows 1..N-2 kept.
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(nodes, nodes);
  const auto d1 = fd_weights_uniform(-1, 3, 1, h);
  const auto d3c = fd_weights_uniform(-2, 5, 3, h);
  for (int i = 1; i < n_int; ++i) {
    for (int k = 0; k < 3; ++k) full(i, i - 1 + k) -= d1[static_cast<std::size_t>(k)];
    int first;
    std::vector<double> w3;
    if (i >= 2 && i <= n_int - 2) {
      first = i - 2;
      w3 = d3c;
    } else if (i < 2) {
      first = 0;
      w3 = fd_weights_uniform(-i, 6, 3, h);
    } else {
      first = n_int - 5;
      w3 = fd_weights_uniform(first - i, 6, 3, h);
    }
    for (std::size_t k = 0; k < w3.size(); ++k) full(i, first + static_cast<int>(k)) -= w3[k];
  }

  // y_0 = y_N = 0; (3 y_N - 4 y_{N-1} + y_{N-2}) / (2h) = 0  =>  y_{N-1} = y_{N-2} / 4.
  const int m = n_int - 2;  // free unknowns y_1..y_{N-2}
  Eigen::MatrixXd prolong = Eigen::MatrixXd::Zero(nodes, m);
  for (int j = 0; j < m; ++j) prolong(j + 1, j) = 1.0;
  prolong(n_int - 1, m - 1) = 0.25;
  return full.block(1, 0, m, nodes) * prolong;
}

SpectrumReport discrete_spectrum(int grid_size) {
  const Eigen::MatrixXd a = discrete_operator(grid_size);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) {
    throw NumericalError("discrete_spectrum: singular discretization at grid_size " +
                         std::to_string(grid_size));
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("discrete_spectrum: eigen-solve failed at grid_size " +
                         std::to_string(grid_size));
  }

  SpectrumReport rep;
  rep.grid_size = grid_size;
  const auto ev = solver.eigenvalues();
  rep.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(), [](const auto& x, const auto& y) {
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
  });

  const double q = constants().q;
  const std::complex<double> target{0.0, q};
  auto nearest = [&](std::complex<double> t) {
    return std::min_element(rep.eigenvalues.begin(), rep.eigenvalues.end(),
                            [&](const auto& x, const auto& y) {
                              return std::abs(x - t) < std::abs(y - t);
                            }) -
           rep.eigenvalues.begin();
  };
  const auto ip = nearest(target);
  const auto im = nearest(std::conj(target));
  rep.nearest_pair = rep.eigenvalues[static_cast<std::size_t>(ip)];

  // Modes with at least eight grid points per wavelength: |lambda| <= (pi / 4h)^3.
  const double h = constants().length / grid_size;
  rep.resolved_cutoff = std::pow(std::numbers::pi / (4.0 * h), 3);
  rep.gap = -std::numeric_limits<double>::infinity();
  rep.raw_gap = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i) {
    if (static_cast<long>(i) == ip || static_cast<long>(i) == im) continue;
    const auto& e = rep.eigenvalues[i];
    rep.raw_gap = std::max(rep.raw_gap, e.real());
    if (std::abs(e) <= rep.resolved_cutoff) rep.gap = std::max(rep.gap, e.real());
  }
  return rep;
}

}  // namespace kdv
