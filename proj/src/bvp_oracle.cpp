#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "kdvcm/constants.hpp"
#include "kdvcm/errors.hpp"
#include "kdvcm/fd.hpp"
#include "kdvcm/manifold.hpp"

namespace kdv {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

struct MidpointStencil {
  std::vector<double> value;  // interpolation to the midpoint
  std::vector<double> d1;
  std::vector<double> d3;
};

// Four nodes at offsets -3/2, -1/2, 1/2, 3/2 (in h) around a midpoint.
MidpointStencil midpoint_stencil(double h) {
  const std::vector<double> nodes{-1.5 * h, -0.5 * h, 0.5 * h, 1.5 * h};
  return {fd_weights(nodes, 0.0, 0), fd_weights(nodes, 0.0, 1), fd_weights(nodes, 0.0, 3)};
}

Eigen::VectorXd sparse_solve(int n, const Triplets& t, const Eigen::VectorXd& rhs, const char* who) {
  Eigen::SparseMatrix<double> m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(m);
  if (lu.info() != Eigen::Success) {
    throw NumericalError(std::string(who) + ": sparse factorization failed");
  }
  Eigen::VectorXd x = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !x.allFinite()) {
    throw NumericalError(std::string(who) + ": sparse solve failed");
  }
  return x;
}

double derivative_at_zero(const Eigen::VectorXd& u, double h) {
  const auto w = fd_weights_uniform(0, 5, 1, h);
  double s = 0.0;
  for (int k = 0; k < 5; ++k) s += w[static_cast<std::size_t>(k)] * u(k);
  return s;
}

void check_grid(int grid_size) {
  if (grid_size < 200) throw std::invalid_argument("bvp_oracle: grid_size must be >= 200");
}

// u(0) = u(L) = 0 and a third-order one-sided u'(L) = 0 on component `comp`
// of an interleaved vector with `ncomp` components.
void dirichlet_neumann_rows(Triplets& t, int& row, int n, int comp, int ncomp, double h) {
  t.emplace_back(row++, comp, 1.0);
  t.emplace_back(row++, ncomp * n + comp, 1.0);
  const auto w = fd_weights_uniform(-3, 4, 1, h);
  for (int k = 0; k < 4; ++k) t.emplace_back(row, ncomp * (n - 3 + k) + comp, w[static_cast<std::size_t>(k)]);
  ++row;
}

// Solves u_e' + u_e''' + sum_c coupling(e, c) u_c = forcing_e(x), e = 0..ncomp-1,
// with u(0) = u(L) = u'(L) = 0 for every component. Each equation is
// collocated at the midpoints x_{i+3/2} of four consecutive nodes.
Eigen::MatrixXd solve_midpoint_system(int n, double h, const Eigen::MatrixXd& coupling,
                                      const std::vector<const ExpTrigPoly*>& forcing,
                                      const char* who) {
  const int ncomp = static_cast<int>(coupling.rows());
  const int dim = ncomp * (n + 1);
  const MidpointStencil st = midpoint_stencil(h);
  Triplets t;
  t.reserve(static_cast<std::size_t>(dim) * 4 * (1 + ncomp));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
  int row = 0;
  for (int i = 0; i + 3 <= n; ++i) {
    const double xm = (i + 1.5) * h;
    for (int eq = 0; eq < ncomp; ++eq) {
      for (int k = 0; k < 4; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        const int node = i + k;
        t.emplace_back(row, ncomp * node + eq, st.d1[kk] + st.d3[kk]);
        for (int comp = 0; comp < ncomp; ++comp) {
          if (coupling(eq, comp) != 0.0) {
            t.emplace_back(row, ncomp * node + comp, coupling(eq, comp) * st.value[kk]);
          }
        }
      }
      rhs(row++) = (*forcing[static_cast<std::size_t>(eq)])(xm);
    }
  }
  for (int comp = 0; comp < ncomp; ++comp) dirichlet_neumann_rows(t, row, n, comp, ncomp, h);
  if (row != dim) throw std::logic_error(std::string(who) + ": row count mismatch");
  const Eigen::VectorXd u = sparse_solve(dim, t, rhs, who);
  Eigen::MatrixXd out(n + 1, ncomp);
  for (int i = 0; i <= n; ++i) {
    for (int comp = 0; comp < ncomp; ++comp) out(i, comp) = u(ncomp * i + comp);
  }
  return out;
}

SampledManifold make_sampled(int n, double h, Eigen::VectorXd a, Eigen::VectorXd b, Eigen::VectorXd c) {
  SampledManifold s;
  s.x.resize(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) s.x[static_cast<std::size_t>(i)] = i * h;
  s.a = std::move(a);
  s.b = std::move(b);
  s.c = std::move(c);
  s.a_prime0 = derivative_at_zero(s.a, h);
  s.b_prime0 = derivative_at_zero(s.b, h);
  s.c_prime0 = derivative_at_zero(s.c, h);
  return s;
}

}  // namespace

SampledManifold bvp_oracle(const EigenPair& pair, double c1, double q, int grid_size) {
  check_grid(grid_size);
  const int n = grid_size;
  const double h = pair.phi1.domain_length() / n;
  const double s3 = constants().sqrt3;

  const ExpTrigPoly d1 = differentiate(pair.phi1);
  const ExpTrigPoly d2 = differentiate(pair.phi2);
  const ExpTrigPoly fa = -(pair.phi1 * d1 - c1 * pair.phi2);
  const ExpTrigPoly fb = -(pair.phi1 * d2 + d1 * pair.phi2 + c1 * pair.phi1 - (s3 * c1) * pair.phi2);
  const ExpTrigPoly fc = -(pair.phi2 * d2 + (s3 * c1) * pair.phi1);

  Eigen::MatrixXd coupling(3, 3);
  coupling << 0.0, q, 0.0, -2.0 * q, 0.0, 2.0 * q, 0.0, -q, 0.0;
  const Eigen::MatrixXd u = solve_midpoint_system(n, h, coupling, {&fa, &fb, &fc}, "bvp_oracle");
  return make_sampled(n, h, u.col(0), u.col(1), u.col(2));
}

SampledManifold bvp_oracle_decoupled(const EigenPair& pair, double c1, double q, int grid_size) {
  check_grid(grid_size);
  const int n = grid_size;
  const double h = pair.phi1.domain_length() / n;
  const SourceTerms src = build_sources(pair, c1);

  // f+''' + f+' = -g+.
  const ExpTrigPoly rp = -src.g_plus;
  const Eigen::MatrixXd fplus =
      solve_midpoint_system(n, h, Eigen::MatrixXd::Zero(1, 1), {&rp}, "bvp_oracle_decoupled");

  // With v = f-' + f-''' the sixth-order operator factors as (D^3 + D) v + 4 q^2 f-,
  // and the six boundary functionals become f-(0) = f-(L) = f-'(L) = 0 and
  // v(0) = v(L) = v'(L) = 0.
  const ExpTrigPoly zero(pair.phi1.domain_length());
  const ExpTrigPoly rm =
      -(differentiate(src.g_minus, 1) + differentiate(src.g_minus, 3) - (2.0 * q) * src.g_mixed);
  Eigen::MatrixXd coupling(2, 2);
  coupling << 0.0, -1.0, 4.0 * q * q, 0.0;
  const Eigen::MatrixXd fv = solve_midpoint_system(n, h, coupling, {&zero, &rm}, "bvp_oracle_decoupled");

  Eigen::VectorXd gm(n + 1);
  for (int i = 0; i <= n; ++i) gm(i) = src.g_minus(i * h);
  return make_sampled(n, h, 0.5 * (fplus.col(0) + fv.col(0)), (-1.0 / (2.0 * q)) * (fv.col(1) + gm),
                      0.5 * (fplus.col(0) - fv.col(0)));
}

SampledManifold richardson(const SampledManifold& coarse, const SampledManifold& fine) {
  const auto n = static_cast<Eigen::Index>(coarse.x.size()) - 1;
  if (static_cast<Eigen::Index>(fine.x.size()) - 1 != 2 * n) {
    throw std::invalid_argument("richardson: fine grid must have twice the intervals");
  }
  SampledManifold s = coarse;
  for (Eigen::Index i = 0; i <= n; ++i) {
    s.a(i) = (4.0 * fine.a(2 * i) - coarse.a(i)) / 3.0;
    s.b(i) = (4.0 * fine.b(2 * i) - coarse.b(i)) / 3.0;
    s.c(i) = (4.0 * fine.c(2 * i) - coarse.c(i)) / 3.0;
  }
  s.a_prime0 = (4.0 * fine.a_prime0 - coarse.a_prime0) / 3.0;
  s.b_prime0 = (4.0 * fine.b_prime0 - coarse.b_prime0) / 3.0;
  s.c_prime0 = (4.0 * fine.c_prime0 - coarse.c_prime0) / 3.0;
  return s;
}

}  // namespace kdv
