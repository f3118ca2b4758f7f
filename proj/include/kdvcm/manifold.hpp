#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "kdvcm/exptrig.hpp"
#include "kdvcm/spectral.hpp"

namespace kdv {

/// Forcing terms of the decoupled boundary-value problems for
/// f+ = a + c and f- = a - c.
struct SourceTerms {
  ExpTrigPoly g_plus;   // phi1 phi1' + phi2 phi2' + sqrt3 c1 phi1 - c1 phi2
  ExpTrigPoly g_minus;  // phi1 phi1' - phi2 phi2' - sqrt3 c1 phi1 - c1 phi2
  ExpTrigPoly g_mixed;  // phi1 phi2' + phi1' phi2 + c1 phi1 - sqrt3 c1 phi2
};

SourceTerms build_sources(const EigenPair& pair, double c1);

/// Homogeneous solutions of f''' + f' = 0 and of
/// f^(6) + 2 f^(4) + f'' + 4 q^2 f = 0.
struct FundamentalBasis {
  std::vector<ExpTrigPoly> plus;   // 1, cos x, sin x
  std::vector<ExpTrigPoly> minus;  // e^{+-a1 x} {cos, sin}(b1 x), {cos, sin}(b2 x)
  double alpha1 = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  // Values straight from the cube-root formulas, before Newton polishing.
  double alpha1_radical = 0.0;
  double beta1_radical = 0.0;
  double beta2_radical = 0.0;
};

/// Characteristic coefficients (ascending powers of D).
std::array<double, 4> plus_operator();
std::array<double, 7> minus_operator(double q);

FundamentalBasis fundamental_basis(double q, double length);

/// One boundary system A C = -b with its Cramer determinants, kept for
/// reporting. The coefficients come from a pivoted LU solve.
struct BoundarySystem {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;           // b: boundary functionals of the particular part
  Eigen::VectorXd coefficients;  // C
  double det = 0.0;
  std::vector<double> cramer_dets;  // det(A_l), column l replaced by -b
};

struct BoundarySolution {
  ExpTrigPoly f;
  ExpTrigPoly particular;
  BoundarySystem system;
};

/// f+''' + f+' + g+ = 0, f+(0) = f+(L) = f+'(L) = 0.
/// Throws NumericalError("resonant homogeneous system") if A+ is singular.
BoundarySolution solve_f_plus(const SourceTerms& src, const FundamentalBasis& basis);

/// Sixth-order problem for f- with the six boundary functionals
/// f(0), f(L), f'(L), f'(0)+f'''(0), f'''(L), f''(L)+f''''(L).
BoundarySolution solve_f_minus(const SourceTerms& src, double q, const FundamentalBasis& basis);

/// Boundary functionals of the sixth-order problem, in the order above.
std::array<double, 6> minus_functionals(const ExpTrigPoly& f);

/// Quadratic center-manifold coefficients: g(m) ~ m1^2 a + m1 m2 b + m2^2 c.
struct ManifoldCoeffs {
  ExpTrigPoly a;
  ExpTrigPoly b;
  ExpTrigPoly c;
  double a_prime0 = 0.0;
  double b_prime0 = 0.0;
  double c_prime0 = 0.0;
};

ManifoldCoeffs assemble(const ExpTrigPoly& f_plus, const ExpTrigPoly& f_minus,
                        const SourceTerms& src, double q);

/// Residual polynomials of the three coupled equations for a, b, c.
struct ResidualPolys {
  ExpTrigPoly a_eq;
  ExpTrigPoly b_eq;
  ExpTrigPoly c_eq;
};

ResidualPolys residual_polys(const ManifoldCoeffs& mc, const EigenPair& pair, double c1, double q);

struct ManifoldResiduals {
  double a_eq;
  double b_eq;
  double c_eq;
};

/// Sup-norm of each residual over 2000 uniform points.
ManifoldResiduals residuals(const ManifoldCoeffs& mc, const EigenPair& pair, double c1, double q,
                            int points = 2000);

/// u(0), u(L), u'(L) for u = a, b, c in that order.
std::array<double, 9> boundary_values(const ManifoldCoeffs& mc);

/// <a,phi1>, <a,phi2>, <b,phi1>, <b,phi2>, <c,phi1>, <c,phi2>.
std::array<double, 6> orthogonality(const ManifoldCoeffs& mc, const EigenPair& pair);

/// Full closed-form pipeline with every intermediate kept.
struct ManifoldSolution {
  SourceTerms sources;
  FundamentalBasis basis;
  BoundarySolution plus;
  BoundarySolution minus;
  ManifoldCoeffs coeffs;
  // The printed fourth boundary entry of the sixth-order system, rebuilt from
  // our particular coefficients, against the directly derived functional.
  double printed_b_minus4 = 0.0;
  bool printed_b_minus4_agrees = false;
};

ManifoldSolution solve_manifold(const EigenPair& pair, double c1);

/// Sampled a, b, c on the nodes x_i = i L / grid_size.
struct SampledManifold {
  std::vector<double> x;
  Eigen::VectorXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  double a_prime0 = 0.0;
  double b_prime0 = 0.0;
  double c_prime0 = 0.0;
};

/// Independent finite-difference solve of the coupled (a, b, c) system:
/// third-order equations collocated at cell-group midpoints with compact
/// second-order stencils, one sparse solve. grid_size >= 200.
SampledManifold bvp_oracle(const EigenPair& pair, double c1, double q, int grid_size);

/// Second independent route: finite-difference solves of the f+ problem and of
/// the f- problem (as the pair f-, v = f-' + f-'''), then a = (f+ + f-)/2,
/// c = (f+ - f-)/2, b = -(v + g-)/(2q).
SampledManifold bvp_oracle_decoupled(const EigenPair& pair, double c1, double q, int grid_size);

/// Combines solutions on N and 2N intervals as (4 u_2N - u_N)/3 on the coarse nodes.
SampledManifold richardson(const SampledManifold& coarse, const SampledManifold& fine);

/// max_i |closed(x_i) - sampled_i| over a, b, c separately.
std::array<double, 3> oracle_disagreement(const ManifoldCoeffs& closed, const SampledManifold& s);

}  // namespace kdv
