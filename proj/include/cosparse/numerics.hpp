#pragma once

#include "cosparse/linear_map.hpp"
#include "cosparse/types.hpp"

namespace cosparse {

// Singular values below rtol * sigma_max count as zero throughout.
constexpr double kRankRtol = 1e-12;

Index numerical_rank(const Matrix& a, double rtol = kRankRtol);

// Moore-Penrose pseudo-inverse via SVD.
Matrix pseudo_inverse(const Matrix& a, double rtol = kRankRtol);

// Minimum-norm least-squares solution of A x ~= b.
Vector least_squares_min_norm(const Matrix& a, const Vector& b,
                              double rtol = kRankRtol);

// Rows of the returned (d - m) x d matrix form an orthonormal basis of the
// null space of M (m x d, m < d, full row rank). Throws NumericalError when
// the rows of M are not numerically independent.
Matrix null_space_basis(const Matrix& m, double rtol = kRankRtol);

// Same, but for a matrix of any rank and shape: returns (d - rank) x d with
// orthonormal rows, possibly zero of them. An empty A spans nothing, so the
// result is the identity frame on R^d.
Matrix null_space_basis_any(const Matrix& a, Index d, double rtol = kRankRtol);

// Operator norm from l_inf to l_inf: maximum absolute row sum.
double op_norm_inf_inf(const Matrix& a);

// Operator norm from l_1 to l_1: maximum absolute column sum. Evaluated as
// the inf->inf norm of the transposed view so the two share summation order.
double op_norm_1_1(const Matrix& a);

struct CgResult {
  Vector x;
  bool converged = false;
  Index iterations = 0;
  double residual = 0.0;  // final |A'(Ax - b)| / |A'b|
};

// Conjugate gradient on the normal equations A'A x = A'b. Stops once
// |A'(Ax - b)| <= tol * |A'b|. A warm start may be supplied through x0.
// The adjoint pair is probed once and an inconsistent pair is an error;
// callers that already vetted the pair can skip the probe.
CgResult cg_least_squares(const LinearMap& a, const Vector& b,
                          double tol = 1e-10, Index max_iter = 1000,
                          const Vector* x0 = nullptr, bool check_adjoint = true);

// Power-iteration estimate of the spectral norm.
double op_norm2_estimate(const LinearMap& a, Index iterations = 60,
                         uint64_t seed = 0x5eedull);

}  // namespace cosparse
