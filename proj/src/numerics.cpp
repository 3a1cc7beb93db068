#include "cosparse/numerics.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

namespace cosparse {

namespace {

Eigen::BDCSVD<Matrix> thin_svd(const Matrix& a) {
  return Eigen::BDCSVD<Matrix>(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
}

Index rank_from_singular_values(const Vector& sv, double rtol) {
  if (sv.size() == 0) return 0;
  const double cut = rtol * sv[0];
  Index r = 0;
  while (r < sv.size() && sv[r] > cut) ++r;
  return r;
}

}  // namespace

Index numerical_rank(const Matrix& a, double rtol) {
  if (a.size() == 0) return 0;
  Eigen::BDCSVD<Matrix> svd(a);
  return rank_from_singular_values(svd.singularValues(), rtol);
}

Matrix pseudo_inverse(const Matrix& a, double rtol) {
  if (a.size() == 0) return Matrix(a.cols(), a.rows());
  const auto svd = thin_svd(a);
  const Vector& sv = svd.singularValues();
  const Index r = rank_from_singular_values(sv, rtol);
  Vector inv = Vector::Zero(sv.size());
  for (Index i = 0; i < r; ++i) inv[i] = 1.0 / sv[i];
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Vector least_squares_min_norm(const Matrix& a, const Vector& b, double rtol) {
  require(a.rows() == b.size(), "least_squares_min_norm: dimension mismatch");
  if (a.size() == 0) return Vector::Zero(a.cols());
  const auto svd = thin_svd(a);
  const Vector& sv = svd.singularValues();
  const Index r = rank_from_singular_values(sv, rtol);
  const Vector utb = svd.matrixU().transpose() * b;
  Vector z = Vector::Zero(sv.size());
  for (Index i = 0; i < r; ++i) z[i] = utb[i] / sv[i];
  return svd.matrixV() * z;
}

Matrix null_space_basis(const Matrix& m, double rtol) {
  const Index rows = m.rows(), d = m.cols();
  require(rows < d, "null_space_basis: need strictly fewer rows than columns");
  // Householder QR of M' gives an orthonormal frame whose trailing columns
  // span the orthogonal complement of the row space; a rank check guards the
  // full-row-rank hypothesis.
  Eigen::ColPivHouseholderQR<Matrix> qr(m.transpose());
  qr.setThreshold(rtol);
  if (qr.rank() < rows)
    throw NumericalError(
        "null_space_basis: rows of M are not linearly independent (numerical "
        "rank " +
        std::to_string(qr.rank()) + " < " + std::to_string(rows) + ")");
  Matrix q = qr.householderQ();
  return q.rightCols(d - rows).transpose();
}

Matrix null_space_basis_any(const Matrix& a, Index d, double rtol) {
  require(d >= 0, "null_space_basis_any: negative dimension");
  if (a.rows() == 0 || a.size() == 0) return Matrix::Identity(d, d);
  require(a.cols() == d, "null_space_basis_any: column count mismatch");
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  Index rank = 0;
  while (rank < sv.size() && sv[rank] > rtol * sv[0]) ++rank;
  return svd.matrixV().rightCols(d - rank).transpose();
}

double op_norm_inf_inf(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  double best = 0.0;
  for (Index i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (Index j = 0; j < a.cols(); ++j) s += std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

double op_norm_1_1(const Matrix& a) { return op_norm_inf_inf(a.transpose()); }

CgResult cg_least_squares(const LinearMap& a, const Vector& b, double tol,
                          Index max_iter, const Vector* x0, bool check_adjoint) {
  require(b.size() == a.rows(), "cg_least_squares: dimension mismatch");
  if (check_adjoint && !a.adjoint_consistent(1e-10))
    throw NumericalError("cg_least_squares: forward/adjoint pair is inconsistent");

  CgResult out;
  out.x = (x0 != nullptr) ? *x0 : Vector::Zero(a.cols());
  if (x0 != nullptr)
    require(x0->size() == a.cols(), "cg_least_squares: warm start size mismatch");

  const double target = tol * a.apply_adjoint(b).norm();

  Vector r = b - a.apply(out.x);      // residual in data space
  Vector s = a.apply_adjoint(r);      // gradient (normal-equation residual)
  Vector p = s;
  double gamma = s.squaredNorm();
  const double floor = 1e-300;

  for (Index k = 0; k < max_iter; ++k) {
    if (std::sqrt(gamma) <= target) {
      out.converged = true;
      break;
    }
    const Vector q = a.apply(p);
    const double qq = q.squaredNorm();
    if (qq <= floor) break;  // p in the numerical null space; stationary
    const double alpha = gamma / qq;
    out.x += alpha * p;
    r -= alpha * q;
    s = a.apply_adjoint(r);
    const double gamma_next = s.squaredNorm();
    p = s + (gamma_next / gamma) * p;
    gamma = gamma_next;
    out.iterations = k + 1;
  }
  if (!out.converged && std::sqrt(gamma) <= target) out.converged = true;
  out.residual = (target > 0.0) ? std::sqrt(gamma) / (target / tol) : 0.0;
  if (target == 0.0) out.converged = true;
  return out;
}

double op_norm2_estimate(const LinearMap& a, Index iterations, uint64_t seed) {
  Rng rng(derive_seed(seed, 0x20));
  Vector v = rng.normal_vector(a.cols());
  double nv = v.norm();
  if (nv == 0.0) return 0.0;
  v /= nv;
  double sigma = 0.0;
  for (Index k = 0; k < iterations; ++k) {
    Vector w = a.apply_adjoint(a.apply(v));
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    sigma = std::sqrt(nw);
    v = w / nw;
  }
  return sigma;
}

}  // namespace cosparse
