#include "cosparse/operators.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <set>
#include <unsupported/Eigen/FFT>

#include "cosparse/numerics.hpp"
#include "cosparse/rng.hpp"

namespace cosparse {

// ---------------------------------------------------------------- analysis

AnalysisOperator AnalysisOperator::from_dense(Matrix rows) {
  AnalysisOperator op;
  op.kind_ = Kind::Dense;
  op.d_ = rows.cols();
  op.dense_ = std::move(rows);
  return op;
}

AnalysisOperator AnalysisOperator::dif2d(Index n) {
  require(n >= 2, "AnalysisOperator::dif2d: need n >= 2");
  AnalysisOperator op;
  op.kind_ = Kind::Dif2d;
  op.n_ = n;
  op.d_ = n * n;
  return op;
}

Index AnalysisOperator::parent_p() const {
  return kind_ == Kind::Dense ? dense_.rows() : 2 * n_ * (n_ - 1);
}

Index AnalysisOperator::p() const {
  return rows_ ? static_cast<Index>(rows_->size()) : parent_p();
}

Index AnalysisOperator::lattice_side() const {
  require(kind_ == Kind::Dif2d, "AnalysisOperator: not a lattice operator");
  return n_;
}

Index AnalysisOperator::parent_row(Index i) const {
  require(i >= 0 && i < p(), "AnalysisOperator::parent_row: out of range");
  return rows_ ? (*rows_)[static_cast<size_t>(i)] : i;
}

Vector AnalysisOperator::apply(const Vector& x) const {
  require(x.size() == d_, "AnalysisOperator::apply: dimension mismatch");
  if (kind_ == Kind::Dense) {
    if (!rows_) return dense_ * x;
    Vector out(p());
    for (Index i = 0; i < p(); ++i)
      out[i] = dense_.row((*rows_)[static_cast<size_t>(i)]).dot(x);
    return out;
  }
  const PixelGraph g(n_);
  Vector out(p());
  for (Index i = 0; i < p(); ++i) {
    const auto [a, b] = g.edge_endpoints(parent_row(i));
    out[i] = x[a] - x[b];
  }
  return out;
}

Vector AnalysisOperator::apply_adjoint(const Vector& v) const {
  require(v.size() == p(), "AnalysisOperator::apply_adjoint: dimension mismatch");
  if (kind_ == Kind::Dense) {
    if (!rows_) return dense_.transpose() * v;
    Vector out = Vector::Zero(d_);
    for (Index i = 0; i < p(); ++i)
      out += v[i] * dense_.row((*rows_)[static_cast<size_t>(i)]).transpose();
    return out;
  }
  const PixelGraph g(n_);
  Vector out = Vector::Zero(d_);
  for (Index i = 0; i < p(); ++i) {
    const auto [a, b] = g.edge_endpoints(parent_row(i));
    out[a] += v[i];
    out[b] -= v[i];
  }
  return out;
}

Matrix AnalysisOperator::apply_columns(const Matrix& x) const {
  require(x.rows() == d_, "AnalysisOperator::apply_columns: dimension mismatch");
  if (kind_ == Kind::Dense && !rows_) return dense_ * x;
  Matrix out(p(), x.cols());
  for (Index j = 0; j < x.cols(); ++j) out.col(j) = apply(x.col(j));
  return out;
}

Matrix AnalysisOperator::dense(Index max_entries) const {
  if (p() * d_ > max_entries)
    throw std::invalid_argument(
        "AnalysisOperator::dense: materialization over the entry budget; use "
        "to_linear_map()");
  if (kind_ == Kind::Dense) {
    if (!rows_) return dense_;
    Matrix out(p(), d_);
    for (Index i = 0; i < p(); ++i)
      out.row(i) = dense_.row((*rows_)[static_cast<size_t>(i)]);
    return out;
  }
  const PixelGraph g(n_);
  Matrix out = Matrix::Zero(p(), d_);
  for (Index i = 0; i < p(); ++i) {
    const auto [a, b] = g.edge_endpoints(parent_row(i));
    out(i, a) = 1.0;
    out(i, b) = -1.0;
  }
  return out;
}

LinearMap AnalysisOperator::to_linear_map() const {
  AnalysisOperator self = *this;
  return LinearMap(
      p(), d_, [self](const Vector& x) { return self.apply(x); },
      [self](const Vector& v) { return self.apply_adjoint(v); });
}

AnalysisOperator AnalysisOperator::restrict_to(const Cosupport& rows) const {
  require(rows.p() == p(), "AnalysisOperator::restrict_to: cosupport is for a different row count");
  AnalysisOperator out = *this;
  std::vector<Index> parent(static_cast<size_t>(rows.size()));
  for (Index i = 0; i < rows.size(); ++i)
    parent[static_cast<size_t>(i)] = parent_row(rows[i]);
  out.rows_ = std::move(parent);
  return out;
}

AnalysisOperator restrict_rows(const AnalysisOperator& omega, const Cosupport& lambda) {
  return omega.restrict_to(lambda);
}

AnalysisOperator finite_difference_2d(Index n) { return AnalysisOperator::dif2d(n); }

AnalysisOperator random_tight_frame_operator(Index p, Index d, uint64_t seed,
                                             Index max_iterations, double tol) {
  require(p >= d && d >= 1, "random_tight_frame_operator: need p >= d >= 1");
  Rng rng(derive_seed(seed, 0x7fa3eull));
  Matrix omega = rng.normal_matrix(p, d);
  const double c = static_cast<double>(p) / static_cast<double>(d);

  auto joint_residual = [&](const Matrix& w) {
    const Matrix gram = w.transpose() * w;
    const double frame = (gram - c * Matrix::Identity(d, d)).norm() / (c * std::sqrt(double(d)));
    double row = 0.0;
    for (Index i = 0; i < p; ++i) row = std::max(row, std::abs(w.row(i).norm() - 1.0));
    return std::max(frame, row);
  };

  for (Index it = 0; it < max_iterations; ++it) {
    // closest matrix with Omega' Omega = c I: rescale all singular values,
    // i.e. Omega <- sqrt(c) * Omega (Omega' Omega)^{-1/2}
    Eigen::SelfAdjointEigenSolver<Matrix> eig(omega.transpose() * omega);
    const Vector& ev = eig.eigenvalues();
    if (ev[0] <= 0.0)
      throw NumericalError("random_tight_frame_operator: degenerate iterate");
    Vector inv_sqrt(d);
    for (Index i = 0; i < d; ++i) inv_sqrt[i] = 1.0 / std::sqrt(ev[i]);
    omega = std::sqrt(c) * omega * eig.eigenvectors() * inv_sqrt.asDiagonal() *
            eig.eigenvectors().transpose();
    for (Index i = 0; i < p; ++i) omega.row(i) /= omega.row(i).norm();
    if (joint_residual(omega) <= tol) break;
  }
  return AnalysisOperator::from_dense(std::move(omega));
}

// ------------------------------------------------------------- measurement

MeasurementSystem MeasurementSystem::from_dense(Matrix m) {
  MeasurementSystem sys;
  sys.kind_ = Kind::DenseGaussian;
  sys.m_ = m.rows();
  sys.d_ = m.cols();
  sys.dense_ = std::move(m);
  return sys;
}

MeasurementSystem gaussian_measurement(Index m, Index d, uint64_t seed) {
  require(m >= 1 && m <= d, "gaussian_measurement: need 1 <= m <= d");
  Rng rng(derive_seed(seed, 0x6a55ull));
  Matrix mat = rng.normal_matrix(m, d);
  if (numerical_rank(mat) < m)
    throw NumericalError("gaussian_measurement: drawn matrix is rank deficient");
  return MeasurementSystem::from_dense(std::move(mat));
}

namespace {

// unnormalized 2-d DFT with the given exponent sign on an n x n complex grid
CMatrix dft2(const CMatrix& in, bool positive_exponent) {
  Eigen::FFT<double> fft;
  const Index n = in.rows();
  CMatrix tmp(n, n), out(n, n);
  CVector col(n), res(n);
  for (Index j = 0; j < n; ++j) {
    col = in.col(j);
    if (positive_exponent) {
      fft.inv(res, col);       // (1/n) sum e^{+2 pi i ...}
      res *= double(n);
    } else {
      fft.fwd(res, col);
    }
    tmp.col(j) = res;
  }
  for (Index i = 0; i < n; ++i) {
    col = tmp.row(i).transpose();
    if (positive_exponent) {
      fft.inv(res, col);
      res *= double(n);
    } else {
      fft.fwd(res, col);
    }
    out.row(i) = res.transpose();
  }
  return out;
}

}  // namespace

std::vector<std::array<Index, 2>> rasterize_radial_lines(Index n, Index lines_count) {
  require(n >= 2, "rasterize_radial_lines: need n >= 2");
  require(lines_count >= 1, "rasterize_radial_lines: need at least one line");
  const Index lo = -(n / 2);            // centered grid: n consecutive integers
  const Index hi = lo + n - 1;
  std::set<std::array<Index, 2>> uniq;
  for (Index k = 0; k < lines_count; ++k) {
    const double theta = M_PI * static_cast<double>(k) / static_cast<double>(lines_count);
    const double ct = std::cos(theta), st = std::sin(theta);
    for (Index a = lo; a <= hi; ++a) {
      Index kx, ky;
      if (std::abs(ct) >= std::abs(st)) {
        kx = a;
        ky = static_cast<Index>(std::lround(static_cast<double>(a) * st / ct));
      } else {
        ky = a;
        kx = static_cast<Index>(std::lround(static_cast<double>(a) * ct / st));
      }
      const Index u = ((kx % n) + n) % n;
      const Index v = ((ky % n) + n) % n;
      uniq.insert({u, v});
    }
  }
  return {uniq.begin(), uniq.end()};
}

MeasurementSystem radial_fourier_from_frequencies(Index n, Index lines,
                                                  std::vector<std::array<Index, 2>> freqs) {
  std::sort(freqs.begin(), freqs.end());
  freqs.erase(std::unique(freqs.begin(), freqs.end()), freqs.end());
  for (const auto& f : freqs)
    require(f[0] >= 0 && f[0] < n && f[1] >= 0 && f[1] < n,
            "radial_fourier_from_frequencies: frequency index out of range");

  MeasurementSystem sys;
  sys.kind_ = MeasurementSystem::Kind::RadialFourier;
  sys.n_ = n;
  sys.lines_ = lines;
  sys.d_ = n * n;
  sys.freqs_ = std::move(freqs);

  std::set<std::array<Index, 2>> seen;
  for (const auto& f : sys.freqs_) {
    const std::array<Index, 2> conj = {(n - f[0]) % n, (n - f[1]) % n};
    const std::array<Index, 2> canon = std::min(f, conj);
    if (seen.insert(canon).second) {
      sys.reps_.push_back(canon);
      sys.self_conj_.push_back(conj == f);
    }
  }
  // rows: Re for every representative, Im for the non-self-conjugate ones
  Index imag_rows = 0;
  for (bool s : sys.self_conj_)
    if (!s) ++imag_rows;
  sys.m_ = static_cast<Index>(sys.reps_.size()) + imag_rows;
  return sys;
}

MeasurementSystem radial_fourier_system(Index n, Index lines_count) {
  return radial_fourier_from_frequencies(n, lines_count,
                                         rasterize_radial_lines(n, lines_count));
}

Index MeasurementSystem::lattice_side() const {
  require(kind_ == Kind::RadialFourier, "MeasurementSystem: not a Fourier sampler");
  return n_;
}

Index MeasurementSystem::lines() const {
  require(kind_ == Kind::RadialFourier, "MeasurementSystem: not a Fourier sampler");
  return lines_;
}

const std::vector<std::array<Index, 2>>& MeasurementSystem::frequencies() const {
  require(kind_ == Kind::RadialFourier, "MeasurementSystem: not a Fourier sampler");
  return freqs_;
}

const std::vector<std::array<Index, 2>>& MeasurementSystem::representatives() const {
  require(kind_ == Kind::RadialFourier, "MeasurementSystem: not a Fourier sampler");
  return reps_;
}

const std::vector<bool>& MeasurementSystem::self_conjugate() const {
  require(kind_ == Kind::RadialFourier, "MeasurementSystem: not a Fourier sampler");
  return self_conj_;
}

Vector MeasurementSystem::apply(const Vector& x) const {
  require(x.size() == d_, "MeasurementSystem::apply: dimension mismatch");
  if (kind_ == Kind::DenseGaussian) return dense_ * x;

  CMatrix img(n_, n_);
  for (Index i = 0; i < n_; ++i)
    for (Index j = 0; j < n_; ++j) img(i, j) = Complex(x[i * n_ + j], 0.0);
  const CMatrix spec = dft2(img, /*positive_exponent=*/false);

  const Index nr = static_cast<Index>(reps_.size());
  Vector out(m_);
  Index imag_at = nr;
  for (Index k = 0; k < nr; ++k) {
    const Complex c = spec(reps_[static_cast<size_t>(k)][0], reps_[static_cast<size_t>(k)][1]);
    out[k] = c.real();
    if (!self_conj_[static_cast<size_t>(k)]) out[imag_at++] = c.imag();
  }
  return out;
}

Vector MeasurementSystem::apply_adjoint(const Vector& y) const {
  require(y.size() == m_, "MeasurementSystem::apply_adjoint: dimension mismatch");
  if (kind_ == Kind::DenseGaussian) return dense_.transpose() * y;

  const Index nr = static_cast<Index>(reps_.size());
  CMatrix spec = CMatrix::Zero(n_, n_);
  Index imag_at = nr;
  for (Index k = 0; k < nr; ++k) {
    const double re = y[k];
    const double im = self_conj_[static_cast<size_t>(k)] ? 0.0 : y[imag_at++];
    spec(reps_[static_cast<size_t>(k)][0], reps_[static_cast<size_t>(k)][1]) += Complex(re, im);
  }
  const CMatrix back = dft2(spec, /*positive_exponent=*/true);
  Vector out(d_);
  for (Index i = 0; i < n_; ++i)
    for (Index j = 0; j < n_; ++j) out[i * n_ + j] = back(i, j).real();
  return out;
}

Matrix MeasurementSystem::dense(Index max_entries) const {
  if (kind_ == Kind::DenseGaussian) return dense_;
  if (m_ * d_ > max_entries)
    throw std::invalid_argument(
        "MeasurementSystem::dense: materialization over the entry budget; use "
        "to_linear_map()");
  Matrix out(m_, d_);
  Vector e = Vector::Zero(d_);
  for (Index j = 0; j < d_; ++j) {
    e[j] = 1.0;
    out.col(j) = apply(e);
    e[j] = 0.0;
  }
  return out;
}

LinearMap MeasurementSystem::to_linear_map() const {
  MeasurementSystem self = *this;
  return LinearMap(
      m_, d_, [self](const Vector& x) { return self.apply(x); },
      [self](const Vector& y) { return self.apply_adjoint(y); });
}

}  // namespace cosparse
