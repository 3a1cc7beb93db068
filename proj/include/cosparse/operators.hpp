#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "cosparse/cosupport.hpp"
#include "cosparse/linear_map.hpp"
#include "cosparse/types.hpp"

namespace cosparse {

// n x n pixel lattice with first-difference edges. Edges are numbered with
// all horizontal differences first, row by row, then all vertical ones:
//   e in [0, n(n-1)):          pixels (i, j)-(i, j+1), e = i(n-1) + j
//   e in [n(n-1), 2n(n-1)):    pixels (i, j)-(i+1, j), e - n(n-1) = i*n + j
// Pixels are flattened row-major: pixel (i, j) -> i*n + j.
struct PixelGraph {
  Index n = 0;

  explicit PixelGraph(Index side) : n(side) { require(n >= 2, "PixelGraph: need n >= 2"); }

  Index vertices() const { return n * n; }
  Index edges() const { return 2 * n * (n - 1); }

  std::pair<Index, Index> edge_endpoints(Index e) const {
    const Index h = n * (n - 1);
    require(e >= 0 && e < 2 * h, "PixelGraph: edge index out of range");
    if (e < h) {
      const Index i = e / (n - 1), j = e % (n - 1);
      return {i * n + j, i * n + j + 1};
    }
    const Index i = (e - h) / n, j = (e - h) % n;
    return {i * n + j, (i + 1) * n + j};
  }
};

// Analysis operator Omega: p rows acting on R^d. Two representations are
// supported, a dense matrix and the structured 2-d finite-difference operator
// on an n x n lattice (row value +1 at the first endpoint, -1 at the second).
// A restriction keeps a subset of rows without copying the structure.
class AnalysisOperator {
public:
  enum class Kind { Dense, Dif2d };

  static AnalysisOperator from_dense(Matrix rows);
  static AnalysisOperator dif2d(Index n);

  Kind kind() const { return kind_; }
  Index p() const;          // active row count
  Index d() const { return d_; }
  Index parent_p() const;   // row count before restriction
  bool restricted() const { return rows_.has_value(); }
  Index lattice_side() const;

  // active row index -> row index of the unrestricted operator
  Index parent_row(Index i) const;
  const std::optional<std::vector<Index>>& active_rows() const { return rows_; }

  Vector apply(const Vector& x) const;
  Vector apply_adjoint(const Vector& v) const;
  Matrix apply_columns(const Matrix& x) const;  // Omega * X, column by column

  Matrix dense(Index max_entries = 50'000'000) const;
  LinearMap to_linear_map() const;

  AnalysisOperator restrict_to(const Cosupport& rows) const;

private:
  AnalysisOperator() = default;

  Kind kind_ = Kind::Dense;
  Index d_ = 0;
  Matrix dense_;                            // Kind::Dense
  Index n_ = 0;                             // Kind::Dif2d
  std::optional<std::vector<Index>> rows_;  // active subset, absent = all
};

// Keep the rows of Omega named by Lambda (indices relative to the current
// active rows of the operand).
AnalysisOperator restrict_rows(const AnalysisOperator& omega, const Cosupport& lambda);

// Unit-row operator with Omega' Omega = (p/d) I, built from a Gaussian seed
// matrix by alternating the polar projection onto scaled co-isometries with
// row renormalization. Deterministic for a fixed seed.
AnalysisOperator random_tight_frame_operator(Index p, Index d, uint64_t seed,
                                             Index max_iterations = 200,
                                             double tol = 1e-9);

AnalysisOperator finite_difference_2d(Index n);

// Measurement system y = M x. Dense Gaussian, or a partial 2-d Fourier
// sampler over radial frequency lines, stored in real-stacked form: one row
// Re(F_k x) per retained frequency, followed by one row Im(F_k x) for every
// frequency that is not its own conjugate. Frequencies appearing on several
// lines are measured once, and of a conjugate pair only the canonical
// representative is kept, so the row count equals the number of distinct
// frequency samples.
class MeasurementSystem {
public:
  enum class Kind { DenseGaussian, RadialFourier };

  static MeasurementSystem from_dense(Matrix m);

  Kind kind() const { return kind_; }
  Index m() const { return m_; }
  Index d() const { return d_; }
  bool matrix_free() const { return kind_ == Kind::RadialFourier; }

  Vector apply(const Vector& x) const;
  Vector apply_adjoint(const Vector& y) const;
  Matrix dense(Index max_entries = 50'000'000) const;
  LinearMap to_linear_map() const;

  // radial-Fourier specifics
  Index lattice_side() const;
  Index lines() const;
  // all distinct sampled frequencies (u, v), sorted
  const std::vector<std::array<Index, 2>>& frequencies() const;
  // canonical conjugate-orbit representatives, in row order of the Re block
  const std::vector<std::array<Index, 2>>& representatives() const;
  const std::vector<bool>& self_conjugate() const;

private:
  friend MeasurementSystem radial_fourier_from_frequencies(
      Index n, Index lines, std::vector<std::array<Index, 2>> freqs);

  MeasurementSystem() = default;

  Kind kind_ = Kind::DenseGaussian;
  Index m_ = 0, d_ = 0;
  Matrix dense_;

  Index n_ = 0, lines_ = 0;
  std::vector<std::array<Index, 2>> freqs_;  // distinct samples
  std::vector<std::array<Index, 2>> reps_;   // one per conjugate orbit
  std::vector<bool> self_conj_;
};

// iid N(0,1) entries; throws NumericalError if the draw is row-rank deficient
MeasurementSystem gaussian_measurement(Index m, Index d, uint64_t seed);

// lines_count radial lines at angles k*pi/lines_count, each rasterized to n
// nearest-grid points through the centered frequency grid
MeasurementSystem radial_fourier_system(Index n, Index lines_count);

// rebuild a radial system from an explicit frequency list (descriptor load)
MeasurementSystem radial_fourier_from_frequencies(Index n, Index lines,
                                                  std::vector<std::array<Index, 2>> freqs);

// the raw rasterization: distinct (u, v) indices, sorted
std::vector<std::array<Index, 2>> rasterize_radial_lines(Index n, Index lines_count);

}  // namespace cosparse
