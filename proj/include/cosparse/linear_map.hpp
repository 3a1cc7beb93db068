#pragma once

#include <functional>
#include <utility>

#include "cosparse/rng.hpp"
#include "cosparse/types.hpp"

namespace cosparse {

// Matrix-free linear operator: a forward apply, an adjoint apply, and the two
// dimensions. Everything that can run at scale (partial Fourier, lattice
// differences, stacked systems) is expressed through this interface.
class LinearMap {
public:
  using Apply = std::function<Vector(const Vector&)>;

  LinearMap() = default;
  LinearMap(Index rows, Index cols, Apply forward, Apply adjoint)
      : rows_(rows), cols_(cols), fwd_(std::move(forward)), adj_(std::move(adjoint)) {}

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }

  Vector apply(const Vector& x) const {
    require(x.size() == cols_, "LinearMap::apply: dimension mismatch");
    return fwd_(x);
  }

  Vector apply_adjoint(const Vector& y) const {
    require(y.size() == rows_, "LinearMap::apply_adjoint: dimension mismatch");
    return adj_(y);
  }

  // Largest relative defect of <Ax, y> == <x, A'y> over random probes.
  double adjoint_defect(Index probes = 3, uint64_t seed = 0x5eedull) const {
    Rng rng(derive_seed(seed, 0xadull));
    double worst = 0.0;
    for (Index t = 0; t < probes; ++t) {
      const Vector x = rng.normal_vector(cols_);
      const Vector y = rng.normal_vector(rows_);
      const Vector ax = fwd_(x);
      const Vector aty = adj_(y);
      const double lhs = ax.dot(y);
      const double rhs = x.dot(aty);
      const double scale = ax.norm() * y.norm() + x.norm() * aty.norm() + 1e-300;
      worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
    return worst;
  }

  bool adjoint_consistent(double tol = 1e-10, Index probes = 3,
                          uint64_t seed = 0x5eedull) const {
    return adjoint_defect(probes, seed) <= tol;
  }

  static LinearMap from_dense(const Matrix& a) {
    return LinearMap(
        a.rows(), a.cols(), [a](const Vector& x) { return Vector(a * x); },
        [a](const Vector& y) { return Vector(a.transpose() * y); });
  }

  // [top; weight * bottom] acting on a shared input
  static LinearMap stacked(const LinearMap& top, const LinearMap& bottom,
                           double weight = 1.0) {
    require(top.cols() == bottom.cols(), "LinearMap::stacked: column mismatch");
    const Index r1 = top.rows(), r2 = bottom.rows(), c = top.cols();
    return LinearMap(
        r1 + r2, c,
        [top, bottom, weight, r1, r2](const Vector& x) {
          Vector out(r1 + r2);
          out.head(r1) = top.apply(x);
          out.tail(r2) = weight * bottom.apply(x);
          return out;
        },
        [top, bottom, weight, r1, r2](const Vector& y) {
          Vector out = top.apply_adjoint(y.head(r1));
          out += weight * bottom.apply_adjoint(y.tail(r2));
          return out;
        });
  }

private:
  Index rows_ = 0;
  Index cols_ = 0;
  Apply fwd_;
  Apply adj_;
};

}  // namespace cosparse
