#include "cosparse/phantom.hpp"

#include <cmath>
#include <numeric>
#include <vector>

namespace cosparse {

namespace {

struct Ellipse {
  double intensity_original;
  double intensity_modified;
  double a, b;      // semi-axes
  double x0, y0;    // center
  double phi_deg;   // rotation, counterclockwise
};

// the standard published ten-ellipse table; only the intensity column
// differs between the two variants
constexpr Ellipse kTable[] = {
    {2.00, 1.00, 0.6900, 0.9200, 0.00, 0.0000, 0.0},
    {-0.98, -0.80, 0.6624, 0.8740, 0.00, -0.0184, 0.0},
    {-0.02, -0.20, 0.1100, 0.3100, 0.22, 0.0000, -18.0},
    {-0.02, -0.20, 0.1600, 0.4100, -0.22, 0.0000, 18.0},
    {0.01, 0.10, 0.2100, 0.2500, 0.00, 0.3500, 0.0},
    {0.01, 0.10, 0.0460, 0.0460, 0.00, 0.1000, 0.0},
    {0.01, 0.10, 0.0460, 0.0460, 0.00, -0.1000, 0.0},
    {0.01, 0.10, 0.0460, 0.0230, -0.08, -0.6050, 0.0},
    {0.01, 0.10, 0.0230, 0.0230, 0.00, -0.6060, 0.0},
    {0.01, 0.10, 0.0230, 0.0460, 0.06, -0.6050, 0.0},
};

}  // namespace

Matrix shepp_logan_phantom(Index n, bool modified_contrast) {
  require(n >= 16, "shepp_logan_phantom: need n >= 16");
  Matrix img = Matrix::Zero(n, n);
  const double half = (static_cast<double>(n) - 1.0) / 2.0;
  for (const Ellipse& e : kTable) {
    const double phi = e.phi_deg * M_PI / 180.0;
    const double c = std::cos(phi), s = std::sin(phi);
    const double val = modified_contrast ? e.intensity_modified : e.intensity_original;
    for (Index i = 0; i < n; ++i) {
      const double y = (half - static_cast<double>(i)) / half;  // row 0 on top
      for (Index j = 0; j < n; ++j) {
        const double x = (static_cast<double>(j) - half) / half;
        const double u = (x - e.x0) * c + (y - e.y0) * s;
        const double v = -(x - e.x0) * s + (y - e.y0) * c;
        if (u * u / (e.a * e.a) + v * v / (e.b * e.b) <= 1.0) img(i, j) += val;
      }
    }
  }
  return img;
}

Index count_constant_regions(const Matrix& image) {
  const Index rows = image.rows(), cols = image.cols();
  require(rows > 0 && cols > 0, "count_constant_regions: empty image");
  std::vector<Index> parent(static_cast<size_t>(rows * cols));
  std::iota(parent.begin(), parent.end(), Index{0});
  std::vector<Index> find_stack;
  auto find = [&](Index v) {
    while (parent[static_cast<size_t>(v)] != v) {
      parent[static_cast<size_t>(v)] = parent[static_cast<size_t>(parent[static_cast<size_t>(v)])];
      v = parent[static_cast<size_t>(v)];
    }
    return v;
  };
  auto join = [&](Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<size_t>(a)] = b;
  };
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) {
      const Index v = i * cols + j;
      if (j + 1 < cols && image(i, j) == image(i, j + 1)) join(v, v + 1);
      if (i + 1 < rows && image(i, j) == image(i + 1, j)) join(v, v + cols);
    }
  Index count = 0;
  for (Index v = 0; v < rows * cols; ++v)
    if (find(v) == v) ++count;
  return count;
}

Vector image_to_vector(const Matrix& image) {
  const Index rows = image.rows(), cols = image.cols();
  Vector x(rows * cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) x[i * cols + j] = image(i, j);
  return x;
}

Matrix vector_to_image(const Vector& x, Index n) {
  require(x.size() == n * n, "vector_to_image: size mismatch");
  Matrix img(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) img(i, j) = x[i * n + j];
  return img;
}

}  // namespace cosparse
