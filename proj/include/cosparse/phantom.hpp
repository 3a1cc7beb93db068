#pragma once

#include "cosparse/types.hpp"

namespace cosparse {

// Canonical Shepp-Logan head phantom on an n x n grid, n >= 16. Pixel value
// is the sum of intensities of the ellipses whose interior (inclusive
// boundary) contains the pixel center; coordinates run over [-1, 1] in both
// axes. The default intensity column is the original low-contrast table;
// modified_contrast switches to the high-contrast variant common in imaging
// toolboxes. Geometry is identical in both.
Matrix shepp_logan_phantom(Index n, bool modified_contrast = false);

// Connected components of the equal-value pixel graph (4-neighborhood,
// exact float equality), i.e. the number of constant regions of the image.
Index count_constant_regions(const Matrix& image);

// Row-major flattening shared by the lattice operators: x[i*n + j] = img(i, j).
Vector image_to_vector(const Matrix& image);
Matrix vector_to_image(const Vector& x, Index n);

}  // namespace cosparse
