#pragma once

#include <vector>

#include "gpelab/core_model.hpp"

namespace gpelab {

/// Uniform periodic grid on [-L/2, L/2) with n points, x_j = -L/2 + j dx.
/// n must be a power of two and at least 256.
class SpatialGrid {
 public:
  SpatialGrid(int n, double length);
  static SpatialGrid from_spec(const GridSpec& spec);

  int n() const { return n_; }
  double length() const { return length_; }
  double dx() const { return length_ / n_; }
  double x(int j) const { return -0.5 * length_ + j * dx(); }
  std::vector<double> points() const;

 private:
  int n_;
  double length_;
};

/// FFT-ordered wavenumbers k in {-n/2, ..., n/2 - 1} * 2 pi / L:
/// index m maps to m * 2pi/L for m < n/2 and (m - n) * 2pi/L otherwise.
std::vector<double> wavenumbers(const SpatialGrid& grid);

}  // namespace gpelab
