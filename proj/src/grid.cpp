#include "gpelab/grid.hpp"

#include <numbers>
#include <stdexcept>

namespace gpelab {

SpatialGrid::SpatialGrid(int n, double length) : n_(n), length_(length) {
  if (n < 256 || (n & (n - 1)) != 0)
    throw std::invalid_argument(
        "SpatialGrid: point count must be a power of two >= 256");
  if (!(length > 0.0))
    throw std::invalid_argument("SpatialGrid: length must be > 0");
}

SpatialGrid SpatialGrid::from_spec(const GridSpec& spec) {
  return {spec.n, spec.length};
}

std::vector<double> SpatialGrid::points() const {
  std::vector<double> xs(n_);
  for (int j = 0; j < n_; ++j) xs[j] = x(j);
  return xs;
}

std::vector<double> wavenumbers(const SpatialGrid& grid) {
  const int n = grid.n();
  const double dk = 2.0 * std::numbers::pi / grid.length();
  std::vector<double> ks(n);
  for (int m = 0; m < n; ++m) ks[m] = (m < n / 2 ? m : m - n) * dk;
  return ks;
}

}  // namespace gpelab
