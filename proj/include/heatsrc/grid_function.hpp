#pragma once

#include <functional>
#include <vector>

namespace heatsrc {

// Samples of a function on the uniform tensor grid of the unit square:
// x_i = i/(nx-1), y_j = j/(ny-1). Values are row-major: values[i*ny + j].
// Both point counts must be odd and >= 3 so that composite Simpson weights
// apply directly to the sample set.
struct GridFunction2D {
  int nx = 0;
  int ny = 0;
  std::vector<double> values;

  double x(int i) const { return static_cast<double>(i) / (nx - 1); }
  double y(int j) const { return static_cast<double>(j) / (ny - 1); }
  double& at(int i, int j) { return values[static_cast<size_t>(i) * ny + j]; }
  double at(int i, int j) const {
    return values[static_cast<size_t>(i) * ny + j];
  }

  // Throws std::invalid_argument on non-odd/too-small dimensions, a size
  // mismatch, or any non-finite sample.
  void validate() const;

  static GridFunction2D zeros(int nx, int ny);
  static GridFunction2D from_function(
      int nx, int ny, const std::function<double(double, double)>& f);
};

// L2(unit square) norm / error via tensor-product composite Simpson over the
// grid samples, accumulated in fixed order with compensated summation.
double l2_norm(const GridFunction2D& g);
double l2_error(const GridFunction2D& a, const GridFunction2D& b);

}  // namespace heatsrc
