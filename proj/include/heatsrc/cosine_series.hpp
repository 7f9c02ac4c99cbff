#pragma once

#include <vector>

#include "heatsrc/grid_function.hpp"

namespace heatsrc {

// One term c * cos(k*pi*x) * cos(n*pi*y). Mode numbers are kept as doubles so
// that very large indices (e.g. bump frequencies near 1e15) are representable;
// they must hold non-negative integral values.
struct CosineMode {
  double k = 0;
  double n = 0;
  double c = 0;
};

// A finite cosine expansion on the unit square. Terms are kept sorted by
// (k, n) and unique, so equality of coefficient maps is well defined and all
// reductions traverse in a fixed order.
struct CosineSeries2D {
  std::vector<CosineMode> terms;

  // Adds c to the (k, n) coefficient, keeping the term list sorted/unique.
  void add_term(double k, double n, double c);
  // Drops terms with |c| == 0.
  void normalize();
  double coefficient(double k, double n) const;
  double evaluate(double x, double y) const;

  // Termwise norms: ||cos(k pi x) cos(n pi y)||^2 = w(k) w(n) with w(0) = 1
  // and w(j>=1) = 1/2.
  double l2_norm_sq() const;
  // Adds the squared-gradient part: c^2 [ (k pi)^2 sx(k) w(n)
  //   + (n pi)^2 w(k) sx(n) ] with sx(0)=0, sx(j>=1)=1/2.
  double h1_norm_sq() const;

  // Distinct n values present (sorted ascending).
  std::vector<double> y_modes() const;
  CosineSeries2D scaled(double factor) const;
  GridFunction2D rasterize(int nx, int ny) const;

  // Throws std::invalid_argument on negative/non-integral mode numbers or
  // non-finite coefficients.
  void validate() const;
};

}  // namespace heatsrc
