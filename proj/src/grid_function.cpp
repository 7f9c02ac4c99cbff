#include "heatsrc/grid_function.hpp"

#include <cmath>
#include <stdexcept>

#include "heatsrc/quadrature.hpp"

namespace heatsrc {

void GridFunction2D::validate() const {
  if (nx < 3 || nx % 2 == 0 || ny < 3 || ny % 2 == 0)
    throw std::invalid_argument(
        "GridFunction2D: nx and ny must be odd and >= 3");
  if (values.size() != static_cast<size_t>(nx) * ny)
    throw std::invalid_argument("GridFunction2D: values size mismatch");
  for (double v : values)
    if (!std::isfinite(v))
      throw std::invalid_argument("GridFunction2D: non-finite sample");
}

GridFunction2D GridFunction2D::zeros(int nx, int ny) {
  GridFunction2D g;
  g.nx = nx;
  g.ny = ny;
  g.values.assign(static_cast<size_t>(nx) * ny, 0.0);
  g.validate();
  return g;
}

GridFunction2D GridFunction2D::from_function(
    int nx, int ny, const std::function<double(double, double)>& f) {
  GridFunction2D g = zeros(nx, ny);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) g.at(i, j) = f(g.x(i), g.y(j));
  g.validate();
  return g;
}

namespace {

double simpson_weight(int i, int n) {
  if (i == 0 || i == n - 1) return 1.0;
  return i % 2 == 1 ? 4.0 : 2.0;
}

// 2-D composite Simpson of diff^2 over the unit square, fixed row-major
// order with compensated summation.
double l2_sq(const GridFunction2D& a, const GridFunction2D* b) {
  a.validate();
  if (b) {
    b->validate();
    if (a.nx != b->nx || a.ny != b->ny)
      throw std::invalid_argument("l2_error: grid dimensions differ");
  }
  KahanSum acc;
  for (int i = 0; i < a.nx; ++i) {
    const double wx = simpson_weight(i, a.nx);
    for (int j = 0; j < a.ny; ++j) {
      const double wy = simpson_weight(j, a.ny);
      const double d = b ? a.at(i, j) - b->at(i, j) : a.at(i, j);
      acc.add(wx * wy * d * d);
    }
  }
  const double hx = 1.0 / (a.nx - 1);
  const double hy = 1.0 / (a.ny - 1);
  return acc.value() * (hx / 3.0) * (hy / 3.0);
}

}  // namespace

double l2_norm(const GridFunction2D& g) { return std::sqrt(l2_sq(g, nullptr)); }

double l2_error(const GridFunction2D& a, const GridFunction2D& b) {
  return std::sqrt(l2_sq(a, &b));
}

}  // namespace heatsrc
