#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace heatsrc {

enum class QuadratureRule { CompositeSimpson, GaussLegendre };

// A 1-D quadrature recipe: `panels` equal subintervals, each carrying either
// a closed Newton–Cotes Simpson rule with `points_per_panel` nodes (odd,
// >= 3; adjacent panels share endpoints) or a `points_per_panel`-point
// Gauss–Legendre rule. For oscillatory integrands the caller keeps at least
// 8 nodes per 2*pi period.
struct QuadratureSpec {
  int panels = 1;
  int points_per_panel = 3;
  QuadratureRule rule = QuadratureRule::CompositeSimpson;

  // Single-panel composite Simpson with `total_points` nodes (odd, >= 3).
  static QuadratureSpec simpson(int total_points);
  static QuadratureSpec gauss(int panels, int points_per_panel = 32);

  int total_points() const;
  // Throws std::invalid_argument on malformed parameters.
  void validate() const;
};

// Default rule for the smooth time integrals: 8 panels x 32-point
// Gauss–Legendre.
QuadratureSpec default_time_rule();

// Design rule for the oscillatory alpha-integrals on [0, R]: composite
// Simpson with max(2001, ceil(16 R)) nodes, forced odd — at least 16 nodes
// per unit alpha, comfortably above 8 per period of cos(alpha x) sin(alpha)
// on |x| <= 1.
QuadratureSpec alpha_rule_for_radius(double R);

// Composite Simpson rule with node spacing at most 1/density on [a, b]
// (node count forced odd, >= 3). Used by diagnostics whose reference values
// are pinned at a documented density.
QuadratureSpec simpson_for_range(double a, double b, double density);

// Compensated (Kahan) accumulator; additions follow call order.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

// Nodes/weights of the n-point Gauss–Legendre rule on [-1, 1], ascending,
// computed once by Newton iteration on the Legendre recurrence and cached.
const std::vector<std::pair<double, double>>& gauss_legendre_table(int n);

// The (node, weight) expansion of `spec` on [a, b]; weights sum to b - a.
std::vector<std::pair<double, double>> quadrature_nodes(
    double a, double b, const QuadratureSpec& spec);

// Integrates f over [a, b] with the given rule, accumulating in fixed
// left-to-right node order with compensated summation. Throws NumericalError
// naming the node when the integrand returns a non-finite value.
double quad_1d(const std::function<double(double)>& f, double a, double b,
               const QuadratureSpec& spec);

}  // namespace heatsrc
