#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "heatsrc/cosine_series.hpp"
#include "heatsrc/grid_function.hpp"
#include "heatsrc/quadrature.hpp"
#include "heatsrc/time_profile.hpp"

namespace heatsrc {

// A deterministic map (alpha real, n integer) -> real, tagged with how its
// values are produced. Evaluators wrap either numerical quadrature over data
// or an analytically fused closed form.
struct SpectralEvaluator {
  enum class Provenance { Quadrature, ClosedForm };

  std::function<double(double, double)> eval;
  Provenance provenance = Provenance::Quadrature;
  std::string name;
  // When known, the finite set of |n| values outside of which the evaluator
  // vanishes identically. Lets the synthesizer skip empty y-lines.
  std::optional<std::vector<double>> y_support;

  double operator()(double alpha, double n) const { return eval(alpha, n); }
  bool has_y_support(double n) const;
};

// Closed forms of the single-mode transforms
//   mode_transform_x(k, alpha) = integral_0^1 cos(k pi x) cos(alpha x) dx
//     = sin(alpha)/alpha                        for k = 0
//     = (-1)^k alpha sin(alpha)/(alpha^2-k^2pi^2) for k >= 1,
//       with removable value 1/2 at alpha = +-k pi
//   mode_transform_y(m, n) = integral_0^1 cos(m pi y) cos(n pi y) dy
//     = 1 if m = n = 0, 1/2 if |n| = m >= 1, else 0.
// The x-form switches to a sinc expression near alpha = +-k pi, where the
// generic formula loses all precision.
double mode_transform_x(double k, double alpha);
double mode_transform_y(double m, double n);

// G applied to one basis mode cos(k pi x) cos(m pi y):
//   mode_transform_closed(k, m, alpha, n) =
//     mode_transform_x(k, alpha) * mode_transform_y(m, n).
double mode_transform_closed(double k, double m, double alpha, double n);

// The data transform
//   G(w)(alpha, n) =
//     integral_0^1 integral_0^1 w(x,y) cos(alpha x) cos(n pi y) dy dx.
// Grid inputs integrate with composite Simpson over the samples (y-projection
// first, cached per n); series inputs sum exact mode transforms.
double cosine_transform_G(const GridFunction2D& w, double alpha, double n);
double cosine_transform_G(const CosineSeries2D& w, double alpha, double n);
SpectralEvaluator make_grid_G(GridFunction2D w);
SpectralEvaluator make_series_G(CosineSeries2D w);

// Time kernel D(phi)(alpha, n) = integral_0^1 exp(lambda (t-1)) phi(t) dt with
// lambda = alpha^2 + (n pi)^2. kernel_D always integrates numerically (with a
// lambda-adapted panel split so huge lambda stays accurate; the exponent is
// arranged to never exceed 0); make_kernel_D prefers a profile's closed form
// when one exists.
double kernel_D(const TimeProfile& phi, double alpha, double n,
                const QuadratureSpec& spec);
SpectralEvaluator make_kernel_D(const TimeProfile& phi,
                                const QuadratureSpec& spec);

// Right-hand side of the frequency-domain identity:
//   H(alpha, n) = G(g1)(alpha, n) - exp(-lambda) G(g0)(alpha, n).
// For data produced by the forward model, H = D * G(f) pointwise.
double data_functional_H(const SpectralEvaluator& G0,
                         const SpectralEvaluator& G1, double alpha, double n);
SpectralEvaluator make_data_H(SpectralEvaluator G0, SpectralEvaluator G1);

// Inverse synthesis: field(x, y) = (1/pi) * sum over integer n with |n| < R
// of cos(n pi y) * integral_{-R}^{R} s(alpha, n) cos(alpha x) d alpha.
// Exploits evenness in alpha (integral = 2 * integral_0^R) after verifying it
// on sample points, folds the +-n lines together, and skips lines outside the
// evaluator's declared y-support. The strict window excludes |n| = R when R is
// integral.
GridFunction2D synthesize(const SpectralEvaluator& s, double R, int nx, int ny,
                          const QuadratureSpec& alpha_spec);

}  // namespace heatsrc
