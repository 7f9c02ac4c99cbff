#pragma once

#include <optional>
#include <string>

#include "heatsrc/cosine_series.hpp"
#include "heatsrc/quadrature.hpp"
#include "heatsrc/spectral.hpp"
#include "heatsrc/time_profile.hpp"

namespace heatsrc {

// One inverse-problem instance: initial data g0 = u(.,.,0), final data
// g1 = u(.,.,1), temporal intensity phi, and (for benchmarks) the true
// spatial source f the reconstruction is measured against.
struct Experiment {
  CosineSeries2D g0;
  CosineSeries2D g1;
  TimeProfile phi;
  CosineSeries2D f_true;
  std::optional<double> m;  // bump frequency of the perturbed family
  double eps = 0.0;         // noise level (1/m when m is present)
  std::string labels;
};

// Propagates cosine data through the heat evolution, mode by mode:
//   g1_hat(k, n) = exp(-lambda) g0_hat(k, n) + D(phi)(k pi, n) f_hat(k, n),
// lambda = (k^2 + n^2) pi^2. Exact for cosine-series data.
CosineSeries2D forward_final(const CosineSeries2D& g0, const CosineSeries2D& f,
                             const TimeProfile& phi,
                             const QuadratureSpec& time_spec);

// State at intermediate time t in [0, 1]:
//   u_hat(t) = exp(-lambda t) g0_hat
//            + [integral_0^t exp(lambda (s-t)) phi(s) ds] * f_hat.
// Uses the profile's closed-form partial kernel when available, quadrature
// otherwise.
CosineSeries2D evolve(const CosineSeries2D& g0, const CosineSeries2D& f,
                      const TimeProfile& phi, double t,
                      const QuadratureSpec& time_spec);

// The benchmark family.
//
// Exact instance: phi(t) = pi^2 exp(-pi^2 t),
// g0 = (cos(pi x) + 1) cos(pi y), g1 = exp(-pi^2) g0,
// f_true = cos(pi x) cos(pi y); (g0, g1) is exactly the heat evolution of
// (g0, f_true) under phi.
Experiment fixture_exact();

// Perturbed instance: the exact data plus a frequency-m bump,
//   g0_m = g0 + m^{-1} (cos(m pi x) - 1) cos(pi y),
//   g1_m = g1 + exp(-pi^2) m^{-1} (cos(m pi x) - 1) cos(pi y),
// which keeps g1_m = exp(-pi^2) g0_m AND keeps the pair an exact heat
// evolution — of g0_m under the disturbed source
// f_m = f_true + m cos(m pi x) cos(pi y). Data error is O(1/m) while
// ||f_m - f_true|| = m/2 blows up: the ill-posedness demonstration.
// f_true stays the unperturbed source; the disturbed source is available via
// disturbed_source_series. m must be an even integer >= 2 (throws
// std::invalid_argument otherwise; values at or above 2^53 are accepted as
// automatically even).
Experiment fixture_perturbed(double m);

// Non-uniqueness instance: phi = pi cos(pi t) + 2 pi^2 sin(pi t) has a
// vanishing time kernel at mode (1,1), so f_true = cos(pi x) cos(pi y)
// produces exactly zero data: g0 = g1 = 0 cannot distinguish f_true from 0.
Experiment fixture_counterexample();

// The disturbed source f_m = cos(pi x) cos(pi y) + m cos(m pi x) cos(pi y)
// whose exact evolution fixture_perturbed's data is.
CosineSeries2D disturbed_source_series(double m);

}  // namespace heatsrc
