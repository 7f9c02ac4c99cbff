#pragma once

#include <map>
#include <optional>
#include <string>

#include "heatsrc/cosine_series.hpp"
#include "heatsrc/quadrature.hpp"
#include "heatsrc/time_profile.hpp"

namespace heatsrc {

// One quantitative check: a measured value, an optional bound it is compared
// against, and the comparison outcome (value <= bound).
struct DiagnosticsReport {
  std::string name;
  double value = 0.0;
  std::optional<double> bound;
  std::optional<bool> passed;
  std::map<std::string, double> metadata;
};

// Truncated-Parseval defect:
//   value = | sum_{|n| <= N} integral_{-A}^{A} |G(w)|^2 d alpha
//            - pi ||w||^2_{L2} |.
// The truncated sum approaches pi ||w||^2 from below as N, A grow. When a
// bound is supplied the report compares against it.
DiagnosticsReport parseval_defect(const CosineSeries2D& w, int N, double A,
                                  const QuadratureSpec& spec,
                                  std::optional<double> bound = {});

// Spectral mass outside the window |alpha| < r, |n| < r, with A_inf standing
// in for the infinite alpha-range:
//   sum_{|n| >= r} integral_{-A_inf}^{A_inf} |G(w)|^2
//   + sum_{|n| < r} integral_{r <= |alpha| <= A_inf} |G(w)|^2.
double tail_energy(const CosineSeries2D& w, double r, double A_inf,
                   const QuadratureSpec& spec);

// Checks the tail-energy bound
//   tail_energy(w, r) <= (8/r + 2 pi/r^2) ||w||^2_{H1}
// with the H1 norm computed termwise from the series and
// A_inf = max(10 r, 500).
DiagnosticsReport h1_tail_bound_check(const CosineSeries2D& w, double r,
                                      const QuadratureSpec& spec);

// Estimated Lebesgue measure of the small-divisor set
//   B(phi, r, sigma) = { alpha in (-r, r) : min over integer |n| < r of
//                        |D(phi)(alpha, n)| <= sigma }
// by deterministic uniform sampling: the sample fraction inside B times 2r.
double small_divisor_measure(const TimeProfile& phi, double r, double sigma,
                             long long alpha_samples,
                             const QuadratureSpec& spec);

}  // namespace heatsrc
