#include "heatsrc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "heatsrc/spectral.hpp"

namespace heatsrc {

namespace {
constexpr double kPi = std::numbers::pi;
}

DiagnosticsReport parseval_defect(const CosineSeries2D& w, int N, double A,
                                  const QuadratureSpec& spec,
                                  std::optional<double> bound) {
  w.validate();
  if (N < 0 || !(A > 0.0))
    throw std::invalid_argument("parseval_defect: need N >= 0 and A > 0");
  KahanSum total;
  for (double n : w.y_modes()) {
    if (n > static_cast<double>(N)) continue;
    const double mult = n == 0.0 ? 1.0 : 2.0;  // fold the +-n lines
    const double line = 2.0 * quad_1d(
                                  [&](double a) {
                                    const double g = cosine_transform_G(w, a, n);
                                    return g * g;
                                  },
                                  0.0, A, spec);
    total.add(mult * line);
  }
  DiagnosticsReport rep;
  rep.name = "parseval_defect";
  rep.value = std::abs(total.value() - kPi * w.l2_norm_sq());
  rep.bound = bound;
  if (bound) rep.passed = rep.value <= *bound;
  rep.metadata["N"] = static_cast<double>(N);
  rep.metadata["A"] = A;
  return rep;
}

double tail_energy(const CosineSeries2D& w, double r, double A_inf,
                   const QuadratureSpec& spec) {
  w.validate();
  if (!(r > 0.0) || !(A_inf > r))
    throw std::invalid_argument("tail_energy: need 0 < r < A_inf");
  KahanSum total;
  for (double n : w.y_modes()) {
    const double mult = n == 0.0 ? 1.0 : 2.0;
    auto g_sq = [&](double a) {
      const double g = cosine_transform_G(w, a, n);
      return g * g;
    };
    // Lines outside the y-window contribute over the whole alpha-range
    // (proxied by A_inf)...
    if (n >= r) total.add(mult * 2.0 * quad_1d(g_sq, 0.0, A_inf, spec));
    // ...and every line contributes its alpha-tail beyond r.
    total.add(mult * 2.0 * quad_1d(g_sq, r, A_inf, spec));
  }
  return total.value();
}

DiagnosticsReport h1_tail_bound_check(const CosineSeries2D& w, double r,
                                      const QuadratureSpec& spec) {
  const double A_inf = std::max(10.0 * r, 500.0);
  DiagnosticsReport rep;
  rep.name = "h1_tail_bound";
  rep.value = tail_energy(w, r, A_inf, spec);
  rep.bound = (8.0 / r + 2.0 * kPi / (r * r)) * w.h1_norm_sq();
  rep.passed = rep.value <= *rep.bound;
  rep.metadata["r"] = r;
  rep.metadata["A_inf"] = A_inf;
  return rep;
}

double small_divisor_measure(const TimeProfile& phi, double r, double sigma,
                             long long alpha_samples,
                             const QuadratureSpec& spec) {
  phi.validate();
  if (!(r > 0.0) || !(sigma >= 0.0))
    throw std::invalid_argument(
        "small_divisor_measure: need r > 0 and sigma >= 0");
  if (alpha_samples < 1000)
    throw std::invalid_argument(
        "small_divisor_measure: need at least 1000 samples");
  const SpectralEvaluator D = make_kernel_D(phi, spec);
  const double n_count = std::ceil(r);  // integer |n| < r means n in [0, ceil(r))
  long long inside = 0;
  for (long long i = 0; i < alpha_samples; ++i) {
    const double a = -r + (static_cast<double>(i) + 0.5) * (2.0 * r / alpha_samples);
    double dmin = std::numeric_limits<double>::infinity();
    for (double n = 0.0; n < n_count; n += 1.0)
      dmin = std::min(dmin, std::abs(D(std::abs(a), n)));
    if (dmin <= sigma) ++inside;
  }
  return 2.0 * r * static_cast<double>(inside) /
         static_cast<double>(alpha_samples);
}

}  // namespace heatsrc
