#pragma once

#include <optional>
#include <string>
#include <vector>

namespace heatsrc {

// Temporal intensity phi(t) on [0, 1].
//
// Kinds:
//   Sampled        piecewise-linear through (times, values)
//   ExpDecay       phi(t) = scale * exp(-a t)
//   Constant       phi(t) = c
//   Counterexample phi(t) = pi cos(pi t) + 2 pi^2 sin(pi t); its weighted
//                  integral vanishes at lambda = 2 pi^2, which defeats
//                  naive inversion and exercises the small-divisor guard.
struct TimeProfile {
  enum class Kind { Sampled, ExpDecay, Constant, Counterexample };

  Kind kind = Kind::Constant;
  // Sampled:
  std::vector<double> times;
  std::vector<double> values;
  // ExpDecay:
  double decay_rate = 0.0;
  double scale = 1.0;
  // Constant:
  double constant = 1.0;

  static TimeProfile make_constant(double c);
  static TimeProfile exp_decay(double a, double s = 1.0);
  static TimeProfile counterexample();
  static TimeProfile sampled(std::vector<double> times,
                             std::vector<double> values);

  double evaluate(double t) const;

  // Throws std::invalid_argument on malformed data (Sampled: fewer than two
  // points, non-increasing times, endpoints not spanning [0,1], non-finite
  // values; ExpDecay: negative decay rate or non-finite parameters).
  void validate() const;

  // Closed form of integral_0^1 exp(lambda (t-1)) phi(t) dt when available
  // (all kinds, including exact per-interval integration of Sampled).
  std::optional<double> closed_form_D(double lambda) const;

  // Closed form of the partial kernel integral_0^t exp(lambda (s-t)) phi(s) ds
  // when available (all kinds except Sampled).
  std::optional<double> closed_form_partial_D(double lambda, double t) const;

  std::string describe() const;
};

}  // namespace heatsrc
