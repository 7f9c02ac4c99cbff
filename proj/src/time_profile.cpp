#include "heatsrc/time_profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "heatsrc/quadrature.hpp"

namespace heatsrc {

namespace {

constexpr double kPi = std::numbers::pi;

// em1(z) = (1 - e^{-z})/z, the normalized exponential difference. Stable for
// all z >= -745 (callers keep z bounded below); Taylor branch kills the 0/0.
double em1(double z) {
  if (std::abs(z) < 1e-8) return 1.0 - z / 2.0 + z * z / 6.0;
  return -std::expm1(-z) / z;
}

// em2(z) = (1 - em1(z))/z = (e^{-z} - 1 + z)/z^2 -> 1/2 at 0.
double em2(double z) {
  if (std::abs(z) < 1e-6) return 0.5 - z / 6.0 + z * z / 24.0;
  return (1.0 - em1(z)) / z;
}

}  // namespace

TimeProfile TimeProfile::make_constant(double c) {
  TimeProfile p;
  p.kind = Kind::Constant;
  p.constant = c;
  p.validate();
  return p;
}

TimeProfile TimeProfile::exp_decay(double a, double s) {
  TimeProfile p;
  p.kind = Kind::ExpDecay;
  p.decay_rate = a;
  p.scale = s;
  p.validate();
  return p;
}

TimeProfile TimeProfile::counterexample() {
  TimeProfile p;
  p.kind = Kind::Counterexample;
  return p;
}

TimeProfile TimeProfile::sampled(std::vector<double> times,
                                 std::vector<double> values) {
  TimeProfile p;
  p.kind = Kind::Sampled;
  p.times = std::move(times);
  p.values = std::move(values);
  p.validate();
  return p;
}

double TimeProfile::evaluate(double t) const {
  switch (kind) {
    case Kind::Constant:
      return constant;
    case Kind::ExpDecay:
      return scale * std::exp(-decay_rate * t);
    case Kind::Counterexample:
      return kPi * std::cos(kPi * t) + 2.0 * kPi * kPi * std::sin(kPi * t);
    case Kind::Sampled: {
      if (t <= times.front()) return values.front();
      if (t >= times.back()) return values.back();
      auto it = std::upper_bound(times.begin(), times.end(), t);
      const size_t i = static_cast<size_t>(it - times.begin()) - 1;
      const double w = (t - times[i]) / (times[i + 1] - times[i]);
      return values[i] + w * (values[i + 1] - values[i]);
    }
  }
  return 0.0;
}

void TimeProfile::validate() const {
  switch (kind) {
    case Kind::Constant:
      if (!std::isfinite(constant))
        throw std::invalid_argument("TimeProfile: non-finite constant");
      break;
    case Kind::ExpDecay:
      if (!std::isfinite(decay_rate) || !std::isfinite(scale) ||
          decay_rate < 0.0)
        throw std::invalid_argument(
            "TimeProfile: exp-decay needs a finite rate >= 0 and scale");
      break;
    case Kind::Counterexample:
      break;
    case Kind::Sampled: {
      if (times.size() < 2 || times.size() != values.size())
        throw std::invalid_argument(
            "TimeProfile: sampled profile needs >= 2 matching samples");
      if (times.front() != 0.0 || times.back() != 1.0)
        throw std::invalid_argument(
            "TimeProfile: sampled times must span [0, 1]");
      for (size_t i = 0; i + 1 < times.size(); ++i)
        if (!(times[i] < times[i + 1]))
          throw std::invalid_argument(
              "TimeProfile: sampled times must be strictly increasing");
      for (double v : values)
        if (!std::isfinite(v))
          throw std::invalid_argument("TimeProfile: non-finite sample value");
      break;
    }
  }
}

std::optional<double> TimeProfile::closed_form_D(double lambda) const {
  switch (kind) {
    case Kind::Constant:
      return constant * em1(lambda);
    case Kind::ExpDecay: {
      // s e^{-min(a,lambda)} em1(|lambda - a|): both factors stay in (0, 1]
      // scale-free, so no overflow for any rate.
      const double a = decay_rate;
      return scale * std::exp(-std::min(a, lambda)) * em1(std::abs(lambda - a));
    }
    case Kind::Counterexample:
      return kPi * (1.0 + std::exp(-lambda)) * (2.0 * kPi * kPi - lambda) /
             (lambda * lambda + kPi * kPi);
    case Kind::Sampled: {
      // Exact integral of the piecewise-linear profile against
      // e^{lambda (t-1)}: per interval [u, v],
      //   I = e^{lambda (v-1)} dt [ phi(u) em1(z) + slope dt em2(z) ],
      // z = lambda dt. Exponents never exceed 0.
      KahanSum acc;
      for (size_t i = 0; i + 1 < times.size(); ++i) {
        const double u = times[i], v = times[i + 1];
        const double dt = v - u;
        const double slope = (values[i + 1] - values[i]) / dt;
        const double z = lambda * dt;
        acc.add(std::exp(lambda * (v - 1.0)) * dt *
                (values[i] * em1(z) + slope * dt * em2(z)));
      }
      return acc.value();
    }
  }
  return std::nullopt;
}

std::optional<double> TimeProfile::closed_form_partial_D(double lambda,
                                                         double t) const {
  switch (kind) {
    case Kind::Constant:
      return constant * t * em1(lambda * t);
    case Kind::ExpDecay: {
      const double a = decay_rate;
      return scale * std::exp(-std::min(a, lambda) * t) * t *
             em1(std::abs(lambda - a) * t);
    }
    case Kind::Counterexample: {
      // integral_0^t e^{lambda (s-t)} phi(s) ds for
      // phi = pi cos(pi s) + 2 pi^2 sin(pi s):
      //   sin(pi t) + (2 pi^2 - lambda) S,
      //   S = [lambda sin(pi t) - pi cos(pi t) + pi e^{-lambda t}]
      //       / (lambda^2 + pi^2).
      const double sp = std::sin(kPi * t), cp = std::cos(kPi * t);
      const double S = (lambda * sp - kPi * cp + kPi * std::exp(-lambda * t)) /
                       (lambda * lambda + kPi * kPi);
      return sp + (2.0 * kPi * kPi - lambda) * S;
    }
    case Kind::Sampled:
      return std::nullopt;  // evolve falls back to quadrature
  }
  return std::nullopt;
}

std::string TimeProfile::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Constant:
      os << "constant(c=" << constant << ")";
      break;
    case Kind::ExpDecay:
      os << "exp-decay(a=" << decay_rate << ", s=" << scale << ")";
      break;
    case Kind::Counterexample:
      os << "counterexample";
      break;
    case Kind::Sampled:
      os << "sampled(" << times.size() << " points)";
      break;
  }
  return os.str();
}

}  // namespace heatsrc
