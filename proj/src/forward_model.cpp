#include "heatsrc/forward_model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace heatsrc {

namespace {

constexpr double kPi = std::numbers::pi;

double lambda_of_mode(double k, double n) {
  return (k * kPi) * (k * kPi) + (n * kPi) * (n * kPi);
}

// integral_0^t e^{lambda (s-t)} phi(s) ds, closed form when the profile has
// one, boundary-layer-split quadrature otherwise.
double partial_D(const TimeProfile& phi, double lambda, double t,
                 const QuadratureSpec& spec) {
  if (auto v = phi.closed_form_partial_D(lambda, t)) return *v;
  if (t == 0.0) return 0.0;
  auto integrand = [&phi, lambda, t](double s) {
    return std::exp(lambda * (s - t)) * phi.evaluate(s);
  };
  if (lambda * t > 50.0) {
    const double split = t - 50.0 / lambda;
    QuadratureSpec rest = spec;
    rest.panels = 1;
    return quad_1d(integrand, 0.0, split, rest) +
           quad_1d(integrand, split, t, spec);
  }
  return quad_1d(integrand, 0.0, t, spec);
}

double full_D(const TimeProfile& phi, double lambda,
              const QuadratureSpec& spec) {
  if (auto v = phi.closed_form_D(lambda)) return *v;
  return partial_D(phi, lambda, 1.0, spec);
}

}  // namespace

CosineSeries2D forward_final(const CosineSeries2D& g0, const CosineSeries2D& f,
                             const TimeProfile& phi,
                             const QuadratureSpec& time_spec) {
  g0.validate();
  f.validate();
  phi.validate();
  CosineSeries2D out;
  for (const auto& t : g0.terms)
    out.add_term(t.k, t.n, std::exp(-lambda_of_mode(t.k, t.n)) * t.c);
  for (const auto& t : f.terms)
    out.add_term(t.k, t.n,
                 full_D(phi, lambda_of_mode(t.k, t.n), time_spec) * t.c);
  return out;
}

CosineSeries2D evolve(const CosineSeries2D& g0, const CosineSeries2D& f,
                      const TimeProfile& phi, double t,
                      const QuadratureSpec& time_spec) {
  if (!(t >= 0.0 && t <= 1.0))
    throw std::invalid_argument("evolve: t must lie in [0, 1]");
  g0.validate();
  f.validate();
  phi.validate();
  CosineSeries2D out;
  for (const auto& term : g0.terms)
    out.add_term(term.k, term.n,
                 std::exp(-lambda_of_mode(term.k, term.n) * t) * term.c);
  for (const auto& term : f.terms)
    out.add_term(
        term.k, term.n,
        partial_D(phi, lambda_of_mode(term.k, term.n), t, time_spec) * term.c);
  return out;
}

Experiment fixture_exact() {
  Experiment e;
  e.g0.add_term(0, 1, 1.0);
  e.g0.add_term(1, 1, 1.0);
  e.g1 = e.g0.scaled(std::exp(-kPi * kPi));
  e.phi = TimeProfile::exp_decay(kPi * kPi, kPi * kPi);
  e.f_true.add_term(1, 1, 1.0);
  e.eps = 0.0;
  e.labels = "exact benchmark fixture";
  return e;
}

namespace {

void require_even_integer(double m) {
  if (!(m >= 2.0) || !std::isfinite(m))
    throw std::invalid_argument("perturbed fixture: m must be >= 2");
  // Doubles at or above 2^53 are exact even integers already.
  if (m < 9.007199254740992e15) {
    if (m != std::floor(m))
      throw std::invalid_argument("perturbed fixture: m must be an integer");
    if (std::fmod(m, 2.0) != 0.0)
      throw std::invalid_argument("perturbed fixture: m must be even");
  }
}

}  // namespace

Experiment fixture_perturbed(double m) {
  require_even_integer(m);
  Experiment e = fixture_exact();
  // Bump m^{-1} (cos(m pi x) - 1) cos(pi y) on g0; the same bump scaled by
  // e^{-pi^2} on g1 keeps the pair forward-consistent (it is the exact
  // evolution of g0_m under the disturbed source).
  e.g0.add_term(0, 1, -1.0 / m);
  e.g0.add_term(m, 1, 1.0 / m);
  e.g1 = e.g0.scaled(std::exp(-kPi * kPi));
  e.m = m;
  e.eps = 1.0 / m;
  std::ostringstream os;
  os << "perturbed benchmark fixture (m=" << m
     << "); disturbed source adds m cos(m pi x) cos(pi y)";
  e.labels = os.str();
  return e;
}

Experiment fixture_counterexample() {
  Experiment e;
  e.phi = TimeProfile::counterexample();
  e.f_true.add_term(1, 1, 1.0);
  e.eps = 0.0;
  e.labels =
      "nonuniqueness fixture: the time kernel annihilates mode (1,1), so "
      "this source is invisible in the data";
  return e;
}

CosineSeries2D disturbed_source_series(double m) {
  require_even_integer(m);
  CosineSeries2D f;
  f.add_term(1, 1, 1.0);
  f.add_term(m, 1, m);
  return f;
}

}  // namespace heatsrc
