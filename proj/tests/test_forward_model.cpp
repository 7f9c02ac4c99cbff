// Unit tests for the mode-wise heat evolution and the benchmark fixtures.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "heatsrc/forward_model.hpp"
#include "heatsrc/spectral.hpp"

using namespace heatsrc;
namespace {
constexpr double kPi = std::numbers::pi;

CosineSeries2D coscos() {
  CosineSeries2D s;
  s.add_term(1, 1, 1.0);
  return s;
}

double series_distance(const CosineSeries2D& a, const CosineSeries2D& b) {
  CosineSeries2D diff = a;
  for (const auto& t : b.terms) diff.add_term(t.k, t.n, -t.c);
  return std::sqrt(diff.l2_norm_sq());
}
}  // namespace

TEST_CASE("zero source decays mode by mode") {
  const auto ex = fixture_exact();
  CosineSeries2D none;
  const auto g1 = forward_final(ex.g0, none, ex.phi, default_time_rule());
  CHECK(g1.coefficient(0, 1) ==
        doctest::Approx(std::exp(-kPi * kPi)).epsilon(1e-14));
  CHECK(g1.coefficient(1, 1) ==
        doctest::Approx(std::exp(-2.0 * kPi * kPi)).epsilon(1e-14));
}

TEST_CASE("the exact fixture is a true evolution pair") {
  const auto ex = fixture_exact();
  const double scale = std::exp(-kPi * kPi);

  // The stored data already satisfy g1 = exp(-pi^2) g0 exactly.
  CHECK(ex.g1.coefficient(0, 1) == scale * ex.g0.coefficient(0, 1));
  CHECK(ex.g1.coefficient(1, 1) == scale * ex.g0.coefficient(1, 1));

  // And the forward model reproduces that relation from (g0, f_true, phi):
  // exp(-2 pi^2) + D(2 pi^2) collapses analytically to exp(-pi^2).
  const auto g1 = forward_final(ex.g0, ex.f_true, ex.phi, default_time_rule());
  CHECK(g1.coefficient(0, 1) == doctest::Approx(scale).epsilon(1e-14));
  CHECK(g1.coefficient(1, 1) == doctest::Approx(scale).epsilon(1e-14));
}

TEST_CASE("constant intensity final value") {
  CosineSeries2D zero;
  const auto g1 = forward_final(zero, coscos(), TimeProfile::make_constant(1.0),
                                default_time_rule());
  const double lam = 2.0 * kPi * kPi;
  CHECK(g1.coefficient(1, 1) ==
        doctest::Approx((1.0 - std::exp(-lam)) / lam).epsilon(1e-14));
  CHECK(g1.coefficient(1, 1) ==
        doctest::Approx(0.050660591685637218).epsilon(1e-14));
}

TEST_CASE("evolve endpoints, semigroup property, and domain") {
  const auto ex = fixture_exact();
  const auto at0 = evolve(ex.g0, ex.f_true, ex.phi, 0.0, default_time_rule());
  CHECK(at0.coefficient(0, 1) == ex.g0.coefficient(0, 1));
  CHECK(at0.coefficient(1, 1) == ex.g0.coefficient(1, 1));

  const auto at1 = evolve(ex.g0, ex.f_true, ex.phi, 1.0, default_time_rule());
  const auto direct = forward_final(ex.g0, ex.f_true, ex.phi, default_time_rule());
  CHECK(at1.coefficient(1, 1) ==
        doctest::Approx(direct.coefficient(1, 1)).epsilon(1e-13));

  // Constant intensity is shift invariant: evolving 0 -> 1/2 -> 1 in two legs
  // equals the direct map.
  CosineSeries2D zero;
  const auto phi1 = TimeProfile::make_constant(1.0);
  const auto one = forward_final(zero, coscos(), phi1, default_time_rule());
  const auto half = evolve(zero, coscos(), phi1, 0.5, default_time_rule());
  const auto two = evolve(half, coscos(), phi1, 0.5, default_time_rule());
  CHECK(two.coefficient(1, 1) ==
        doctest::Approx(one.coefficient(1, 1)).epsilon(1e-13));

  CHECK_THROWS_AS(evolve(ex.g0, ex.f_true, ex.phi, -0.1, default_time_rule()),
                  std::invalid_argument);
  CHECK_THROWS_AS(evolve(ex.g0, ex.f_true, ex.phi, 1.5, default_time_rule()),
                  std::invalid_argument);
}

TEST_CASE("counterexample: invisible source") {
  const auto ce = fixture_counterexample();
  CHECK(ce.g0.terms.empty());
  CHECK(ce.g1.terms.empty());

  // The final state carries no trace of f_true...
  const auto g1 = forward_final(ce.g0, ce.f_true, ce.phi, default_time_rule());
  for (const auto& t : g1.terms) CHECK(std::abs(t.c) < 1e-15);

  // ...even though the state mid-way is the full source shape: the (1,1)
  // amplitude follows sin(pi t), peaking at exactly 1.
  const auto mid = evolve(ce.g0, ce.f_true, ce.phi, 0.5, default_time_rule());
  CHECK(mid.coefficient(1, 1) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("perturbed fixture: data error shrinks, source error blows up") {
  const auto ex = fixture_exact();
  for (double m : {2.0, 4.0, 10.0, 100.0}) {
    const auto pm = fixture_perturbed(m);
    CHECK(pm.m.has_value());
    CHECK(*pm.m == m);
    CHECK(pm.eps == 1.0 / m);

    CHECK(series_distance(pm.g0, ex.g0) ==
          doctest::Approx(std::sqrt(3.0) / (2.0 * m)).epsilon(1e-12));
    CHECK(series_distance(pm.g1, ex.g1) ==
          doctest::Approx(std::exp(-kPi * kPi) * std::sqrt(3.0) / (2.0 * m))
              .epsilon(1e-12));

    // The disturbed source sits at distance exactly m/2 from the reference
    // source (sqrt(m^2/4) is exact for these m).
    CHECK(series_distance(disturbed_source_series(m), ex.f_true) == m / 2.0);

    // The pair stays a true evolution: of g0_m under the disturbed source.
    const auto g1 = forward_final(pm.g0, disturbed_source_series(m), pm.phi,
                                  default_time_rule());
    CHECK(series_distance(g1, pm.g1) < 1e-12);
  }
}

TEST_CASE("perturbed fixture rejects invalid bump frequencies") {
  CHECK_THROWS_AS(fixture_perturbed(7), std::invalid_argument);    // odd
  CHECK_THROWS_AS(fixture_perturbed(2.5), std::invalid_argument);  // fractional
  CHECK_THROWS_AS(fixture_perturbed(0), std::invalid_argument);
  CHECK_THROWS_AS(fixture_perturbed(-4), std::invalid_argument);
  // At or above 2^53 every representable double is an even integer.
  CHECK_NOTHROW(fixture_perturbed(1e30));
  const auto big = fixture_perturbed(1e30);
  CHECK(big.g0.coefficient(1e30, 1) == doctest::Approx(1e-30).epsilon(1e-14));
}

TEST_CASE("transform identity on the exact fixture at a mode frequency") {
  const auto ex = fixture_exact();
  const auto G0 = make_series_G(ex.g0);
  const auto G1 = make_series_G(ex.g1);
  const double H = data_functional_H(G0, G1, kPi, 1);
  const double rhs = *ex.phi.closed_form_D(2.0 * kPi * kPi) *
                     cosine_transform_G(ex.f_true, kPi, 1);
  CHECK(std::abs(H - rhs) < 1e-12);
}
