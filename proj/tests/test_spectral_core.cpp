// Unit tests for the quadrature rules, grid/series containers, time profiles,
// and the spectral transforms (G, D, H, synthesis). Reference values are
// frozen from an independent oracle at full double precision.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "doctest.h"
#include "heatsrc/errors.hpp"
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
}  // namespace

TEST_CASE("quadrature spec validation") {
  CHECK_NOTHROW(QuadratureSpec::simpson(3).validate());
  CHECK_NOTHROW(QuadratureSpec::gauss(8, 32).validate());

  QuadratureSpec bad;
  bad.rule = QuadratureRule::CompositeSimpson;
  bad.panels = 1;
  bad.points_per_panel = 4;  // Simpson needs an odd count
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.points_per_panel = 1;  // and at least 3
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.points_per_panel = 5;
  bad.panels = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("quad_1d integrates polynomials and smooth functions") {
  // Simpson is exact on cubics.
  const double cubic =
      quad_1d([](double x) { return x * x * x; }, 0, 1, QuadratureSpec::simpson(3));
  CHECK(cubic == doctest::Approx(0.25).epsilon(1e-15));

  // 5-point Gauss-Legendre is exact through degree 9.
  const double deg9 =
      quad_1d([](double x) { return std::pow(x, 9); }, 0, 1, QuadratureSpec::gauss(1, 5));
  CHECK(deg9 == doctest::Approx(0.1).epsilon(1e-14));

  const double sine =
      quad_1d([](double x) { return std::sin(x); }, 0, kPi, QuadratureSpec::gauss(1, 32));
  CHECK(sine == doctest::Approx(2.0).epsilon(1e-14));

  CHECK(quad_1d([](double) { return 7.0; }, 2.0, 2.0, QuadratureSpec::simpson(3)) == 0.0);
  CHECK_THROWS_AS(quad_1d([](double) { return 0.0; }, 1.0, 0.0, QuadratureSpec::simpson(3)),
                  std::invalid_argument);
}

TEST_CASE("quad_1d reports non-finite integrand values with the node") {
  bool threw = false;
  try {
    // Node at x = 0 produces 1/0 = inf.
    quad_1d([](double x) { return 1.0 / x; }, 0, 1, QuadratureSpec::simpson(3));
  } catch (const NumericalError& e) {
    threw = true;
    CHECK(std::string(e.what()).find("node") != std::string::npos);
  }
  CHECK(threw);
}

TEST_CASE("quadrature node expansions") {
  // Weights always sum to the interval length; shared Simpson endpoints merge.
  QuadratureSpec spec;
  spec.panels = 3;
  spec.points_per_panel = 5;
  spec.rule = QuadratureRule::CompositeSimpson;
  auto nodes = quadrature_nodes(1.0, 2.5, spec);
  CHECK(nodes.size() == 3 * 4 + 1);
  double wsum = 0.0;
  for (auto& [x, w] : nodes) wsum += w;
  CHECK(wsum == doctest::Approx(1.5).epsilon(1e-14));

  auto gl = quadrature_nodes(-1.0, 1.0, QuadratureSpec::gauss(2, 16));
  CHECK(gl.size() == 32);
  wsum = 0.0;
  for (auto& [x, w] : gl) wsum += w;
  CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));

  const auto& table = gauss_legendre_table(5);
  CHECK(table.size() == 5);
  for (size_t i = 1; i < table.size(); ++i) CHECK(table[i].first > table[i - 1].first);
}

TEST_CASE("derived quadrature rules") {
  CHECK(alpha_rule_for_radius(100.0).total_points() == 2001);
  CHECK(alpha_rule_for_radius(200.0).total_points() == 3201);  // 16R forced odd
  CHECK(alpha_rule_for_radius(1000.0).total_points() == 16001);
  CHECK(alpha_rule_for_radius(100.0).rule == QuadratureRule::CompositeSimpson);

  CHECK(simpson_for_range(0, 400, 256).total_points() == 102401);
  CHECK_THROWS_AS(simpson_for_range(0, 1e6, 200), NumericalError);

  const auto t = default_time_rule();
  CHECK(t.rule == QuadratureRule::GaussLegendre);
  CHECK(t.panels == 8);
  CHECK(t.points_per_panel == 32);
}

TEST_CASE("compensated summation") {
  KahanSum acc;
  for (int i = 0; i < 1000000; ++i) acc.add(0.1);
  CHECK(acc.value() == doctest::Approx(100000.0).epsilon(1e-12));
}

TEST_CASE("grid container basics and validation") {
  auto g = GridFunction2D::from_function(5, 3, [](double x, double y) { return x + 10 * y; });
  CHECK(g.x(0) == 0.0);
  CHECK(g.x(4) == 1.0);
  CHECK(g.y(1) == 0.5);
  CHECK(g.at(2, 1) == doctest::Approx(0.5 + 5.0).epsilon(1e-15));

  auto z = GridFunction2D::zeros(3, 3);
  CHECK(z.values.size() == 9);
  CHECK_NOTHROW(z.validate());

  GridFunction2D bad = z;
  bad.nx = 4;  // even
  bad.values.resize(12, 0.0);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  GridFunction2D mism = z;
  mism.values.pop_back();
  CHECK_THROWS_AS(mism.validate(), std::invalid_argument);

  GridFunction2D nan = z;
  nan.values[4] = std::nan("");
  CHECK_THROWS_AS(nan.validate(), std::invalid_argument);

  CHECK_THROWS_AS(l2_error(GridFunction2D::zeros(3, 3), GridFunction2D::zeros(5, 3)),
                  std::invalid_argument);
}

TEST_CASE("grid L2 norm matches the closed series norm") {
  const auto f = coscos().rasterize(201, 201);
  CHECK(l2_norm(f) == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(l2_error(f, GridFunction2D::zeros(201, 201)) == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("cosine series container") {
  CosineSeries2D s;
  s.add_term(1, 1, 0.75);
  s.add_term(0, 1, 2.0);
  s.add_term(1, 1, 0.25);  // accumulates into the existing term
  CHECK(s.terms.size() == 2);
  CHECK(s.coefficient(1, 1) == 1.0);
  CHECK(s.coefficient(0, 1) == 2.0);
  CHECK(s.coefficient(3, 3) == 0.0);
  // sorted by (k, n)
  CHECK(s.terms[0].k == 0);
  CHECK(s.terms[1].k == 1);

  s.add_term(1, 1, -1.0);
  s.normalize();
  CHECK(s.terms.size() == 1);

  CHECK(coscos().evaluate(0.25, 0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(coscos().evaluate(0.0, 0.0) == 1.0);

  auto sc = coscos().scaled(-3.0);
  CHECK(sc.coefficient(1, 1) == -3.0);

  CosineSeries2D multi;
  multi.add_term(0, 3, 1.0);
  multi.add_term(2, 0, 1.0);
  multi.add_term(1, 3, 1.0);
  const auto ys = multi.y_modes();
  REQUIRE(ys.size() == 2);
  CHECK(ys[0] == 0.0);
  CHECK(ys[1] == 3.0);
}

TEST_CASE("series norms are termwise") {
  CHECK(coscos().l2_norm_sq() == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(coscos().h1_norm_sq() ==
        doctest::Approx(0.25 + kPi * kPi / 2.0).epsilon(1e-15));

  CosineSeries2D g0;  // (cos(pi x) + 1) cos(pi y)
  g0.add_term(0, 1, 1.0);
  g0.add_term(1, 1, 1.0);
  CHECK(g0.l2_norm_sq() == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("series validation") {
  CosineSeries2D s;
  s.add_term(1, 1, 1.0);
  CHECK_NOTHROW(s.validate());

  CosineSeries2D neg;
  neg.terms.push_back({-1.0, 0.0, 1.0});
  CHECK_THROWS_AS(neg.validate(), std::invalid_argument);

  CosineSeries2D frac;
  frac.terms.push_back({1.5, 0.0, 1.0});
  CHECK_THROWS_AS(frac.validate(), std::invalid_argument);

  CosineSeries2D inf;
  inf.terms.push_back({1.0, 0.0, std::numeric_limits<double>::infinity()});
  CHECK_THROWS_AS(inf.validate(), std::invalid_argument);
}

TEST_CASE("rasterize stays exact at extreme mode numbers") {
  // cos(1e15 pi x) sampled at x = i/200: the phase 1e15 * i / 200 = 5e12 * i
  // is an exact even integer for every i, so every sample is exactly +1.
  CosineSeries2D s;
  s.add_term(1e15, 0, 1.0);
  const auto g = s.rasterize(201, 201);
  for (double v : g.values) CHECK(v == 1.0);
}

TEST_CASE("time profile evaluation and validation") {
  CHECK(TimeProfile::make_constant(2.5).evaluate(0.7) == 2.5);
  CHECK(TimeProfile::exp_decay(2.0, 3.0).evaluate(0.5) ==
        doctest::Approx(3.0 * std::exp(-1.0)).epsilon(1e-15));
  CHECK(TimeProfile::counterexample().evaluate(0.0) == doctest::Approx(kPi).epsilon(1e-15));

  auto lin = TimeProfile::sampled({0.0, 0.5, 1.0}, {1.0, 2.0, 0.5});
  CHECK(lin.evaluate(0.25) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(lin.evaluate(0.75) == doctest::Approx(1.25).epsilon(1e-15));

  CHECK_THROWS_AS(TimeProfile::sampled({0.0}, {1.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(TimeProfile::sampled({0.0, 0.0, 1.0}, {1, 2, 3}).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(TimeProfile::sampled({0.1, 1.0}, {1, 2}).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      TimeProfile::sampled({0.0, 1.0}, {1.0, std::numeric_limits<double>::infinity()})
          .validate(),
      std::invalid_argument);
  CHECK_THROWS_AS(TimeProfile::exp_decay(-1.0).validate(), std::invalid_argument);

  CHECK(TimeProfile::make_constant(1.0).describe().find("constant") != std::string::npos);
  CHECK(TimeProfile::exp_decay(1.0).describe().find("exp-decay") != std::string::npos);
  CHECK(TimeProfile::counterexample().describe().find("counterexample") != std::string::npos);
  CHECK(lin.describe().find("sampled") != std::string::npos);
}

TEST_CASE("closed-form time kernels") {
  CHECK(*TimeProfile::make_constant(1.0).closed_form_D(0.0) == 1.0);
  CHECK(*TimeProfile::make_constant(1.0).closed_form_D(2.0) ==
        doctest::Approx((1.0 - std::exp(-2.0)) / 2.0).epsilon(1e-15));

  const auto phi_ex = TimeProfile::exp_decay(kPi * kPi, kPi * kPi);
  CHECK(*phi_ex.closed_form_D(kPi * kPi) ==
        doctest::Approx(kPi * kPi * std::exp(-kPi * kPi)).epsilon(1e-14));

  // The counterexample kernel vanishes identically at lambda = 2 pi^2.
  CHECK(*TimeProfile::counterexample().closed_form_D(2.0 * kPi * kPi) == 0.0);

  const auto lin = TimeProfile::sampled({0.0, 0.5, 1.0}, {1.0, 2.0, 0.5});
  CHECK(*lin.closed_form_D(10.0) ==
        doctest::Approx(0.079659470655664741).epsilon(1e-14));

  // Partial kernels: constant profile at lambda = 0 is just c * t.
  CHECK(*TimeProfile::make_constant(0.1).closed_form_partial_D(0.0, 0.5) ==
        doctest::Approx(0.05).epsilon(1e-14));
  CHECK_FALSE(lin.closed_form_partial_D(1.0, 0.5).has_value());
}

TEST_CASE("x-mode transform: values, symmetry, removable singularity") {
  CHECK(mode_transform_closed(0, 0, 0, 0) == 1.0);
  CHECK(mode_transform_closed(1, 1, kPi, 1) == 0.25);
  CHECK(mode_transform_closed(2, 1, 1, -1) ==
        doctest::Approx(-1.093432418999223e-2).epsilon(1e-12));

  // Exactly even in alpha (the implementation folds through |alpha|).
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ua(0.0, 40.0);
  for (int i = 0; i < 50; ++i) {
    const double a = ua(rng);
    CHECK(mode_transform_x(3, a) == mode_transform_x(3, -a));
  }

  // Removable singularity at alpha = k pi: value 1/2, continuous approach.
  for (double k : {1.0, 2.0, 5.0}) {
    const double at_pole = mode_transform_x(k, k * kPi);
    CHECK(at_pole == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(mode_transform_x(k, k * kPi + 1e-7) - at_pole) < 1e-5);
    CHECK(std::abs(mode_transform_x(k, k * kPi - 1e-7) - at_pole) < 1e-5);
    // also from the negative axis
    CHECK(std::abs(mode_transform_x(k, -k * kPi + 1e-7) - at_pole) < 1e-5);
  }

  // y-transform orthogonality table.
  CHECK(mode_transform_y(0, 0) == 1.0);
  CHECK(mode_transform_y(1, 1) == 0.5);
  CHECK(mode_transform_y(1, -1) == 0.5);
  CHECK(mode_transform_y(2, 1) == 0.0);
  CHECK(mode_transform_y(0, 1) == 0.0);
}

TEST_CASE("grid and series transforms agree") {
  const auto ex = fixture_exact();
  const auto grid = ex.g0.rasterize(1601, 1601);
  const double a1 = cosine_transform_G(grid, kPi, 1);
  const double a2 = cosine_transform_G(ex.g0, kPi, 1);
  CHECK(std::abs(a1 - a2) < 1e-12);
  const double b1 = cosine_transform_G(grid, 20.0, 1);
  const double b2 = cosine_transform_G(ex.g0, 20.0, 1);
  CHECK(std::abs(b1 - b2) < 1e-10);

  const auto evs = make_series_G(ex.g0);
  CHECK(evs.provenance == SpectralEvaluator::Provenance::ClosedForm);
  CHECK(evs(kPi, 1) == a2);
  REQUIRE(evs.y_support.has_value());
  CHECK(evs.has_y_support(1));
  CHECK(evs.has_y_support(-1));
  CHECK_FALSE(evs.has_y_support(0));

  const auto evg = make_grid_G(grid);
  CHECK(evg.provenance == SpectralEvaluator::Provenance::Quadrature);
  CHECK_FALSE(evg.y_support.has_value());
  CHECK(evg.has_y_support(12345));  // unknown support: every line possible
}

TEST_CASE("numerical time kernel matches closed forms across lambda scales") {
  const auto phi_ex = TimeProfile::exp_decay(kPi * kPi, kPi * kPi);
  const auto spec = default_time_rule();

  // Boundary-layer split keeps the relative error tiny even at lambda = 1e6.
  const double q6 = kernel_D(phi_ex, 1000.0, 0.0, spec);
  const double c6 = *phi_ex.closed_form_D(1e6);
  CHECK(std::abs(q6 - c6) / std::abs(c6) < 1e-10);

  const double q4 = kernel_D(phi_ex, 100.0, 0.0, spec);
  const double c4 = *phi_ex.closed_form_D(1e4);
  CHECK(std::abs(q4 - c4) / std::abs(c4) < 1e-10);

  // Piecewise-linear profile: quadrature panels align with the breakpoints.
  const auto lin = TimeProfile::sampled({0.0, 0.5, 1.0}, {1.0, 2.0, 0.5});
  const double lam = 10.0;
  const double ql = kernel_D(lin, std::sqrt(lam), 0.0, spec);
  CHECK(std::abs(ql - *lin.closed_form_D(lam)) / *lin.closed_form_D(lam) < 1e-12);

  // Quadrature sees the counterexample kernel's zero at (pi, 1).
  CHECK(std::abs(kernel_D(TimeProfile::counterexample(), kPi, 1, spec)) < 1e-12);

  CHECK(make_kernel_D(phi_ex, spec).provenance ==
        SpectralEvaluator::Provenance::ClosedForm);
}

TEST_CASE("data functional H") {
  // Series route on the bump family at m = 4: pinned reference value.
  const auto pert = fixture_perturbed(4);
  const auto G0 = make_series_G(pert.g0);
  const auto G1 = make_series_G(pert.g1);
  CHECK(data_functional_H(G0, G1, 1, 1) ==
        doctest::Approx(1.184605734363650e-5).epsilon(1e-10));

  // Grid route: H reproduces D * G(f) at off-node frequencies.
  const auto ex = fixture_exact();
  const auto g0g = make_grid_G(ex.g0.rasterize(1601, 1601));
  const auto g1g = make_grid_G(ex.g1.rasterize(1601, 1601));
  const auto D = make_kernel_D(ex.phi, default_time_rule());
  for (auto [al, n] : {std::pair{7.3, 2.0}, {15.1, 0.0}, {3.2, 1.0}}) {
    const double H = data_functional_H(g0g, g1g, al, n);
    const double rhs = D(al, n) * cosine_transform_G(ex.f_true, al, n);
    CHECK(std::abs(H - rhs) < 1e-15);
  }

  // On-node identity, series route: at alpha = k pi the transforms collapse
  // to the mode weights, H = D * c * wx * wy.
  const auto G0s = make_series_G(ex.g0);
  const auto G1s = make_series_G(ex.g1);
  const double H11 = data_functional_H(G0s, G1s, kPi, 1);
  const double rhs11 = *ex.phi.closed_form_D(2.0 * kPi * kPi) * 0.25;
  CHECK(H11 == doctest::Approx(rhs11).epsilon(1e-12));

  const auto fused = make_data_H(G0s, G1s);
  CHECK(fused(kPi, 1) == H11);
}

TEST_CASE("synthesis recovers a single mode as the window grows") {
  const auto s = make_series_G(coscos());
  const auto truth = coscos().rasterize(201, 201);
  const double e1 =
      l2_error(synthesize(s, 12.5, 201, 201, alpha_rule_for_radius(12.5)), truth);
  const double e2 =
      l2_error(synthesize(s, 50.0, 201, 201, alpha_rule_for_radius(50.0)), truth);
  const double e3 =
      l2_error(synthesize(s, 200.0, 201, 201, alpha_rule_for_radius(200.0)), truth);
  CHECK(e1 == doctest::Approx(0.085324566456280962).epsilon(1e-9));
  CHECK(e2 == doctest::Approx(0.040415014805811014).epsilon(1e-9));
  CHECK(e3 == doctest::Approx(0.019818523103456352).epsilon(1e-9));
  CHECK(e1 > e2);
  CHECK(e2 > e3);
}

TEST_CASE("synthesis through the kernel ratio matches the direct transform") {
  // For consistent data H/D = G(f), so synthesizing H/D reproduces the
  // direct synthesis of G(f) (the kernel never vanishes for this profile).
  const auto ex = fixture_exact();
  const auto H = make_data_H(make_series_G(ex.g0), make_series_G(ex.g1));
  const auto D = make_kernel_D(ex.phi, default_time_rule());
  SpectralEvaluator ratio;
  ratio.eval = [H, D](double a, double n) { return H(a, n) / D(a, n); };
  ratio.name = "H over D";
  ratio.y_support = H.y_support;
  const auto field = synthesize(ratio, 50.0, 201, 201, alpha_rule_for_radius(50.0));
  const double err = l2_error(field, ex.f_true.rasterize(201, 201));
  CHECK(err == doctest::Approx(0.040415014805811014).epsilon(1e-9));
}

TEST_CASE("synthesis input validation") {
  SpectralEvaluator odd;
  odd.eval = [](double a, double) { return a; };
  CHECK_THROWS_AS(synthesize(odd, 5.0, 11, 11, alpha_rule_for_radius(5.0)),
                  std::invalid_argument);

  SpectralEvaluator fine;
  fine.eval = [](double, double) { return 1.0; };
  CHECK_THROWS_AS(synthesize(fine, -1.0, 11, 11, alpha_rule_for_radius(5.0)),
                  std::invalid_argument);

  SpectralEvaluator nan;
  nan.eval = [](double, double) { return std::nan(""); };
  CHECK_THROWS_AS(synthesize(nan, 5.0, 11, 11, alpha_rule_for_radius(5.0)),
                  NumericalError);

  SpectralEvaluator inf;
  inf.eval = [](double, double) { return std::numeric_limits<double>::infinity(); };
  CHECK_THROWS_AS(synthesize(inf, 5.0, 11, 11, alpha_rule_for_radius(5.0)),
                  NumericalError);
}
