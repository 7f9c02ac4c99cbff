#include "heatsrc/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "heatsrc/errors.hpp"

namespace heatsrc {

QuadratureSpec QuadratureSpec::simpson(int total_points) {
  QuadratureSpec s;
  s.panels = 1;
  s.points_per_panel = total_points;
  s.rule = QuadratureRule::CompositeSimpson;
  s.validate();
  return s;
}

QuadratureSpec QuadratureSpec::gauss(int panels, int points_per_panel) {
  QuadratureSpec s;
  s.panels = panels;
  s.points_per_panel = points_per_panel;
  s.rule = QuadratureRule::GaussLegendre;
  s.validate();
  return s;
}

int QuadratureSpec::total_points() const {
  if (rule == QuadratureRule::CompositeSimpson)
    return panels * (points_per_panel - 1) + 1;
  return panels * points_per_panel;
}

void QuadratureSpec::validate() const {
  if (panels < 1) throw std::invalid_argument("quadrature: panels must be >= 1");
  if (rule == QuadratureRule::CompositeSimpson) {
    if (points_per_panel < 3 || points_per_panel % 2 == 0)
      throw std::invalid_argument(
          "quadrature: Simpson needs an odd points_per_panel >= 3");
  } else {
    if (points_per_panel < 2)
      throw std::invalid_argument(
          "quadrature: Gauss-Legendre needs points_per_panel >= 2");
  }
}

QuadratureSpec default_time_rule() { return QuadratureSpec::gauss(8, 32); }

QuadratureSpec alpha_rule_for_radius(double R) {
  long long nodes = static_cast<long long>(std::ceil(16.0 * std::max(R, 0.0)));
  if (nodes < 2001) nodes = 2001;
  if (nodes % 2 == 0) ++nodes;
  QuadratureSpec s;
  s.panels = 1;
  s.points_per_panel = static_cast<int>(nodes);
  s.rule = QuadratureRule::CompositeSimpson;
  return s;
}

namespace {

// Newton iteration on P_n; accurate to ~1e-15 for the point counts used here.
std::vector<std::pair<double, double>> compute_gauss_legendre(int n) {
  std::vector<std::pair<double, double>> out(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    out[n - 1 - i] = {x, w};
    out[i] = {-x, w};
  }
  return out;
}

}  // namespace

const std::vector<std::pair<double, double>>& gauss_legendre_table(int n) {
  static std::mutex mu;
  static std::map<int, std::vector<std::pair<double, double>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

QuadratureSpec simpson_for_range(double a, double b, double density) {
  const double want = std::ceil((b - a) * density);
  if (!(want <= 1e8))
    throw NumericalError(
        "quadrature: range/density would need more than 1e8 nodes");
  long long n = static_cast<long long>(want);
  if (n < 3) n = 3;
  if (n % 2 == 0) ++n;
  return QuadratureSpec::simpson(static_cast<int>(n));
}

std::vector<std::pair<double, double>> quadrature_nodes(
    double a, double b, const QuadratureSpec& spec) {
  spec.validate();
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<size_t>(spec.total_points()));
  const double panel_w = (b - a) / spec.panels;
  if (spec.rule == QuadratureRule::CompositeSimpson) {
    const int per = spec.points_per_panel;
    const double h = panel_w / (per - 1);
    for (int p = 0; p < spec.panels; ++p) {
      const double x0 = a + p * panel_w;
      for (int i = 0; i < per; ++i) {
        double w = (i == 0 || i == per - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        w *= h / 3.0;
        const double x = x0 + i * h;
        // Merge the shared endpoint with the previous panel's last node.
        if (i == 0 && !out.empty())
          out.back().second += w;
        else
          out.emplace_back(x, w);
      }
    }
  } else {
    const auto& table = gauss_legendre_table(spec.points_per_panel);
    for (int p = 0; p < spec.panels; ++p) {
      const double mid = a + (p + 0.5) * panel_w;
      const double half = 0.5 * panel_w;
      for (const auto& [node, weight] : table)
        out.emplace_back(mid + half * node, weight * half);
    }
  }
  return out;
}

namespace {

double eval_checked(const std::function<double(double)>& f, double t) {
  double v = f(t);
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << "non-finite integrand value at node t=" << t;
    throw NumericalError(os.str());
  }
  return v;
}

}  // namespace

double quad_1d(const std::function<double(double)>& f, double a, double b,
               const QuadratureSpec& spec) {
  spec.validate();
  if (a > b) throw std::invalid_argument("quad_1d: requires a <= b");
  if (a == b) return 0.0;

  KahanSum acc;
  if (spec.rule == QuadratureRule::CompositeSimpson) {
    const int per = spec.points_per_panel;
    const double panel_w = (b - a) / spec.panels;
    const double h = panel_w / (per - 1);
    for (int p = 0; p < spec.panels; ++p) {
      const double x0 = a + p * panel_w;
      for (int i = 0; i < per; ++i) {
        double w = (i == 0 || i == per - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        acc.add(w * eval_checked(f, x0 + i * h));
      }
    }
    return acc.value() * h / 3.0;
  }

  const auto& table = gauss_legendre_table(spec.points_per_panel);
  const double panel_w = (b - a) / spec.panels;
  for (int p = 0; p < spec.panels; ++p) {
    const double mid = a + (p + 0.5) * panel_w;
    const double half = 0.5 * panel_w;
    for (const auto& [node, weight] : table)
      acc.add(weight * half * eval_checked(f, mid + half * node));
  }
  return acc.value();
}

}  // namespace heatsrc
