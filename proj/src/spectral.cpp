#include "heatsrc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "heatsrc/errors.hpp"

namespace heatsrc {

namespace {

constexpr double kPi = std::numbers::pi;

// sin(h)/h with the 0/0 removed.
double sinc(double h) {
  if (std::abs(h) < 1e-4) {
    const double h2 = h * h;
    return 1.0 - h2 / 6.0 + h2 * h2 / 120.0;
  }
  return std::sin(h) / h;
}

// (-1)^k for integral k held in a double; doubles at or above 2^53 are even.
double neg_pow(double k) { return std::fmod(k, 2.0) == 0.0 ? 1.0 : -1.0; }

double lambda_of(double alpha, double n) {
  return alpha * alpha + (n * kPi) * (n * kPi);
}

}  // namespace

bool SpectralEvaluator::has_y_support(double n) const {
  if (!y_support) return true;
  const double a = std::abs(n);
  return std::find(y_support->begin(), y_support->end(), a) !=
         y_support->end();
}

double mode_transform_x(double k, double alpha) {
  const double a = std::abs(alpha);  // even in alpha, exactly
  if (k == 0.0) return sinc(a);
  const double p = k * kPi;
  const double h = a - p;
  if (std::abs(h) < 1e-4) {
    // sin(a) = (-1)^k sin(h) near the pole; the sign cancels:
    //   I_x = a sin(h) / (h (a + p)) = a sinc(h)/(a + p), -> 1/2 at h = 0.
    return a * sinc(h) / (a + p);
  }
  return neg_pow(k) * a * std::sin(a) / (h * (a + p));
}

double mode_transform_y(double m, double n) {
  const double an = std::abs(n);
  if (m == 0.0 && an == 0.0) return 1.0;
  if (m >= 1.0 && an == m) return 0.5;
  return 0.0;
}

double mode_transform_closed(double k, double m, double alpha, double n) {
  const double wy = mode_transform_y(m, n);
  if (wy == 0.0) return 0.0;
  return mode_transform_x(k, alpha) * wy;
}

double cosine_transform_G(const CosineSeries2D& w, double alpha, double n) {
  KahanSum acc;
  for (const auto& t : w.terms)
    acc.add(t.c * mode_transform_closed(t.k, t.n, alpha, n));
  return acc.value();
}

namespace {

double simpson_weight(int i, int count) {
  if (i == 0 || i == count - 1) return 1.0;
  return i % 2 == 1 ? 4.0 : 2.0;
}

// integral_0^1 w(x_i, y) cos(n pi y) dy for every i, by composite Simpson
// over the grid rows.
std::vector<double> y_projection(const GridFunction2D& w, double n) {
  const double an = std::abs(n);
  const double hy = 1.0 / (w.ny - 1);
  std::vector<double> proj(w.nx, 0.0);
  std::vector<double> cosy(w.ny);
  for (int j = 0; j < w.ny; ++j)
    cosy[j] = std::cos(an * kPi * w.y(j)) * simpson_weight(j, w.ny);
  for (int i = 0; i < w.nx; ++i) {
    KahanSum acc;
    for (int j = 0; j < w.ny; ++j) acc.add(w.at(i, j) * cosy[j]);
    proj[i] = acc.value() * hy / 3.0;
  }
  return proj;
}

double x_integral(const std::vector<double>& proj, double alpha, int nx) {
  const double a = std::abs(alpha);
  const double hx = 1.0 / (nx - 1);
  KahanSum acc;
  for (int i = 0; i < nx; ++i) {
    const double x = static_cast<double>(i) / (nx - 1);
    acc.add(proj[i] * std::cos(a * x) * simpson_weight(i, nx));
  }
  return acc.value() * hx / 3.0;
}

}  // namespace

double cosine_transform_G(const GridFunction2D& w, double alpha, double n) {
  w.validate();
  return x_integral(y_projection(w, n), alpha, w.nx);
}

SpectralEvaluator make_grid_G(GridFunction2D w) {
  w.validate();
  struct Cache {
    GridFunction2D w;
    std::mutex mu;
    std::map<double, std::vector<double>> proj;  // keyed by |n|
  };
  auto cache = std::make_shared<Cache>();
  cache->w = std::move(w);
  SpectralEvaluator ev;
  ev.provenance = SpectralEvaluator::Provenance::Quadrature;
  ev.name = "grid-G";
  ev.eval = [cache](double alpha, double n) {
    const double an = std::abs(n);
    const std::vector<double>* proj = nullptr;
    {
      std::lock_guard<std::mutex> lock(cache->mu);
      auto it = cache->proj.find(an);
      if (it == cache->proj.end())
        it = cache->proj.emplace(an, y_projection(cache->w, an)).first;
      proj = &it->second;
    }
    return x_integral(*proj, alpha, cache->w.nx);
  };
  return ev;
}

SpectralEvaluator make_series_G(CosineSeries2D w) {
  w.validate();
  SpectralEvaluator ev;
  ev.provenance = SpectralEvaluator::Provenance::ClosedForm;
  ev.name = "series-G";
  ev.y_support = w.y_modes();
  ev.eval = [w = std::move(w)](double alpha, double n) {
    return cosine_transform_G(w, alpha, n);
  };
  return ev;
}

double kernel_D(const TimeProfile& phi, double alpha, double n,
                const QuadratureSpec& spec) {
  phi.validate();
  const double lambda = lambda_of(alpha, n);
  auto integrand = [&phi, lambda](double t) {
    return std::exp(lambda * (t - 1.0)) * phi.evaluate(t);
  };
  // For large lambda the kernel is a boundary layer at t = 1 of width
  // ~1/lambda; spend the full rule there and one cheap panel on the
  // exponentially negligible rest.
  if (lambda > 50.0) {
    const double split = 1.0 - 50.0 / lambda;
    QuadratureSpec rest = spec;
    rest.panels = 1;
    return quad_1d(integrand, 0.0, split, rest) +
           quad_1d(integrand, split, 1.0, spec);
  }
  return quad_1d(integrand, 0.0, 1.0, spec);
}

SpectralEvaluator make_kernel_D(const TimeProfile& phi,
                                const QuadratureSpec& spec) {
  phi.validate();
  SpectralEvaluator ev;
  if (phi.closed_form_D(1.0).has_value()) {
    ev.provenance = SpectralEvaluator::Provenance::ClosedForm;
    ev.name = "D[" + phi.describe() + "]";
    ev.eval = [phi](double alpha, double n) {
      return *phi.closed_form_D(lambda_of(alpha, n));
    };
  } else {
    ev.provenance = SpectralEvaluator::Provenance::Quadrature;
    ev.name = "D[" + phi.describe() + "]-quadrature";
    ev.eval = [phi, spec](double alpha, double n) {
      return kernel_D(phi, alpha, n, spec);
    };
  }
  return ev;
}

double data_functional_H(const SpectralEvaluator& G0,
                         const SpectralEvaluator& G1, double alpha, double n) {
  const double lambda = lambda_of(alpha, n);
  return G1(alpha, n) - std::exp(-lambda) * G0(alpha, n);
}

SpectralEvaluator make_data_H(SpectralEvaluator G0, SpectralEvaluator G1) {
  SpectralEvaluator ev;
  ev.provenance = (G0.provenance == SpectralEvaluator::Provenance::ClosedForm &&
                   G1.provenance == SpectralEvaluator::Provenance::ClosedForm)
                      ? SpectralEvaluator::Provenance::ClosedForm
                      : SpectralEvaluator::Provenance::Quadrature;
  ev.name = "H[" + G0.name + "," + G1.name + "]";
  if (G0.y_support && G1.y_support) {
    std::vector<double> merged = *G0.y_support;
    merged.insert(merged.end(), G1.y_support->begin(), G1.y_support->end());
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    ev.y_support = std::move(merged);
  }
  auto g0 = std::make_shared<SpectralEvaluator>(std::move(G0));
  auto g1 = std::make_shared<SpectralEvaluator>(std::move(G1));
  ev.eval = [g0, g1](double alpha, double n) {
    return data_functional_H(*g0, *g1, alpha, n);
  };
  return ev;
}

namespace {

void check_evenness(const SpectralEvaluator& s, double R, double n_max) {
  const double probes[2] = {0.37 * R, 0.73 * R};
  auto close = [](double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b)) {
      std::ostringstream os;
      os << "synthesize: non-finite spectral value at probe alpha";
      throw NumericalError(os.str());
    }
    return std::abs(a - b) <= 1e-10 * (1.0 + std::max(std::abs(a), std::abs(b)));
  };
  for (double a : probes) {
    if (!close(s(a, 0.0), s(-a, 0.0)))
      throw std::invalid_argument("synthesize: evaluator is not even in alpha");
    if (n_max >= 1.0 && !close(s(a, 1.0), s(a, -1.0)))
      throw std::invalid_argument("synthesize: evaluator is not even in n");
  }
}

}  // namespace

GridFunction2D synthesize(const SpectralEvaluator& s, double R, int nx, int ny,
                          const QuadratureSpec& alpha_spec) {
  if (!(R > 0.0)) throw std::invalid_argument("synthesize: R must be > 0");
  GridFunction2D field = GridFunction2D::zeros(nx, ny);

  // Strict window |n| < R: for integral R the boundary line is excluded.
  double n_max = std::floor(R);
  if (n_max == R) n_max -= 1.0;
  check_evenness(s, R, n_max);

  const auto nodes = quadrature_nodes(0.0, R, alpha_spec);
  // The integrand lives on the open window |alpha| < R (evaluators are zero
  // on the boundary); quadrature nodes landing exactly on R must sample the
  // one-sided interior limit, not the windowed zero.
  const double r_inside = std::nextafter(R, 0.0);
  std::vector<KahanSum> line(nx);
  for (double n = 0.0; n <= n_max; n += 1.0) {
    if (!s.has_y_support(n)) continue;
    for (auto& acc : line) acc = KahanSum();
    for (const auto& [aj, wj] : nodes) {
      const double sj = s(std::min(aj, r_inside), n);
      if (!std::isfinite(sj)) {
        std::ostringstream os;
        os << "synthesize: non-finite spectral value at alpha=" << aj
           << ", n=" << n;
        throw NumericalError(os.str());
      }
      const double swj = sj * wj;
      for (int i = 0; i < nx; ++i)
        line[i].add(swj * std::cos(aj * field.x(i)));
    }
    // integral_{-R}^{R} = 2 integral_0^R by evenness; +-n lines fold with
    // multiplicity 2 for n >= 1.
    const double mult = (n == 0.0 ? 1.0 : 2.0) * 2.0 / kPi;
    for (int j = 0; j < ny; ++j) {
      const double cy = std::cos(n * kPi * field.y(j)) * mult;
      for (int i = 0; i < nx; ++i) field.at(i, j) += line[i].value() * cy;
    }
  }
  for (double v : field.values)
    if (!std::isfinite(v))
      throw NumericalError("synthesize: non-finite field value");
  return field;
}

}  // namespace heatsrc
