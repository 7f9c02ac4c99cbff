#include "heatsrc/cosine_series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace heatsrc {

namespace {

constexpr double kPi = std::numbers::pi;

bool mode_less(const CosineMode& a, const CosineMode& b) {
  if (a.k != b.k) return a.k < b.k;
  return a.n < b.n;
}

// 1 for index 0, 1/2 for any positive index: the squared norm of cos(j pi .)
// on (0, 1).
double wfac(double j) { return j == 0.0 ? 1.0 : 0.5; }

// Squared norm of the derivative factor: 0 for index 0, 1/2 otherwise
// (||sin(j pi .)||^2 on (0,1) for j >= 1).
double sfac(double j) { return j == 0.0 ? 0.0 : 0.5; }

// cos(j pi v) for possibly huge integral j: reduce j*v modulo 2 before the
// cosine. The product j*v is split into rounded + exact-residual parts with
// fma so the reduction loses nothing beyond the representation of v itself.
double cos_mode(double j, double v) {
  if (j == 0.0) return 1.0;
  const double hi = j * v;
  const double lo = std::fma(j, v, -hi);
  const double r = std::fmod(hi, 2.0) + lo;
  return std::cos(kPi * r);
}

}  // namespace

void CosineSeries2D::add_term(double k, double n, double c) {
  CosineMode key{k, n, c};
  auto it = std::lower_bound(terms.begin(), terms.end(), key, mode_less);
  if (it != terms.end() && it->k == k && it->n == n)
    it->c += c;
  else
    terms.insert(it, key);
}

void CosineSeries2D::normalize() {
  terms.erase(std::remove_if(terms.begin(), terms.end(),
                             [](const CosineMode& t) { return t.c == 0.0; }),
              terms.end());
}

double CosineSeries2D::coefficient(double k, double n) const {
  CosineMode key{k, n, 0.0};
  auto it = std::lower_bound(terms.begin(), terms.end(), key, mode_less);
  if (it != terms.end() && it->k == k && it->n == n) return it->c;
  return 0.0;
}

double CosineSeries2D::evaluate(double x, double y) const {
  double sum = 0.0;
  for (const auto& t : terms) sum += t.c * cos_mode(t.k, x) * cos_mode(t.n, y);
  return sum;
}

double CosineSeries2D::l2_norm_sq() const {
  double sum = 0.0;
  for (const auto& t : terms) sum += t.c * t.c * wfac(t.k) * wfac(t.n);
  return sum;
}

double CosineSeries2D::h1_norm_sq() const {
  double sum = l2_norm_sq();
  for (const auto& t : terms) {
    sum += t.c * t.c * (t.k * kPi) * (t.k * kPi) * sfac(t.k) * wfac(t.n);
    sum += t.c * t.c * (t.n * kPi) * (t.n * kPi) * wfac(t.k) * sfac(t.n);
  }
  return sum;
}

std::vector<double> CosineSeries2D::y_modes() const {
  std::vector<double> out;
  for (const auto& t : terms) out.push_back(t.n);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

CosineSeries2D CosineSeries2D::scaled(double factor) const {
  CosineSeries2D out = *this;
  for (auto& t : out.terms) t.c *= factor;
  return out;
}

namespace {

// cos(j pi i/(d-1)) for integral j and grid index i, via exact integer phase
// reduction: j mod 2(d-1) is an exact fmod, the small products stay integral,
// so the cosine argument is exact even for j far beyond 2^53.
double cos_mode_grid(double j, int i, int d) {
  if (j == 0.0 || i == 0) return 1.0;
  const double period = 2.0 * (d - 1);
  const double jr = std::fmod(j, period);
  const double phase = std::fmod(jr * i, period);
  return std::cos(kPi * phase / (d - 1));
}

}  // namespace

GridFunction2D CosineSeries2D::rasterize(int nx, int ny) const {
  validate();
  GridFunction2D g = GridFunction2D::zeros(nx, ny);
  for (const auto& t : terms)
    for (int i = 0; i < nx; ++i) {
      const double cx = t.c * cos_mode_grid(t.k, i, nx);
      for (int j = 0; j < ny; ++j) g.at(i, j) += cx * cos_mode_grid(t.n, j, ny);
    }
  g.validate();
  return g;
}

void CosineSeries2D::validate() const {
  for (size_t i = 0; i < terms.size(); ++i) {
    const auto& t = terms[i];
    if (!(t.k >= 0.0) || !(t.n >= 0.0))
      throw std::invalid_argument("CosineSeries2D: negative mode index");
    // Indices at or above 2^53 are integral by construction of doubles.
    if (t.k < 9.007199254740992e15 && t.k != std::floor(t.k))
      throw std::invalid_argument("CosineSeries2D: non-integral x-mode");
    if (t.n < 9.007199254740992e15 && t.n != std::floor(t.n))
      throw std::invalid_argument("CosineSeries2D: non-integral y-mode");
    if (!std::isfinite(t.c))
      throw std::invalid_argument("CosineSeries2D: non-finite coefficient");
    if (i > 0 && !mode_less(terms[i - 1], t))
      throw std::invalid_argument("CosineSeries2D: terms unsorted/duplicated");
  }
}

}  // namespace heatsrc
