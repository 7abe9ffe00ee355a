#include "wfx/core_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "wfx/error.hpp"

namespace wfx {

namespace {

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

SpacePtr MeasureSpace::with_masses(std::vector<std::size_t> n, double h, std::vector<double> mu) {
  if (n.empty() || n.size() > 2) throw ParameterError("space dimension must be 1 or 2");
  if (!(h > 0.0) || !std::isfinite(h)) throw ParameterError("cell width must be positive and finite");
  std::size_t cells = 1;
  for (std::size_t k : n) {
    if (!is_power_of_two(k)) throw ParameterError("cell count " + std::to_string(k) + " is not a power of two");
    cells *= k;
  }
  if (mu.size() != cells) throw DimensionError("mass vector has " + std::to_string(mu.size()) + " entries, expected " + std::to_string(cells));
  double total = 0.0;
  for (double m : mu) {
    if (!(m >= 0.0) || !std::isfinite(m)) throw InputError("cell masses must be finite and nonnegative");
    total += m;
  }
  if (!(total > 0.0)) throw InputError("total mass must be positive");
  auto s = std::shared_ptr<MeasureSpace>(new MeasureSpace());
  s->dim_ = static_cast<int>(n.size());
  s->n_[0] = n[0];
  s->n_[1] = n.size() == 2 ? n[1] : 1;
  s->h_ = h;
  s->mu_ = std::move(mu);
  s->total_ = total;
  const double vol = s->dim_ == 1 ? h : h * h;
  s->lebesgue_ = std::all_of(s->mu_.begin(), s->mu_.end(), [vol](double m) { return m == vol; });
  return s;
}

SpacePtr MeasureSpace::lebesgue(std::vector<std::size_t> n, double h) {
  std::size_t cells = 1;
  for (std::size_t k : n) cells *= k;
  const double vol = n.size() == 1 ? h : h * h;
  return with_masses(std::move(n), h, std::vector<double>(cells, vol));
}

double MeasureSpace::center(std::size_t i, int axis) const {
  return (static_cast<double>(coord(i, axis)) + 0.5) * h_;
}

bool MeasureSpace::same_grid(const MeasureSpace& o) const {
  if (this == &o) return true;
  return dim_ == o.dim_ && n_[0] == o.n_[0] && n_[1] == o.n_[1] && h_ == o.h_ && mu_ == o.mu_;
}

GridFunction::GridFunction(SpacePtr space, std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (!space_) throw ParameterError("grid function needs a space");
  if (values_.size() != space_->size())
    throw DimensionError("grid function has " + std::to_string(values_.size()) + " values on a grid of " +
                         std::to_string(space_->size()) + " cells");
  for (double v : values_)
    if (!std::isfinite(v)) throw InputError("grid function values must be finite");
}

GridFunction GridFunction::constant(SpacePtr space, double c) {
  const std::size_t n = space->size();
  return GridFunction(std::move(space), std::vector<double>(n, c));
}

GridFunction GridFunction::from_complex(SpacePtr space, std::span<const std::complex<double>> values) {
  std::vector<double> mag(values.size());
  std::transform(values.begin(), values.end(), mag.begin(), [](std::complex<double> z) { return std::abs(z); });
  return GridFunction(std::move(space), std::move(mag));
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double GridFunction::min() const { return *std::min_element(values_.begin(), values_.end()); }

bool GridFunction::is_nonnegative() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v >= 0.0; });
}

Weight::Weight(GridFunction f) : f_(std::move(f)) {
  for (double v : f_.values())
    if (!(v > 0.0)) throw InputError("weights must be strictly positive");
}

bool Weight::is_constant() const {
  auto v = values();
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; });
}

void require_same_space(const GridFunction& a, const GridFunction& b) {
  if (!a.grid().same_grid(b.grid())) throw DimensionError("grid functions live on different spaces");
}

double integrate(const GridFunction& f, const Weight* w) {
  if (w) require_same_space(f, *w);
  const auto& s = f.grid();
  long double acc = 0.0L;
  for (std::size_t i = 0; i < f.size(); ++i) {
    long double term = static_cast<long double>(f[i]) * s.mass(i);
    if (w) term *= (*w)[i];
    acc += term;
  }
  return static_cast<double>(acc);
}

double restrict_mass(std::span<const std::size_t> E, const Weight& w) {
  if (E.empty()) throw ParameterError("restrict_mass needs a nonempty cell set");
  const auto& s = w.function().grid();
  long double acc = 0.0L;
  for (std::size_t i : E) {
    if (i >= s.size()) throw IndexError("cell index " + std::to_string(i) + " out of range");
    acc += static_cast<long double>(w[i]) * s.mass(i);
  }
  return static_cast<double>(acc);
}

GridFunction map(const GridFunction& f, const std::function<double(double)>& fn) {
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = fn(f[i]);
  return GridFunction(f.space(), std::move(out));
}

GridFunction abs(const GridFunction& f) {
  return map(f, [](double x) { return std::abs(x); });
}

GridFunction scale(const GridFunction& f, double c) {
  return map(f, [c](double x) { return c * x; });
}

namespace {

template <class Op>
GridFunction zip(const GridFunction& a, const GridFunction& b, Op op) {
  require_same_space(a, b);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = op(a[i], b[i]);
  return GridFunction(a.space(), std::move(out));
}

}  // namespace

GridFunction add(const GridFunction& a, const GridFunction& b) {
  return zip(a, b, [](double x, double y) { return x + y; });
}

GridFunction multiply(const GridFunction& a, const GridFunction& b) {
  return zip(a, b, [](double x, double y) { return x * y; });
}

GridFunction divide(const GridFunction& a, const GridFunction& b) {
  return zip(a, b, [](double x, double y) { return x / y; });
}

GridFunction power(const GridFunction& f, double r) {
  return map(f, [r](double x) {
    const double a = std::abs(x);
    if (a == 0.0) return r > 0.0 ? 0.0 : (r == 0.0 ? 1.0 : INFINITY);
    return std::exp(r * std::log(a));
  });
}

Weight power(const Weight& w, double r) {
  return Weight(map(w.function(), [r](double x) { return std::exp(r * std::log(x)); }));
}

Weight multiply(const Weight& a, const Weight& b) { return Weight(multiply(a.function(), b.function())); }

GridFunction indicator(const SpacePtr& space, std::span<const std::size_t> cells) {
  std::vector<double> v(space->size(), 0.0);
  for (std::size_t i : cells) {
    if (i >= v.size()) throw IndexError("cell index " + std::to_string(i) + " out of range");
    v[i] = 1.0;
  }
  return GridFunction(space, std::move(v));
}

double Rng::normal() {
  // Box-Muller; one variate per call keeps the stream simple.
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace wfx
