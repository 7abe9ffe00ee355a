#include "wfx/muckenhoupt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wfx/error.hpp"
#include "wfx/maximal.hpp"

namespace wfx {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// exp(e·log w − shift) with shift = max of e·log w, so the largest entry is 1.
struct ScaledPower {
  std::vector<double> values;
  double log_scale = 0.0;
};

ScaledPower scaled_power(const Weight& w, double e) {
  ScaledPower out;
  out.values.resize(w.size());
  double top = -kInf;
  for (std::size_t i = 0; i < w.size(); ++i) {
    out.values[i] = e * std::log(w[i]);
    top = std::max(top, out.values[i]);
  }
  for (double& v : out.values) v = std::exp(v - top);
  out.log_scale = top;
  return out;
}

void require_basis_space(const GridFunction& w, const Basis& basis) {
  if (!w.grid().same_grid(basis.space())) throw DimensionError("weight and basis live on different spaces");
}

// sup_B of exp(a·log⨍X + b·log⨍Y) where X = w^ex, Y = w^ey, all in log space.
Constant product_sup(const Weight& w, const Basis& basis, double ex, double a, double ey, double b) {
  require_basis_space(w, basis);
  const auto X = scaled_power(w, ex);
  const auto Y = scaled_power(w, ey);
  const BoxSums sx(w.grid(), X.values), sy(w.grid(), Y.values);
  double best = -kInf;
  Box arg{};
  basis.visit([&](const Box& box) {
    const long double m = basis.mass(box);
    const double lx = std::log(static_cast<double>(sx.sum(box) / m));
    const double ly = std::log(static_cast<double>(sy.sum(box) / m));
    const double v = a * lx + b * ly;
    if (v > best) {
      best = v;
      arg = box;
    }
  });
  return {std::exp(best + a * X.log_scale + b * Y.log_scale), arg};
}

}  // namespace

double conjugate(double p) {
  if (p == 1.0) return kInf;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

Constant ap_constant(const Weight& w, const Basis& basis, double p) {
  if (!(p > 1.0)) throw ParameterError("A_p needs p > 1");
  if (std::isinf(p)) throw ParameterError("A_p needs finite p");
  return product_sup(w, basis, 1.0, 1.0, 1.0 - conjugate(p), p - 1.0);
}

Constant a1_constant(const Weight& w, const Basis& basis) {
  require_basis_space(w, basis);
  const auto Mw = maximal(w.function(), basis);
  const auto& s = w.grid();
  double best = 0.0;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (Mw[i] == 0.0 || s.mass(i) == 0.0) continue;  // null cell or outside every element
    const double r = Mw[i] / w[i];
    if (r > best) {
      best = r;
      arg = i;
    }
  }
  Box b;
  b.lo = std::array<std::size_t, 2>{s.coord(arg, 0), s.coord(arg, 1)};
  b.hi = std::array<std::size_t, 2>{b.lo[0] + 1, b.lo[1] + 1};
  return {best, b};
}

AinfConstant ainf_constant(const Weight& w, const Basis& basis, double p_max) {
  if (!(p_max > 1.0) || std::isinf(p_max)) throw ParameterError("A_inf needs 1 < p_max < ∞");
  auto f = [&](double p) { return ap_constant(w, basis, p).value; };
  AinfConstant best{p_max, f(p_max)};
  auto consider = [&](double p, double v) {
    if (v < best.value || (v == best.value && p > best.p)) best = {p, v};
  };
  // Coarse scan on a log grid in p − 1.
  constexpr int kScan = 48;
  const double l0 = std::log(1e-3), l1 = std::log(p_max - 1.0);
  double step = (l1 - l0) / kScan;
  double pbest = p_max;
  double vbest = best.value;
  for (int k = 0; k < kScan; ++k) {
    const double p = 1.0 + std::exp(l0 + step * k);
    const double v = f(p);
    consider(p, v);
    if (v < vbest) {
      vbest = v;
      pbest = p;
    }
  }
  // Golden-section refinement on the neighbouring scan cell.
  double a = std::max(1.0 + 1e-9, 1.0 + (pbest - 1.0) * std::exp(-step));
  double b = std::min(p_max, 1.0 + (pbest - 1.0) * std::exp(step));
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-6) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  consider(c, fc);
  consider(d, fd);
  return best;
}

Constant rh_constant(const Weight& w, const Basis& basis, double s) {
  if (!(s > 1.0) || std::isinf(s)) throw ParameterError("RH_s needs 1 < s < ∞");
  return product_sup(w, basis, s, 1.0 / s, 1.0, -1.0);
}

Constant rhinf_constant(const Weight& w, const Basis& basis) {
  require_basis_space(w, basis);
  const BoxSums sw(w.grid(), w.values());
  const std::size_t nx = w.grid().extent(0);
  double best = 0.0;
  Box arg{};
  basis.visit([&](const Box& box) {
    double top = 0.0;
    for (std::size_t y = box.lo[1]; y < box.hi[1]; ++y)
      for (std::size_t x = box.lo[0]; x < box.hi[0]; ++x)
        if (w.grid().mass(x + nx * y) > 0) top = std::max(top, w[x + nx * y]);
    const double v = top / static_cast<double>(sw.sum(box) / basis.mass(box));
    if (v > best) {
      best = v;
      arg = box;
    }
  });
  return {best, arg};
}

Constant apq_constant(const Weight& w, const Basis& basis, double p, double q) {
  if (!(p > 1.0) || std::isinf(p)) throw ParameterError("A_{p,q} needs 1 < p < ∞");
  if (!(q >= 1.0) || std::isinf(q)) throw ParameterError("A_{p,q} needs 1 ≤ q < ∞");
  const double pc = conjugate(p);
  return product_sup(w, basis, q, 1.0, -pc, q / pc);
}

Constant bmo_norm(const GridFunction& b, const Basis& basis) {
  if (!b.grid().same_grid(basis.space())) throw DimensionError("function and basis live on different spaces");
  const auto& s = b.grid();
  const BoxSums sb(s, b.values());
  const std::size_t nx = s.extent(0);
  double best = 0.0;
  Box arg{};
  basis.visit([&](const Box& box) {
    const long double m = basis.mass(box);
    const long double mean = sb.sum(box) / m;
    long double acc = 0.0L;
    for (std::size_t y = box.lo[1]; y < box.hi[1]; ++y)
      for (std::size_t x = box.lo[0]; x < box.hi[0]; ++x) {
        const std::size_t i = x + nx * y;
        acc += std::abs(b[i] - mean) * static_cast<long double>(s.mass(i));
      }
    const double v = static_cast<double>(acc / m);
    if (v > best) {
      best = v;
      arg = box;
    }
  });
  return {best, arg};
}

Weight make_power_weight(const SpacePtr& space, double a, std::optional<double> origin) {
  std::vector<double> v(space->size());
  const double o = origin.value_or(0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    double r2 = 0.0;
    for (int ax = 0; ax < space->dim(); ++ax) {
      const double d = space->center(i, ax) - o;
      r2 += d * d;
    }
    v[i] = a == 0.0 ? 1.0 : std::exp(0.5 * a * std::log(r2));
  }
  return Weight(space, std::move(v));
}

Weight make_random_a1ish(const SpacePtr& space, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> g(space->size());
  for (double& x : g) x = std::exp(3.0 * rng.uniform() - 1.5) * (rng.uniform() < 0.1 ? 20.0 : 1.0);
  const double delta = rng.uniform(0.2, 0.9);
  const auto basis = Basis::enumerate(space, space->dim() == 1 ? BasisKind::intervals : BasisKind::cubes);
  const auto Mg = maximal(GridFunction(space, std::move(g)), basis);
  return power(Weight(Mg), delta);
}

}  // namespace wfx
