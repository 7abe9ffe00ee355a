#include "wfx/verify/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "wfx/error.hpp"

namespace wfx::oracle {

std::vector<Box> boxes(const MeasureSpace& s, BasisKind kind) {
  const std::size_t nx = s.extent(0), ny = s.extent(1);
  const bool two_d = s.dim() == 2;
  std::vector<Box> out;
  auto push = [&](std::size_t x0, std::size_t x1, std::size_t y0, std::size_t y1) {
    out.push_back(Box{{x0, y0}, {x1, y1}});
  };
  switch (kind) {
    case BasisKind::dyadic:
      for (std::size_t L = 1; L <= (two_d ? std::min(nx, ny) : nx); L *= 2)
        for (std::size_t y = 0; y + (two_d ? L : 1) <= ny; y += (two_d ? L : 1))
          for (std::size_t x = 0; x + L <= nx; x += L) push(x, x + L, y, y + (two_d ? L : 1));
      break;
    case BasisKind::intervals:
    case BasisKind::cubes:
      for (std::size_t x0 = 0; x0 < nx; ++x0)
        for (std::size_t x1 = x0 + 1; x1 <= nx; ++x1) {
          const std::size_t L = x1 - x0;
          if (!two_d) {
            push(x0, x1, 0, 1);
            continue;
          }
          for (std::size_t y0 = 0; y0 + L <= ny; ++y0) push(x0, x1, y0, y0 + L);
        }
      break;
    case BasisKind::rectangles:
      for (std::size_t x0 = 0; x0 < nx; ++x0)
        for (std::size_t x1 = x0 + 1; x1 <= nx; ++x1)
          for (std::size_t y0 = 0; y0 < ny; ++y0)
            for (std::size_t y1 = y0 + 1; y1 <= ny; ++y1) push(x0, x1, y0, y1);
      break;
    case BasisKind::custom:
      throw ParameterError("the oracle has no custom bases");
  }
  return out;
}

namespace {

std::vector<std::size_t> cells_of(const MeasureSpace& s, const Box& B) {
  std::vector<std::size_t> c;
  for (std::size_t y = B.lo[1]; y < B.hi[1]; ++y)
    for (std::size_t x = B.lo[0]; x < B.hi[0]; ++x) c.push_back(s.index(x, y));
  return c;
}

std::vector<double> raw(const GridFunction& f) { return {f.values().begin(), f.values().end()}; }

std::vector<double> pow_all(const std::vector<double>& w, double e) {
  std::vector<double> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = std::pow(w[i], e);
  return out;
}

// sup over boxes of positive mass of score(B).
double sup_boxes(const MeasureSpace& s, BasisKind kind, const std::function<double(const Box&)>& score) {
  double best = 0.0;
  bool any = false;
  for (const auto& B : boxes(s, kind)) {
    double m = 0.0;
    for (std::size_t i : cells_of(s, B)) m += s.mass(i);
    if (!(m > 0.0)) continue;
    best = any ? std::max(best, score(B)) : score(B);
    any = true;
  }
  return best;
}

}  // namespace

double mean(const MeasureSpace& s, const std::vector<double>& f, const Box& B) {
  double num = 0.0, den = 0.0;
  for (std::size_t i : cells_of(s, B)) {
    num += f[i] * s.mass(i);
    den += s.mass(i);
  }
  return num / den;
}

double ap(const Weight& w, BasisKind kind, double p) {
  const auto& s = w.grid();
  const auto a = raw(w.function()), b = pow_all(a, 1.0 - p / (p - 1.0));
  return sup_boxes(s, kind, [&](const Box& B) { return mean(s, a, B) * std::pow(mean(s, b, B), p - 1.0); });
}

double a1(const Weight& w, BasisKind kind) {
  const auto M = maximal(w.function(), kind);
  double best = 0.0;
  for (std::size_t i = 0; i < M.size(); ++i)
    if (w.grid().mass(i) > 0.0) best = std::max(best, M[i] / w[i]);
  return best;
}

double rh(const Weight& w, BasisKind kind, double s_exp) {
  const auto& s = w.grid();
  const auto a = raw(w.function()), b = pow_all(a, s_exp);
  return sup_boxes(s, kind, [&](const Box& B) { return std::pow(mean(s, b, B), 1.0 / s_exp) / mean(s, a, B); });
}

double apq(const Weight& w, BasisKind kind, double p, double q) {
  const auto& s = w.grid();
  const double pp = p / (p - 1.0);
  const auto a = pow_all(raw(w.function()), q), b = pow_all(raw(w.function()), -pp);
  return sup_boxes(s, kind, [&](const Box& B) { return mean(s, a, B) * std::pow(mean(s, b, B), q / pp); });
}

double bmo(const GridFunction& b, BasisKind kind) {
  const auto& s = b.grid();
  const auto v = raw(b);
  return sup_boxes(s, kind, [&](const Box& B) {
    const double m = mean(s, v, B);
    std::vector<double> dev(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) dev[i] = std::abs(v[i] - m);
    return mean(s, dev, B);
  });
}

std::vector<double> maximal(const GridFunction& f, BasisKind kind) {
  const auto& s = f.grid();
  std::vector<double> a(f.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(f[i]);
  std::vector<double> M(f.size(), 0.0);
  for (const auto& B : boxes(s, kind)) {
    double m = 0.0;
    const auto cells = cells_of(s, B);
    for (std::size_t i : cells) m += s.mass(i);
    if (!(m > 0.0)) continue;
    const double avg = mean(s, a, B);
    for (std::size_t i : cells) M[i] = std::max(M[i], avg);
  }
  return M;
}

namespace {

double young(const YoungFunction& phi, double t) {
  if (t <= 0.0) return 0.0;
  switch (phi.family()) {
    case YoungFunction::Family::power: return std::pow(t, phi.p());
    case YoungFunction::Family::linear: return t;
    case YoungFunction::Family::plog: return std::pow(t, phi.p()) * std::pow(std::log(std::exp(1.0) + t), phi.alpha());
    case YoungFunction::Family::minmax:
      if (phi.take_max()) return std::max(std::pow(t, phi.p()), std::pow(t, phi.q()));
      // Convex minorant of min(t^p, t^q): t^q below 1, tangent-matched power above.
      if (t <= 1.0) return std::pow(t, phi.q());
      return phi.q() / phi.p() * std::pow(t, phi.p()) + 1.0 - phi.q() / phi.p();
    case YoungFunction::Family::rescaled: return young(phi.base(), std::pow(t, phi.r()));
    default: return phi(t);
  }
}

// Smallest λ with modular(λ) ≤ 1, bisected until the bracket stops shrinking.
double luxemburg(const std::function<double(double)>& modular) {
  double lo = 0.0, hi = 1.0;
  while (modular(hi) > 1.0) hi *= 2.0;
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    (modular(mid) > 1.0 ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace

double norm(const GridFunction& f, const SpaceSpec& spec) {
  const auto& s = f.grid();
  const std::size_t n = f.size();
  const double r = spec.r();
  std::vector<double> g(n), m(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = std::pow(std::abs(f[i] * spec.u()[i]), r);
    m[i] = s.mass(i) * spec.v()[i];
  }
  double result = 0.0;
  switch (spec.family()) {
    case SpaceFamily::lp: {
      const double p = spec.p();
      if (std::isinf(p)) {
        for (std::size_t i = 0; i < n; ++i)
          if (m[i] > 0.0) result = std::max(result, g[i]);
      } else {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += std::pow(g[i], p) * m[i];
        result = std::pow(acc, 1.0 / p);
      }
      break;
    }
    case SpaceFamily::lorentz: {
      // f* takes the value g_i on [ν(g_i), ν(g_i) + v({g = g_i})).
      const double p = spec.p(), q = spec.q();
      std::vector<double> levels;
      for (std::size_t i = 0; i < n; ++i)
        if (m[i] > 0.0 && g[i] > 0.0) levels.push_back(g[i]);
      std::sort(levels.begin(), levels.end());
      levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
      double acc = 0.0;
      for (double c : levels) {
        double above = 0.0, at = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (g[i] > c) above += m[i];
          if (g[i] == c) at += m[i];
        }
        const double a = above, b = above + at;
        if (std::isinf(q)) {
          result = std::max(result, c * std::pow(b, 1.0 / p));
        } else {
          // ∫_a^b (t^{1/p} c)^q dt/t
          acc += std::pow(c, q) * (p / q) * (std::pow(b, q / p) - std::pow(a, q / p));
        }
      }
      if (!std::isinf(q)) result = std::pow(acc, 1.0 / q);
      break;
    }
    case SpaceFamily::orlicz: {
      const YoungFunction& phi = spec.phi();
      bool nonzero = false;
      for (std::size_t i = 0; i < n; ++i) nonzero = nonzero || (g[i] > 0.0 && m[i] > 0.0);
      if (!nonzero) break;
      result = luxemburg([&](double lambda) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
          if (g[i] > 0.0) acc += young(phi, g[i] / lambda) * m[i];
        return acc;
      });
      break;
    }
    case SpaceFamily::varexp: {
      const auto& pe = spec.exponents();
      bool nonzero = false;
      for (std::size_t i = 0; i < n; ++i) nonzero = nonzero || (g[i] > 0.0 && m[i] > 0.0);
      if (!nonzero) break;
      result = luxemburg([&](double lambda) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
          if (g[i] > 0.0) acc += std::pow(g[i] / lambda, pe[i]) * m[i];
        return acc;
      });
      break;
    }
  }
  return std::pow(result, 1.0 / r);
}

}  // namespace wfx::oracle
