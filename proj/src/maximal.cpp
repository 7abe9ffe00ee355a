#include "wfx/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "wfx/error.hpp"

namespace wfx {

namespace {

constexpr double kNone = -std::numeric_limits<double>::infinity();

// out[i] = max of vals[k] over positions k whose window [k*stride, k*stride+len)
// contains i.  Window bounds move monotonically with i, so a deque suffices.
void window_max(const double* vals, std::size_t count, std::size_t len, std::size_t stride, std::size_t n,
                double* out, std::size_t out_step) {
  std::deque<std::size_t> dq;
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t kmax_raw = i / stride;
    const std::size_t kmin = i + 1 >= len ? (i + 1 - len + stride - 1) / stride : 0;
    const std::size_t kmax = std::min(kmax_raw, count == 0 ? 0 : count - 1);
    while (next < count && next <= kmax) {
      while (!dq.empty() && vals[dq.back()] <= vals[next]) dq.pop_back();
      dq.push_back(next++);
    }
    while (!dq.empty() && dq.front() < kmin) dq.pop_front();
    out[i * out_step] = (dq.empty() || count == 0 || kmin > kmax) ? kNone : vals[dq.front()];
  }
}

}  // namespace

std::vector<double> sup_over_containing(const Basis& basis, const std::function<double(const Box&)>& value) {
  const auto& s = basis.space();
  const std::size_t nx = s.extent(0), ny = s.extent(1);
  std::vector<double> best(s.size(), kNone);
  std::vector<double> vals, rows, col_in, col_out(ny);
  for (const auto& fam : basis.families()) {
    if (fam.len[0] > nx || fam.len[1] > ny) continue;
    const std::size_t px = (nx - fam.len[0]) / fam.stride[0] + 1;
    const std::size_t py = (ny - fam.len[1]) / fam.stride[1] + 1;
    vals.assign(px * py, kNone);
    for (std::size_t j = 0; j < py; ++j) {
      for (std::size_t k = 0; k < px; ++k) {
        const std::size_t x = k * fam.stride[0], y = j * fam.stride[1];
        const Box b{{x, y}, {x + fam.len[0], y + fam.len[1]}};
        if (basis.mass(b) > 0) vals[k + px * j] = value(b);
      }
    }
    // Rows: positions along x → cells along x, one row per y-position.
    rows.assign(nx * py, kNone);
    for (std::size_t j = 0; j < py; ++j)
      window_max(vals.data() + px * j, px, fam.len[0], fam.stride[0], nx, rows.data() + nx * j, 1);
    // Columns: y-positions → cells along y.
    col_in.resize(py);
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t j = 0; j < py; ++j) col_in[j] = rows[x + nx * j];
      window_max(col_in.data(), py, fam.len[1], fam.stride[1], ny, col_out.data(), 1);
      for (std::size_t y = 0; y < ny; ++y) {
        double& b = best[x + nx * y];
        b = std::max(b, col_out[y]);
      }
    }
  }
  for (const auto& box : basis.explicit_boxes()) {
    const double v = value(box);
    for (std::size_t y = box.lo[1]; y < box.hi[1]; ++y)
      for (std::size_t x = box.lo[0]; x < box.hi[0]; ++x) best[x + nx * y] = std::max(best[x + nx * y], v);
  }
  for (double& b : best)
    if (b == kNone) b = 0.0;
  return best;
}

GridFunction maximal(const GridFunction& f, const Basis& basis) {
  if (!f.grid().same_grid(basis.space())) throw DimensionError("function and basis live on different spaces");
  std::vector<double> a(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) a[i] = std::abs(f[i]);
  const BoxSums sums(f.grid(), a);
  auto out = sup_over_containing(basis, [&](const Box& b) {
    return static_cast<double>(sums.sum(b) / static_cast<long double>(basis.mass(b)));
  });
  return GridFunction(f.space(), std::move(out));
}

GridFunction dual_maximal(const GridFunction& f, const Basis& basis, const Weight& v) {
  return divide(maximal(multiply(f, v), basis), v);
}

GridFunction iterate_maximal(const GridFunction& f, const Basis& basis, int k) {
  if (k < 0) throw ParameterError("iteration count must be nonnegative");
  GridFunction g = f;
  for (int i = 0; i < k; ++i) g = maximal(g, basis);
  return g;
}

GridFunction centered_maximal(const GridFunction& f) {
  const auto& s = f.grid();
  const std::size_t nx = s.extent(0), ny = s.extent(1);
  std::vector<double> a(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) a[i] = std::abs(f[i]);
  const BoxSums sums(s, a);
  const BoxSums mass(s, std::vector<double>(s.size(), 1.0));
  std::vector<double> out(s.size(), 0.0);
  const std::size_t reach = std::max(nx, ny);
  for (std::size_t y = 0; y < ny; ++y) {
    for (std::size_t x = 0; x < nx; ++x) {
      double best = 0.0;
      for (std::size_t r = 0; r <= reach; ++r) {
        Box b;
        b.lo[0] = x >= r ? x - r : 0;
        b.hi[0] = std::min(nx, x + r + 1);
        if (s.dim() == 2) {
          b.lo[1] = y >= r ? y - r : 0;
          b.hi[1] = std::min(ny, y + r + 1);
        }
        const long double m = mass.sum(b);
        if (m > 0) best = std::max(best, static_cast<double>(sums.sum(b) / m));
      }
      out[x + nx * y] = best;
    }
  }
  return GridFunction(f.space(), std::move(out));
}

GridFunction orlicz_maximal(const GridFunction& f, const Basis& basis, const YoungFunction& phi) {
  const auto& s = f.grid();
  if (!s.same_grid(basis.space())) throw DimensionError("function and basis live on different spaces");
  const double fmax = f.max_abs();
  if (fmax == 0.0) return GridFunction::zeros(f.space());
  const double tol = 1e-12 * fmax;
  const double inv1 = phi.inverse(1.0);
  const std::size_t nx = s.extent(0);
  auto out = sup_over_containing(basis, [&](const Box& b) {
    double lmax = 0.0;
    long double sum_abs = 0.0L, mass = 0.0L;
    for (std::size_t y = b.lo[1]; y < b.hi[1]; ++y)
      for (std::size_t x = b.lo[0]; x < b.hi[0]; ++x) {
        const std::size_t i = x + nx * y;
        lmax = std::max(lmax, s.mass(i) > 0 ? std::abs(f[i]) : 0.0);
        sum_abs += std::abs(f[i]) * static_cast<long double>(s.mass(i));
        mass += s.mass(i);
      }
    if (lmax == 0.0) return 0.0;
    auto avg_phi = [&](double lambda) {
      long double acc = 0.0L;
      for (std::size_t y = b.lo[1]; y < b.hi[1]; ++y)
        for (std::size_t x = b.lo[0]; x < b.hi[0]; ++x) {
          const std::size_t i = x + nx * y;
          if (s.mass(i) > 0) acc += static_cast<long double>(phi(std::abs(f[i]) / lambda)) * s.mass(i);
        }
      return static_cast<double>(acc / mass);
    };
    // Jensen gives the lower end, Φ(max/λ) ≤ 1 the upper end.
    double lo = static_cast<double>(sum_abs / mass) / inv1, hi = lmax / inv1;
    lo *= 1.0 - 1e-12;
    hi *= 1.0 + 1e-12;
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      if (avg_phi(mid) > 1.0) lo = mid;
      else hi = mid;
    }
    return hi;
  });
  return GridFunction(f.space(), std::move(out));
}

}  // namespace wfx
