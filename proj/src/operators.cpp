#include "wfx/operators.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include "wfx/error.hpp"
#include "wfx/maximal.hpp"
#include "wfx/parallel.hpp"

namespace wfx {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

namespace {

void require_1d(const GridFunction& f, const char* what) {
  if (f.grid().dim() != 1) throw DimensionError(std::string(what) + " is defined on 1D grids only");
}

// (1/π) Σ_{j≠i} kernel(i, j) f_j.
template <class K>
GridFunction pv_sum(const GridFunction& f, K&& kernel) {
  const std::size_t n = f.size();
  std::vector<double> out(n);
  parallel_for(n, [&](std::size_t i) {
    long double acc = 0.0L;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) acc += static_cast<long double>(kernel(i, j)) * f[j];
    out[i] = static_cast<double>(acc / std::numbers::pi_v<long double>);
  });
  return GridFunction(f.space(), std::move(out));
}

}  // namespace

GridFunction hilbert(const GridFunction& f) {
  require_1d(f, "the Hilbert transform");
  return pv_sum(f, [](std::size_t i, std::size_t j) {
    return 1.0 / (static_cast<double>(i) - static_cast<double>(j));
  });
}

GridFunction commutator(std::string_view T, const GridFunction& b, int k, const GridFunction& f) {
  if (T != "hilbert") throw ParameterError("unsupported operator for commutator: " + std::string(T));
  if (k < 0) throw ParameterError("commutator order must be nonnegative");
  require_same_space(b, f);
  require_1d(f, "the commutator");
  if (k == 0) return hilbert(f);
  return pv_sum(f, [&](std::size_t i, std::size_t j) {
    return std::pow(b[i] - b[j], k) / (static_cast<double>(i) - static_cast<double>(j));
  });
}

GridFunction derivative(const GridFunction& F) {
  require_1d(F, "derivative");
  const std::size_t n = F.size();
  const double h = F.grid().cell_width();
  if (n < 2) return GridFunction::zeros(F.space());
  std::vector<double> d(n);
  d[0] = (F[1] - F[0]) / h;
  d[n - 1] = (F[n - 1] - F[n - 2]) / h;
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (F[i + 1] - F[i - 1]) / (2.0 * h);
  return GridFunction(F.space(), std::move(d));
}

CalderonResult calderon_commutator(const GridFunction& F, const GridFunction& f) {
  require_same_space(F, f);
  require_1d(f, "the Calderón commutator");
  const double h = f.grid().cell_width();
  const GridFunction dF = derivative(F);
  auto dist = [h](std::size_t i, std::size_t j) { return (static_cast<double>(i) - static_cast<double>(j)) * h; };
  GridFunction A = pv_sum(f, [&](std::size_t i, std::size_t j) {
    const double d = dist(i, j);
    return (F[i] - F[j] - dF[j] * d) / (d * d) * h;
  });
  GridFunction C = pv_sum(f, [&](std::size_t i, std::size_t j) {
    const double d = dist(i, j);
    return (F[i] - F[j]) / (d * d) * h;
  });
  const GridFunction HFf = hilbert(multiply(dF, f));
  double worst = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) worst = std::max(worst, std::abs(C[i] - A[i] - HFf[i]));
  const double scale_ref = std::max(1.0, C.max_abs());
  return {std::move(A), std::move(C), worst / scale_ref};
}

// ---------------------------------------------------------------------------
// Poisson extension

double poisson_kernel(double x, double t) { return t / (std::numbers::pi * (t * t + x * x)); }

std::vector<double> default_levels(const MeasureSpace& boundary) {
  const double h = boundary.cell_width();
  const double top = 2.0 * static_cast<double>(boundary.extent(0)) * h;
  std::vector<double> t;
  for (int l = 0;; ++l) {
    const double v = h * std::exp2(l / 4.0);
    if (v > top) break;
    t.push_back(v);
  }
  return t;
}

std::vector<double> poisson_numerator(const GridFunction& f, double t) {
  require_1d(f, "the Poisson extension");
  const std::size_t n = f.size();
  const double h = f.grid().cell_width();
  std::vector<double> ker(n);
  for (std::size_t o = 0; o < n; ++o) ker[o] = poisson_kernel(static_cast<double>(o) * h, t) * h;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    long double acc = 0.0L;
    for (std::size_t j = 0; j < n; ++j) acc += static_cast<long double>(ker[i > j ? i - j : j - i]) * f[j];
    out[i] = static_cast<double>(acc);
  }
  return out;
}

PoissonField poisson_extend(const GridFunction& f, std::vector<double> t) {
  require_1d(f, "the Poisson extension");
  if (t.empty()) t = default_levels(f.grid());
  for (std::size_t l = 0; l < t.size(); ++l)
    if (!(t[l] > 0.0) || (l > 0 && !(t[l] > t[l - 1]))) throw ParameterError("t-levels must be positive and increasing");
  const std::size_t n = f.size();
  PoissonField field{f.space(), t, std::vector<std::vector<double>>(t.size()),
                     std::vector<std::vector<double>>(t.size())};
  const double h = f.grid().cell_width();
  parallel_for(t.size(), [&](std::size_t l) {
    auto num = poisson_numerator(f, t[l]);
    // Σ_j P_t(x_i − x_j)h = S(i) + S(n−1−i) − P_t(0)h with S(m) = Σ_{o≤m} P_t(oh)h.
    std::vector<long double> S(n);
    long double run = 0.0L;
    for (std::size_t o = 0; o < n; ++o) S[o] = run += poisson_kernel(static_cast<double>(o) * h, t[l]) * h;
    std::vector<double> mass(n);
    for (std::size_t i = 0; i < n; ++i) mass[i] = static_cast<double>(S[i] + S[n - 1 - i] - S[0]);
    for (std::size_t i = 0; i < n; ++i) num[i] /= mass[i];
    field.u[l] = std::move(num);
    field.mass[l] = std::move(mass);
  });
  return field;
}

PoissonQuadrature poisson_quadrature(double t, double h, std::size_t J) {
  long double acc = 0.0L;
  for (std::size_t j = 1; j <= J; ++j) acc += 2.0L * poisson_kernel(static_cast<double>(j) * h, t) * h;
  acc += poisson_kernel(0.0, t) * h;
  const double exact = 2.0 / std::numbers::pi * std::atan((static_cast<double>(J) + 0.5) * h / t);
  return {static_cast<double>(acc), exact};
}

namespace {

// max of |a| over windows [i−w, i+w] clipped to the grid.
std::vector<double> window_abs_max(const std::vector<double>& a, std::size_t w) {
  const std::size_t n = a.size();
  std::vector<double> out(n);
  std::deque<std::size_t> dq;
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t hi = std::min(n - 1, i + w);
    for (; next <= hi; ++next) {
      while (!dq.empty() && std::abs(a[dq.back()]) <= std::abs(a[next])) dq.pop_back();
      dq.push_back(next);
    }
    const std::size_t lo = i >= w ? i - w : 0;
    while (dq.front() < lo) dq.pop_front();
    out[i] = std::abs(a[dq.front()]);
  }
  return out;
}

}  // namespace

GridFunction nontangential_maximal(const PoissonField& field, const GridFunction& trace, const ConeSpec& cone) {
  if (!(cone.kappa > 0.0)) throw ParameterError("cone aperture must be positive");
  if (!trace.grid().same_grid(*field.boundary)) throw DimensionError("trace does not match the field");
  const double h = field.boundary->cell_width();
  if (field.t.empty() || !(cone.kappa * field.t.back() > h))
    throw ParameterError("empty cone: κ·t_max does not exceed the cell width");
  const std::size_t n = trace.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::abs(trace[i]);
  for (std::size_t l = 0; l < field.t.size(); ++l) {
    // |i − j|·h < κt
    const double reach = cone.kappa * field.t[l] / h;
    std::size_t w = static_cast<std::size_t>(std::ceil(reach)) - 1;
    if (static_cast<double>(w + 1) < reach) ++w;
    w = std::min(w, n);
    const auto m = window_abs_max(field.u[l], w);
    for (std::size_t i = 0; i < n; ++i) out[i] = std::max(out[i], m[i]);
  }
  return GridFunction(trace.space(), std::move(out));
}

double sandwich_constant(double kappa, std::size_t n) {
  static std::mutex mu;
  static std::map<std::pair<double, std::size_t>, double> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find({kappa, n}); it != cache.end()) return it->second;
  }
  auto sp = MeasureSpace::lebesgue({n}, 1.0 / static_cast<double>(n));
  const Basis basis = Basis::enumerate(sp, BasisKind::intervals);
  const double h = sp->cell_width();
  std::vector<GridFunction> fs;
  const std::size_t stride = std::max<std::size_t>(1, n / 32);
  for (std::size_t i = 0; i < n; i += stride) fs.push_back(indicator(sp, std::vector<std::size_t>{i}));
  for (double c : {0.0, 0.25, 0.5, 0.9}) {
    for (std::size_t r = 1; r < n; r *= 4) {
      std::vector<double> a(n), b(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double z = (sp->center(i) - c) / (static_cast<double>(r) * h);
        a[i] = std::abs(z) <= 1.0 ? 1.0 : 0.0;
        b[i] = std::max(0.0, 1.0 - z * z);
      }
      if (std::any_of(a.begin(), a.end(), [](double x) { return x > 0.0; })) {
        fs.emplace_back(sp, std::move(a));
        fs.emplace_back(sp, std::move(b));
      }
    }
  }
  for (double t : {4.0 * h, 32.0 * h, 0.25}) {
    for (double off : {0.0, kappa * t}) {
      std::vector<double> a(n);
      for (std::size_t i = 0; i < n; ++i) a[i] = poisson_kernel(sp->center(i) - 0.5 - off, t);
      fs.emplace_back(sp, std::move(a));
    }
  }
  std::vector<double> ratio(fs.size(), 0.0);
  const auto levels = default_levels(*sp);
  for (std::size_t k = 0; k < fs.size(); ++k) {
    const auto field = poisson_extend(fs[k], levels);
    const auto N = nontangential_maximal(field, fs[k], ConeSpec{kappa});
    const auto M = maximal(fs[k], basis);
    for (std::size_t i = 0; i < n; ++i)
      if (M[i] > 0.0) ratio[k] = std::max(ratio[k], N[i] / M[i]);
  }
  const double C = std::max(1.0, *std::max_element(ratio.begin(), ratio.end()));
  std::lock_guard lock(mu);
  cache[{kappa, n}] = C;
  return C;
}

namespace {

constexpr double kHypothesisCap = 1e6;

double trace_gap(const PoissonField& field, const GridFunction& f) {
  double gap = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) gap = std::max(gap, std::abs(field.u.front()[i] - f[i]));
  return gap / std::max(1.0, f.max_abs());
}

}  // namespace

DirichletSolution solve_dirichlet(const GridFunction& f, const SpaceSpec& spec, const ConeSpec& cone,
                                  const Basis& basis, std::optional<double> N1) {
  require_1d(f, "the Dirichlet solver");
  require_same_space(f, spec.u().function());
  auto field = poisson_extend(f);
  GridFunction N = nontangential_maximal(field, f, cone);
  DirichletCertificate c;
  c.boundary_norm = norm(f, spec);
  c.nontangential_norm = norm(N, spec);
  c.sandwich = sandwich_constant(cone.kappa, f.size());
  c.trace_gap = trace_gap(field, f);
  try {
    const double est = N1 ? *N1 : estimate_maximal_norm(spec, basis, NormMode::primal).value();
    const double own = c.boundary_norm > 0.0 ? norm(maximal(f, basis), spec) / c.boundary_norm : 1.0;
    c.N1 = std::max(est, own);
  } catch (const ParameterError& e) {
    c.N1 = std::numeric_limits<double>::infinity();
    c.note = e.what();
  }
  c.upper_bound = c.sandwich * c.N1 * c.boundary_norm;
  c.lower_ok = c.boundary_norm <= c.nontangential_norm;
  c.upper_ok = c.nontangential_norm <= c.upper_bound * (1.0 + 1e-10);
  if (!std::isfinite(c.N1) || c.N1 > kHypothesisCap) {
    c.verdict = Verdict::inconclusive;
    if (c.note.empty()) c.note = "maximal operator bound not established";
  } else {
    c.verdict = c.lower_ok && c.upper_ok ? Verdict::pass : Verdict::fail;
  }
  return {std::move(field), std::move(N), std::move(c)};
}

DirichletSolution solve_dirichlet_modular(const GridFunction& f, const YoungFunction& phi, const Weight& u,
                                          const Weight& v, const ConeSpec& cone, const Basis& basis,
                                          std::optional<double> N1) {
  require_1d(f, "the Dirichlet solver");
  require_same_space(f, u.function());
  const Delta2 d2 = delta2_constant(phi);
  if (!d2.holds) throw ParameterError("Young function is not doubling");
  auto field = poisson_extend(f);
  GridFunction N = nontangential_maximal(field, f, cone);
  auto rho = [&](const GridFunction& x) {
    const auto m = modular(multiply(abs(x), u.function()), phi, v);
    return m.overflow ? std::numeric_limits<double>::infinity() : m.value;
  };
  DirichletCertificate c;
  c.boundary_norm = rho(f);
  c.nontangential_norm = rho(N);
  c.sandwich = sandwich_constant(cone.kappa, f.size());
  c.trace_gap = trace_gap(field, f);
  const double est = N1 ? *N1 : estimate_modular_maximal(phi, u, v, basis, NormMode::primal).value();
  const double own = c.boundary_norm > 0.0 ? rho(maximal(f, basis)) / c.boundary_norm : 1.0;
  c.N1 = std::max(est, own);
  const double doublings = std::max(0.0, std::ceil(std::log2(c.sandwich)));
  c.upper_bound = std::pow(d2.constant, doublings) * c.N1 * c.boundary_norm;
  c.lower_ok = c.boundary_norm <= c.nontangential_norm;
  c.upper_ok = c.nontangential_norm <= c.upper_bound * (1.0 + 1e-10);
  if (!std::isfinite(c.N1) || c.N1 > kHypothesisCap) {
    c.verdict = Verdict::inconclusive;
    c.note = "modular maximal bound not established";
  } else {
    c.verdict = c.lower_ok && c.upper_ok ? Verdict::pass : Verdict::fail;
  }
  return {std::move(field), std::move(N), std::move(c)};
}

// ---------------------------------------------------------------------------
// Square function

namespace {

double psi(double z) {
  if (std::abs(z) >= 1.0) return 0.0;
  const double a = 1.0 - z * z;
  return z * a * a;
}

}  // namespace

std::vector<GridFunction> square_function_family(const GridFunction& f, const std::vector<double>& t0s,
                                                 const SquareFunctionParams& params) {
  require_1d(f, "the square function");
  if (t0s.empty()) return {};
  if (params.per_octave < 1) throw ParameterError("per_octave must be positive");
  for (double t0 : t0s)
    if (!(t0 > 0.0 && t0 < 1.0)) throw ParameterError("square function truncation needs 0 < t0 < 1");
  const auto& sp = f.grid();
  const std::size_t n = f.size();
  const double h = sp.cell_width();
  const int po = params.per_octave;
  const double t_min = *std::min_element(t0s.begin(), t0s.end());
  const int k_lo = static_cast<int>(std::ceil(po * std::log2(t_min) - 1e-9));
  const int k_hi = -k_lo;
  const std::size_t levels = static_cast<std::size_t>(k_hi - k_lo + 1);
  std::vector<double> fm(n);
  for (std::size_t j = 0; j < n; ++j) fm[j] = f[j] * sp.mass(j);

  // contrib[level][cell] = |θ_t f|² ln2/po
  std::vector<std::vector<double>> contrib(levels);
  const double wq = std::numbers::ln2 / po;
  const std::size_t half = n / 2;
  parallel_for(levels, [&](std::size_t l) {
    const double t = std::exp2(static_cast<double>(k_lo + static_cast<int>(l)) / po);
    const double norm_t = std::pow(t, -params.m);
    const std::size_t W = std::min<std::size_t>(half == 0 ? 0 : half - 1, static_cast<std::size_t>(std::ceil(t / h)));
    std::vector<double> ker(W + 1);
    for (std::size_t o = 0; o <= W; ++o) ker[o] = norm_t * psi(static_cast<double>(o) * h / t);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      long double acc = 0.0L;
      for (std::size_t o = 1; o <= W; ++o) {
        // x − y = +o·h and −o·h (periodic)
        const std::size_t jm = (i + n - o) % n, jp = (i + o) % n;
        acc += static_cast<long double>(ker[o]) * (fm[jm] - fm[jp]);
      }
      const double th = static_cast<double>(acc);
      out[i] = th * th * wq;
    }
    contrib[l] = std::move(out);
  });

  std::vector<GridFunction> result;
  for (double t0 : t0s) {
    const int lo = static_cast<int>(std::ceil(po * std::log2(t0) - 1e-9));
    const int hi = -lo;
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
      long double acc = 0.0L;
      for (int k = lo; k <= hi; ++k) acc += contrib[static_cast<std::size_t>(k - k_lo)][i];
      g[i] = std::sqrt(static_cast<double>(acc));
    }
    result.emplace_back(f.space(), std::move(g));
  }
  return result;
}

GridFunction square_function(const GridFunction& f, double t0, const SquareFunctionParams& params) {
  return std::move(square_function_family(f, {t0}, params).front());
}

SpacePtr order_m_space(std::size_t n, double m) {
  if (!(m > 0.0 && m <= 1.0)) throw ParameterError("order m must lie in (0, 1]");
  const double h = 1.0 / static_cast<double>(n);
  std::vector<double> mu(n, 0.05 * h);
  for (std::size_t c = 1; c < n; c *= 2) mu[c] += std::pow(h, m);
  return MeasureSpace::with_masses({n}, h, std::move(mu));
}

}  // namespace wfx
