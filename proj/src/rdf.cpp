#include "wfx/rdf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <tuple>

#include "wfx/error.hpp"
#include "wfx/maximal.hpp"
#include "wfx/muckenhoupt.hpp"
#include "wfx/parallel.hpp"

namespace wfx {

bool all_ok(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok(); });
}

double truncation_tolerance(int K) { return std::ldexp(1.0, 2 - K); }

double associate_slack(const SpaceSpec& spec) {
  return spec.family() == SpaceFamily::orlicz || spec.family() == SpaceFamily::varexp ? 2.0 : 1.0;
}

namespace {

// Explicit N wins unless fold is set; estimates always fold in the iterate growth.
template <class E, class G>
double resolve_n(const std::optional<double>& given, bool fold, E&& estimate, G&& growth) {
  if (given) return fold ? std::max(*given, growth()) : *given;
  return std::max(estimate(), growth());
}

constexpr double kRoundoff = 1e-12;

double pairing(const GridFunction& a, const GridFunction& b, const Weight& v) {
  const auto& s = a.grid();
  long double acc = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) acc += static_cast<long double>(a[i]) * b[i] * v[i] * s.mass(i);
  return static_cast<double>(acc);
}

double rho(const GridFunction& f, const YoungFunction& phi, const GridFunction& u, const Weight& v) {
  const auto m = modular(multiply(abs(f), u), phi, v);
  return m.overflow ? std::numeric_limits<double>::infinity() : m.value;
}


// ---------------------------------------------------------------------------
// Test-function battery

std::vector<GridFunction> battery(const SpacePtr& sp, const Weight& u, int trials, std::uint64_t seed) {
  const std::size_t n = sp->size();
  const std::size_t nx = sp->extent(0), ny = sp->extent(1);
  std::vector<GridFunction> out;
  out.push_back(GridFunction::constant(sp, 1.0));

  const std::size_t spike_stride = std::max<std::size_t>(1, n / 64);
  for (std::size_t i = 0; i < n; i += spike_stride) {
    const std::size_t cell[] = {i};
    out.push_back(indicator(sp, cell));
  }
  out.push_back(indicator(sp, std::vector<std::size_t>{n - 1}));

  // Dyadic squares, a few positions per size.
  for (std::size_t L = 2; L < std::max(nx, ny); L *= 2) {
    const std::size_t Lx = std::min(L, nx), Ly = std::min(L, ny);
    const std::size_t cx = nx / Lx, cy = ny / Ly;
    const std::size_t step = std::max<std::size_t>(1, (cx * cy) / 6);
    for (std::size_t k = 0; k < cx * cy; k += step) {
      const std::size_t bx = (k % cx) * Lx, by = (k / cx) * Ly;
      std::vector<std::size_t> cells;
      for (std::size_t y = by; y < by + Ly; ++y)
        for (std::size_t x = bx; x < bx + Lx; ++x) cells.push_back(sp->index(x, y));
      out.push_back(indicator(sp, cells));
    }
  }

  const double mid = 0.5 * static_cast<double>(nx) * sp->cell_width();
  std::vector<double> exps{0.5, 1.5};
  for (int k = 1; k <= 19; ++k) exps.push_back(-0.05 * k);
  for (double a : exps) {
    out.push_back(make_power_weight(sp, a).function());
    out.push_back(make_power_weight(sp, a, mid).function());
  }

  // Multiplier-adapted candidates: mass where u is small.
  const Weight ui = power(u, -1.0);
  out.push_back(ui.function());
  for (double c : {0.5, 2.0}) out.push_back(power(u, -c).function());

  Rng rng(seed ^ 0x5eedba77e4ULL);
  for (int t = 0; t < trials; ++t) {
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = std::exp(1.5 * rng.normal());
      b[i] = rng.uniform() < 0.1 ? rng.uniform(0.5, 2.0) : 0.0;
    }
    b[rng.below(n)] = 1.0;
    out.emplace_back(sp, std::move(a));
    out.emplace_back(sp, std::move(b));
  }
  return out;
}

struct Scored {
  double ratio;
  std::size_t index;
};

// Runs ratio() over the battery in parallel, then re-feeds op() on the best
// candidates.
MaximalNormEstimate run_battery(std::vector<GridFunction> cands,
                                const std::function<double(const GridFunction&)>& ratio,
                                const std::function<GridFunction(const GridFunction&)>& op) {
  std::vector<double> r(cands.size(), 0.0);
  parallel_for(cands.size(), [&](std::size_t i) { r[i] = ratio(cands[i]); });
  std::vector<Scored> order;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (std::isfinite(r[i])) order.push_back({r[i], i});
  if (order.empty()) throw ParameterError("maximal-norm battery produced no finite ratio");
  std::stable_sort(order.begin(), order.end(), [](const Scored& a, const Scored& b) { return a.ratio > b.ratio; });

  MaximalNormEstimate est;
  est.lower = order.front().ratio;
  est.witness = cands[order.front().index];
  const std::size_t top = std::min<std::size_t>(3, order.size());
  std::vector<GridFunction> chains;
  for (std::size_t k = 0; k < top; ++k) chains.push_back(cands[order[k].index]);
  std::vector<double> best(top, 0.0);
  std::vector<std::optional<GridFunction>> arg(top);
  parallel_for(top, [&](std::size_t k) {
    GridFunction cur = chains[k];
    for (int step = 0; step < 3; ++step) {
      cur = op(cur);
      const double m = cur.max_abs();
      if (!(m > 0.0)) break;
      cur = scale(cur, 1.0 / m);
      const double q = ratio(cur);
      if (std::isfinite(q) && q > best[k]) {
        best[k] = q;
        arg[k] = cur;
      }
    }
  });
  for (std::size_t k = 0; k < top; ++k)
    if (best[k] > est.lower) {
      est.lower = best[k];
      est.witness = arg[k];
    }
  est.lower = std::max(est.lower, 1.0);
  return est;
}

bool certifiable(const SpaceSpec& spec, const Basis& basis) {
  return concretize(spec).family() == SpaceFamily::lp && basis.space().is_lebesgue() &&
         (basis.kind() == BasisKind::intervals || basis.kind() == BasisKind::cubes);
}

double unweighted_norm_ratio(const Basis& basis, double p) {
  static std::mutex mu;
  static std::map<std::tuple<std::size_t, std::size_t, int, double>, double> cache;
  const auto& sp = basis.space();
  const auto key = std::make_tuple(sp.extent(0), sp.extent(1), static_cast<int>(basis.kind()), p);
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const SpaceSpec plain = SpaceSpec::lp(basis.space_ptr(), p);
  const auto est = run_battery(
      battery(basis.space_ptr(), plain.u(), 8, 0),
      [&](const GridFunction& h) { return norm(maximal(h, basis), plain) / norm(h, plain); },
      [&](const GridFunction& h) { return maximal(h, basis); });
  std::lock_guard lock(mu);
  cache[key] = est.lower;
  return est.lower;
}

}  // namespace

MaximalNormEstimate estimate_maximal_norm(const SpaceSpec& spec, const Basis& basis, NormMode mode, int trials,
                                          std::uint64_t seed) {
  require_same_space(spec.u(), GridFunction::zeros(basis.space_ptr()));
  const Weight& v = spec.v();
  MaximalNormEstimate est;
  if (mode == NormMode::primal) {
    est = run_battery(
        battery(spec.space(), spec.u(), trials, seed),
        [&](const GridFunction& h) { return norm(maximal(h, basis), spec) / norm(h, spec); },
        [&](const GridFunction& h) { return maximal(h, basis); });
  } else {
    const SpaceSpec dual = associate_spec(spec);
    est = run_battery(
        battery(spec.space(), dual.u(), trials, seed),
        [&](const GridFunction& h) { return norm(dual_maximal(h, basis, v), dual) / norm(h, dual); },
        [&](const GridFunction& h) { return dual_maximal(h, basis, v); });
  }
  if (certifiable(spec, basis)) {
    const SpaceSpec c = concretize(spec);
    double p = c.p();
    Weight W = multiply(power(c.u(), p), v);
    if (mode == NormMode::dual) {
      p = conjugate(p);
      W = multiply(power(c.u(), -p), power(v, 1.0 - p));
    }
    const double Ap = ap_constant(W, basis, p).value;
    est.certified_upper = unweighted_norm_ratio(basis, p) * std::pow(Ap, 1.0 / (p - 1.0));
  }
  return est;
}

MaximalNormEstimate estimate_modular_maximal(const YoungFunction& phi, const Weight& u, const Weight& v,
                                             const Basis& basis, NormMode mode, int trials, std::uint64_t seed) {
  require_same_space(u, v);
  const bool primal = mode == NormMode::primal;
  const YoungFunction& F = primal ? phi : phi.complementary();
  const Weight mult = primal ? u : power(u, -1.0);
  auto op = [&](const GridFunction& h) { return primal ? maximal(h, basis) : dual_maximal(h, basis, v); };
  auto ratio = [&](const GridFunction& h) {
    const double top = h.max_abs();
    if (!(top > 0.0)) return 0.0;
    double best = 0.0;
    // M and M′ are positively homogeneous: one application serves all amplitudes.
    const GridFunction Mh = op(h);
    for (double amp : {1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3}) {
      const double den = rho(scale(h, amp / top), F, mult, v);
      if (!(den > 0.0) || !std::isfinite(den)) continue;
      const double num = rho(scale(Mh, amp / top), F, mult, v);
      if (std::isfinite(num)) best = std::max(best, num / den);
    }
    return best;
  };
  return run_battery(battery(u.space(), mult, trials, seed), ratio, op);
}

double iterate_growth(const GridFunction& h, const SpaceSpec& spec, const Basis& basis, NormMode mode, int steps) {
  const bool primal = mode == NormMode::primal;
  const SpaceSpec target = primal ? spec : associate_spec(spec);
  GridFunction cur = abs(h);
  double prev = norm(cur, target), best = 1.0;
  for (int k = 0; k < steps && prev > 0.0; ++k) {
    cur = primal ? maximal(cur, basis) : dual_maximal(cur, basis, spec.v());
    const double top = cur.max_abs();
    if (!(top > 0.0)) break;
    cur = scale(cur, 1.0 / top);
    const double next = norm(cur, target);
    best = std::max(best, next * top / prev);
    prev = next;
  }
  return best;
}

RefinementStudy refinement_study(const std::function<SpaceSpec(SpacePtr)>& make_spec, BasisKind kind,
                                 std::vector<std::size_t> sizes, NormMode mode, double growth) {
  RefinementStudy out;
  out.sizes = sizes;
  for (std::size_t n : sizes) {
    auto sp = MeasureSpace::lebesgue({n}, 1.0 / static_cast<double>(n));
    const Basis basis = Basis::enumerate(sp, kind);
    out.lower.push_back(estimate_maximal_norm(make_spec(sp), basis, mode).lower);
  }
  if (!out.lower.empty()) out.stable = out.lower.back() <= growth * out.lower.front();
  return out;
}

GridFunction positive_majorant(const GridFunction& h, const SpaceSpec& spec, double eps) {
  if (h.min() > 0.0) return h;
  if (!(eps > 0.0)) throw ParameterError("positive_majorant needs eps > 0");
  const double n1 = norm(GridFunction::constant(h.space(), 1.0), spec);
  const double c = eps / n1;
  return map(h, [c](double x) { return std::abs(x) + c; });
}

GridFunction positive_majorant_modular(const GridFunction& h, const YoungFunction& phi, const Weight& u,
                                       const Weight& v, double eps) {
  if (h.min() > 0.0) return h;
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("modular majorant needs 0 < eps < 1");
  const double rh = rho(h, phi, u, v);
  if (!(rh > 0.0) || !std::isfinite(rh)) throw ParameterError("modular majorant needs 0 < ρ(hu) < ∞");
  const double theta = std::min(1.0, rh);
  const double F = 1.0 / (2.0 * (1.0 + rho(GridFunction::constant(h.space(), 1.0), phi, u, v)));
  const double add = eps * theta * F;
  return map(h, [eps, add](double x) { return (1.0 - eps) * std::abs(x) + add; });
}

namespace {

Majorant iterate_series(const GridFunction& h, double N, int K,
                        const std::function<GridFunction(const GridFunction&)>& op) {
  if (!(N >= 1.0) || !std::isfinite(N)) throw ParameterError("Rubio de Francia constant must satisfy N ≥ 1");
  if (K < 1) throw ParameterError("truncation order K must be at least 1");
  const GridFunction a = abs(h);
  std::vector<long double> acc(a.values().begin(), a.values().end());
  GridFunction cur = a;
  const double inv = 1.0 / (2.0 * N);
  const double floor_val = a.min() > 0.0 ? a.min() : 0.0;
  for (int k = 1; k < K; ++k) {
    cur = scale(op(cur), inv);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += cur[i];
    // Remaining terms sum to at most 2·max(cur): below rounding of the floor.
    if (floor_val > 0.0 && cur.max_abs() < 1e-18 * floor_val) break;
  }
  std::vector<double> out(acc.begin(), acc.end());
  return {GridFunction(h.space(), std::move(out)), K, N, std::ldexp(1.0, 1 - K)};
}

}  // namespace

Majorant rdf_majorant(const GridFunction& h, const Basis& basis, double N, int K) {
  return iterate_series(h, N, K, [&](const GridFunction& x) { return maximal(x, basis); });
}

Majorant dual_rdf_majorant(const GridFunction& h, const Basis& basis, const Weight& v, double N, int K) {
  return iterate_series(h, N, K, [&](const GridFunction& x) { return dual_maximal(x, basis, v); });
}

// ---------------------------------------------------------------------------
// Limited-range exponents

LimitedRangeExponents limited_range_exponents(double pX, double qX, double r, double pminus, double pplus,
                                              double pstar) {
  if (!(pminus >= 1.0)) throw ParameterError("limited range needs p_- ≥ 1");
  if (!(pplus > pminus)) throw ParameterError("limited range needs p_- < p_+");
  if (!(pX <= qX)) throw ParameterError("Boyd indices need p_X ≤ q_X");
  LimitedRangeExponents e;
  e.pminus = pminus;
  e.pplus = pplus;
  e.p = pX / pminus;
  e.q = qX / pminus;
  e.r = r / pminus;
  const double pp = pplus / pminus;
  if (!(e.p > 1.0)) throw ParameterError("limited range needs p_- < p_X");
  if (!(e.q < pp)) throw ParameterError("limited range needs q_X < p_+");
  if (!(e.r > 1.0)) throw ParameterError("limited range needs X^{1/r} normable for some r > p_-");
  const bool infinite = std::isinf(pp);
  e.t = infinite ? std::numeric_limits<double>::infinity() : e.p * pp / e.q;
  const double cap = infinite ? 1.0 + (e.r - 1.0) / (e.p - 1.0) : 1.0 + (e.r - 1.0) * (e.t - 1.0) / (e.p - 1.0);
  double upper = std::min(e.t, cap);
  if (std::isinf(upper)) upper = e.p + 1.0;
  e.ps = pstar > 0.0 ? pstar / pminus : 0.5 * (1.0 + upper);
  if (!(e.ps > 1.0)) throw ParameterError("limited range needs p_- < p_*");
  if (!(e.ps < e.t)) throw ParameterError("limited range needs p_* < t = p p_+/q");
  if (!(e.ps < cap)) throw ParameterError("limited range needs p_* < 1 + (r−1)(t−1)/(p−1)");
  e.pstar = e.ps * pminus;
  if (infinite) {
    e.s = 1.0;
    e.alpha1 = 1.0;
    e.beta1 = 0.0;
    e.alpha2 = 1.0;
  } else {
    e.s = 1.0 + (e.ps - 1.0) * (e.p - 1.0) / (e.t - 1.0);
    e.alpha1 = (e.t - e.p) / (e.t - 1.0);
    e.beta1 = e.p / (e.t - 1.0);
    e.alpha2 = conjugate(pp / e.ps);
  }
  e.tau = e.alpha2 * (e.ps - 1.0) + 1.0;
  e.beta2 = e.s * e.alpha2 - e.beta1 * (e.tau - 1.0);
  if (!(e.s < e.ps)) throw ParameterError("limited range needs s < p_*");
  e.rstar = e.ps / e.s;
  e.c0 = std::pow(1.0 - std::pow(2.0, -1.0 / e.alpha2), -e.alpha2);
  return e;
}

// ---------------------------------------------------------------------------
// Weight constructions

namespace {

// First basis element, used when a norm vanishes.
GridFunction first_element_indicator(const Basis& basis) {
  std::optional<Box> first;
  basis.visit([&](const Box& b) {
    if (!first) first = b;
  });
  if (!first) throw ParameterError("basis has no elements");
  const auto& sp = basis.space();
  std::vector<std::size_t> cells;
  for (std::size_t y = first->lo[1]; y < first->hi[1]; ++y)
    for (std::size_t x = first->lo[0]; x < first->hi[0]; ++x) cells.push_back(sp.index(x, y));
  return indicator(basis.space_ptr(), cells);
}

struct Inputs {
  GridFunction f, g;
  std::vector<std::string> notes;
};

Inputs prepare(const GridFunction& f, const GridFunction& g, const Basis& basis,
               const std::function<double(const GridFunction&)>& size) {
  require_same_space(f, g);
  require_same_space(f, GridFunction::zeros(basis.space_ptr()));
  Inputs in{abs(f), abs(g), {}};
  for (auto* x : {&in.f, &in.g}) {
    const double s = size(*x);
    if (!std::isfinite(s)) throw ParameterError("input has infinite norm");
    if (s == 0.0) {
      *x = first_element_indicator(basis);
      in.notes.push_back(std::string(x == &in.f ? "f" : "g") + " has zero norm; replaced by 1_B");
    }
  }
  return in;
}

double ap_tolerance(double p0, int K) { return std::pow(1.0 + truncation_tolerance(K), p0) - 1.0 + kRoundoff; }

Weight make_weight(const GridFunction& R, double p0, const GridFunction& Rp, const Weight& v) {
  std::vector<double> w(R.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::pow(R[i], 1.0 - p0) * Rp[i] * v[i];
  return Weight(R.space(), std::move(w));
}

}  // namespace

WeightConstruction build_ap_weight(const GridFunction& f_in, const GridFunction& g_in, const SpaceSpec& spec,
                                   const Basis& basis, double p0, const RdfConfig& cfg) {
  if (!(p0 > 1.0) || !std::isfinite(p0)) throw ParameterError("build_ap_weight needs 1 < p0 < ∞");
  auto in = prepare(f_in, g_in, basis, [&](const GridFunction& x) { return norm(x, spec); });
  const Weight& u = spec.u();
  const Weight& v = spec.v();
  const double nfu = norm(in.f, spec), ngu = norm(in.g, spec);
  const double sl = associate_slack(spec);
  const double tolK = truncation_tolerance(cfg.K);

  const GridFunction h1 = scale(in.g, 1.0 / ngu);
  const NormingFunction wit = norming_function(multiply(in.f, u), spec);
  const GridFunction h2 = multiply(wit.h, u);
  const SpaceSpec dual = associate_spec(spec);
  const GridFunction ht1 = positive_majorant(h1, spec, 1.0);
  const GridFunction ht2 = positive_majorant(h2, dual, 1.0);

  const double N1 = resolve_n(cfg.N1, cfg.fold_growth, [&] { return estimate_maximal_norm(spec, basis, NormMode::primal, cfg.trials, cfg.seed).value(); },
                            [&] { return iterate_growth(ht1, spec, basis, NormMode::primal); });
  const double N2 = resolve_n(cfg.N2, cfg.fold_growth, [&] { return estimate_maximal_norm(spec, basis, NormMode::dual, cfg.trials, cfg.seed).value(); },
                            [&] { return iterate_growth(ht2, spec, basis, NormMode::dual); });
  const Majorant R = rdf_majorant(ht1, basis, N1, cfg.K);
  const Majorant Rp = dual_rdf_majorant(ht2, basis, v, N2, cfg.K);
  Weight w = make_weight(R.value, p0, Rp.value, v);

  WeightReport rep;
  rep.p0 = p0;
  rep.N1 = N1;
  rep.N2 = N2;
  rep.K = cfg.K;
  rep.notes = in.notes;
  rep.ap_constant = ap_constant(w, basis, p0).value;
  rep.ap_bound = std::pow(2.0, p0) * std::pow(N1, p0 - 1.0) * N2;
  const double pp = conjugate(p0);
  const double flp = weighted_lp_norm(in.f, w, p0), glp = weighted_lp_norm(in.g, w, p0);
  const Weight Rpv = multiply(Weight(Rp.value), v);
  auto& c = rep.checks;
  c.push_back({"ap_bound", rep.ap_constant, rep.ap_bound, ap_tolerance(p0, cfg.K)});
  c.push_back({"a1_R", a1_constant(Weight(R.value), basis).value, 2.0 * N1, tolK + kRoundoff});
  c.push_back({"a1_Rprime_v", a1_constant(Rpv, basis).value, 2.0 * N2, tolK + kRoundoff});
  c.push_back({"norming_witness", nfu, 2.0 * pairing(in.f, h2, v), kRoundoff});
  c.push_back({"majorant_h1", norm(ht1, spec), 2.0, kNormTol});
  c.push_back({"majorant_h2", norm(ht2, dual), 2.0, kNormTol});
  c.push_back({"rdf_norm_h1", norm(R.value, spec), 2.0 * norm(ht1, spec), kNormTol});
  c.push_back({"rdf_norm_h2", norm(Rp.value, dual), 2.0 * norm(ht2, dual), kNormTol});
  c.push_back({"pairing", pairing(R.value, Rp.value, v), 16.0, sl - 1.0 + kNormTol});
  c.push_back({"embedding_f", nfu, std::pow(2.0, 1.0 + 4.0 / pp) * flp, std::pow(sl, 1.0 / pp) - 1.0 + kNormTol});
  c.push_back({"embedding_g", glp, std::pow(2.0, 2.0 / p0) * ngu, std::pow(sl, 1.0 / p0) - 1.0 + kNormTol});
  return {std::move(w), std::move(rep)};
}

WeightConstruction build_a1_weight(const GridFunction& f_in, const GridFunction& g_in, const SpaceSpec& spec,
                                   const Basis& basis, const RdfConfig& cfg) {
  auto in = prepare(f_in, g_in, basis, [&](const GridFunction& x) { return norm(x, spec); });
  const Weight& u = spec.u();
  const Weight& v = spec.v();
  const double nfu = norm(in.f, spec), ngu = norm(in.g, spec);
  const double sl = associate_slack(spec);
  const double tolK = truncation_tolerance(cfg.K);

  const NormingFunction wit = norming_function(multiply(in.f, u), spec);
  const GridFunction h2 = multiply(wit.h, u);
  const SpaceSpec dual = associate_spec(spec);
  const GridFunction ht2 = positive_majorant(h2, dual, 1.0);
  const double N2 = resolve_n(cfg.N2, cfg.fold_growth, [&] { return estimate_maximal_norm(spec, basis, NormMode::dual, cfg.trials, cfg.seed).value(); },
                            [&] { return iterate_growth(ht2, spec, basis, NormMode::dual); });
  const Majorant Rp = dual_rdf_majorant(ht2, basis, v, N2, cfg.K);
  Weight w = multiply(Weight(Rp.value), v);

  WeightReport rep;
  rep.p0 = 1.0;
  rep.N1 = std::numeric_limits<double>::quiet_NaN();
  rep.N2 = N2;
  rep.K = cfg.K;
  rep.notes = in.notes;
  rep.ap_constant = a1_constant(w, basis).value;
  rep.ap_bound = 2.0 * N2;
  const double fl1 = weighted_lp_norm(in.f, w, 1.0), gl1 = weighted_lp_norm(in.g, w, 1.0);
  auto& c = rep.checks;
  c.push_back({"a1_bound", rep.ap_constant, rep.ap_bound, tolK + kRoundoff});
  c.push_back({"norming_witness", nfu, 2.0 * pairing(in.f, h2, v), kRoundoff});
  c.push_back({"majorant_h2", norm(ht2, dual), 2.0, kNormTol});
  c.push_back({"rdf_norm_h2", norm(Rp.value, dual), 2.0 * norm(ht2, dual), kNormTol});
  c.push_back({"embedding_f", nfu, 2.0 * fl1, kRoundoff});
  c.push_back({"embedding_g", gl1, 4.0 * ngu, sl - 1.0 + kNormTol});
  return {std::move(w), std::move(rep)};
}

WeightConstruction build_modular_weight(const GridFunction& f_in, const GridFunction& g_in, const YoungFunction& phi,
                                        const Weight& u, const Weight& v, const Basis& basis, double p0, double theta,
                                        const RdfConfig& cfg) {
  if (!(p0 >= 1.0) || !std::isfinite(p0)) throw ParameterError("build_modular_weight needs 1 ≤ p0 < ∞");
  if (!(theta > 0.0 && theta <= 1.0)) throw ParameterError("theta must lie in (0, 1]");
  require_same_space(u, v);
  const YoungFunction& phib = phi.complementary();
  const Weight ui = power(u, -1.0);
  auto in = prepare(f_in, g_in, basis, [&](const GridFunction& x) { return rho(x, phi, u, v); });
  const double tolK = truncation_tolerance(cfg.K);
  const double tab = phib.tabulation_error();
  const double mtol = 4.0 * tab + 1e-9;

  const double rf = rho(in.f, phi, u, v);
  const double rg_theta = rho(scale(in.g, 1.0 / theta), phi, u, v);
  const GridFunction& h1 = in.g;
  std::vector<double> h2v(in.f.size(), 0.0);
  for (std::size_t i = 0; i < h2v.size(); ++i)
    if (in.f[i] > 0.0) h2v[i] = phi(in.f[i] * u[i]) / in.f[i];
  const GridFunction h2(in.f.space(), std::move(h2v));
  const GridFunction ht1 = positive_majorant_modular(h1, phi, u, v, 0.5);
  const GridFunction ht2 = positive_majorant_modular(h2, phib, ui, v, 0.5);
  const double rb_h2 = rho(h2, phib, ui, v);
  const double rb_ht2 = rho(ht2, phib, ui, v);
  const double A = rg_theta + rf;

  const double N2 = cfg.N2 ? *cfg.N2
                           : estimate_modular_maximal(phi, u, v, basis, NormMode::dual, cfg.trials, cfg.seed).value();
  const Majorant Rp = dual_rdf_majorant(ht2, basis, v, N2, cfg.K);
  const Weight Rpv = multiply(Weight(Rp.value), v);

  WeightReport rep;
  rep.p0 = p0;
  rep.N2 = N2;
  rep.K = cfg.K;
  rep.notes = in.notes;
  auto& c = rep.checks;
  c.push_back({"young_step", rb_h2, rf, mtol});
  c.push_back({"majorant_h1", rho(ht1, phi, u, v), rho(h1, phi, u, v), kRoundoff});
  c.push_back({"majorant_h2", rb_ht2, rb_h2, mtol});
  c.push_back({"a1_Rprime_v", a1_constant(Rpv, basis).value, 2.0 * N2, tolK + kRoundoff});
  c.push_back({"rdf_mod_new2", pairing(ht1, Rp.value, v),
               2.0 * theta * (rho(scale(ht1, 1.0 / theta), phi, u, v) + rb_ht2), mtol});

  if (p0 == 1.0) {
    Weight w = Rpv;
    rep.N1 = std::numeric_limits<double>::quiet_NaN();
    rep.ap_constant = a1_constant(w, basis).value;
    rep.ap_bound = 2.0 * N2;
    c.push_back({"a1_bound", rep.ap_constant, rep.ap_bound, tolK + kRoundoff});
    c.push_back({"embedding_f", rf, 2.0 * weighted_lp_norm(in.f, w, 1.0), mtol});
    c.push_back({"embedding_g", weighted_lp_norm(in.g, w, 1.0), 2.0 * theta * A, mtol});
    return {std::move(w), std::move(rep)};
  }

  const double N1 = cfg.N1 ? *cfg.N1
                           : estimate_modular_maximal(phi, u, v, basis, NormMode::primal, cfg.trials, cfg.seed).value();
  rep.N1 = N1;
  const Majorant R = rdf_majorant(ht1, basis, N1, cfg.K);
  Weight w = make_weight(R.value, p0, Rp.value, v);
  const double pp = conjugate(p0);
  rep.ap_constant = ap_constant(w, basis, p0).value;
  rep.ap_bound = std::pow(2.0, p0) * std::pow(N1, p0 - 1.0) * N2;
  c.push_back({"ap_bound", rep.ap_constant, rep.ap_bound, ap_tolerance(p0, cfg.K)});
  c.push_back({"a1_R", a1_constant(Weight(R.value), basis).value, 2.0 * N1, tolK + kRoundoff});
  c.push_back({"rdf_mod_new1", pairing(R.value, Rp.value, v),
               4.0 * theta * (rho(scale(ht1, 1.0 / theta), phi, u, v) + rb_ht2), mtol});
  const double flp = weighted_lp_norm(in.f, w, p0), glp = weighted_lp_norm(in.g, w, p0);
  c.push_back({"embedding_f", rf, std::pow(2.0, 1.0 + 2.0 / pp) * std::pow(theta * A, 1.0 / pp) * flp, mtol});
  c.push_back({"embedding_g", glp, 2.0 * std::pow(theta * A, 1.0 / p0), mtol});
  return {std::move(w), std::move(rep)};
}

WeightConstruction build_limited_range_weight(const GridFunction& f_in, const GridFunction& g_in, const SpaceSpec& X,
                                              const Basis& basis, double pminus, double pplus, double pstar,
                                              const RdfConfig& cfg) {
  if (X.family() == SpaceFamily::varexp) throw ParameterError("limited range needs a rearrangement invariant space");
  if (!X.v().is_constant()) throw ParameterError("limited range needs v ≡ const");
  const auto [pX, qX] = boyd_indices(X);
  const LimitedRangeExponents e = limited_range_exponents(pX, qX, bfs_power_limit(X), pminus, pplus, pstar);
  const auto& sp = X.space();
  const Weight ones = Weight::ones(sp);

  // Rescale to p₋ = 1: f̃ = f^{p₋}, ũ = u^{p₋}, X̃ = X^{1/p₋}.
  const Weight ut = power(X.u(), pminus);
  const SpaceSpec Xt = X.with_r(X.r() / pminus).with_u(ut);
  auto in = prepare(f_in, g_in, basis, [&](const GridFunction& x) { return norm(x, X); });
  const GridFunction f = power(in.f, pminus), g = power(in.g, pminus);
  const double nfu = norm(f, Xt), ngu = norm(g, Xt);
  const double sl = associate_slack(X);
  const double tolK = truncation_tolerance(cfg.K);

  // Y = X̃^{1/s} without multiplier.
  const SpaceSpec Y = Xt.with_r(Xt.r() / e.s).with_u(ones);
  const SpaceSpec Yd = associate_spec(Y).with_u(ones);
  const GridFunction h1 = scale(g, 1.0 / ngu);
  const GridFunction Fs = multiply(power(f, e.s), power(ut, e.s));
  const NormingFunction wit = norming_function(Fs, Y);
  const GridFunction& h2 = wit.h;
  const GridFunction ht1 = positive_majorant(h1, Xt, 1.0);
  const GridFunction ht2 = positive_majorant(h2, Yd, 1.0);

  // Spaces for the two iterations.
  const SpaceSpec S1 = Xt.with_r(Xt.r() / e.alpha1).with_u(power(ut, e.alpha1 + e.beta1));
  const SpaceSpec S2 = Yd.with_r(1.0 / e.alpha2).with_u(power(ut, -e.beta2));
  const GridFunction phi1 = multiply(power(ht1, e.alpha1), power(ut, -e.beta1).function());
  const GridFunction phi2 = multiply(power(ht2, e.alpha2), power(ut, e.beta2).function());
  const double N1 = resolve_n(cfg.N1, cfg.fold_growth, [&] { return estimate_maximal_norm(S1, basis, NormMode::primal, cfg.trials, cfg.seed).value(); },
                            [&] { return iterate_growth(phi1, S1, basis, NormMode::primal); });
  const double N2 = resolve_n(cfg.N2, cfg.fold_growth, [&] { return estimate_maximal_norm(S2, basis, NormMode::primal, cfg.trials, cfg.seed).value(); },
                            [&] { return iterate_growth(phi2, S2, basis, NormMode::primal); });

  const Majorant R1 = rdf_majorant(phi1, basis, N1, cfg.K);
  const Majorant R2 = rdf_majorant(phi2, basis, N2, cfg.K);
  const GridFunction H1 = multiply(power(R1.value, 1.0 / e.alpha1), power(ut, e.beta1 / e.alpha1).function());
  const GridFunction H2 = multiply(power(R2.value, 1.0 / e.alpha2), power(ut, -e.beta2 / e.alpha2).function());

  std::vector<double> wv(sp->size());
  for (std::size_t i = 0; i < wv.size(); ++i)
    wv[i] = std::pow(H1[i], -e.s * (e.rstar - 1.0)) * H2[i] * std::pow(ut[i], e.s);
  Weight w(sp, std::move(wv));

  WeightReport rep;
  rep.p0 = e.pstar;
  rep.N1 = N1;
  rep.N2 = N2;
  rep.K = cfg.K;
  rep.notes = in.notes;
  rep.exponents = e;
  const Weight wa = power(w, e.alpha2);
  rep.ap_constant = ap_constant(wa, basis, e.tau).value;
  rep.ap_bound = std::pow(2.0, e.tau) * std::pow(N1, e.tau - 1.0) * N2;
  const double ap = ap_constant(w, basis, e.ps).value;
  auto& c = rep.checks;
  c.push_back({"a_tau_bound", rep.ap_constant, rep.ap_bound, ap_tolerance(e.tau, cfg.K)});
  c.push_back({"a1_R1", a1_constant(Weight(R1.value), basis).value, 2.0 * N1, tolK + kRoundoff});
  c.push_back({"a1_R2", a1_constant(Weight(R2.value), basis).value, 2.0 * N2, tolK + kRoundoff});
  c.push_back({"jn_lower", std::pow(ap, e.alpha2), rep.ap_constant, 1e-9});
  if (e.alpha2 > 1.0) {
    const double rh = rh_constant(w, basis, e.alpha2).value;
    c.push_back({"jn_upper", rep.ap_constant, std::pow(rh * ap, e.alpha2), 1e-9});
  }
  c.push_back({"norming_witness", std::pow(nfu, e.s), 2.0 * pairing(Fs, h2, ones), kRoundoff});
  const double I = pairing(multiply(power(H1, e.s), H2), power(ut, e.s), ones);
  const double Ib = std::pow(2.0, 1.0 + e.s + e.s / e.alpha1) * std::pow(e.c0, 1.0 / e.alpha2);
  c.push_back({"pairing", I, Ib, sl - 1.0 + kNormTol});
  const double rsp = conjugate(e.rstar);
  const double Cf = std::pow(2.0, 1.0 + (1.0 + e.s + e.s / e.alpha1) / rsp) * std::pow(e.c0, 1.0 / (rsp * e.alpha2));
  c.push_back({"embedding_f", std::pow(nfu, e.s), Cf * std::pow(weighted_lp_norm(f, w, e.ps), e.s),
               std::pow(sl, 1.0 / rsp) - 1.0 + kNormTol});
  c.push_back({"embedding_g", std::pow(weighted_lp_norm(g, w, e.ps), e.ps), Ib * std::pow(ngu, e.ps),
               sl - 1.0 + kNormTol});
  return {std::move(w), std::move(rep)};
}

}  // namespace wfx
