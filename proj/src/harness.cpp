#include "wfx/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "wfx/error.hpp"
#include "wfx/maximal.hpp"
#include "wfx/muckenhoupt.hpp"
#include "wfx/parallel.hpp"

namespace wfx {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRoundoff = 1e-12;

constexpr std::pair<FamilyKind, const char*> kFamilyNames[] = {
    {FamilyKind::identity, "identity"},     {FamilyKind::hilbert, "hilbert"},
    {FamilyKind::maximal_pair, "maximal-pair"}, {FamilyKind::coifman_fefferman, "coifman-fefferman"},
    {FamilyKind::commutator, "commutator"}, {FamilyKind::calderon, "calderon"},
    {FamilyKind::sqfn, "sqfn"},             {FamilyKind::poisson, "poisson"},
    {FamilyKind::custom, "custom"},
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

}  // namespace

FamilyKind parse_family_kind(std::string_view name) {
  for (const auto& [k, s] : kFamilyNames)
    if (name == s) return k;
  throw ParameterError("unknown pair family: " + std::string(name));
}

std::string to_string(FamilyKind kind) {
  for (const auto& [k, s] : kFamilyNames)
    if (k == kind) return s;
  return "?";
}

// ---------------------------------------------------------------------------
// Pair families

std::vector<GridFunction> input_battery(const SpacePtr& sp, std::size_t count, std::uint64_t seed) {
  const std::size_t n = sp->size();
  const double L = static_cast<double>(sp->extent(0)) * sp->cell_width();
  auto x_of = [&](std::size_t i) { return sp->center(i, 0) / L; };
  Rng rng(seed ^ 0x1b7e5a3c9d2f4e61ULL);
  std::vector<GridFunction> out;
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t j = k / 4;
    std::vector<double> a(n);
    switch (k % 4) {
      case 0: {
        const double lo = std::fmod(0.1 + 0.17 * static_cast<double>(j), 0.8);
        const double hi = lo + 0.04 + 0.07 * static_cast<double>(j % 3);
        for (std::size_t i = 0; i < n; ++i) a[i] = x_of(i) >= lo && x_of(i) <= hi ? 1.0 : 0.0;
        if (std::all_of(a.begin(), a.end(), [](double v) { return v == 0.0; })) a[n / 2] = 1.0;
        break;
      }
      case 1: {
        const double c = std::fmod(0.3 + 0.23 * static_cast<double>(j), 0.7) + 0.15;
        const double r = 0.05 + 0.05 * static_cast<double>(j % 3);
        for (std::size_t i = 0; i < n; ++i) {
          const double z = (x_of(i) - c) / r;
          a[i] = std::abs(z) < 1.0 ? std::pow(1.0 - z * z, 2) : 0.0;
        }
        if (std::all_of(a.begin(), a.end(), [](double v) { return v == 0.0; })) a[n / 2] = 1.0;
        break;
      }
      case 2:
        for (auto& v : a) v = rng.uniform(-1.0, 1.0) * std::exp(rng.normal());
        break;
      default: {
        const double m = 3.0 + 5.0 * static_cast<double>(j);
        for (std::size_t i = 0; i < n; ++i) {
          const double x = x_of(i);
          const double env = x > 0.1 && x < 0.9 ? std::sin(std::numbers::pi * (x - 0.1) / 0.8) : 0.0;
          a[i] = env * std::sin(2.0 * std::numbers::pi * m * x);
        }
        break;
      }
    }
    out.emplace_back(sp, std::move(a));
  }
  return out;
}

namespace {

const char* input_name(std::size_t k) {
  static constexpr const char* names[] = {"indicator", "bump", "random", "oscillatory"};
  return names[k % 4];
}

void require_finite(const Pair& p) {
  for (const GridFunction* h : {&p.f, &p.g})
    for (double x : h->values())
      if (!std::isfinite(x)) throw ParameterError("pair " + p.label + " has non-finite values");
}

}  // namespace

PairFamily make_family(FamilyKind kind, const SpacePtr& sp, const FamilyOptions& opt) {
  if (kind == FamilyKind::custom) throw ParameterError("custom families are built with custom_family");
  if (kind != FamilyKind::identity && kind != FamilyKind::maximal_pair && sp->dim() != 1)
    throw DimensionError(to_string(kind) + " pairs need a 1D grid");
  const auto inputs = input_battery(sp, opt.inputs, opt.seed);
  const std::size_t n = sp->size();
  const double L = static_cast<double>(sp->extent(0)) * sp->cell_width();
  std::optional<Basis> basis;
  if (kind == FamilyKind::maximal_pair || kind == FamilyKind::coifman_fefferman)
    basis = Basis::enumerate(sp, opt.basis.value_or(BasisKind::intervals));

  GridFunction b = GridFunction::zeros(sp), F = GridFunction::zeros(sp);
  std::string tag = to_string(kind);
  if (kind == FamilyKind::commutator) {
    if (opt.b) {
      b = *opt.b;
    } else {
      std::vector<double> v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = std::log(std::abs(sp->center(i) - 0.5 * L));
      b = GridFunction(sp, std::move(v));
    }
    tag += "(k=" + std::to_string(opt.k) + ")";
  }
  if (kind == FamilyKind::calderon) {
    if (opt.F) {
      F = *opt.F;
    } else {
      std::vector<double> v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = std::abs(sp->center(i) - 0.5 * L);
      F = GridFunction(sp, std::move(v));
    }
  }
  if (kind == FamilyKind::sqfn) tag += "(t0=" + fmt(opt.t0) + ")";
  if (kind == FamilyKind::poisson) tag += "(kappa=" + fmt(opt.kappa) + ")";

  PairFamily fam{kind, tag, std::vector<Pair>(inputs.size(), Pair{inputs[0], inputs[0], ""})};
  parallel_for(inputs.size(), [&](std::size_t k) {
    const GridFunction& f = inputs[k];
    const GridFunction af = abs(f);
    GridFunction lhs = af, rhs = af;
    switch (kind) {
      case FamilyKind::identity: break;
      case FamilyKind::hilbert: lhs = abs(hilbert(f)); break;
      case FamilyKind::maximal_pair: lhs = maximal(f, *basis); break;
      case FamilyKind::coifman_fefferman:
        lhs = abs(hilbert(f));
        rhs = maximal(f, *basis);
        break;
      case FamilyKind::commutator: lhs = abs(commutator("hilbert", b, opt.k, f)); break;
      case FamilyKind::calderon: lhs = abs(calderon_commutator(F, f).value); break;
      case FamilyKind::sqfn: lhs = square_function(f, opt.t0, opt.sq); break;
      case FamilyKind::poisson: {
        const auto field = poisson_extend(f);
        lhs = nontangential_maximal(field, f, ConeSpec{opt.kappa});
        break;
      }
      case FamilyKind::custom: break;
    }
    fam.pairs[k] = Pair{std::move(lhs), std::move(rhs), std::string(input_name(k)) + "[" + std::to_string(k / 4) + "]"};
  });
  for (const auto& p : fam.pairs) require_finite(p);
  return fam;
}

PairFamily custom_family(std::vector<Pair> pairs, std::string tag) {
  if (pairs.empty()) throw ParameterError("custom family is empty");
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    auto& p = pairs[k];
    require_same_space(p.f, p.g);
    require_same_space(p.f, pairs[0].f);
    p.f = abs(p.f);
    p.g = abs(p.g);
    if (p.label.empty()) p.label = "pair[" + std::to_string(k) + "]";
    require_finite(p);
  }
  return {FamilyKind::custom, std::move(tag), std::move(pairs)};
}

PairFamily powered(const PairFamily& F, double p) {
  if (!(p > 0.0)) throw ParameterError("power must be positive");
  PairFamily out{F.kind, F.tag + "^" + fmt(p), {}};
  for (const auto& pr : F.pairs) out.pairs.push_back({power(pr.f, p), power(pr.g, p), pr.label});
  return out;
}

PairFamily aggregated(const PairFamily& F, double q, std::size_t batch) {
  if (!(q > 0.0)) throw ParameterError("aggregation exponent must be positive");
  if (batch == 0) throw ParameterError("batch size must be positive");
  PairFamily out{F.kind, "l" + fmt(q) + "(" + F.tag + ")", {}};
  for (std::size_t start = 0; start < F.pairs.size(); start += batch) {
    const std::size_t end = std::min(F.pairs.size(), start + batch);
    const std::size_t n = F.pairs[start].f.size();
    std::vector<long double> sf(n, 0.0L), sg(n, 0.0L);
    for (std::size_t j = start; j < end; ++j)
      for (std::size_t i = 0; i < n; ++i) {
        sf[i] += std::pow(static_cast<long double>(F.pairs[j].f[i]), q);
        sg[i] += std::pow(static_cast<long double>(F.pairs[j].g[i]), q);
      }
    std::vector<double> af(n), ag(n);
    for (std::size_t i = 0; i < n; ++i) {
      af[i] = static_cast<double>(std::pow(sf[i], 1.0L / q));
      ag[i] = static_cast<double>(std::pow(sg[i], 1.0L / q));
    }
    const auto& sp = F.pairs[start].f.space();
    out.pairs.push_back({GridFunction(sp, std::move(af)), GridFunction(sp, std::move(ag)),
                         "batch[" + std::to_string(start / batch) + "]"});
  }
  return out;
}

PairFamily scaled(const PairFamily& F, double c) {
  if (!(c > 0.0)) throw ParameterError("scale must be positive");
  PairFamily out{F.kind, F.tag, {}};
  for (const auto& pr : F.pairs) out.pairs.push_back({scale(pr.f, c), scale(pr.g, c), pr.label});
  return out;
}

// ---------------------------------------------------------------------------
// Weight batteries

std::vector<BatteryWeight> power_battery(const SpacePtr& sp, double lo, double hi, std::size_t count) {
  if (!(lo < hi)) throw ParameterError("power battery needs lo < hi");
  const std::size_t m = std::max<std::size_t>(1, count / 2);
  std::vector<double> a(m);
  for (std::size_t k = 0; k < m; ++k)
    a[k] = lo + (hi - lo) * static_cast<double>(k + 1) / static_cast<double>(m + 1);
  // Keep the unweighted case in the battery.
  if (lo < 0.0 && hi >= 0.0) {
    auto it = std::min_element(a.begin(), a.end(), [](double x, double y) { return std::abs(x) < std::abs(y); });
    *it = 0.0;
  }
  const double mid = 0.5 * static_cast<double>(sp->extent(0)) * sp->cell_width();
  std::vector<BatteryWeight> out;
  for (double x0 : {0.0, mid})
    for (double e : a) out.push_back({make_power_weight(sp, e, x0), "power(a=" + fmt(e) + ",x0=" + fmt(x0) + ")"});
  return out;
}

std::vector<BatteryWeight> random_product_battery(const SpacePtr& sp, double p, std::uint64_t seed,
                                                  std::size_t count) {
  std::vector<BatteryWeight> out;
  for (std::size_t k = 0; k < count; ++k) {
    const std::uint64_t s = seed * 1000003ULL + 2 * k;
    Weight w = make_random_a1ish(sp, s);
    if (p != 1.0) w = multiply(w, power(make_random_a1ish(sp, s + 1), 1.0 - p));
    out.push_back({std::move(w), "random(" + std::to_string(k) + ")"});
  }
  return out;
}

double PsiTable::operator()(double x) const {
  if (a.empty()) return 1.0;
  const auto it = std::upper_bound(a.begin(), a.end(), x);
  if (it == a.begin()) return psi.front();
  return *std::max_element(psi.begin(), psi.begin() + (it - a.begin()));
}

Calibration calibrate_psi(const PairFamily& F, const std::vector<BatteryWeight>& weights, double p0,
                          const std::function<double(const Weight&)>& characteristic) {
  if (!(p0 > 0.0)) throw ParameterError("calibration exponent must be positive");
  std::vector<CalibrationPoint> pts(weights.size());
  std::vector<std::string> rejected(weights.size());
  parallel_for(weights.size(), [&](std::size_t k) {
    const Weight& w = weights[k].w;
    double worst = 0.0;
    for (const auto& pr : F.pairs) {
      const double nf = weighted_lp_norm(pr.f, w, p0), ng = weighted_lp_norm(pr.g, w, p0);
      if (nf == 0.0) continue;
      if (!(ng > 0.0) || !std::isfinite(nf)) {
        rejected[k] = pr.label + " under " + weights[k].label;
        return;
      }
      worst = std::max(worst, nf / ng);
    }
    pts[k] = {weights[k].label, characteristic(w), worst};
  });
  for (const auto& r : rejected)
    if (!r.empty()) throw ParameterError("family rejected: infinite ratio for " + r);

  Calibration cal;
  cal.points = pts;
  std::vector<CalibrationPoint> used;
  for (const auto& p : pts)
    if (std::isfinite(p.constant)) used.push_back(p);
  std::stable_sort(used.begin(), used.end(),
                   [](const CalibrationPoint& x, const CalibrationPoint& y) { return x.constant < y.constant; });
  double run = 1.0;
  for (const auto& p : used) {
    run = std::max(run, p.ratio);
    if (!cal.psi.a.empty() && cal.psi.a.back() == p.constant) {
      cal.psi.psi.back() = run;
    } else {
      cal.psi.a.push_back(p.constant);
      cal.psi.psi.push_back(run);
    }
  }
  return cal;
}

Calibration calibrate_psi(const PairFamily& F, const Basis& basis, double p0,
                          const std::vector<BatteryWeight>& weights) {
  return calibrate_psi(F, weights, p0, [&](const Weight& w) {
    return p0 == 1.0 ? a1_constant(w, basis).value : ap_constant(w, basis, p0).value;
  });
}

// ---------------------------------------------------------------------------
// Verification

namespace {

double rho(const GridFunction& f, const YoungFunction& phi, const Weight& u, const Weight& v) {
  const auto m = modular(multiply(f, u.function()), phi, v);
  return m.overflow ? kInf : m.value;
}

bool hypothesis_ok(double N, double cap) { return std::isfinite(N) && N <= cap; }

void append_checks(ExtrapolationReport& r, std::size_t k, const std::vector<Check>& checks) {
  for (auto c : checks) {
    c.name = "weight[" + std::to_string(k) + "]." + c.name;
    r.construction.push_back(std::move(c));
  }
}

// Fills pairs, worst and verdict.  lhs(k) and rhs(k) give the two sides
// before the constant.
template <class L, class R>
void evaluate(ExtrapolationReport& r, const PairFamily& F, L&& lhs, R&& rhs, bool hypotheses) {
  const double tol = r.tol.total() + kRoundoff;
  std::vector<PairResult> res(F.pairs.size());
  parallel_for(F.pairs.size(), [&](std::size_t k) {
    PairResult p;
    p.label = F.pairs[k].label;
    p.lhs = lhs(F.pairs[k]);
    p.rhs = r.constant * rhs(F.pairs[k]);
    p.ok = p.lhs <= p.rhs * (1.0 + tol);
    res[k] = std::move(p);
  });
  r.pairs.insert(r.pairs.end(), res.begin(), res.end());
  r.worst.reset();
  for (std::size_t k = 0; k < r.pairs.size(); ++k)
    if (!r.worst || r.pairs[k].ratio() > r.pairs[*r.worst].ratio()) r.worst = k;
  const bool all = std::all_of(r.pairs.begin(), r.pairs.end(), [](const PairResult& p) { return p.ok; });
  const bool built = all_ok(r.construction);
  if (!hypotheses) {
    r.verdict = Verdict::inconclusive;
    r.notes.push_back("maximal operator bound not established");
  } else if (all) {
    r.verdict = Verdict::pass;
  } else if (!built) {
    r.verdict = Verdict::inconclusive;
    r.notes.push_back("weight construction checks failed; N is likely underestimated");
  } else {
    r.verdict = Verdict::fail;
  }
}

struct NPair {
  double N1 = 1.0, N2 = 1.0;
};

NPair estimate_pair(const SpaceSpec& spec, const Basis& basis, const ExtrapolationConfig& cfg, bool need_primal) {
  NPair n;
  const auto& rc = cfg.rdf;
  n.N2 = rc.N2 ? *rc.N2 : estimate_maximal_norm(spec, basis, NormMode::dual, rc.trials, rc.seed).value();
  if (need_primal)
    n.N1 = rc.N1 ? *rc.N1 : estimate_maximal_norm(spec, basis, NormMode::primal, rc.trials, rc.seed).value();
  return n;
}

// Shared A_p route: Ψ from `calib` at exponent e, checked on `check`.
ExtrapolationReport bfs_core(const PairFamily& calib, const PairFamily& check, const SpaceSpec& spec,
                             const Basis& basis, double e, const ExtrapolationConfig& cfg, std::string mode) {
  if (!(e >= 1.0) || !std::isfinite(e)) throw ParameterError("extrapolation exponent must lie in [1, ∞)");
  const auto& sp = spec.space();
  ExtrapolationReport r;
  r.mode = std::move(mode);
  r.family = check.tag;
  r.space = spec.describe();
  r.p0 = e;
  NPair n = estimate_pair(spec, basis, cfg, e > 1.0);

  auto weights = e > 1.0 ? power_battery(sp, -1.0, e - 1.0) : power_battery(sp, -1.0, 0.0);
  for (auto& w : random_product_battery(sp, e, cfg.seed)) weights.push_back(std::move(w));
  RdfConfig rc = cfg.rdf;
  rc.N1 = n.N1;
  rc.N2 = n.N2;
  rc.fold_growth = true;
  const std::size_t m = std::min(cfg.rdf_weights, calib.pairs.size());
  for (std::size_t k = 0; k < m; ++k) {
    const auto& pr = calib.pairs[k];
    try {
      auto built = e > 1.0 ? build_ap_weight(pr.f, pr.g, spec, basis, e, rc) : build_a1_weight(pr.f, pr.g, spec, basis, rc);
      if (e > 1.0) n.N1 = std::max(n.N1, built.report.N1);
      n.N2 = std::max(n.N2, built.report.N2);
      append_checks(r, k, built.report.checks);
      weights.push_back({std::move(built.w), "rdf(" + pr.label + ")"});
    } catch (const ParameterError& ex) {
      r.notes.push_back("weight construction skipped for " + pr.label + ": " + ex.what());
    }
  }
  r.N1 = e > 1.0 ? n.N1 : std::numeric_limits<double>::quiet_NaN();
  r.N2 = n.N2;
  r.calibration = calibrate_psi(calib, basis, e, weights);

  r.tol.truncation = truncation_tolerance(cfg.rdf.K);
  r.tol.bisection = 2.0 * kNormTol;
  const double arg = e > 1.0 ? std::pow(2.0, e) * std::pow(n.N1, e - 1.0) * n.N2 : 2.0 * n.N2;
  // The battery's own extremal weights sit at the argument up to truncation.
  r.psi_argument = arg * (1.0 + r.tol.truncation);
  r.psi_value = r.calibration.psi(r.psi_argument);
  r.constant = (e > 1.0 ? std::pow(2.0, 3.0 + 2.0 / conjugate(e)) : 8.0) * r.psi_value;
  r.tol.truncation = 0.0;  // consumed by the argument

  const bool hyp = hypothesis_ok(n.N2, cfg.hypothesis_cap) && (e == 1.0 || hypothesis_ok(n.N1, cfg.hypothesis_cap));
  evaluate(
      r, check, [&](const Pair& p) { return norm(p.f, spec); }, [&](const Pair& p) { return norm(p.g, spec); }, hyp);
  return r;
}

}  // namespace

ExtrapolationReport verify_bfs_extrapolation(const PairFamily& F, const SpaceSpec& spec, const Basis& basis,
                                             double p0, const ExtrapolationConfig& cfg) {
  return bfs_core(F, F, spec, basis, p0, cfg, p0 > 1.0 ? "bfs" : "bfs-a1");
}

ExtrapolationReport verify_vector_valued(const PairFamily& F, const SpaceSpec& spec, const Basis& basis, double p0,
                                         double q, const ExtrapolationConfig& cfg) {
  if (!(q > 1.0) && q != p0) throw ParameterError("vector-valued exponent must exceed 1");
  auto r = bfs_core(F, aggregated(F, q, cfg.batch), spec, basis, q, cfg, "vector");
  r.exponent = q;
  r.p0 = p0;
  if (q != p0)
    r.notes.push_back("q ≠ p0: Ψ recalibrated at q; valid provided the basis behaves as a Muckenhoupt basis");
  return r;
}

ExtrapolationReport verify_ainf_extrapolation(const PairFamily& F, const SpaceSpec& spec, const Basis& basis,
                                              double p, const ExtrapolationConfig& cfg, std::optional<double> q) {
  if (!(p > 0.0)) throw ParameterError("A_∞ extrapolation needs p > 0");
  const PairFamily Fp = q ? powered(aggregated(F, *q, cfg.batch), p) : powered(F, p);
  auto r = bfs_core(Fp, Fp, spec, basis, 1.0, cfg, q ? "ainf-vector" : "ainf");
  r.exponent = p;
  if (q) r.notes.push_back("ℓ^q aggregation with q = " + fmt(*q));
  return r;
}

ExtrapolationReport verify_modular_extrapolation(const PairFamily& F, const YoungFunction& phi, const Weight& u,
                                                 const Weight& v, const Basis& basis, double p0,
                                                 const ExtrapolationConfig& cfg) {
  if (!(p0 >= 1.0) || !std::isfinite(p0)) throw ParameterError("modular extrapolation needs 1 ≤ p0 < ∞");
  const Delta2 d2 = delta2_constant(phi);
  if (!d2.holds || !std::isfinite(d2.constant)) throw ParameterError("Young function is not doubling");
  const double I = dilation_indices(phi).upper;
  const auto& sp = u.space();
  ExtrapolationReport r;
  r.mode = "modular";
  r.family = F.tag;
  r.space = "modular(" + phi.describe() + ")";
  r.p0 = p0;
  const auto& rc0 = cfg.rdf;
  double N2 = rc0.N2 ? *rc0.N2
                     : estimate_modular_maximal(phi, u, v, basis, NormMode::dual, rc0.trials, rc0.seed).value();
  double N1 = p0 == 1.0 ? 1.0
              : rc0.N1 ? *rc0.N1
                       : estimate_modular_maximal(phi, u, v, basis, NormMode::primal, rc0.trials, rc0.seed).value();

  auto weights = p0 > 1.0 ? power_battery(sp, -1.0, p0 - 1.0) : power_battery(sp, -1.0, 0.0);
  for (auto& w : random_product_battery(sp, p0, cfg.seed)) weights.push_back(std::move(w));
  RdfConfig rc = rc0;
  rc.N1 = N1;
  rc.N2 = N2;
  const std::size_t m = std::min(cfg.rdf_weights, F.pairs.size());
  for (std::size_t k = 0; k < m; ++k) {
    const auto& pr = F.pairs[k];
    try {
      auto built = build_modular_weight(pr.f, pr.g, phi, u, v, basis, p0, 1.0, rc);
      append_checks(r, k, built.report.checks);
      weights.push_back({std::move(built.w), "rdf(" + pr.label + ")"});
    } catch (const ParameterError& ex) {
      r.notes.push_back("weight construction skipped for " + pr.label + ": " + ex.what());
    }
  }
  r.N1 = p0 > 1.0 ? N1 : std::numeric_limits<double>::quiet_NaN();
  r.N2 = N2;
  r.calibration = calibrate_psi(F, basis, p0, weights);
  const double tolK = truncation_tolerance(rc0.K);
  const double arg = p0 > 1.0 ? std::pow(2.0, p0) * std::pow(N1, p0 - 1.0) * N2 : 2.0 * N2;
  r.psi_argument = arg * (1.0 + tolK);
  r.psi_value = r.calibration.psi(r.psi_argument);
  const double C0 = (p0 > 1.0 ? std::pow(2.0, 3.0 + 2.0 / conjugate(p0)) : 8.0) * r.psi_value;
  r.constant = d2.constant * std::max(C0, std::pow(C0, 2.0 * I));
  r.tol.tabulation = 4.0 * phi.complementary().tabulation_error() + 1e-9;
  r.notes.push_back("C_Φ = " + fmt(d2.constant) + ", I_Φ = " + fmt(I));

  const bool hyp = hypothesis_ok(N2, cfg.hypothesis_cap) && hypothesis_ok(N1, cfg.hypothesis_cap);
  auto side = [&](const GridFunction& h) { return rho(h, phi, u, v); };
  PairFamily both = F;
  for (auto& p : aggregated(F, p0, cfg.batch).pairs) both.pairs.push_back(std::move(p));
  evaluate(
      r, both, [&](const Pair& p) { return side(p.f); }, [&](const Pair& p) { return side(p.g); }, hyp);
  return r;
}

ExtrapolationReport verify_modular_ainf(const PairFamily& F, const YoungFunction& phi, const Weight& u,
                                        const Weight& v, const Basis& basis, double p,
                                        const ExtrapolationConfig& cfg) {
  if (!(p > 0.0)) throw ParameterError("A_∞ extrapolation needs p > 0");
  auto r = verify_modular_extrapolation(powered(F, p), phi, u, v, basis, 1.0, cfg);
  r.mode = "modular-ainf";
  r.exponent = p;
  return r;
}

ExtrapolationReport verify_limited_range(const PairFamily& F, const SpaceSpec& X, const Basis& basis, double pminus,
                                         double pplus, const ExtrapolationConfig& cfg, double pstar) {
  const auto [pX, qX] = boyd_indices(X);
  const LimitedRangeExponents e = limited_range_exponents(pX, qX, bfs_power_limit(X), pminus, pplus, pstar);
  if (pminus == 1.0 && std::isinf(pplus)) {
    auto r = verify_bfs_extrapolation(F, X, basis, e.pstar, cfg);
    r.mode = "limited";
    r.notes.push_back("full range: reduces to the A_p route at p0 = " + fmt(e.pstar));
    return r;
  }
  const auto& sp = X.space();
  ExtrapolationReport r;
  r.mode = "limited";
  r.family = F.tag;
  r.space = X.describe();
  r.p0 = e.pstar;

  // Conditions on u at the Boyd indices.
  bool hyp = true;
  for (double b : {pX, qX}) {
    const Weight ub = power(X.u(), b);
    const double a = b / pminus == 1.0 ? a1_constant(ub, basis).value : ap_constant(ub, basis, b / pminus).value;
    const double rh = std::isinf(pplus) ? 1.0 : rh_constant(ub, basis, conjugate(pplus / b)).value;
    r.notes.push_back("u^" + fmt(b) + ": A = " + fmt(a) + ", RH = " + fmt(rh));
    if (!hypothesis_ok(a, cfg.hypothesis_cap) || !hypothesis_ok(rh, cfg.hypothesis_cap)) hyp = false;
  }

  // Battery in A_{p*} ∩ RH_{α₂} (rescaled), indexed by [w^{α₂}]_{A_τ}.
  auto weights = power_battery(sp, -1.0 / e.alpha2, e.ps - 1.0);
  for (auto& w : random_product_battery(sp, e.tau, cfg.seed))
    weights.push_back({power(w.w, 1.0 / e.alpha2), w.label});
  double N1 = 1.0, N2 = 1.0;
  RdfConfig rc = cfg.rdf;
  const std::size_t m = std::min(cfg.rdf_weights, F.pairs.size());
  for (std::size_t k = 0; k < m; ++k) {
    const auto& pr = F.pairs[k];
    try {
      auto built = build_limited_range_weight(pr.f, pr.g, X, basis, pminus, pplus, e.pstar, rc);
      N1 = std::max(N1, built.report.N1);
      N2 = std::max(N2, built.report.N2);
      if (!rc.N1) {
        rc.N1 = built.report.N1;
        rc.N2 = built.report.N2;
        rc.fold_growth = true;
      }
      append_checks(r, k, built.report.checks);
      weights.push_back({std::move(built.w), "rdf(" + pr.label + ")"});
    } catch (const ParameterError& ex) {
      r.notes.push_back("weight construction skipped for " + pr.label + ": " + ex.what());
    }
  }
  r.N1 = N1;
  r.N2 = N2;
  r.calibration = calibrate_psi(F, weights, e.pstar, [&](const Weight& w) {
    return ap_constant(power(w, e.alpha2), basis, e.tau).value;
  });
  const double tolK = truncation_tolerance(cfg.rdf.K);
  r.psi_argument = std::pow(2.0, e.tau) * std::pow(N1, e.tau - 1.0) * N2 * (1.0 + tolK);
  r.psi_value = r.calibration.psi(r.psi_argument);
  const double rsp = conjugate(e.rstar);
  const double Ib = std::pow(2.0, 1.0 + e.s + e.s / e.alpha1) * std::pow(e.c0, 1.0 / e.alpha2);
  const double Cf = std::pow(2.0, 1.0 + (1.0 + e.s + e.s / e.alpha1) / rsp) * std::pow(e.c0, 1.0 / (rsp * e.alpha2));
  r.constant = std::pow(Cf * std::pow(Ib, e.s / e.ps), 1.0 / (e.s * pminus)) * r.psi_value;
  const double sl = associate_slack(X);
  r.tol.slack = std::pow(std::pow(sl, 1.0 / rsp) * std::pow(sl, e.s / e.ps), 1.0 / (e.s * pminus)) - 1.0;
  r.tol.bisection = 2.0 * kNormTol;
  hyp = hyp && hypothesis_ok(N1, cfg.hypothesis_cap) && hypothesis_ok(N2, cfg.hypothesis_cap);

  evaluate(
      r, F, [&](const Pair& p) { return norm(p.f, X); }, [&](const Pair& p) { return norm(p.g, X); }, hyp);
  return r;
}

}  // namespace wfx
