#include "wfx/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "wfx/error.hpp"
#include "wfx/muckenhoupt.hpp"

namespace wfx {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBisectTol = 1e-13;

void check_finite(const GridFunction& f) {
  for (double x : f.values())
    if (!std::isfinite(x)) throw InputError("norm of a function with non-finite values");
}

// Cells with positive v-mass, sorted by |g| descending; masses alongside.
struct Sorted {
  std::vector<double> value;
  std::vector<double> mass;
};

Sorted sort_desc(const GridFunction& g, const Weight& v) {
  const auto& s = g.grid();
  std::vector<std::size_t> idx;
  idx.reserve(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    if (s.mass(i) * v[i] > 0.0) idx.push_back(i);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return std::abs(g[a]) > std::abs(g[b]); });
  Sorted out;
  out.value.reserve(idx.size());
  out.mass.reserve(idx.size());
  for (std::size_t i : idx) {
    out.value.push_back(std::abs(g[i]));
    out.mass.push_back(s.mass(i) * v[i]);
  }
  return out;
}

double lp_raw(const GridFunction& g, const Weight& v, double p) {
  const auto& s = g.grid();
  double top = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (s.mass(i) > 0.0) top = std::max(top, std::abs(g[i]));
  if (top == 0.0) return 0.0;
  if (std::isinf(p)) return top;
  long double acc = 0.0L;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double a = std::abs(g[i]) / top;
    if (a > 0.0) acc += static_cast<long double>(std::pow(a, p)) * s.mass(i) * v[i];
  }
  return top * std::pow(static_cast<double>(acc), 1.0 / p);
}

double lorentz_raw(const GridFunction& g, const Weight& v, double p, double q) {
  const auto S = sort_desc(g, v);
  if (S.value.empty() || S.value.front() == 0.0) return 0.0;
  const double top = S.value.front();
  long double T = 0.0L;
  if (std::isinf(q)) {
    double best = 0.0;
    for (std::size_t k = 0; k < S.value.size(); ++k) {
      T += S.mass[k];
      best = std::max(best, S.value[k] * std::pow(static_cast<double>(T), 1.0 / p));
    }
    return best;
  }
  const double e = q / p;
  long double acc = 0.0L;
  double prev = 0.0;
  for (std::size_t k = 0; k < S.value.size(); ++k) {
    T += S.mass[k];
    const double cur = std::pow(static_cast<double>(T), e);
    const double a = S.value[k] / top;
    if (a > 0.0) acc += static_cast<long double>(std::pow(a, q)) * (cur - prev);
    prev = cur;
  }
  return top * std::pow(static_cast<double>(acc) * p / q, 1.0 / q);
}

// inf{λ > 0 : modular(λ) ≤ 1} for a modular decreasing in λ.
template <class Mod>
double luxemburg(Mod&& modular, double start) {
  double lo = start, hi = start;
  int guard = 0;
  while (modular(hi) > 1.0) {
    hi *= 2.0;
    if (++guard > 4000) throw BracketError("Luxemburg bracket did not close");
  }
  lo = hi;
  while (modular(lo) <= 1.0) {
    lo *= 0.5;
    if (++guard > 4000 || lo == 0.0) return 0.0;
  }
  while (hi / lo - 1.0 > kBisectTol) {
    const double mid = std::sqrt(lo) * std::sqrt(hi);
    if (modular(mid) > 1.0) lo = mid;
    else hi = mid;
  }
  return hi;
}

double orlicz_raw(const GridFunction& g, const Weight& v, const YoungFunction& phi) {
  const auto& s = g.grid();
  const double top = g.max_abs();
  if (top == 0.0) return 0.0;
  auto mod = [&](double lambda) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double a = std::abs(g[i]);
      if (a > 0.0 && s.mass(i) > 0.0) acc += static_cast<long double>(phi(a / lambda)) * s.mass(i) * v[i];
    }
    return static_cast<double>(acc);
  };
  return luxemburg(mod, top);
}

double varexp_raw(const GridFunction& g, const Weight& v, const std::vector<double>& pe) {
  const auto& s = g.grid();
  const double top = g.max_abs();
  if (top == 0.0) return 0.0;
  auto mod = [&](double lambda) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double a = std::abs(g[i]);
      if (a > 0.0 && s.mass(i) > 0.0)
        acc += static_cast<long double>(std::exp(pe[i] * std::log(a / lambda))) * s.mass(i) * v[i];
    }
    return static_cast<double>(acc);
  };
  return luxemburg(mod, top);
}

// Norm of g in the family of spec with base weight v, ignoring u and r.
double raw_norm(const GridFunction& g, const SpaceSpec& spec) {
  switch (spec.family()) {
    case SpaceFamily::lp: return lp_raw(g, spec.v(), spec.p());
    case SpaceFamily::lorentz: return lorentz_raw(g, spec.v(), spec.p(), spec.q());
    case SpaceFamily::orlicz: return orlicz_raw(g, spec.v(), spec.phi());
    case SpaceFamily::varexp: return varexp_raw(g, spec.v(), spec.exponents());
  }
  return 0.0;
}

}  // namespace

std::string to_string(SpaceFamily family) {
  switch (family) {
    case SpaceFamily::lp: return "lp";
    case SpaceFamily::lorentz: return "lorentz";
    case SpaceFamily::orlicz: return "orlicz";
    case SpaceFamily::varexp: return "varexp";
  }
  return "lp";
}

SpaceSpec::SpaceSpec(SpaceFamily family, SpacePtr space)
    : family_(family), u_(Weight::ones(space)), v_(Weight::ones(space)) {}

SpaceSpec SpaceSpec::lp(SpacePtr space, double p) {
  if (!(p >= 1.0)) throw ParameterError("lp needs 1 ≤ p ≤ ∞");
  SpaceSpec s(SpaceFamily::lp, std::move(space));
  s.p_ = p;
  return s;
}

SpaceSpec SpaceSpec::lorentz(SpacePtr space, double p, double q) {
  if (!(p > 1.0) || std::isinf(p)) throw ParameterError("lorentz needs 1 < p < ∞");
  if (!(q >= 1.0)) throw ParameterError("lorentz needs 1 ≤ q ≤ ∞");
  SpaceSpec s(SpaceFamily::lorentz, std::move(space));
  s.p_ = p;
  s.q_ = q;
  return s;
}

SpaceSpec SpaceSpec::orlicz(SpacePtr space, YoungFunction phi) {
  SpaceSpec s(SpaceFamily::orlicz, std::move(space));
  s.phi_ = std::move(phi);
  return s;
}

SpaceSpec SpaceSpec::varexp(SpacePtr space, std::vector<double> exponents) {
  if (exponents.size() != space->size()) throw DimensionError("exponent field does not match the grid");
  const auto [lo, hi] = std::minmax_element(exponents.begin(), exponents.end());
  if (!(*lo > 1.0) || !std::isfinite(*hi)) throw ParameterError("varexp needs 1 < p_- ≤ p_+ < ∞");
  SpaceSpec s(SpaceFamily::varexp, std::move(space));
  s.exponents_ = std::move(exponents);
  return s;
}

SpaceSpec SpaceSpec::with_u(Weight u) const {
  require_same_space(u, u_);
  SpaceSpec s = *this;
  s.u_ = std::move(u);
  return s;
}

SpaceSpec SpaceSpec::with_v(Weight v) const {
  require_same_space(v, v_);
  SpaceSpec s = *this;
  s.v_ = std::move(v);
  return s;
}

SpaceSpec SpaceSpec::with_r(double r) const {
  if (!(r > 0.0) || !std::isfinite(r)) throw ParameterError("power scale r must be positive");
  SpaceSpec s = *this;
  s.r_ = r;
  return s;
}

const YoungFunction& SpaceSpec::phi() const {
  if (!phi_) throw ParameterError("only orlicz specs carry a Young function");
  return *phi_;
}

std::string SpaceSpec::describe() const {
  std::ostringstream os;
  switch (family_) {
    case SpaceFamily::lp: os << "lp(" << p_ << ")"; break;
    case SpaceFamily::lorentz: os << "lorentz(" << p_ << "," << q_ << ")"; break;
    case SpaceFamily::orlicz: os << "orlicz(" << phi_->describe() << ")"; break;
    case SpaceFamily::varexp: {
      const auto [lo, hi] = std::minmax_element(exponents_.begin(), exponents_.end());
      os << "varexp[" << *lo << "," << *hi << "]";
      break;
    }
  }
  if (r_ != 1.0) os << "^" << r_;
  return os.str();
}

double StepFunction::operator()(double x) const {
  if (breaks.empty() || x < breaks.front() || x >= breaks.back()) return 0.0;
  const auto it = std::upper_bound(breaks.begin(), breaks.end(), x);
  return values[static_cast<std::size_t>(it - breaks.begin()) - 1];
}

StepFunction distribution(const GridFunction& f, const Weight& v) {
  require_same_space(f, v);
  const auto S = sort_desc(f, v);
  // Distinct values ascending with the mass strictly above each.
  std::vector<double> levels{0.0};
  for (auto it = S.value.rbegin(); it != S.value.rend(); ++it)
    if (*it > levels.back()) levels.push_back(*it);
  StepFunction out;
  out.breaks = levels;
  out.values.assign(levels.size() - 1, 0.0);
  for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
    long double m = 0.0L;
    for (std::size_t j = 0; j < S.value.size(); ++j)
      if (S.value[j] > levels[k]) m += S.mass[j];
    out.values[k] = static_cast<double>(m);
  }
  return out;
}

StepFunction rearrangement(const GridFunction& f, const Weight& v) {
  require_same_space(f, v);
  const auto S = sort_desc(f, v);
  StepFunction out;
  out.breaks.push_back(0.0);
  long double T = 0.0L;
  for (std::size_t k = 0; k < S.value.size(); ++k) {
    T += S.mass[k];
    if (!out.values.empty() && out.values.back() == S.value[k]) {
      out.breaks.back() = static_cast<double>(T);
    } else {
      out.values.push_back(S.value[k]);
      out.breaks.push_back(static_cast<double>(T));
    }
  }
  // Trailing zero values carry no information.
  while (!out.values.empty() && out.values.back() == 0.0) {
    out.values.pop_back();
    out.breaks.pop_back();
  }
  return out;
}

double norm(const GridFunction& f, const SpaceSpec& spec) {
  require_same_space(f, spec.u());
  check_finite(f);
  GridFunction g = abs(multiply(f, spec.u()));
  if (spec.r() == 1.0) return raw_norm(g, spec);
  return std::pow(raw_norm(power(g, spec.r()), spec), 1.0 / spec.r());
}

SpaceSpec concretize(const SpaceSpec& spec) {
  const double r = spec.r();
  if (r == 1.0) return spec;
  const auto& sp = spec.space();
  SpaceSpec out = [&] {
    switch (spec.family()) {
      case SpaceFamily::lp: return SpaceSpec::lp(sp, spec.p() * r);
      case SpaceFamily::lorentz: return SpaceSpec::lorentz(sp, spec.p() * r, spec.q() * r);
      case SpaceFamily::orlicz: return SpaceSpec::orlicz(sp, spec.phi().rescaled(r));
      case SpaceFamily::varexp: {
        auto e = spec.exponents();
        for (double& x : e) x *= r;
        return SpaceSpec::varexp(sp, std::move(e));
      }
    }
    throw ParameterError("unknown family");
  }();
  return out.with_u(spec.u()).with_v(spec.v());
}

SpaceSpec associate_spec(const SpaceSpec& spec_in) {
  const SpaceSpec spec = concretize(spec_in);
  const auto& sp = spec.space();
  SpaceSpec out = [&] {
    switch (spec.family()) {
      case SpaceFamily::lp: return SpaceSpec::lp(sp, conjugate(spec.p()));
      case SpaceFamily::lorentz: return SpaceSpec::lorentz(sp, conjugate(spec.p()), conjugate(spec.q()));
      case SpaceFamily::orlicz: return SpaceSpec::orlicz(sp, spec.phi().complementary());
      case SpaceFamily::varexp: {
        auto e = spec.exponents();
        for (double& x : e) x = conjugate(x);
        return SpaceSpec::varexp(sp, std::move(e));
      }
    }
    throw ParameterError("unknown family");
  }();
  return out.with_u(power(spec.u(), -1.0)).with_v(spec.v());
}

AssociateNorm associate_norm(const GridFunction& g, const SpaceSpec& spec) {
  const SpaceSpec dual = associate_spec(spec);
  const bool slack = spec.family() == SpaceFamily::orlicz || spec.family() == SpaceFamily::varexp;
  return {norm(g, dual), slack ? 2.0 : 1.0};
}

NormingFunction norming_function(const GridFunction& F, const SpaceSpec& spec_in) {
  const SpaceSpec spec = concretize(spec_in);
  const auto& sp = F.space();
  const auto& s = F.grid();
  const Weight& v = spec.v();
  // ‖F‖ in the bare family: F already contains the multiplier.
  const SpaceSpec bare = spec.with_u(Weight::ones(sp));
  const SpaceSpec dual = associate_spec(bare);
  const double nF = norm(F, bare);
  if (nF == 0.0) throw ParameterError("norming function of a zero function");
  auto pairing = [&](const GridFunction& h) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < F.size(); ++i) acc += static_cast<long double>(std::abs(F[i])) * h[i] * s.mass(i) * v[i];
    return static_cast<double>(acc);
  };
  std::optional<GridFunction> best;
  double best_ratio = -1.0;
  auto offer = [&](std::vector<double> vals) {
    GridFunction h(sp, std::move(vals));
    const double nh = norm(h, dual);
    if (!(nh > 0.0) || !std::isfinite(nh)) return;
    h = scale(h, 1.0 / nh);
    const double ratio = pairing(h) / nF;
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best = h;
    }
  };
  const double top = F.max_abs();
  std::vector<double> a(F.size());
  for (std::size_t i = 0; i < F.size(); ++i) a[i] = std::abs(F[i]) / top;
  auto powered = [&](double e) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] > 0.0 ? std::pow(a[i], e) : 0.0;
    return out;
  };
  switch (spec.family()) {
    case SpaceFamily::lp: {
      const double p = spec.p();
      if (std::isinf(p)) {
        std::size_t arg = 0;
        for (std::size_t i = 0; i < a.size(); ++i)
          if (a[i] > a[arg] && s.mass(i) > 0) arg = i;
        std::vector<double> h(a.size(), 0.0);
        h[arg] = 1.0;
        offer(std::move(h));
      } else if (p == 1.0) {
        offer(std::vector<double>(a.size(), 1.0));
      } else {
        offer(powered(p - 1.0));
      }
      break;
    }
    case SpaceFamily::lorentz: {
      const double p = spec.p(), q = spec.q();
      const double pc = conjugate(p);
      std::vector<std::size_t> idx(a.size());
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return a[x] > a[y]; });
      for (int mode = 0; mode < 2; ++mode) {
        std::vector<double> h(a.size(), 0.0);
        long double T = 0.0L;
        for (std::size_t i : idx) {
          const double m = s.mass(i) * v[i];
          if (m <= 0.0) continue;
          const double t_right = static_cast<double>(T + m);
          const double t = mode == 0 ? t_right : static_cast<double>(T + 0.5L * m);
          T += m;
          const double Fs = a[i];
          const double core = std::isinf(q) ? 1.0 : std::pow(std::pow(t, 1.0 / p) * Fs, q - 1.0);
          h[i] = Fs > 0.0 || std::isinf(q) ? std::pow(t, -1.0 / pc) * core : 0.0;
        }
        offer(std::move(h));
      }
      break;
    }
    case SpaceFamily::orlicz: {
      const YoungFunction& phi = spec.phi();
      const double lam = norm(F, bare) / top;
      std::vector<double> h(a.size(), 0.0);
      for (std::size_t i = 0; i < a.size(); ++i) {
        const double t = a[i] / lam;
        h[i] = t > 0.0 ? phi(t) / t : 0.0;
      }
      offer(std::move(h));
      break;
    }
    case SpaceFamily::varexp: {
      const double lam = norm(F, bare) / top;
      std::vector<double> h(a.size(), 0.0);
      for (std::size_t i = 0; i < a.size(); ++i) {
        const double t = a[i] / lam;
        h[i] = t > 0.0 ? std::pow(t, spec.exponents()[i] - 1.0) : 0.0;
      }
      offer(std::move(h));
      break;
    }
  }
  for (double e : {0.0, 0.5, 1.0, 2.0}) offer(powered(e));
  if (!best) throw ParameterError("no admissible norming function");
  return {*best, best_ratio};
}

std::pair<double, double> boyd_indices(const SpaceSpec& spec) {
  const double r = spec.r();
  switch (spec.family()) {
    case SpaceFamily::lp:
    case SpaceFamily::lorentz: return {spec.p() * r, spec.p() * r};
    case SpaceFamily::orlicz: {
      const auto d = dilation_indices(spec.phi());
      return {d.lower * r, d.upper * r};
    }
    case SpaceFamily::varexp: break;
  }
  throw ParameterError("variable exponent spaces are not rearrangement invariant");
}

double bfs_power_limit(const SpaceSpec& spec) {
  const double r = spec.r();
  switch (spec.family()) {
    case SpaceFamily::lp: return spec.p() * r;
    case SpaceFamily::lorentz: return std::min(spec.p(), spec.q()) * r;
    case SpaceFamily::orlicz: return dilation_indices(spec.phi()).lower * r;
    case SpaceFamily::varexp: {
      const double lo = *std::min_element(spec.exponents().begin(), spec.exponents().end());
      return lo * r;
    }
  }
  return 1.0;
}

double weighted_lp_norm(const GridFunction& f, const Weight& w, double p) {
  require_same_space(f, w);
  if (!(p > 0.0)) throw ParameterError("weighted_lp_norm needs p > 0");
  const auto& s = f.grid();
  const double top = f.max_abs();
  if (top == 0.0) return 0.0;
  long double acc = 0.0L;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a = std::abs(f[i]) / top;
    if (a > 0.0) acc += static_cast<long double>(std::pow(a, p)) * w[i] * s.mass(i);
  }
  return top * std::pow(static_cast<double>(acc), 1.0 / p);
}

}  // namespace wfx
