#include "wfx/young.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>

#include "wfx/error.hpp"

namespace wfx {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kComplementKnots = 4096;
constexpr double kTableLo = 1e-8;
constexpr double kTableHi = 1e8;
// Search range for log s in the Legendre transform and for inverses.
constexpr double kLogRange = 3000.0;

// log(e + e^x) without overflow.
double log_e_plus_exp(double x) {
  return x > 1.0 ? x + std::log1p(std::exp(1.0 - x)) : 1.0 + std::log1p(std::exp(x - 1.0));
}

}  // namespace

struct YoungFunction::State {
  Family family = Family::power;
  double p = 2.0, q = 2.0, alpha = 0.0, r = 1.0;
  bool take_max = true;
  std::vector<double> lt, lphi;
  std::shared_ptr<State> base;
  double tab_err = 0.0;
  std::unique_ptr<YoungFunction> base_fn;
  std::once_flag once;
  std::unique_ptr<YoungFunction> comp_fn;

  double lp(double x) const;  // log Φ(e^x)
};

double YoungFunction::State::lp(double x) const {
  switch (family) {
    case Family::power:
      return p * x;
    case Family::linear:
      return x;
    case Family::plog:
      return p * x + (alpha == 0.0 ? 0.0 : alpha * std::log(log_e_plus_exp(x)));
    case Family::minmax: {
      const double a = p, b = q;
      if (take_max) return x < 0.0 ? a * x : b * x;
      if (x <= 0.0) return b * x;
      // log((b/a) e^{ax} + 1 − b/a)
      const double c = b / a;
      return a * x + std::log(c) + std::log1p((1.0 - c) / c * std::exp(-a * x));
    }
    case Family::tabulated: {
      const std::size_t n = lt.size();
      std::size_t k;
      if (x <= lt.front()) {
        k = 0;
      } else if (x >= lt.back()) {
        k = n - 2;
      } else {
        k = static_cast<std::size_t>(std::upper_bound(lt.begin(), lt.end(), x) - lt.begin()) - 1;
        k = std::min(k, n - 2);
      }
      const double slope = (lphi[k + 1] - lphi[k]) / (lt[k + 1] - lt[k]);
      return lphi[k] + slope * (x - lt[k]);
    }
    case Family::rescaled:
      return base->lp(r * x);
  }
  return 0.0;
}

YoungFunction YoungFunction::power(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw ParameterError("power Young function needs 1 < p < ∞");
  auto s = std::make_shared<State>();
  s->family = Family::power;
  s->p = p;
  return YoungFunction(s);
}

YoungFunction YoungFunction::plog(double p, double alpha) {
  if (!(p > 1.0) || !std::isfinite(p)) throw ParameterError("plog Young function needs 1 < p < ∞");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ParameterError("plog Young function needs alpha >= 0");
  auto s = std::make_shared<State>();
  s->family = Family::plog;
  s->p = p;
  s->alpha = alpha;
  return YoungFunction(s);
}

YoungFunction YoungFunction::minmax(double p, double q, bool take_max) {
  if (!(p > 1.0) || !(q > 1.0) || !std::isfinite(p) || !std::isfinite(q))
    throw ParameterError("minmax Young function needs exponents in (1, ∞)");
  auto s = std::make_shared<State>();
  s->family = Family::minmax;
  s->p = std::min(p, q);
  s->q = std::max(p, q);
  s->take_max = take_max;
  return YoungFunction(s);
}

YoungFunction YoungFunction::tabulated(std::vector<double> t, std::vector<double> phi) {
  if (t.size() != phi.size() || t.size() < 2) throw ParameterError("tabulated Young function needs ≥ 2 matching knots");
  auto s = std::make_shared<State>();
  s->family = Family::tabulated;
  s->lt.resize(t.size());
  s->lphi.resize(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (!(t[k] > 0.0) || !(phi[k] > 0.0) || !std::isfinite(t[k]) || !std::isfinite(phi[k]))
      throw ParameterError("tabulated knots must be positive and finite");
    s->lt[k] = std::log(t[k]);
    s->lphi[k] = std::log(phi[k]);
    if (k > 0 && (!(s->lt[k] > s->lt[k - 1]) || !(s->lphi[k] > s->lphi[k - 1])))
      throw ParameterError("tabulated knots must be strictly increasing");
  }
  return YoungFunction(s);
}

YoungFunction YoungFunction::linear() {
  auto s = std::make_shared<State>();
  s->family = Family::linear;
  s->p = 1.0;
  return YoungFunction(s);
}

YoungFunction YoungFunction::rescaled(double r) const {
  if (!(r > 0.0) || !std::isfinite(r)) throw ParameterError("rescaling exponent must be positive");
  if (r == 1.0) return *this;
  auto s = std::make_shared<State>();
  s->family = Family::rescaled;
  s->base = s_;
  s->base_fn.reset(new YoungFunction(s_));
  s->r = r;
  return YoungFunction(s);
}

double YoungFunction::log_value(double t) const {
  if (!(t > 0.0)) return -kInf;
  return s_->lp(std::log(t));
}

double YoungFunction::operator()(double t) const {
  if (!(t > 0.0)) return 0.0;
  return std::exp(s_->lp(std::log(t)));
}

double YoungFunction::inverse(double y) const {
  if (!(y > 0.0)) return 0.0;
  switch (s_->family) {
    case Family::power: return std::exp(std::log(y) / s_->p);
    case Family::linear: return y;
    case Family::rescaled: return std::exp(std::log(YoungFunction(s_->base).inverse(y)) / s_->r);
    default: break;
  }
  const double target = std::log(y);
  double lo = -kLogRange, hi = kLogRange;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (s_->lp(mid) < target) lo = mid;
    else hi = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

// log Φ̄(e^lt) by golden-section search over x = log s of
// log(st − Φ(s)) = x + lt + log(1 − Φ(s)/(st)), which is unimodal in x.
static double legendre_log(const YoungFunction::State& s, double lt) {
  auto L = [&](double x) {
    const double d = s.lp(x) - x - lt;
    if (!(d < 0.0)) return -kInf;
    return x + lt + std::log1p(-std::exp(d));
  };
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = -kLogRange, b = kLogRange;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = L(c), fd = L(d);
  for (int it = 0; it < 400 && b - a > 1e-11 * std::max(1.0, std::abs(c)); ++it) {
    if (fc < fd) {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = L(d);
    } else {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = L(c);
    }
  }
  const double x = 0.5 * (a + b);
  if (x > kLogRange - 1.0 || x < -kLogRange + 1.0)
    throw BracketError("complementary function: supremum not attained inside the search bracket");
  const double best = std::max({fc, fd, L(x)});
  if (!std::isfinite(best)) throw BracketError("complementary function: no positive value found");
  return best;
}

const YoungFunction& YoungFunction::complementary() const {
  std::call_once(s_->once, [this] {
    if (s_->family == Family::linear) throw BracketError("the linear function has no finite complement");
    auto c = std::make_shared<State>();
    c->family = Family::tabulated;
    c->lt.resize(kComplementKnots);
    c->lphi.resize(kComplementKnots);
    const double l0 = std::log(kTableLo), l1 = std::log(kTableHi);
    const double step = (l1 - l0) / static_cast<double>(kComplementKnots - 1);
    for (std::size_t k = 0; k < kComplementKnots; ++k) {
      c->lt[k] = l0 + step * static_cast<double>(k);
      c->lphi[k] = legendre_log(*s_, c->lt[k]);
    }
    for (std::size_t k = 1; k < kComplementKnots; ++k)
      if (!(c->lphi[k] > c->lphi[k - 1]))
        throw BracketError("complementary function is not strictly increasing on the table");
    // Interpolation error: compare against direct transforms at midpoints.
    double err = 0.0;
    for (std::size_t k = 0; k + 1 < kComplementKnots; k += 7) {
      const double mid = c->lt[k] + 0.5 * step;
      err = std::max(err, std::abs(c->lp(mid) - legendre_log(*s_, mid)));
    }
    c->tab_err = std::max(std::expm1(err), 1e-12);
    s_->comp_fn.reset(new YoungFunction(std::move(c)));
  });
  return *s_->comp_fn;
}

YoungFunction::Family YoungFunction::family() const { return s_->family; }
double YoungFunction::p() const { return s_->p; }
double YoungFunction::q() const { return s_->q; }
double YoungFunction::alpha() const { return s_->alpha; }
bool YoungFunction::take_max() const { return s_->take_max; }
double YoungFunction::r() const { return s_->r; }
const YoungFunction& YoungFunction::base() const {
  if (!s_->base_fn) throw ParameterError("only rescaled Young functions have a base");
  return *s_->base_fn;
}
std::pair<const std::vector<double>&, const std::vector<double>&> YoungFunction::knots() const {
  return {s_->lt, s_->lphi};
}
double YoungFunction::tabulation_error() const { return s_->tab_err; }

std::string YoungFunction::describe() const {
  std::ostringstream os;
  switch (s_->family) {
    case Family::power: os << "power(p=" << s_->p << ")"; break;
    case Family::plog: os << "plog(p=" << s_->p << ",alpha=" << s_->alpha << ")"; break;
    case Family::minmax: os << "minmax(" << s_->p << "," << s_->q << "," << (s_->take_max ? "max" : "min") << ")"; break;
    case Family::tabulated: os << "tabulated(" << s_->lt.size() << " knots)"; break;
    case Family::linear: os << "linear"; break;
    case Family::rescaled: os << "rescaled(" << YoungFunction(s_->base).describe() << ",r=" << s_->r << ")"; break;
  }
  return os.str();
}

namespace {

// Coefficient a of the least-squares fit y ≈ a x + b log|x| + c.  The log
// term absorbs slowly varying factors such as log^α(e + t), which would
// otherwise bias a plain slope over a finite window.
double index_fit(const std::vector<double>& x, const std::vector<double>& y) {
  double A[3][4] = {};
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r[3] = {x[i], std::log(std::abs(x[i])), 1.0};
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) A[a][b] += r[a] * r[b];
      A[a][3] += r[a] * y[i];
    }
  }
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r)
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    std::swap(A[c], A[piv]);
    for (int r = 0; r < 3; ++r) {
      if (r == c) continue;
      const double m = A[r][c] / A[c][c];
      for (int k = c; k < 4; ++k) A[r][k] -= m * A[c][k];
    }
  }
  return A[0][3] / A[0][0];
}

double log_h(const YoungFunction& phi, double lt) {
  constexpr int kS = 1601;
  const double l0 = std::log(kTableLo), l1 = std::log(kTableHi);
  double best = -kInf;
  for (int k = 0; k < kS; ++k) {
    const double ls = l0 + (l1 - l0) * k / (kS - 1);
    best = std::max(best, phi.log_value(std::exp(ls + lt)) - phi.log_value(std::exp(ls)));
  }
  return best;
}

}  // namespace

double h_phi(const YoungFunction& phi, double t) {
  if (!(t > 0.0)) throw ParameterError("h_phi needs t > 0");
  return std::exp(log_h(phi, std::log(t)));
}

DilationIndices dilation_indices(const YoungFunction& phi, bool analytic) {
  if (analytic) {
    switch (phi.family()) {
      case YoungFunction::Family::power:
      case YoungFunction::Family::plog:
      case YoungFunction::Family::linear: return {phi.p(), phi.p()};
      case YoungFunction::Family::minmax: return {phi.p(), phi.q()};
      case YoungFunction::Family::rescaled: {
        if (phi.base().family() != YoungFunction::Family::tabulated) {
          const auto b = dilation_indices(phi.base(), true);
          return {b.lower * phi.r(), b.upper * phi.r()};
        }
        break;
      }
      case YoungFunction::Family::tabulated: break;
    }
  }
  constexpr int kT = 16;
  std::vector<double> xs(kT), lo(kT), hi(kT);
  for (int k = 0; k < kT; ++k) {
    const double u = static_cast<double>(k) / (kT - 1);
    xs[k] = std::log(1e-6) + u * (std::log(1e-3) - std::log(1e-6));
    lo[k] = log_h(phi, xs[k]);
  }
  const double il = index_fit(xs, lo);
  for (int k = 0; k < kT; ++k) {
    const double u = static_cast<double>(k) / (kT - 1);
    xs[k] = std::log(1e3) + u * (std::log(1e6) - std::log(1e3));
    hi[k] = log_h(phi, xs[k]);
  }
  double iu = index_fit(xs, hi);
  // A table extrapolates as a power law past its last knot, so the fit alone
  // cannot see non-doubling growth; Δ₂ failure means I_Φ = ∞.
  if (!std::isfinite(iu) || iu > 1e3 || !delta2_constant(phi).holds) iu = kInf;
  return {il, iu};
}

Delta2 delta2_constant(const YoungFunction& phi) {
  double l0 = std::log(kTableLo), l1 = std::log(kTableHi);
  if (phi.family() == YoungFunction::Family::tabulated) {
    l0 = phi.knots().first.front();
    l1 = phi.knots().first.back() - std::log(2.0);
  }
  constexpr int kN = 1601;
  std::vector<double> ratio(kN);
  double best = 0.0;
  for (int k = 0; k < kN; ++k) {
    const double t = std::exp(l0 + (l1 - l0) * k / (kN - 1));
    ratio[k] = std::exp(phi.log_value(2.0 * t) - phi.log_value(t));
    best = std::max(best, ratio[k]);
  }
  // Growth still under way at the top of the sampled range means no finite constant.
  const int decade = std::max(1, static_cast<int>((kN - 1) * std::log(10.0) / (l1 - l0)));
  const double top = ratio[kN - 1], earlier = ratio[std::max(0, kN - 1 - decade)];
  if (!std::isfinite(best) || best > 0x1.0p40 || top > earlier * (1.0 + 1e-3)) return {false, kInf};
  return {true, best};
}

ModularValue modular(const GridFunction& f, const YoungFunction& phi, const Weight* w) {
  if (w) require_same_space(f, *w);
  const auto& s = f.grid();
  long double acc = 0.0L;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double v = phi(std::abs(f[i]));
    acc += static_cast<long double>(v) * s.mass(i) * (w ? (*w)[i] : 1.0);
  }
  const double out = static_cast<double>(acc);
  if (!std::isfinite(out)) return {kInf, true};
  return {out, false};
}

}  // namespace wfx
