#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "wfx/core_space.hpp"

namespace wfx {

/// Convex increasing Φ on [0,∞) with Φ(t)/t → 0 at 0 and → ∞ at ∞.
///
/// Evaluation is done through log Φ so that steep families and their
/// complements stay representable over many decades.  Copies share state.
class YoungFunction {
 public:
  enum class Family { power, plog, minmax, tabulated, linear, rescaled };

  /// t^p, p > 1.
  static YoungFunction power(double p);
  /// t^p log(e+t)^alpha, p > 1, alpha >= 0.
  static YoungFunction plog(double p, double alpha);
  /// max{t^a, t^b} (take_max) or the convex function equal to t^b on [0,1]
  /// and (b/a)t^a + 1 - b/a beyond (comparable to min{t^a, t^b}); a < b.
  static YoungFunction minmax(double p, double q, bool take_max);
  /// Log-log linear interpolation through (t_k, Φ_k); power-law extrapolation.
  static YoungFunction tabulated(std::vector<double> t, std::vector<double> phi);
  /// Φ(t) = t.  Not a Young function; accepted by the Orlicz maximal operator.
  static YoungFunction linear();

  /// Φ_r(t) = Φ(t^r).
  YoungFunction rescaled(double r) const;

  double operator()(double t) const;
  /// log Φ(t) for t > 0.
  double log_value(double t) const;
  double inverse(double y) const;

  /// Legendre transform Φ̄(t) = sup_s (st − Φ(s)), tabulated on 4096
  /// log-spaced knots over [1e-8, 1e8].  Built once, shared by copies.
  const YoungFunction& complementary() const;

  Family family() const;
  double p() const;
  double q() const;
  double alpha() const;
  bool take_max() const;
  double r() const;
  const YoungFunction& base() const;
  /// Table knots (log t, log Φ) for the tabulated family.
  std::pair<const std::vector<double>&, const std::vector<double>&> knots() const;
  /// Relative interpolation error bound of a tabulated complement (0 otherwise).
  double tabulation_error() const;
  std::string describe() const;

  struct State;

 private:
  explicit YoungFunction(std::shared_ptr<State> s) : s_(std::move(s)) {}
  std::shared_ptr<State> s_;
};

/// h_Φ(t) = sup_s Φ(st)/Φ(s), sampled on a log-spaced s-grid.
double h_phi(const YoungFunction& phi, double t);

struct DilationIndices {
  double lower = 1.0;  // i_Φ
  double upper = 1.0;  // I_Φ, +∞ when divergent
};

/// Analytic values for built-in families; otherwise least-squares slopes of
/// log h_Φ over t ∈ [1e-6, 1e-3] and [1e3, 1e6].
DilationIndices dilation_indices(const YoungFunction& phi, bool analytic = true);

struct Delta2 {
  bool holds = true;
  double constant = 0.0;  // sup Φ(2t)/Φ(t); +∞ when Δ₂ fails
};

Delta2 delta2_constant(const YoungFunction& phi);

struct ModularValue {
  double value = 0.0;
  bool overflow = false;
};

/// ρ_w^Φ(f) = Σ Φ(|f|) w μ.  Overflow clamps to +∞ and sets the flag.
ModularValue modular(const GridFunction& f, const YoungFunction& phi, const Weight* w = nullptr);
inline ModularValue modular(const GridFunction& f, const YoungFunction& phi, const Weight& w) {
  return modular(f, phi, &w);
}

}  // namespace wfx
