#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wfx/core_space.hpp"
#include "wfx/young.hpp"

namespace wfx {

enum class SpaceFamily { lp, lorentz, orlicz, varexp };

std::string to_string(SpaceFamily family);

/// Function space over (Σ, v dμ) with outer multiplier u and power scale r:
/// norm(f) = ‖ |f u|^r ‖_{X_v}^{1/r}.
class SpaceSpec {
 public:
  static SpaceSpec lp(SpacePtr space, double p);
  static SpaceSpec lorentz(SpacePtr space, double p, double q);
  static SpaceSpec orlicz(SpacePtr space, YoungFunction phi);
  static SpaceSpec varexp(SpacePtr space, std::vector<double> exponents);

  SpaceSpec with_u(Weight u) const;
  SpaceSpec with_v(Weight v) const;
  SpaceSpec with_r(double r) const;

  SpaceFamily family() const { return family_; }
  double p() const { return p_; }
  double q() const { return q_; }
  const YoungFunction& phi() const;
  const std::vector<double>& exponents() const { return exponents_; }
  const Weight& u() const { return u_; }
  const Weight& v() const { return v_; }
  double r() const { return r_; }
  const SpacePtr& space() const { return u_.space(); }
  std::string describe() const;

 private:
  SpaceSpec(SpaceFamily family, SpacePtr space);
  SpaceFamily family_;
  double p_ = 2.0, q_ = 2.0;
  std::optional<YoungFunction> phi_;
  std::vector<double> exponents_;
  Weight u_, v_;
  double r_ = 1.0;
};

/// Right-continuous step function: value[k] on [breaks[k], breaks[k+1]),
/// zero from breaks.back() on.
struct StepFunction {
  std::vector<double> breaks;
  std::vector<double> values;
  double operator()(double x) const;
};

/// ν_f(λ) = v({|f| > λ}) for λ ≥ 0.
StepFunction distribution(const GridFunction& f, const Weight& v);
/// f*(t) = inf{λ : ν_f(λ) ≤ t}.
StepFunction rearrangement(const GridFunction& f, const Weight& v);

/// ‖ |f u|^r ‖_{X_v}^{1/r}.
double norm(const GridFunction& f, const SpaceSpec& spec);

/// Same space with r folded into the family parameters (lp(p)^r = lp(rp),
/// lorentz(p,q)^r = lorentz(rp,rq), Φ ↦ Φ(t^r), p(·) ↦ r p(·)).
SpaceSpec concretize(const SpaceSpec& spec);

/// Associate family over the same v with multiplier u⁻¹: lp(p′), lorentz(p′,q′),
/// orlicz(Φ̄), varexp(p′(·)).
SpaceSpec associate_spec(const SpaceSpec& spec);

struct AssociateNorm {
  double value = 0.0;
  /// ∫|f g| dv ≤ factor · norm(f) · value.  1 for lp and lorentz, 2 for
  /// orlicz (Luxemburg Φ̄ norm) and varexp.
  double factor = 1.0;
};

/// ‖g u⁻¹‖ in the associate family.
AssociateNorm associate_norm(const GridFunction& g, const SpaceSpec& spec);

/// Nonnegative h with associate_norm(h·u, spec) ≤ 1 and, as nearly as the
/// candidates allow, ∫ F h dv ≥ norm(F/u, spec)/2, for F ≥ 0.  For lp the
/// exact maximizer is used.  Returns h and the achieved ratio.
struct NormingFunction {
  GridFunction h;
  double ratio = 0.0;  // ∫ F h dv / ‖F‖
};
NormingFunction norming_function(const GridFunction& F, const SpaceSpec& spec);

/// Analytic Boyd indices (p_X, q_X).  varexp is not rearrangement invariant.
std::pair<double, double> boyd_indices(const SpaceSpec& spec);

/// Largest r with X^{1/r} normable according to the analytic table.
double bfs_power_limit(const SpaceSpec& spec);

/// ∫ |f|^p w dμ to the 1/p.
double weighted_lp_norm(const GridFunction& f, const Weight& w, double p);

}  // namespace wfx
