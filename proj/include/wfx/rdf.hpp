#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wfx/basis.hpp"
#include "wfx/core_space.hpp"
#include "wfx/spaces.hpp"
#include "wfx/young.hpp"

namespace wfx {

/// One asserted inequality lhs ≤ bound·(1 + tol).
struct Check {
  std::string name;
  double lhs = 0.0;
  double bound = 0.0;
  double tol = 0.0;
  bool ok() const { return lhs <= bound * (1.0 + tol); }
  /// lhs / bound, the quantity compared against 1 + tol.
  double ratio() const { return lhs / bound; }
};

bool all_ok(const std::vector<Check>& checks);

struct RdfConfig {
  int K = 40;
  /// Maximal-operator bounds; estimated from the battery when absent.
  std::optional<double> N1, N2;
  /// Also fold the iterate growth of the actual start functions into given N.
  bool fold_growth = false;
  int trials = 8;
  std::uint64_t seed = 0;
};

/// 2^{2−K}: relative slack of A₁ bounds for a K-term truncated iteration.
double truncation_tolerance(int K);

/// Relative accuracy of the Luxemburg bisections.
inline constexpr double kNormTol = 1e-10;

/// Factor lost in Hölder's inequality by the computed associate norm:
/// 2 for orlicz and varexp, 1 otherwise.
double associate_slack(const SpaceSpec& spec);

enum class NormMode { primal, dual };

struct MaximalNormEstimate {
  double lower = 1.0;
  /// Weighted bound C·[W]_{A_p}^{1/(p−1)} for lp on interval or cube bases.
  std::optional<double> certified_upper;
  /// Test function attaining `lower`.
  std::optional<GridFunction> witness;
  double value() const { return certified_upper ? std::max(lower, *certified_upper) : lower; }
};

/// Lower estimate of ‖(M h)u‖_{X_v}/‖h u‖_{X_v} (primal) or of
/// ‖(M′_v h)u⁻¹‖_{X′_v}/‖h u⁻¹‖_{X′_v} (dual) over a fixed battery: the
/// constant, spikes, dyadic indicators, power singularities, `trials` random
/// functions, and re-fed maximal iterates of the best candidates.
MaximalNormEstimate estimate_maximal_norm(const SpaceSpec& spec, const Basis& basis, NormMode mode,
                                          int trials = 8, std::uint64_t seed = 0);

/// Modular analogue: ratio ∫Φ((Mh)u)v / ∫Φ(hu)v, or with Φ̄, u⁻¹ and M′_v in
/// dual mode.  The battery is evaluated at several amplitudes.
MaximalNormEstimate estimate_modular_maximal(const YoungFunction& phi, const Weight& u, const Weight& v,
                                             const Basis& basis, NormMode mode, int trials = 8,
                                             std::uint64_t seed = 0);

/// max over k < steps of ‖T^{k+1}h‖/‖T^k h‖ with T = M (primal, spec norm) or
/// T = M′_v (dual, associate norm).  Every such ratio is a lower bound for
/// the operator norm, so constructions fold it into estimated constants.
double iterate_growth(const GridFunction& h, const SpaceSpec& spec, const Basis& basis, NormMode mode,
                      int steps = 8);

/// Lower estimates on a sequence of grids.  `stable` is false when the last
/// value exceeds the first by more than the growth factor.
struct RefinementStudy {
  std::vector<std::size_t> sizes;
  std::vector<double> lower;
  bool stable = true;
};
RefinementStudy refinement_study(const std::function<SpaceSpec(SpacePtr)>& make_spec, BasisKind kind,
                                 std::vector<std::size_t> sizes, NormMode mode, double growth = 1.5);

/// h + ε/‖1·u‖, or h itself when already positive everywhere.
GridFunction positive_majorant(const GridFunction& h, const SpaceSpec& spec, double eps);

/// (1−ε)h + εθF with θ = min{1, ρ(hu)} and F = 1/(2(1+ρ(u))), ρ = ρ_v^Φ;
/// h itself when already positive everywhere.
GridFunction positive_majorant_modular(const GridFunction& h, const YoungFunction& phi, const Weight& u,
                                       const Weight& v, double eps);

struct Majorant {
  GridFunction value;
  int K = 0;
  double N = 1.0;
  /// Σ_{k≥K} 2^{−k} = 2^{1−K}: omitted mass relative to ‖h u‖.
  double tail_factor = 0.0;
};

/// Σ_{k<K} M^k h/(2N)^k.
Majorant rdf_majorant(const GridFunction& h, const Basis& basis, double N, int K);
/// Σ_{k<K} (M′_v)^k h/(2N)^k.
Majorant dual_rdf_majorant(const GridFunction& h, const Basis& basis, const Weight& v, double N, int K);

struct LimitedRangeExponents {
  double pminus = 1.0, pplus = 0.0, pstar = 0.0;
  // Rescaled to p₋ = 1.
  double p = 0.0, q = 0.0, r = 0.0, t = 0.0, ps = 0.0;
  double s = 1.0, alpha1 = 1.0, beta1 = 0.0, alpha2 = 1.0, beta2 = 1.0, tau = 0.0, rstar = 0.0;
  /// (1 − 2^{−1/α₂})^{−α₂}.
  double c0 = 1.0;
};

/// Exponents for the limited-range construction.  pstar ≤ 0 picks the
/// midpoint of the admissible interval.  Violated constraints are named in
/// the ParameterError message.
LimitedRangeExponents limited_range_exponents(double pX, double qX, double r, double pminus, double pplus,
                                              double pstar = 0.0);

struct WeightReport {
  double p0 = 1.0;
  double N1 = 1.0, N2 = 1.0;
  int K = 0;
  double ap_constant = 1.0;
  double ap_bound = 1.0;
  std::vector<Check> checks;
  std::vector<std::string> notes;
  std::optional<LimitedRangeExponents> exponents;
  bool ok() const { return all_ok(checks); }
};

struct WeightConstruction {
  Weight w;
  WeightReport report;
};

/// w = (R h̃₁)^{1−p₀}(R′h̃₂)v from h₁ = g/‖gu‖ and the norming witness of f.
WeightConstruction build_ap_weight(const GridFunction& f, const GridFunction& g, const SpaceSpec& spec,
                                   const Basis& basis, double p0, const RdfConfig& cfg = {});

/// w = (R′h̃₂)v.
WeightConstruction build_a1_weight(const GridFunction& f, const GridFunction& g, const SpaceSpec& spec,
                                   const Basis& basis, const RdfConfig& cfg = {});

/// Modular construction from h₁ = g and h₂ = Φ(fu)/f; p0 = 1 gives w = (R′h̃₂)v.
WeightConstruction build_modular_weight(const GridFunction& f, const GridFunction& g, const YoungFunction& phi,
                                        const Weight& u, const Weight& v, const Basis& basis, double p0,
                                        double theta, const RdfConfig& cfg = {});

/// w = H₁^{−s(r_*−1)} H₂ u^s, after rescaling to p₋ = 1.  X must be
/// rearrangement invariant with v ≡ 1.  pstar ≤ 0 selects the default.
WeightConstruction build_limited_range_weight(const GridFunction& f, const GridFunction& g, const SpaceSpec& X,
                                              const Basis& basis, double pminus, double pplus, double pstar = 0.0,
                                              const RdfConfig& cfg = {});

}  // namespace wfx
