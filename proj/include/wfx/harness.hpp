#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wfx/basis.hpp"
#include "wfx/core_space.hpp"
#include "wfx/operators.hpp"
#include "wfx/rdf.hpp"
#include "wfx/spaces.hpp"
#include "wfx/verdict.hpp"
#include "wfx/young.hpp"

namespace wfx {

enum class FamilyKind { identity, hilbert, maximal_pair, coifman_fefferman, commutator, calderon, sqfn, poisson, custom };

FamilyKind parse_family_kind(std::string_view name);
std::string to_string(FamilyKind kind);

struct Pair {
  GridFunction f, g;
  std::string label;
};

struct FamilyOptions {
  /// Number of input functions (indicators, bumps, random, oscillatory, in turn).
  std::size_t inputs = 16;
  std::uint64_t seed = 0;
  /// commutator: symbol b (default log|x − ½|) and order k.
  std::optional<GridFunction> b;
  int k = 1;
  /// calderon: profile F (default |x − ½|).
  std::optional<GridFunction> F;
  /// sqfn: truncation and kernel parameters.
  double t0 = 0.05;
  SquareFunctionParams sq;
  /// poisson: cone aperture.
  double kappa = 1.0;
  /// Basis for maximal functions inside pairs; intervals when absent.
  std::optional<BasisKind> basis;
};

/// Nonnegative pairs (f, g) generated from a fixed input battery.
struct PairFamily {
  FamilyKind kind = FamilyKind::custom;
  std::string tag;
  std::vector<Pair> pairs;
};

/// Deterministic inputs: indicators, bumps, seeded random, oscillatory.
std::vector<GridFunction> input_battery(const SpacePtr& space, std::size_t count, std::uint64_t seed);

/// identity: (|f|, |f|); hilbert: (|Hf|, |f|); maximal-pair: (Mf, |f|);
/// coifman-fefferman: (|Hf|, Mf); commutator: (|C_b^k f|, |f|);
/// calderon: (|[H, M_F D]f|, |f|); sqfn: (g_{t0} f, |f|); poisson: (N_κ u, |f|).
PairFamily make_family(FamilyKind kind, const SpacePtr& space, const FamilyOptions& opt = {});
PairFamily custom_family(std::vector<Pair> pairs, std::string tag = "custom");

/// Pairs (f^p, g^p).
PairFamily powered(const PairFamily& F, double p);
/// ((Σ_j f_j^q)^{1/q}, (Σ_j g_j^q)^{1/q}) over consecutive batches of `batch` pairs.
PairFamily aggregated(const PairFamily& F, double q, std::size_t batch);
/// Every pair multiplied by c > 0.
PairFamily scaled(const PairFamily& F, double c);

struct BatteryWeight {
  Weight w;
  std::string label;
};

/// Power weights |x − x₀|^a with a spread over (lo, hi), at x₀ = 0 and x₀ = mid.
std::vector<BatteryWeight> power_battery(const SpacePtr& space, double lo, double hi, std::size_t count = 12);
/// w₁w₂^{1−p} with seeded A₁-like factors; p = 1 gives w₁ alone.
std::vector<BatteryWeight> random_product_battery(const SpacePtr& space, double p, std::uint64_t seed,
                                                  std::size_t count = 8);

/// Nondecreasing step function Ψ ≥ 1: Ψ(x) = max{ψ_i : a_i ≤ x}, extended
/// by ψ_0 to the left and by the last value to the right.
struct PsiTable {
  std::vector<double> a;
  std::vector<double> psi;
  double operator()(double x) const;
};

struct CalibrationPoint {
  std::string label;
  double constant = 1.0;  // weight characteristic
  double ratio = 0.0;     // max over pairs of ‖f‖_{L^{p0}(w)}/‖g‖_{L^{p0}(w)}
};

struct Calibration {
  PsiTable psi;
  std::vector<CalibrationPoint> points;
};

/// Isotonic upper envelope of observed ratio against `characteristic(w)`.
/// Weights with infinite characteristic are skipped; an infinite ratio
/// rejects the family with ParameterError.
Calibration calibrate_psi(const PairFamily& F, const std::vector<BatteryWeight>& weights, double p0,
                          const std::function<double(const Weight&)>& characteristic);
/// Same with [w]_{A_{p0}} (or [w]_{A_1} for p0 = 1) over `basis`.
Calibration calibrate_psi(const PairFamily& F, const Basis& basis, double p0,
                          const std::vector<BatteryWeight>& weights);

/// Multiplicative error budget: the asserted bound is scaled by
/// (1 + truncation)(1 + bisection)(1 + slack)(1 + tabulation).
struct ToleranceBudget {
  double truncation = 0.0;
  double bisection = 0.0;
  double slack = 0.0;
  double tabulation = 0.0;
  double total() const { return (1 + truncation) * (1 + bisection) * (1 + slack) * (1 + tabulation) - 1; }
};

struct PairResult {
  std::string label;
  double lhs = 0.0;
  double rhs = 0.0;  // constant × right-hand quantity
  bool ok = true;
  double ratio() const { return rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0); }
};

struct ExtrapolationReport {
  std::string mode;
  std::string family;
  std::string space;
  double p0 = 1.0;
  /// p for the A_∞ modes, q for the vector-valued mode.
  std::optional<double> exponent;
  double N1 = 1.0, N2 = 1.0;
  double psi_argument = 1.0;
  double psi_value = 1.0;
  double constant = 1.0;
  Calibration calibration;
  ToleranceBudget tol;
  std::vector<PairResult> pairs;
  /// Checks made while building the extremal weights of the battery.
  std::vector<Check> construction;
  std::optional<std::size_t> worst;
  Verdict verdict = Verdict::inconclusive;
  std::vector<std::string> notes;
};

struct ExtrapolationConfig {
  RdfConfig rdf;
  /// Number of pairs fed to the weight construction for the battery.
  std::size_t rdf_weights = 8;
  std::uint64_t seed = 0;
  /// N estimates above this are treated as an unestablished hypothesis.
  double hypothesis_cap = 1e6;
  /// Batch size for the vector-valued checks.
  std::size_t batch = 8;
};

/// ‖fu‖_{X_v} ≤ C₀‖gu‖_{X_v} with C₀ = 2^{3+2/p₀′}Ψ(2^{p₀}N₁^{p₀−1}N₂), or
/// C₀ = 8Ψ(2N₂) when p₀ = 1.
ExtrapolationReport verify_bfs_extrapolation(const PairFamily& F, const SpaceSpec& spec, const Basis& basis,
                                             double p0, const ExtrapolationConfig& cfg = {});

/// ℓ^q aggregates of batches of pairs.  q = p₀ reuses the scalar constant;
/// otherwise Ψ is recalibrated at q first (conditional on B behaving as a
/// Muckenhoupt basis, noted in the report).
ExtrapolationReport verify_vector_valued(const PairFamily& F, const SpaceSpec& spec, const Basis& basis, double p0,
                                         double q, const ExtrapolationConfig& cfg = {});

/// ‖f^p u‖_{X_v} ≤ C‖g^p u‖_{X_v} using only the dual maximal bound N:
/// C = 8Ψ_p(2N) with Ψ_p calibrated in L¹(w) on A₁ weights for (f^p, g^p).
/// With q set, checks ‖(Σ f_j^q)^{p/q}u‖ ≤ C‖(Σ g_j^q)^{p/q}u‖ instead.
ExtrapolationReport verify_ainf_extrapolation(const PairFamily& F, const SpaceSpec& spec, const Basis& basis,
                                              double p, const ExtrapolationConfig& cfg = {},
                                              std::optional<double> q = std::nullopt);

/// ∫Φ(fu)v ≤ C₁∫Φ(gu)v with C₁ = C_Φ max{C₀, C₀^{2I_Φ}}, for single pairs
/// and for ℓ^{p₀} aggregates of batches.  Δ₂ failure throws ParameterError.
ExtrapolationReport verify_modular_extrapolation(const PairFamily& F, const YoungFunction& phi, const Weight& u,
                                                 const Weight& v, const Basis& basis, double p0,
                                                 const ExtrapolationConfig& cfg = {});

/// ∫Φ(f^p u)v ≤ C₁∫Φ(g^p u)v with C₀ = 8Ψ_p(2N) from the dual modular bound.
ExtrapolationReport verify_modular_ainf(const PairFamily& F, const YoungFunction& phi, const Weight& u,
                                        const Weight& v, const Basis& basis, double p,
                                        const ExtrapolationConfig& cfg = {});

/// ‖fu‖_X ≤ C‖gu‖_X for rearrangement invariant X (v ≡ 1) and the
/// multiplier u of X.  p₋ = 1, p₊ = ∞ delegates to verify_bfs_extrapolation.
ExtrapolationReport verify_limited_range(const PairFamily& F, const SpaceSpec& X, const Basis& basis, double pminus,
                                         double pplus, const ExtrapolationConfig& cfg = {}, double pstar = 0.0);

}  // namespace wfx
