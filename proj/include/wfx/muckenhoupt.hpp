#pragma once

#include <cstdint>
#include <optional>

#include "wfx/basis.hpp"
#include "wfx/core_space.hpp"

namespace wfx {

/// A supremum over basis elements together with an element attaining it.
struct Constant {
  double value = 1.0;
  Box argmax{};
};

/// [w]_{A_p} = sup_B (⨍_B w)(⨍_B w^{1−p′})^{p−1}.
Constant ap_constant(const Weight& w, const Basis& basis, double p);

/// [w]_{A_1} = max over cells of M_B w / w.  argmax is a single-cell box.
Constant a1_constant(const Weight& w, const Basis& basis);

struct AinfConstant {
  double p = 0.0;
  double value = 1.0;
};

/// inf over p ∈ (1, p_max] of [w]_{A_p}: coarse scan, golden-section
/// refinement around the best sample, and the endpoint p_max.  Ties resolve
/// to the largest p.
AinfConstant ainf_constant(const Weight& w, const Basis& basis, double p_max);

/// [w]_{RH_s} = sup_B (⨍_B w^s)^{1/s} / ⨍_B w.
Constant rh_constant(const Weight& w, const Basis& basis, double s);

/// [w]_{RH_∞} = sup_B max_B w / ⨍_B w.
Constant rhinf_constant(const Weight& w, const Basis& basis);

/// [w]_{A_{p,q}} = sup_B (⨍_B w^q)(⨍_B w^{−p′})^{q/p′}.
Constant apq_constant(const Weight& w, const Basis& basis, double p, double q);

/// sup_B ⨍_B |b − ⨍_B b|.
Constant bmo_norm(const GridFunction& b, const Basis& basis);

/// |x − origin|^a at cell centers (Euclidean in 2D); the default origin is
/// the lower-left corner of the grid.
Weight make_power_weight(const SpacePtr& space, double a, std::optional<double> origin = std::nullopt);

/// (M_B g)^δ for a seeded random positive g and δ ∈ [0.2, 0.9).  Uses the
/// intervals basis in 1D and cubes in 2D.
Weight make_random_a1ish(const SpacePtr& space, std::uint64_t seed);

/// Conjugate exponent p′ = p/(p−1) (∞ for p = 1, 1 for p = ∞).
double conjugate(double p);

}  // namespace wfx
