#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wfx/basis.hpp"
#include "wfx/core_space.hpp"
#include "wfx/rdf.hpp"
#include "wfx/spaces.hpp"
#include "wfx/verdict.hpp"
#include "wfx/young.hpp"

namespace wfx {

/// Hf(x_i) = (1/π) Σ_{j≠i} f_j h/(x_i − x_j).  1D only.
GridFunction hilbert(const GridFunction& f);

/// T((b(x) − b(·))^k f)(x) for T = "hilbert"; k = 0 gives Tf.
GridFunction commutator(std::string_view T, const GridFunction& b, int k, const GridFunction& f);

/// Central differences, one-sided at the ends.
GridFunction derivative(const GridFunction& F);

struct CalderonResult {
  /// (1/π) Σ_{j≠i} (F_i − F_j − F′_j(x_i − x_j))/(x_i − x_j)² f_j h.
  GridFunction value;
  /// C¹_F f = (1/π) Σ_{j≠i} (F_i − F_j)/(x_i − x_j)² f_j h.
  GridFunction first_commutator;
  /// max_i |C¹_F f − value − H(F′f)| / max(1, max|C¹_F f|).
  double residual = 0.0;
};
CalderonResult calderon_commutator(const GridFunction& F, const GridFunction& f);

/// Harmonic extension of 1D boundary data to the upper half-plane.
struct PoissonField {
  SpacePtr boundary;
  std::vector<double> t;                  // increasing, > 0
  std::vector<std::vector<double>> u;     // u[level][cell]
  std::vector<std::vector<double>> mass;  // discrete kernel mass per level and cell
};

/// t_ℓ = h·2^{ℓ/4} for ℓ = 0, 1, ... up to twice the grid length.
std::vector<double> default_levels(const MeasureSpace& boundary);

/// P_t(x) = (1/π) t/(t² + x²).
double poisson_kernel(double x, double t);

/// u(x_i, t) = Σ_j P_t(x_i − x_j) f_j h / Σ_j P_t(x_i − x_j) h: zero extension
/// outside the grid, kernel renormalized to unit mass in every cell.
PoissonField poisson_extend(const GridFunction& f, std::vector<double> t = {});

/// Σ_j P_t(x_i − x_j) f_j h without renormalization.
std::vector<double> poisson_numerator(const GridFunction& f, double t);

/// Midpoint sum Σ_{|j|≤J} P_t(jh) h and the exact ∫_{|x|≤(J+½)h} P_t = (2/π)arctan((J+½)h/t).
struct PoissonQuadrature {
  double discrete = 0.0;
  double exact = 0.0;
};
PoissonQuadrature poisson_quadrature(double t, double h, std::size_t J);

struct ConeSpec {
  double kappa = 1.0;
};

/// max(|f(x_i)|, max{|u(y_j, t)| : |x_i − y_j| < κt}); the boundary trace is
/// the t = 0 level.  Throws when κ·t_max does not exceed the cell width.
GridFunction nontangential_maximal(const PoissonField& field, const GridFunction& trace, const ConeSpec& cone);

/// C_κ with N_κ u ≤ C_κ·Mf over the intervals basis, fitted once per (κ, n)
/// on a battery of spikes, intervals, bumps and kernel profiles, then cached.
double sandwich_constant(double kappa, std::size_t n);

struct DirichletCertificate {
  double boundary_norm = 0.0;     // ‖f u‖_{X_v} or ρ(f u)
  double nontangential_norm = 0.0;
  double upper_bound = 0.0;       // C_κ · N₁ · boundary_norm (or its modular analogue)
  double sandwich = 0.0;
  double N1 = 0.0;
  /// ‖u(·, t_min) − f‖_∞ / max(1, ‖f‖_∞), a trace-consistency diagnostic.
  double trace_gap = 0.0;
  bool lower_ok = false;
  bool upper_ok = false;
  Verdict verdict = Verdict::inconclusive;
  std::string note;
};

struct DirichletSolution {
  PoissonField field;
  GridFunction nontangential;
  DirichletCertificate certificate;
};

/// Norm estimate ‖f u‖ ≤ ‖(N_κ u) u‖ ≤ C_κ N₁ ‖f u‖ for the Poisson extension.
/// N₁ is estimated over the battery unless given; it is raised to the
/// observed ratio for f itself either way.
DirichletSolution solve_dirichlet(const GridFunction& f, const SpaceSpec& spec, const ConeSpec& cone,
                                  const Basis& basis, std::optional<double> N1 = std::nullopt);
/// Modular version: ρ(f u) ≤ ρ((N_κ u)u) ≤ Δ₂^{⌈log₂ C_κ⌉} N₁ ρ(f u), ρ = ρ_v^Φ.
DirichletSolution solve_dirichlet_modular(const GridFunction& f, const YoungFunction& phi, const Weight& u,
                                          const Weight& v, const ConeSpec& cone, const Basis& basis,
                                          std::optional<double> N1 = std::nullopt);

struct SquareFunctionParams {
  /// Order of the measure and of the kernel normalization t^{−m}.
  double m = 1.0;
  /// Quadrature points per octave of t.
  int per_octave = 16;
};

/// (Σ_k |θ_{t_k} f|² ln2/per_octave)^{1/2} over t_k = 2^{k/per_octave} ∈ [t0, 1/t0],
/// θ_t f(x) = Σ_y t^{−m} ψ((x−y)/t) f(y) μ(y), ψ(z) = z(1−z²)² on |z| < 1.
/// Distances are periodic on [0, nh); the antipodal cell is left out so the
/// kernel stays odd.  1D only.
GridFunction square_function(const GridFunction& f, double t0, const SquareFunctionParams& params = {});

/// Same for several truncations in one pass; results follow the order of t0s.
std::vector<GridFunction> square_function_family(const GridFunction& f, const std::vector<double>& t0s,
                                                 const SquareFunctionParams& params = {});

/// Background mass 0.05h per cell plus atoms of mass h^m at cells 2^k (k ≥ 0)
/// on n cells of width 1/n.  μ(I) ≲ |I|^m while neighbouring cells differ by
/// a factor h^{m−1}, so μ is not doubling for m < 1.
SpacePtr order_m_space(std::size_t n, double m);

}  // namespace wfx
