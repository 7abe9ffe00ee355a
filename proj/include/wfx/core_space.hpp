#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace wfx {

/// Finite uniform grid of cells in one or two dimensions with per-cell masses.
///
/// Cells are stored row-major: index = ix + nx * iy.  Per-axis counts are
/// powers of two so that dyadic boxes tile the grid exactly.
class MeasureSpace {
 public:
  /// Lebesgue masses (cell volume h^dim).
  static std::shared_ptr<const MeasureSpace> lebesgue(std::vector<std::size_t> n, double h);
  /// Arbitrary nonnegative masses with positive total.
  static std::shared_ptr<const MeasureSpace> with_masses(std::vector<std::size_t> n, double h,
                                                         std::vector<double> mu);

  int dim() const { return dim_; }
  std::size_t extent(int axis) const { return n_[axis]; }
  std::size_t size() const { return mu_.size(); }
  double cell_width() const { return h_; }
  double mass(std::size_t i) const { return mu_[i]; }
  std::span<const double> masses() const { return mu_; }
  double total_mass() const { return total_; }
  bool is_lebesgue() const { return lebesgue_; }

  /// Coordinate of the center of cell i along an axis; the grid starts at 0.
  double center(std::size_t i, int axis = 0) const;
  std::size_t index(std::size_t ix, std::size_t iy = 0) const { return ix + n_[0] * iy; }
  std::size_t coord(std::size_t i, int axis) const { return axis == 0 ? i % n_[0] : i / n_[0]; }

  bool same_grid(const MeasureSpace& other) const;

 private:
  MeasureSpace() = default;
  int dim_ = 1;
  std::size_t n_[2] = {1, 1};
  double h_ = 1.0;
  std::vector<double> mu_;
  double total_ = 0.0;
  bool lebesgue_ = true;
};

using SpacePtr = std::shared_ptr<const MeasureSpace>;

/// Real per-cell values tied to a MeasureSpace.
class GridFunction {
 public:
  GridFunction(SpacePtr space, std::vector<double> values);
  static GridFunction constant(SpacePtr space, double c);
  static GridFunction zeros(SpacePtr space) { return constant(std::move(space), 0.0); }
  /// Complex data enters through its magnitude.
  static GridFunction from_complex(SpacePtr space, std::span<const std::complex<double>> values);

  const SpacePtr& space() const { return space_; }
  const MeasureSpace& grid() const { return *space_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  double max_abs() const;
  double min() const;
  bool is_nonnegative() const;

 private:
  SpacePtr space_;
  std::vector<double> values_;
};

/// Grid function with strictly positive finite values.
class Weight {
 public:
  explicit Weight(GridFunction f);
  Weight(SpacePtr space, std::vector<double> values) : Weight(GridFunction(std::move(space), std::move(values))) {}
  static Weight ones(SpacePtr space) { return Weight(GridFunction::constant(std::move(space), 1.0)); }

  const GridFunction& function() const { return f_; }
  operator const GridFunction&() const { return f_; }
  const SpacePtr& space() const { return f_.space(); }
  const MeasureSpace& grid() const { return f_.grid(); }
  std::span<const double> values() const { return f_.values(); }
  std::size_t size() const { return f_.size(); }
  double operator[](std::size_t i) const { return f_[i]; }
  bool is_constant() const;

 private:
  GridFunction f_;
};

/// Throws DimensionError unless a and b live on the same grid.
void require_same_space(const GridFunction& a, const GridFunction& b);

/// Σ f·w·μ over all cells.
double integrate(const GridFunction& f, const Weight* w = nullptr);
inline double integrate(const GridFunction& f, const Weight& w) { return integrate(f, &w); }

/// Σ_{i∈E} w_i μ_i.  E must be nonempty.
double restrict_mass(std::span<const std::size_t> E, const Weight& w);

// Pointwise helpers; all check that their arguments share a space.
GridFunction map(const GridFunction& f, const std::function<double(double)>& fn);
GridFunction abs(const GridFunction& f);
GridFunction scale(const GridFunction& f, double c);
GridFunction add(const GridFunction& a, const GridFunction& b);
GridFunction multiply(const GridFunction& a, const GridFunction& b);
GridFunction divide(const GridFunction& a, const GridFunction& b);
/// |f|^r, with 0^r = 0 for r > 0.
GridFunction power(const GridFunction& f, double r);
/// w^r computed as exp(r log w).
Weight power(const Weight& w, double r);
Weight multiply(const Weight& a, const Weight& b);
GridFunction indicator(const SpacePtr& space, std::span<const std::size_t> cells);

/// Deterministic generator.  Conversions are done by hand so streams are
/// identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t next() { return eng_(); }
  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }
  double normal();

 private:
  std::mt19937_64 eng_;
};

}  // namespace wfx
