#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "wfx/core_space.hpp"

namespace wfx {

/// Half-open per-axis cell ranges.  1D boxes use lo[1] = 0, hi[1] = 1.
struct Box {
  std::array<std::size_t, 2> lo{0, 0};
  std::array<std::size_t, 2> hi{1, 1};

  std::size_t cells() const { return (hi[0] - lo[0]) * (hi[1] - lo[1]); }
  bool contains(std::size_t ix, std::size_t iy = 0) const {
    return lo[0] <= ix && ix < hi[0] && lo[1] <= iy && iy < hi[1];
  }
  bool operator==(const Box&) const = default;
};

enum class BasisKind { dyadic, intervals, cubes, rectangles, custom };

BasisKind parse_basis_kind(std::string_view name);
std::string to_string(BasisKind kind);

/// Summed-area table of values·μ (optionally ·w) giving O(1) box sums.
class BoxSums {
 public:
  BoxSums() = default;
  BoxSums(const MeasureSpace& space, std::span<const double> values);
  long double sum(const Box& b) const;

 private:
  std::size_t nx_ = 0;
  std::vector<long double> table_;  // (nx+1)*(ny+1)
};

/// All boxes of one size, placed at multiples of a stride.
struct ShapeFamily {
  std::array<std::size_t, 2> len{1, 1};
  std::array<std::size_t, 2> stride{1, 1};
};

/// Finite family of cell boxes of positive μ-mass.
///
/// Structured kinds are stored as shape families and visited lazily; the
/// number of boxes grows like n^4 for 2D rectangles, so nothing is
/// materialized unless asked.
class Basis {
 public:
  static constexpr double kRectangleCap = 2e7;

  static Basis enumerate(SpacePtr space, BasisKind kind);
  /// Explicit list of boxes, e.g. a single-element basis.
  static Basis custom(SpacePtr space, std::vector<Box> boxes);

  BasisKind kind() const { return kind_; }
  const MeasureSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  std::size_t size() const { return count_; }
  std::span<const ShapeFamily> families() const { return families_; }
  std::span<const Box> explicit_boxes() const { return boxes_; }

  double mass(const Box& b) const { return static_cast<double>(mu_.sum(b)); }

  /// Calls fn(box) for every element, families first, in a fixed order.
  template <class Fn>
  void visit(Fn&& fn) const;

  std::vector<Box> elements() const;
  std::vector<Box> containing(std::size_t cell) const;
  /// True when every cell lies in some element.
  bool covers_all() const;

 private:
  Basis() = default;
  SpacePtr space_;
  BasisKind kind_ = BasisKind::custom;
  std::vector<ShapeFamily> families_;
  std::vector<Box> boxes_;
  BoxSums mu_;
  std::size_t count_ = 0;
};

template <class Fn>
void Basis::visit(Fn&& fn) const {
  const std::size_t nx = space_->extent(0), ny = space_->extent(1);
  for (const auto& fam : families_) {
    for (std::size_t y = 0; y + fam.len[1] <= ny; y += fam.stride[1]) {
      for (std::size_t x = 0; x + fam.len[0] <= nx; x += fam.stride[0]) {
        const Box b{{x, y}, {x + fam.len[0], y + fam.len[1]}};
        if (mu_.sum(b) > 0) fn(b);
      }
    }
  }
  for (const auto& b : boxes_) fn(b);
}

/// ∫_B f (w) dμ / (w)μ(B).
double average(const GridFunction& f, const Box& B, const Weight* w = nullptr);

}  // namespace wfx
