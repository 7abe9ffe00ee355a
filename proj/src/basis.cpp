#include "wfx/basis.hpp"

#include <string>

#include "wfx/error.hpp"

namespace wfx {

BasisKind parse_basis_kind(std::string_view name) {
  if (name == "dyadic") return BasisKind::dyadic;
  if (name == "intervals") return BasisKind::intervals;
  if (name == "cubes") return BasisKind::cubes;
  if (name == "rectangles") return BasisKind::rectangles;
  throw ParameterError("unknown basis kind '" + std::string(name) + "'");
}

std::string to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::dyadic: return "dyadic";
    case BasisKind::intervals: return "intervals";
    case BasisKind::cubes: return "cubes";
    case BasisKind::rectangles: return "rectangles";
    case BasisKind::custom: return "custom";
  }
  return "custom";
}

BoxSums::BoxSums(const MeasureSpace& space, std::span<const double> values) : nx_(space.extent(0)) {
  const std::size_t ny = space.extent(1);
  if (values.size() != space.size()) throw DimensionError("box sums: value count does not match the grid");
  table_.assign((nx_ + 1) * (ny + 1), 0.0L);
  for (std::size_t y = 0; y < ny; ++y) {
    long double row = 0.0L;
    for (std::size_t x = 0; x < nx_; ++x) {
      const std::size_t i = x + nx_ * y;
      row += static_cast<long double>(values[i]) * space.mass(i);
      table_[(x + 1) + (nx_ + 1) * (y + 1)] = table_[(x + 1) + (nx_ + 1) * y] + row;
    }
  }
}

long double BoxSums::sum(const Box& b) const {
  const std::size_t w = nx_ + 1;
  return table_[b.hi[0] + w * b.hi[1]] - table_[b.lo[0] + w * b.hi[1]] - table_[b.hi[0] + w * b.lo[1]] +
         table_[b.lo[0] + w * b.lo[1]];
}

Basis Basis::enumerate(SpacePtr space, BasisKind kind) {
  Basis B;
  B.space_ = space;
  B.kind_ = kind;
  const std::size_t nx = space->extent(0), ny = space->extent(1);
  const bool two_d = space->dim() == 2;
  switch (kind) {
    case BasisKind::dyadic: {
      const std::size_t top = two_d ? std::min(nx, ny) : nx;
      for (std::size_t L = 1; L <= top; L *= 2)
        B.families_.push_back({{L, two_d ? L : 1}, {L, two_d ? L : 1}});
      break;
    }
    case BasisKind::intervals:
      if (two_d) throw ParameterError("the intervals basis is one-dimensional");
      [[fallthrough]];
    case BasisKind::cubes: {
      const std::size_t top = two_d ? std::min(nx, ny) : nx;
      for (std::size_t L = 1; L <= top; ++L) B.families_.push_back({{L, two_d ? L : 1}, {1, 1}});
      break;
    }
    case BasisKind::rectangles: {
      const double count = 0.25 * static_cast<double>(nx) * (nx + 1) * static_cast<double>(ny) * (ny + 1);
      const double count_1d = 0.5 * static_cast<double>(nx) * (nx + 1);
      if ((two_d ? count : count_1d) > kRectangleCap)
        throw CapError("rectangle basis would have " + std::to_string(static_cast<long long>(count)) +
                       " elements, above the cap of 2e7");
      for (std::size_t Ly = 1; Ly <= ny; ++Ly)
        for (std::size_t Lx = 1; Lx <= nx; ++Lx) B.families_.push_back({{Lx, Ly}, {1, 1}});
      break;
    }
    case BasisKind::custom:
      throw ParameterError("use Basis::custom for explicit element lists");
  }
  B.mu_ = BoxSums(*space, std::vector<double>(space->size(), 1.0));
  B.visit([&](const Box&) { ++B.count_; });
  return B;
}

Basis Basis::custom(SpacePtr space, std::vector<Box> boxes) {
  Basis B;
  B.space_ = space;
  B.kind_ = BasisKind::custom;
  B.mu_ = BoxSums(*space, std::vector<double>(space->size(), 1.0));
  const std::size_t nx = space->extent(0), ny = space->extent(1);
  for (const auto& b : boxes) {
    if (b.lo[0] >= b.hi[0] || b.lo[1] >= b.hi[1]) throw ParameterError("basis boxes must be nonempty");
    if (b.hi[0] > nx || b.hi[1] > ny) throw IndexError("basis box exceeds the grid");
    if (!(B.mu_.sum(b) > 0)) throw ParameterError("basis boxes must have positive mass");
  }
  if (boxes.empty()) throw ParameterError("a basis needs at least one element");
  B.boxes_ = std::move(boxes);
  B.count_ = B.boxes_.size();
  return B;
}

std::vector<Box> Basis::elements() const {
  std::vector<Box> out;
  out.reserve(count_);
  visit([&](const Box& b) { out.push_back(b); });
  return out;
}

std::vector<Box> Basis::containing(std::size_t cell) const {
  if (cell >= space_->size()) throw IndexError("cell index out of range");
  const std::size_t ix = space_->coord(cell, 0), iy = space_->coord(cell, 1);
  std::vector<Box> out;
  visit([&](const Box& b) {
    if (b.contains(ix, iy)) out.push_back(b);
  });
  return out;
}

bool Basis::covers_all() const {
  std::vector<char> hit(space_->size(), 0);
  const std::size_t nx = space_->extent(0);
  visit([&](const Box& b) {
    for (std::size_t y = b.lo[1]; y < b.hi[1]; ++y)
      for (std::size_t x = b.lo[0]; x < b.hi[0]; ++x) hit[x + nx * y] = 1;
  });
  for (char c : hit)
    if (!c) return false;
  return true;
}

double average(const GridFunction& f, const Box& B, const Weight* w) {
  const auto& s = f.grid();
  if (w) require_same_space(f, *w);
  if (B.hi[0] > s.extent(0) || B.hi[1] > s.extent(1) || B.lo[0] >= B.hi[0] || B.lo[1] >= B.hi[1])
    throw IndexError("box outside the grid");
  long double num = 0.0L, den = 0.0L;
  for (std::size_t y = B.lo[1]; y < B.hi[1]; ++y) {
    for (std::size_t x = B.lo[0]; x < B.hi[0]; ++x) {
      const std::size_t i = s.index(x, y);
      const long double m = static_cast<long double>(s.mass(i)) * (w ? (*w)[i] : 1.0);
      num += m * f[i];
      den += m;
    }
  }
  if (!(den > 0)) throw ParameterError("average over a box of zero mass");
  return static_cast<double>(num / den);
}

}  // namespace wfx
