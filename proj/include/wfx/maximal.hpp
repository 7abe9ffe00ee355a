#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "wfx/basis.hpp"
#include "wfx/core_space.hpp"
#include "wfx/young.hpp"

namespace wfx {

/// Per-cell maximum of value(B) over the elements B containing the cell.
/// Cells outside every element get 0.  value is never called on zero-mass boxes.
std::vector<double> sup_over_containing(const Basis& basis, const std::function<double(const Box&)>& value);

/// M_B f(x) = max over elements B ∋ x of the μ-average of |f| on B.
GridFunction maximal(const GridFunction& f, const Basis& basis);

/// M'_{B,v} f = M_B(f v) / v.
GridFunction dual_maximal(const GridFunction& f, const Basis& basis, const Weight& v);

/// k-fold composition of M_B; k = 0 returns f.
GridFunction iterate_maximal(const GridFunction& f, const Basis& basis, int k);

/// Sup over cubes centered at each cell (half-widths in whole cells), clipped
/// to the grid; zero-mass cubes are skipped.
GridFunction centered_maximal(const GridFunction& f);

/// Per-cell sup of the normalized Luxemburg norm inf{λ : ⨍_B Φ(|f|/λ) ≤ 1}.
GridFunction orlicz_maximal(const GridFunction& f, const Basis& basis, const YoungFunction& phi);

}  // namespace wfx
