#pragma once

// Naive reference implementations.  Everything here enumerates boxes and
// level sets directly and shares no code with the library beyond the data
// types, so agreement is evidence for both.

#include <vector>

#include "wfx/basis.hpp"
#include "wfx/core_space.hpp"
#include "wfx/spaces.hpp"

namespace wfx::oracle {

/// Every element of the basis kind, listed by explicit coordinate loops.
std::vector<Box> boxes(const MeasureSpace& space, BasisKind kind);

/// (Σ_{i∈B} f_i μ_i) / μ(B), by direct summation.
double mean(const MeasureSpace& space, const std::vector<double>& f, const Box& B);

double ap(const Weight& w, BasisKind kind, double p);
double a1(const Weight& w, BasisKind kind);
double rh(const Weight& w, BasisKind kind, double s);
double apq(const Weight& w, BasisKind kind, double p, double q);
double bmo(const GridFunction& b, BasisKind kind);
std::vector<double> maximal(const GridFunction& f, BasisKind kind);

/// ‖ |f u|^r ‖_{X_v}^{1/r} from the textbook formulas: power sums, the
/// distribution function by pairwise comparison, and Luxemburg bisections
/// run to machine precision.
double norm(const GridFunction& f, const SpaceSpec& spec);

}  // namespace wfx::oracle
