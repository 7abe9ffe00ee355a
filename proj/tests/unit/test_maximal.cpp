#include <doctest.h>

#include <cmath>
#include <vector>

#include "wfx/maximal.hpp"
#include "wfx/muckenhoupt.hpp"
#include "wfx/rdf.hpp"
#include "wfx/verify/oracles.hpp"

using namespace wfx;

namespace {

// Copies, so loops over a temporary result stay valid.
std::vector<double> vals(const GridFunction& f) { return {f.values().begin(), f.values().end()}; }

SpacePtr unit_line(std::size_t n) { return MeasureSpace::lebesgue({n}, 1.0); }

GridFunction spike(const SpacePtr& sp, std::size_t at) {
  std::vector<double> v(sp->size(), 0.0);
  v[at] = 1.0;
  return GridFunction(sp, v);
}

GridFunction random_function(const SpacePtr& sp, std::uint64_t seed, double lo = -1.0, double hi = 2.0) {
  Rng rng(seed);
  std::vector<double> v(sp->size());
  for (auto& x : v) x = rng.uniform(lo, hi);
  return GridFunction(sp, v);
}

}  // namespace

TEST_CASE("maximal of a constant") {
  const auto sp = MeasureSpace::lebesgue({8, 8}, 0.125);
  for (auto kind : {BasisKind::dyadic, BasisKind::cubes, BasisKind::rectangles}) {
    const auto Mf = maximal(GridFunction::constant(sp, -2.5), Basis::enumerate(sp, kind));
    for (double x : Mf.values()) CHECK(x == doctest::Approx(2.5));
  }
}

TEST_CASE("maximal of a spike") {
  const auto sp = unit_line(8);
  const auto f = spike(sp, 0);
  const auto Mi = maximal(f, Basis::enumerate(sp, BasisKind::intervals));
  const auto Md = maximal(f, Basis::enumerate(sp, BasisKind::dyadic));
  for (std::size_t k = 0; k < 8; ++k) {
    CHECK(Mi[k] == doctest::Approx(1.0 / static_cast<double>(k + 1)));
    CHECK(Md[k] == doctest::Approx(std::exp2(-std::ceil(std::log2(static_cast<double>(k + 1))))));
  }
}

TEST_CASE("maximal agrees with the brute-force oracle") {
  const auto sp1 = MeasureSpace::with_masses({16}, 1.0 / 16, {1, 2, 0, 1, 3, 1, 1, 1, 0.5, 2, 1, 1, 1, 1, 4, 1});
  const auto sp2 = MeasureSpace::lebesgue({4, 8}, 0.25);
  for (const auto& sp : {sp1, sp2}) {
    for (auto kind : {BasisKind::dyadic, BasisKind::intervals, BasisKind::cubes, BasisKind::rectangles}) {
      if (kind == BasisKind::intervals && sp->dim() == 2) continue;
      const auto f = random_function(sp, 11);
      const auto Mf = maximal(f, Basis::enumerate(sp, kind));
      const auto ref = oracle::maximal(f, kind);
      for (std::size_t i = 0; i < sp->size(); ++i) CHECK(Mf[i] == doctest::Approx(ref[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("maximal dominates |f| on covering bases and is sublinear") {
  const auto sp = unit_line(32);
  const auto B = Basis::enumerate(sp, BasisKind::intervals);
  const auto f = random_function(sp, 3), g = random_function(sp, 4);
  const auto Mf = maximal(f, B), Mg = maximal(g, B), Mfg = maximal(add(f, g), B);
  for (std::size_t i = 0; i < sp->size(); ++i) {
    CHECK(Mf[i] >= std::abs(f[i]) - 1e-15);
    CHECK(Mfg[i] <= Mf[i] + Mg[i] + 1e-12);
  }
}

TEST_CASE("dual maximal") {
  const auto sp = unit_line(16);
  const auto B = Basis::enumerate(sp, BasisKind::intervals);
  const auto f = random_function(sp, 5, 0.0, 1.0);
  const auto plain = maximal(f, B);
  const auto dual1 = dual_maximal(f, B, Weight::ones(sp));
  for (std::size_t i = 0; i < sp->size(); ++i) CHECK(dual1[i] == doctest::Approx(plain[i]));

  const auto v = make_random_a1ish(sp, 9);
  const auto Mv = maximal(v, B);
  const auto dc = dual_maximal(GridFunction::constant(sp, 3.0), B, v);
  for (std::size_t i = 0; i < sp->size(); ++i) CHECK(dc[i] == doctest::Approx(3.0 * Mv[i] / v[i]));

  const auto s4 = unit_line(4);
  const auto d4 = dual_maximal(spike(s4, 0), Basis::enumerate(s4, BasisKind::intervals), Weight::ones(s4));
  CHECK(d4[0] == doctest::Approx(1.0));
  CHECK(d4[1] == doctest::Approx(0.5));
  CHECK(d4[2] == doctest::Approx(1.0 / 3));
  CHECK(d4[3] == doctest::Approx(0.25));
}

TEST_CASE("iterated maximal") {
  const auto sp = unit_line(4);
  const auto B = Basis::enumerate(sp, BasisKind::intervals);
  const auto f = spike(sp, 0);
  const auto f0 = iterate_maximal(f, B, 0);
  for (std::size_t i = 0; i < 4; ++i) CHECK(f0[i] == f[i]);
  const auto c = iterate_maximal(GridFunction::constant(sp, 0.7), B, 5);
  for (double x : c.values()) CHECK(x == doctest::Approx(0.7));
  const auto two = iterate_maximal(f, B, 2);
  const auto ref = oracle::maximal(GridFunction(sp, {1.0, 0.5, 1.0 / 3, 0.25}), BasisKind::intervals);
  for (std::size_t i = 0; i < 4; ++i) CHECK(two[i] == doctest::Approx(ref[i]));
}

TEST_CASE("centered maximal") {
  const auto sp = MeasureSpace::lebesgue({8, 8}, 0.125);
  for (double x : vals(centered_maximal(GridFunction::constant(sp, 1.5)))) CHECK(x == doctest::Approx(1.5));

  // Windows are clipped to the grid, so in 2D they are rectangles rather than cubes.
  const auto f = random_function(sp, 21);
  const auto C = centered_maximal(f);
  const auto M = maximal(f, Basis::enumerate(sp, BasisKind::rectangles));
  for (std::size_t i = 0; i < sp->size(); ++i) CHECK(C[i] <= M[i] + 1e-12);
  const auto s1 = MeasureSpace::lebesgue({32}, 1.0 / 32);
  const auto g = random_function(s1, 22);
  const auto C1 = centered_maximal(g);
  const auto M1 = maximal(g, Basis::enumerate(s1, BasisKind::intervals));
  for (std::size_t i = 0; i < s1->size(); ++i) CHECK(C1[i] <= M1[i] + 1e-12);

  // Only cell 3 carries mass: every centered window reaching it averages to 1.
  std::vector<double> mu(8, 0.0);
  mu[3] = 1.0;
  const auto atom = MeasureSpace::with_masses({8}, 1.0, mu);
  std::vector<double> ind(8, 0.0);
  ind[3] = 1.0;
  for (double x : vals(centered_maximal(GridFunction(atom, ind)))) CHECK(x == doctest::Approx(1.0));
}

TEST_CASE("orlicz maximal") {
  const auto sp = unit_line(16);
  const auto B = Basis::enumerate(sp, BasisKind::intervals);
  const auto f = random_function(sp, 8);

  const auto lin = orlicz_maximal(f, B, YoungFunction::linear());
  const auto M = maximal(f, B);
  for (std::size_t i = 0; i < sp->size(); ++i) CHECK(lin[i] == doctest::Approx(M[i]).epsilon(1e-9));

  const auto M3 = orlicz_maximal(f, B, YoungFunction::power(3.0));
  const auto ref = maximal(power(f, 3.0), B);
  for (std::size_t i = 0; i < sp->size(); ++i) CHECK(M3[i] == doctest::Approx(std::cbrt(ref[i])).epsilon(1e-9));

  const auto phi = YoungFunction::plog(2.0, 1.0);
  const double c = 1.7;
  for (double x : vals(orlicz_maximal(GridFunction::constant(sp, c), B, phi)))
    CHECK(x == doctest::Approx(c / phi.inverse(1.0)).epsilon(1e-9));
}

TEST_CASE("maximal: homogeneity, basis monotonicity, local averages") {
  const auto sp = MeasureSpace::lebesgue({16, 16}, 1.0 / 16);
  const auto f = random_function(sp, 31);
  const auto dy = Basis::enumerate(sp, BasisKind::dyadic);
  const auto cu = Basis::enumerate(sp, BasisKind::cubes);
  const auto re = Basis::enumerate(sp, BasisKind::rectangles);
  const auto Md = maximal(f, dy), Mc = maximal(f, cu), Mr = maximal(f, re);
  const auto Ms = maximal(scale(f, -2.5), cu);
  for (std::size_t i = 0; i < sp->size(); ++i) {
    CHECK(Md[i] <= Mc[i] + 1e-15);
    CHECK(Mc[i] <= Mr[i] + 1e-15);
    CHECK(Ms[i] == doctest::Approx(2.5 * Mc[i]).epsilon(1e-14));
  }
  for (const auto& b : cu.elements()) {
    const double a = average(abs(f), b);
    std::vector<double> cut(sp->size(), 0.0);
    for (std::size_t y = b.lo[1]; y < b.hi[1]; ++y)
      for (std::size_t x = b.lo[0]; x < b.hi[0]; ++x) cut[sp->index(x, y)] = f[sp->index(x, y)];
    const auto M = maximal(GridFunction(sp, cut), cu);
    for (std::size_t y = b.lo[1]; y < b.hi[1]; ++y)
      for (std::size_t x = b.lo[0]; x < b.hi[0]; ++x) CHECK(M[sp->index(x, y)] >= a * (1 - 1e-12));
    if (b.cells() > 4) break;  // a few elements are enough
  }
}

TEST_CASE("weighted L^p bound of M is consistent with the sharp form") {
  // C is fitted once on unweighted data, then applied to weighted ratios.
  const auto sp = MeasureSpace::lebesgue({128}, 1.0 / 128);
  const auto I = Basis::enumerate(sp, BasisKind::intervals);
  const double p = 2.0;
  auto ratio = [&](const GridFunction& f, const Weight& w) {
    auto lp = [&](const GridFunction& g) { return std::sqrt(integrate(power(g, p), w)); };
    return lp(maximal(f, I)) / lp(f);
  };
  const double C = estimate_maximal_norm(SpaceSpec::lp(sp, p), I, NormMode::primal).lower;
  std::vector<GridFunction> inputs;
  for (std::uint64_t s = 1; s <= 8; ++s) inputs.push_back(random_function(sp, s, 0.0, 1.0));
  for (std::size_t k = 0; k < 128; k += 9) inputs.push_back(spike(sp, k));
  for (const auto& f : inputs) CHECK(ratio(f, Weight::ones(sp)) <= C * (1 + 1e-12));
  for (double a : {-0.7, -0.3, 0.4, 0.8}) {
    const auto w = make_power_weight(sp, a, 0.5);
    const double bound = C * std::pow(ap_constant(w, I, p).value, 1.0 / (p - 1.0));
    CAPTURE(a);
    for (const auto& f : inputs) CHECK(ratio(f, w) <= bound);
  }
}
