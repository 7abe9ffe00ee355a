#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "wfx/error.hpp"
#include "wfx/muckenhoupt.hpp"
#include "wfx/spaces.hpp"
#include "wfx/verify/oracles.hpp"

using namespace wfx;

namespace {

SpacePtr line(std::size_t n) { return MeasureSpace::lebesgue({n}, 1.0 / static_cast<double>(n)); }

GridFunction random_function(const SpacePtr& sp, std::uint64_t seed, double lo = -2.0, double hi = 3.0) {
  Rng rng(seed);
  std::vector<double> v(sp->size());
  for (auto& x : v) x = rng.uniform(lo, hi);
  return GridFunction(sp, v);
}

std::vector<SpaceSpec> specs(const SpacePtr& sp) {
  const auto u = make_power_weight(sp, 0.3, 0.5);
  const auto v = make_random_a1ish(sp, 4);
  std::vector<double> e(sp->size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = 1.5 + static_cast<double>(i % 5) * 0.4;
  return {SpaceSpec::lp(sp, 2.0).with_u(u),
          SpaceSpec::lp(sp, 3.0).with_v(v).with_r(0.5),
          SpaceSpec::lp(sp, INFINITY).with_u(u),
          SpaceSpec::lorentz(sp, 2.0, 1.0).with_v(v),
          SpaceSpec::lorentz(sp, 3.0, 1.5).with_u(u),
          SpaceSpec::lorentz(sp, 2.0, INFINITY),
          SpaceSpec::orlicz(sp, YoungFunction::plog(2.0, 1.0)).with_u(u).with_v(v),
          SpaceSpec::varexp(sp, e).with_u(u)};
}

}  // namespace

TEST_CASE("distribution and rearrangement") {
  const auto sp = MeasureSpace::lebesgue({8}, 1.0);
  const auto one = Weight::ones(sp);
  const auto c = rearrangement(GridFunction::constant(sp, 2.0), one);
  CHECK(c(0.0) == 2.0);
  CHECK(c(7.99) == 2.0);
  CHECK(c(8.0) == 0.0);

  const GridFunction f(sp, {3, -7, 1, 4, 0.5, 6, 2, 5});
  const auto fs = rearrangement(f, one);
  const std::vector<double> sorted{7, 6, 5, 4, 3, 2, 1, 0.5};
  for (std::size_t k = 0; k < 8; ++k) CHECK(fs(static_cast<double>(k) + 0.5) == sorted[k]);

  // Equidistribution: recompute ν from the step function f*.
  const auto nu = distribution(f, one);
  for (double lam : {0.0, 0.25, 1.0, 2.5, 4.0, 6.5, 8.0}) {
    double measure = 0.0;
    for (std::size_t k = 0; k + 1 < fs.breaks.size() + 1 && k < fs.values.size(); ++k) {
      const double right = k + 1 < fs.breaks.size() ? fs.breaks[k + 1] : 8.0;
      if (fs.values[k] > lam) measure += right - fs.breaks[k];
    }
    CHECK(nu(lam) == doctest::Approx(measure));
  }
}

TEST_CASE("norms agree with the oracle") {
  const auto sp = line(64);
  for (const auto& spec : specs(sp)) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto f = random_function(sp, seed);
      CAPTURE(spec.describe());
      CHECK(norm(f, spec) == doctest::Approx(oracle::norm(f, spec)).epsilon(1e-8));
    }
  }
}

TEST_CASE("norm reductions") {
  const auto sp = line(64);
  const auto f = random_function(sp, 9);
  const auto v = make_random_a1ish(sp, 2);
  for (double p : {1.5, 2.0, 3.0}) {
    const double lp = norm(f, SpaceSpec::lp(sp, p).with_v(v));
    CHECK(norm(f, SpaceSpec::lorentz(sp, p, p).with_v(v)) == doctest::Approx(lp).epsilon(1e-12));
    CHECK(norm(f, SpaceSpec::varexp(sp, std::vector<double>(64, p)).with_v(v)) == doctest::Approx(lp).epsilon(1e-9));
    CHECK(norm(f, SpaceSpec::orlicz(sp, YoungFunction::power(p)).with_v(v)) == doctest::Approx(lp).epsilon(1e-10));
  }
}

TEST_CASE("Lorentz norm of an indicator") {
  const auto sp = line(32);
  const std::vector<std::size_t> E{1, 5, 6, 20, 31};
  const auto f = indicator(sp, E);
  const double vE = 5.0 / 32;
  for (auto [p, q] : {std::pair{2.0, 1.0}, std::pair{3.0, 1.5}, std::pair{1.5, 4.0}})
    CHECK(norm(f, SpaceSpec::lorentz(sp, p, q)) == doctest::Approx(std::pow(p / q, 1 / q) * std::pow(vE, 1 / p)));
}

TEST_CASE("norms are homogeneous and satisfy the triangle inequality") {
  const auto sp = line(64);
  for (const auto& spec : specs(sp)) {
    if (spec.r() != 1.0 || (spec.family() == SpaceFamily::lorentz && spec.q() > spec.p())) continue;
    const auto f = random_function(sp, 1), g = random_function(sp, 2);
    CAPTURE(spec.describe());
    CHECK(norm(scale(f, -2.5), spec) == doctest::Approx(2.5 * norm(f, spec)).epsilon(1e-9));
    CHECK(norm(add(f, g), spec) <= (norm(f, spec) + norm(g, spec)) * (1 + 1e-9));
  }
}

TEST_CASE("generalized Holder") {
  const auto sp = line(64);
  for (const auto& spec : specs(sp)) {
    if (spec.r() != 1.0) continue;
    const auto& v = spec.v();
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto f = random_function(sp, seed), g = random_function(sp, seed + 100);
      const double lhs = integrate(abs(multiply(f, g)), v);
      const auto a = associate_norm(g, spec);
      CAPTURE(spec.describe());
      CHECK(lhs <= a.factor * norm(f, spec) * a.value * (1 + 1e-8));
    }
  }
}

TEST_CASE("duality recovers the lp norm") {
  const auto sp = line(64);
  for (double p : {1.5, 2.0, 4.0}) {
    const auto spec = SpaceSpec::lp(sp, p);
    const auto f = random_function(sp, 3);
    const double nf = norm(f, spec);
    double best = 0.0;
    Rng rng(17);
    for (int k = 0; k < 200; ++k) {
      std::vector<double> v(64);
      for (auto& x : v) x = rng.uniform(0.0, 1.0);
      GridFunction g(sp, v);
      g = scale(g, 1.0 / associate_norm(g, spec).value);
      best = std::max(best, integrate(abs(multiply(f, g))));
    }
    const auto ext = power(f, p - 1);
    best = std::max(best, integrate(abs(multiply(f, scale(ext, 1.0 / associate_norm(ext, spec).value)))));
    CHECK(best <= nf * (1 + 1e-10));
    CHECK(best >= nf / 2);
    CHECK(best == doctest::Approx(nf).epsilon(1e-10));
  }
}

TEST_CASE("associate of lp(2) is lp(2)") {
  const auto sp = line(32);
  const auto spec = SpaceSpec::lp(sp, 2.0);
  const auto a = associate_spec(spec);
  CHECK(a.family() == SpaceFamily::lp);
  CHECK(a.p() == 2.0);
  const auto aa = associate_spec(a);
  const auto f = random_function(sp, 8);
  CHECK(norm(f, aa) == doctest::Approx(norm(f, spec)).epsilon(1e-10));
  CHECK(associate_norm(f, spec).value == doctest::Approx(norm(f, spec)).epsilon(1e-10));
}

TEST_CASE("concretize folds r into the family") {
  const auto sp = line(32);
  const auto f = random_function(sp, 4);
  const auto u = make_power_weight(sp, 0.2, 0.5);
  for (const auto& spec : {SpaceSpec::lp(sp, 2.0).with_u(u).with_r(1.5), SpaceSpec::lorentz(sp, 2.0, 3.0).with_r(1.5),
                           SpaceSpec::orlicz(sp, YoungFunction::plog(2, 1)).with_r(2.0)}) {
    CAPTURE(spec.describe());
    const auto c = concretize(spec);
    CHECK(c.r() == 1.0);
    CHECK(norm(f, c) == doctest::Approx(norm(f, spec)).epsilon(1e-9));
  }
}

TEST_CASE("Boyd indices and normability") {
  const auto sp = line(16);
  const auto b = boyd_indices(SpaceSpec::lorentz(sp, 3.0, 1.5));
  CHECK(b.first == 3.0);
  CHECK(b.second == 3.0);
  CHECK(bfs_power_limit(SpaceSpec::lp(sp, 3.0)) == doctest::Approx(3.0));
  CHECK(bfs_power_limit(SpaceSpec::lorentz(sp, 2.0, 1.0)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(boyd_indices(SpaceSpec::varexp(sp, std::vector<double>(16, 2.0))), ParameterError);
}

TEST_CASE("spec preconditions") {
  const auto sp = line(16);
  CHECK_THROWS_AS(SpaceSpec::lp(sp, 0.0), ParameterError);
  CHECK_THROWS_AS(SpaceSpec::varexp(sp, std::vector<double>(8, 2.0)), DimensionError);
  CHECK_THROWS_AS(SpaceSpec::lp(sp, 2.0).with_u(Weight::ones(line(32))), DimensionError);
}

TEST_CASE("function-norm axioms") {
  const auto sp = line(64);
  const auto I = Basis::enumerate(sp, BasisKind::intervals);
  for (const auto& spec : specs(sp)) {
    CAPTURE(spec.describe());
    const auto f = random_function(sp, 5);
    // Monotone lattice property.
    const auto smaller = map(f, [](double x) { return 0.7 * x; });
    CHECK(norm(smaller, spec) <= norm(f, spec) * (1 + 1e-12));
    // Fatou along increasing truncations.
    double prev = 0.0;
    const double top = norm(f, spec);
    for (int k = 1; k <= 5; ++k) {
      const double cap = f.max_abs() * k / 5.0;
      const double nk = norm(map(f, [cap](double x) { return std::min(std::abs(x), cap); }), spec);
      CHECK(nk >= prev * (1 - 1e-12));
      prev = nk;
    }
    CHECK(prev == doctest::Approx(top).epsilon(1e-9));
    if (spec.r() != 1.0) continue;
    // Local integrability against the associate norm of 1_E (scaled back by u).
    const std::vector<std::size_t> E{3, 4, 5, 40, 41};
    const auto ind = indicator(sp, E);
    const auto cE = associate_norm(ind, spec);
    const double lhs = integrate(multiply(abs(f), ind), spec.v());
    CHECK(lhs <= cE.factor * cE.value * norm(f, spec) * (1 + 1e-9));
    // Every basis element has finite positive norm.
    for (const auto& b : I.elements()) {
      std::vector<std::size_t> cells;
      for (std::size_t x = b.lo[0]; x < b.hi[0]; ++x) cells.push_back(x);
      const double nb = norm(indicator(sp, cells), spec);
      CHECK(nb > 0.0);
      CHECK(std::isfinite(nb));
      if (cells.size() > 3) break;
    }
  }
}

TEST_CASE("built-in Boyd indices") {
  const auto sp = line(16);
  for (double p : {1.5, 3.0}) {
    CHECK(boyd_indices(SpaceSpec::lp(sp, p)) == std::pair{p, p});
    CHECK(boyd_indices(SpaceSpec::orlicz(sp, YoungFunction::plog(p, 1.0))) == std::pair{p, p});
  }
  CHECK(boyd_indices(SpaceSpec::orlicz(sp, YoungFunction::minmax(2.0, 5.0, true))) == std::pair{2.0, 5.0});
}
