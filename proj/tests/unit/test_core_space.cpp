#include <doctest.h>

#include <cmath>
#include <vector>

#include "wfx/core_space.hpp"
#include "wfx/error.hpp"

using namespace wfx;

TEST_CASE("integrate sums masses") {
  const auto sp = MeasureSpace::lebesgue({8}, 1.0);
  const auto one = GridFunction::constant(sp, 1.0);
  CHECK(integrate(one, Weight::ones(sp)) == 8.0);
  CHECK(integrate(one) == 8.0);
  CHECK(integrate(GridFunction::zeros(sp)) == 0.0);
}

TEST_CASE("integrate indicator on half-width cells") {
  const auto sp = MeasureSpace::lebesgue({8}, 0.5);
  const std::vector<std::size_t> cells{1, 4, 6};
  const Weight two(GridFunction::constant(sp, 2.0));
  CHECK(integrate(indicator(sp, cells), two) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("restrict_mass") {
  const auto sp = MeasureSpace::lebesgue({4, 4}, 0.5);
  std::vector<std::size_t> all(sp->size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  CHECK(restrict_mass(all, Weight::ones(sp)) == doctest::Approx(sp->total_mass()));
  CHECK(sp->total_mass() == doctest::Approx(4.0));

  const std::vector<std::size_t> one{5};
  const Weight four(GridFunction::constant(sp, 4.0));
  CHECK(restrict_mass(one, four) == 1.0);

  CHECK_THROWS_AS(restrict_mass(std::vector<std::size_t>{}, four), ParameterError);
  CHECK_THROWS_AS(restrict_mass(std::vector<std::size_t>{16}, four), IndexError);
}

TEST_CASE("grid construction preconditions") {
  CHECK_THROWS_AS(MeasureSpace::lebesgue({6}, 1.0), ParameterError);
  CHECK_THROWS_AS(MeasureSpace::lebesgue({4}, -1.0), ParameterError);
  CHECK_THROWS_AS(MeasureSpace::with_masses({4}, 1.0, {1, 1, 1}), DimensionError);
  CHECK_THROWS_AS(MeasureSpace::with_masses({4}, 1.0, {0, 0, 0, 0}), InputError);
  CHECK_THROWS_AS(MeasureSpace::with_masses({2}, 1.0, {1, -1}), InputError);
  const auto sp = MeasureSpace::lebesgue({4}, 1.0);
  CHECK_THROWS_AS(GridFunction(sp, {1, 2, 3}), DimensionError);
  CHECK_THROWS_AS(GridFunction(sp, {1, 2, NAN, 4}), InputError);
  CHECK_THROWS_AS(Weight(sp, {1, 0, 1, 1}), InputError);
}

TEST_CASE("cell geometry is row-major") {
  const auto sp = MeasureSpace::lebesgue({4, 2}, 0.25);
  CHECK(sp->dim() == 2);
  CHECK(sp->size() == 8);
  CHECK(sp->index(1, 1) == 5);
  CHECK(sp->coord(5, 0) == 1);
  CHECK(sp->coord(5, 1) == 1);
  CHECK(sp->center(5, 0) == doctest::Approx(0.375));
  CHECK(sp->center(5, 1) == doctest::Approx(0.375));
  CHECK(sp->mass(0) == doctest::Approx(0.0625));
}

TEST_CASE("pointwise helpers reject mixed grids") {
  const auto a = MeasureSpace::lebesgue({4}, 1.0);
  const auto b = MeasureSpace::lebesgue({8}, 1.0);
  CHECK_THROWS_AS(add(GridFunction::zeros(a), GridFunction::zeros(b)), DimensionError);
  const auto same = MeasureSpace::lebesgue({4}, 1.0);
  CHECK_NOTHROW(add(GridFunction::zeros(a), GridFunction::zeros(same)));
}

TEST_CASE("power of zero and weights") {
  const auto sp = MeasureSpace::lebesgue({4}, 1.0);
  const GridFunction f(sp, {0, -2, 3, 1});
  const auto g = power(f, 2.0);
  CHECK(g[0] == 0.0);
  CHECK(g[1] == doctest::Approx(4.0));
  const Weight w(sp, {1, 4, 9, 16});
  const auto r = power(w, 0.5);
  CHECK(r[3] == doctest::Approx(4.0));
}

TEST_CASE("rng is deterministic") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Rng c(7);
  for (int i = 0; i < 1000; ++i) {
    const double u = c.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("integrate is linear, monotone and additive over partitions") {
  const auto sp = MeasureSpace::with_masses({16}, 0.25, {1, 2, 0, 1, 3, 1, 1, 1, 0.5, 2, 1, 1, 1, 1, 4, 1});
  Rng rng(13);
  std::vector<double> a(16), b(16), wv(16);
  for (std::size_t i = 0; i < 16; ++i) {
    a[i] = rng.uniform(-1, 1);
    b[i] = a[i] + rng.uniform(0, 1);
    wv[i] = rng.uniform(0.1, 3);
  }
  const GridFunction f(sp, a), g(sp, b);
  const Weight w(sp, wv);
  CHECK(integrate(add(scale(f, 2.0), scale(g, -3.0)), w) ==
        doctest::Approx(2.0 * integrate(f, w) - 3.0 * integrate(g, w)).epsilon(1e-13));
  CHECK(integrate(f, w) <= integrate(g, w));
  CHECK(integrate(abs(add(f, g))) <= integrate(abs(f)) + integrate(abs(g)) + 1e-15);

  std::vector<std::size_t> parts[3];
  for (std::size_t i = 0; i < 16; ++i) parts[rng.below(3)].push_back(i);
  double total = 0.0;
  for (const auto& E : parts)
    if (!E.empty()) total += restrict_mass(E, w);
  CHECK(total == doctest::Approx(integrate(GridFunction::constant(sp, 1.0), w)).epsilon(1e-14));
}
