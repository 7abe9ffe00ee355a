#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "wfx/error.hpp"
#include "wfx/maximal.hpp"
#include "wfx/muckenhoupt.hpp"
#include "wfx/rdf.hpp"

using namespace wfx;

namespace {

SpacePtr line(std::size_t n) { return MeasureSpace::lebesgue({n}, 1.0 / static_cast<double>(n)); }

GridFunction random_nonneg(const SpacePtr& sp, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(sp->size());
  for (auto& x : v) x = rng.uniform() < 0.3 ? 0.0 : rng.uniform(0.0, 2.0);
  return GridFunction(sp, v);
}

const Check* find(const WeightReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("truncation tolerance") {
  CHECK(truncation_tolerance(2) == 1.0);
  CHECK(truncation_tolerance(40) == std::ldexp(1.0, -38));
}

TEST_CASE("maximal norm estimates") {
  const auto sp = line(64);
  const auto I = Basis::enumerate(sp, BasisKind::intervals);
  const auto spec = SpaceSpec::lp(sp, 2.0);
  const auto primal = estimate_maximal_norm(spec, I, NormMode::primal);
  const auto dual = estimate_maximal_norm(spec, I, NormMode::dual);
  CHECK(primal.lower >= 1.0);
  CHECK(dual.lower == doctest::Approx(primal.lower).epsilon(1e-12));
  REQUIRE(primal.certified_upper);
  CHECK(primal.lower <= *primal.certified_upper);
}

TEST_CASE("refinement study with an A_2 power weight") {
  const auto study = refinement_study(
      [](SpacePtr sp) { return SpaceSpec::lp(sp, 2.0).with_u(make_power_weight(sp, 0.25, 0.5)); }, BasisKind::intervals,
      {64, 128, 256}, NormMode::primal);
  CHECK(study.stable);
  REQUIRE(study.lower.size() == 3);
  for (double x : study.lower) {
    CHECK(std::isfinite(x));
    CHECK(x >= 1.0);
  }
}

TEST_CASE("positive majorant") {
  const auto sp = line(32);
  const auto spec = SpaceSpec::lp(sp, 2.0);
  const auto pos = GridFunction::constant(sp, 0.3);
  const auto same = positive_majorant(pos, spec, 0.5);
  for (std::size_t i = 0; i < 32; ++i) CHECK(same[i] == pos[i]);

  std::vector<std::size_t> E{2, 3, 4, 9};
  auto h = indicator(sp, E);
  h = scale(h, 1.0 / norm(h, spec));
  for (double eps : {1.0, 0.1, 1e-3}) {
    const auto ht = positive_majorant(h, spec, eps);
    CHECK(ht.min() > 0.0);
    CHECK(norm(ht, spec) <= (1.0 + eps) * (1 + 1e-12));
    for (std::size_t i = 0; i < 32; ++i) CHECK(ht[i] >= h[i]);
  }
  CHECK_THROWS_AS(positive_majorant(h, spec, 0.0), ParameterError);
}

TEST_CASE("Rubio de Francia majorant") {
  const auto sp = line(32);
  const auto I = Basis::enumerate(sp, BasisKind::intervals);
  for (double N : {1.0, 1.7, 5.0}) {
    for (int K : {3, 10, 60}) {
      const auto R = rdf_majorant(GridFunction::constant(sp, 2.0), I, N, K);
      const double full = 2.0 * 2.0 * N / (2.0 * N - 1.0);
      const double trunc = 2.0 * (1.0 - std::pow(2.0 * N, -K)) / (1.0 - 1.0 / (2.0 * N));
      for (double x : R.value.values()) {
        CHECK(x == doctest::Approx(trunc).epsilon(1e-13));
        CHECK(x <= full);
        CHECK(x >= full * (1.0 - std::ldexp(1.0, -K)));
      }
    }
  }
  const auto spec = SpaceSpec::lp(sp, 2.0);
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto h = positive_majorant(random_nonneg(sp, seed), spec, 0.1);
    const double N = estimate_maximal_norm(spec, I, NormMode::primal).value();
    for (int K : {4, 12, 40}) {
      const auto R = rdf_majorant(h, I, N, K);
      for (std::size_t i = 0; i < 32; ++i) CHECK(R.value[i] >= h[i]);
      CHECK(a1_constant(Weight(R.value), I).value <= 2.0 * N * (1.0 + truncation_tolerance(K)));
    }
  }
  CHECK_THROWS_AS(rdf_majorant(GridFunction::constant(sp, 1.0), I, 0.5, 10), ParameterError);
}

TEST_CASE("A_p construction on constants") {
  const auto sp = line(32);
  const auto I = Basis::enumerate(sp, BasisKind::intervals);
  const auto one = GridFunction::constant(sp, 1.0);
  const auto spec = SpaceSpec::lp(sp, 2.0);

  RdfConfig ideal;
  ideal.N1 = 1.0;
  ideal.N2 = 1.0;
  const auto c = build_ap_weight(one, one, spec, I, 2.0, ideal);
  CHECK(c.report.ok());
  CHECK(c.report.ap_bound == doctest::Approx(4.0));
  CHECK(c.report.ap_constant <= 4.0 * (1 + 1e-9));

  const auto est = build_ap_weight(one, one, spec, I, 2.0);
  CHECK(est.report.ok());
  CHECK(est.report.ap_constant <= 4.0 * est.report.N1 * est.report.N2 * (1 + truncation_tolerance(40)) * (1 + 1e-12));
}

TEST_CASE("A_p construction on random data") {
  const auto sp = line(64);
  const auto I = Basis::enumerate(sp, BasisKind::intervals);
  const auto u = make_power_weight(sp, 0.2, 0.5);
  for (const auto& spec : {SpaceSpec::lp(sp, 2.0).with_u(u), SpaceSpec::lorentz(sp, 3.0, 1.5),
                           SpaceSpec::orlicz(sp, YoungFunction::plog(2.0, 1.0))}) {
    for (double p0 : {1.5, 2.0, 3.0}) {
      const auto f = random_nonneg(sp, 3), g = add(f, random_nonneg(sp, 4));
      const auto c = build_ap_weight(f, g, spec, I, p0);
      CAPTURE(spec.describe());
      CAPTURE(p0);
      for (const auto& chk : c.report.checks) {
        CAPTURE(chk.name);
        CHECK(chk.ok());
      }
      REQUIRE(find(c.report, "embedding_f"));
      REQUIRE(find(c.report, "embedding_g"));
    }
  }
}

TEST_CASE("A_1 construction") {
  const auto sp = line(32);
  const auto I = Basis::enumerate(sp, BasisKind::intervals);
  const auto one = GridFunction::constant(sp, 1.0);
  const auto c = build_a1_weight(one, one, SpaceSpec::lp(sp, 2.0), I);
  CHECK(c.report.ok());
  CHECK(c.w.is_constant());
  CHECK(a1_constant(c.w, I).value == doctest::Approx(1.0));

  const auto f = random_nonneg(sp, 8);
  const auto r = build_a1_weight(f, add(f, GridFunction::constant(sp, 0.1)), SpaceSpec::lorentz(sp, 2.0, 1.0), I);
  for (const auto& chk : r.report.checks) {
    CAPTURE(chk.name);
    CHECK(chk.ok());
  }
}

TEST_CASE("modular construction") {
  const auto sp = line(32);
  const auto I = Basis::enumerate(sp, BasisKind::intervals);
  const auto u = make_power_weight(sp, 0.2, 0.5);
  const auto v = Weight::ones(sp);
  const auto f = random_nonneg(sp, 12), g = add(f, random_nonneg(sp, 13));
  for (const auto& phi : {YoungFunction::power(2.0), YoungFunction::plog(2.0, 1.0)}) {
    for (double p0 : {1.0, 2.0}) {
      const auto c = build_modular_weight(f, g, phi, u, v, I, p0, 1.0);
      CAPTURE(phi.describe());
      CAPTURE(p0);
      REQUIRE(find(c.report, "young_step"));
      for (const auto& chk : c.report.checks) {
        CAPTURE(chk.name);
        CHECK(chk.ok());
      }
    }
  }
  // A power Young function and the norm construction both give A_2 weights
  // within the same bound shape.
  const auto spec = SpaceSpec::lp(sp, 2.0).with_u(u);
  const auto a = build_ap_weight(f, g, spec, I, 2.0);
  const auto m = build_modular_weight(f, g, YoungFunction::power(2.0), u, v, I, 2.0, 1.0);
  CHECK(a.report.ok());
  CHECK(m.report.ok());
  CHECK(std::isfinite(m.report.ap_constant));
  CHECK(m.report.ap_constant <= m.report.ap_bound * (1 + 1e-9));
  CHECK(a.report.ap_constant <= a.report.ap_bound * (1 + 1e-9));
  CHECK_THROWS_AS(build_modular_weight(f, g, YoungFunction::power(2.0), u, v, I, 2.0, 0.0), ParameterError);
}

TEST_CASE("limited-range exponents") {
  const auto e = limited_range_exponents(3.0, 3.0, 4.0, 1.0, 4.0, 2.0);
  CHECK(e.tau == doctest::Approx(3.0));
  CHECK(e.alpha2 == doctest::Approx(2.0));

  const auto inf = limited_range_exponents(3.0, 3.0, 4.0, 1.0, INFINITY, 2.0);
  CHECK(inf.alpha1 == 1.0);
  CHECK(inf.beta1 == 0.0);
  CHECK(inf.beta2 == doctest::Approx(inf.s));
  const auto big = limited_range_exponents(3.0, 3.0, 4.0, 1.0, 1e12, 2.0);
  CHECK(big.alpha1 == doctest::Approx(inf.alpha1).epsilon(1e-9));
  CHECK(big.s == doctest::Approx(inf.s).epsilon(1e-9));
  CHECK(big.beta2 == doctest::Approx(inf.beta2).epsilon(1e-9));
  CHECK(big.tau == doctest::Approx(inf.tau).epsilon(1e-9));

  CHECK_THROWS_AS(limited_range_exponents(3.0, 3.0, 3.0, 1.0, 2.0), ParameterError);
  CHECK_THROWS_AS(limited_range_exponents(2.0, 2.0, 1.0, 1.0, 6.0), ParameterError);
}

TEST_CASE("limited-range construction") {
  const auto sp = line(64);
  const auto I = Basis::enumerate(sp, BasisKind::intervals);
  const auto f = random_nonneg(sp, 21), g = add(f, random_nonneg(sp, 22));
  const auto X = SpaceSpec::lp(sp, 3.0);
  const auto c = build_limited_range_weight(f, g, X, I, 1.0, 6.0);
  REQUIRE(c.report.exponents);
  const auto& e = *c.report.exponents;
  for (const auto& chk : c.report.checks) {
    CAPTURE(chk.name);
    CHECK(chk.ok());
  }
  const double rh = rh_constant(c.w, I, e.alpha2).value;
  const double ap = ap_constant(c.w, I, e.pstar).value;
  CHECK(std::isfinite(rh));
  CHECK(std::isfinite(ap));
  CHECK(ap_constant(power(c.w, e.alpha2), I, e.tau).value <= std::pow(rh * ap, e.alpha2) * (1 + 1e-9));
}
