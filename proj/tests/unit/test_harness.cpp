#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "wfx/error.hpp"
#include "wfx/harness.hpp"
#include "wfx/muckenhoupt.hpp"

using namespace wfx;

namespace {

SpacePtr line(std::size_t n) { return MeasureSpace::lebesgue({n}, 1.0 / static_cast<double>(n)); }

FamilyOptions small(std::size_t inputs = 6) {
  FamilyOptions fo;
  fo.inputs = inputs;
  return fo;
}

void expect_pass(const ExtrapolationReport& r) {
  CAPTURE(r.mode);
  CAPTURE(r.space);
  for (const auto& c : r.construction) {
    CAPTURE(c.name);
    CHECK(c.ok());
  }
  for (const auto& p : r.pairs) {
    CAPTURE(p.label);
    CHECK(p.ok);
  }
  CHECK(r.verdict == Verdict::pass);
}

}  // namespace

TEST_CASE("family construction") {
  const auto sp = line(64);
  for (auto kind : {FamilyKind::identity, FamilyKind::hilbert, FamilyKind::maximal_pair, FamilyKind::coifman_fefferman,
                    FamilyKind::commutator, FamilyKind::calderon, FamilyKind::sqfn, FamilyKind::poisson}) {
    CAPTURE(to_string(kind));
    CHECK(parse_family_kind(to_string(kind)) == kind);
    const auto F = make_family(kind, sp, small());
    CHECK(F.pairs.size() == 6);
    for (const auto& p : F.pairs) {
      CHECK(p.f.is_nonnegative());
      CHECK(p.g.is_nonnegative());
    }
  }
  CHECK_THROWS_AS(parse_family_kind("fourier"), ParameterError);

  const auto a = input_battery(sp, 10, 3), b = input_battery(sp, 10, 3);
  for (std::size_t k = 0; k < 10; ++k)
    for (std::size_t i = 0; i < 64; ++i) CHECK(a[k][i] == b[k][i]);
}

TEST_CASE("family transforms") {
  const auto sp = line(32);
  const auto F = make_family(FamilyKind::hilbert, sp, small(8));
  const auto P = powered(F, 2.0);
  CHECK(P.pairs[3].f[5] == doctest::Approx(F.pairs[3].f[5] * F.pairs[3].f[5]));
  const auto S = scaled(F, 3.0);
  CHECK(S.pairs[1].g[7] == doctest::Approx(3.0 * F.pairs[1].g[7]));

  const auto A = aggregated(F, 2.0, 4);
  REQUIRE(A.pairs.size() == 2);
  double s = 0;
  for (std::size_t j = 0; j < 4; ++j) s += F.pairs[j].f[9] * F.pairs[j].f[9];
  CHECK(A.pairs[0].f[9] == doctest::Approx(std::sqrt(s)));

  // Permuting the batch leaves the aggregate unchanged.
  auto perm = F;
  std::reverse(perm.pairs.begin(), perm.pairs.begin() + 4);
  const auto B = aggregated(perm, 2.0, 4);
  for (std::size_t i = 0; i < 32; ++i) {
    CHECK(B.pairs[0].f[i] == doctest::Approx(A.pairs[0].f[i]).epsilon(1e-14));
    CHECK(B.pairs[0].g[i] == doctest::Approx(A.pairs[0].g[i]).epsilon(1e-14));
  }
}

TEST_CASE("psi table is a nondecreasing envelope") {
  PsiTable t{{1.0, 2.0, 5.0}, {1.0, 3.0, 2.0}};
  CHECK(t(0.5) == 1.0);
  CHECK(t(1.5) == 1.0);
  CHECK(t(2.0) == 3.0);
  CHECK(t(4.0) == 3.0);
  CHECK(t(9.0) == 3.0);
}

TEST_CASE("calibration") {
  const auto sp = line(64);
  const auto I = Basis::enumerate(sp, BasisKind::intervals);
  const auto battery = power_battery(sp, -0.8, 0.8);
  CHECK(battery.size() == 12);

  const auto id = calibrate_psi(make_family(FamilyKind::identity, sp, small()), I, 2.0, battery);
  for (double x : id.psi.psi) CHECK(x == doctest::Approx(1.0));

  const auto mp = calibrate_psi(make_family(FamilyKind::maximal_pair, sp, small()), I, 2.0, {{Weight::ones(sp), "one"}});
  REQUIRE(mp.points.size() == 1);
  CHECK(std::isfinite(mp.psi(1.0)));
  const auto est = estimate_maximal_norm(SpaceSpec::lp(sp, 2.0), I, NormMode::primal);
  REQUIRE(est.certified_upper);
  CHECK(mp.points[0].ratio <= *est.certified_upper);

  const auto h = calibrate_psi(make_family(FamilyKind::hilbert, sp, small()), I, 2.0, battery);
  for (std::size_t k = 1; k < h.psi.psi.size(); ++k) {
    CHECK(h.psi.a[k - 1] <= h.psi.a[k]);
    CHECK(h.psi.psi[k - 1] <= h.psi.psi[k]);
  }
  for (double x = 0.5; x < 40.0; x *= 1.3) CHECK(h.psi(x) <= h.psi(x * 1.3));
}

TEST_CASE("identity family passes with ratio one") {
  const auto sp = line(64);
  const auto I = Basis::enumerate(sp, BasisKind::intervals);
  const auto r = verify_bfs_extrapolation(make_family(FamilyKind::identity, sp, small()), SpaceSpec::lp(sp, 2.0), I, 2.0);
  expect_pass(r);
  CHECK(r.psi_value == doctest::Approx(1.0));
}

TEST_CASE("Hilbert family on a weighted Lorentz space") {
  const auto sp = line(128);
  const auto I = Basis::enumerate(sp, BasisKind::intervals);
  const auto spec = SpaceSpec::lorentz(sp, 3.0, 1.5).with_u(make_power_weight(sp, 0.2, 0.5));
  expect_pass(verify_bfs_extrapolation(make_family(FamilyKind::hilbert, sp, small()), spec, I, 2.0));
}

TEST_CASE("constant exponent reduces to lp") {
  const auto sp = line(64);
  const auto I = Basis::enumerate(sp, BasisKind::intervals);
  const auto F = make_family(FamilyKind::hilbert, sp, small(4));
  const auto a = verify_bfs_extrapolation(F, SpaceSpec::lp(sp, 2.5), I, 2.0);
  const auto b = verify_bfs_extrapolation(F, SpaceSpec::varexp(sp, std::vector<double>(64, 2.5)), I, 2.0);
  CHECK(a.verdict == b.verdict);
  REQUIRE(a.pairs.size() == b.pairs.size());
  for (std::size_t k = 0; k < a.pairs.size(); ++k) CHECK(a.pairs[k].lhs == doctest::Approx(b.pairs[k].lhs).epsilon(1e-8));
}

TEST_CASE("vector-valued extension") {
  const auto sp = line(64);
  const auto I = Basis::enumerate(sp, BasisKind::intervals);
  const auto F = make_family(FamilyKind::hilbert, sp, small(8));
  ExtrapolationConfig one;
  one.batch = 1;
  const auto scalar = verify_bfs_extrapolation(F, SpaceSpec::lp(sp, 2.0), I, 2.0, one);
  const auto single = verify_vector_valued(F, SpaceSpec::lp(sp, 2.0), I, 2.0, 2.0, one);
  REQUIRE(single.pairs.size() == F.pairs.size());
  for (std::size_t k = 0; k < single.pairs.size(); ++k)
    CHECK(single.pairs[k].lhs == doctest::Approx(scalar.pairs[k].lhs).epsilon(1e-12));
  expect_pass(verify_vector_valued(F, SpaceSpec::lp(sp, 4.0), I, 2.0, 3.0));
}

TEST_CASE("A_inf extrapolation") {
  const auto sp = line(64);
  const auto I = Basis::enumerate(sp, BasisKind::intervals);
  const auto F = make_family(FamilyKind::coifman_fefferman, sp, small());
  const auto spec = SpaceSpec::lp(sp, 3.0).with_u(make_power_weight(sp, 0.3, 0.5));
  for (double p : {0.5, 1.0}) expect_pass(verify_ainf_extrapolation(F, spec, I, p));
}

TEST_CASE("modular extrapolation") {
  const auto sp = line(64);
  const auto I = Basis::enumerate(sp, BasisKind::intervals);
  const auto F = make_family(FamilyKind::hilbert, sp, small());
  const auto u = make_power_weight(sp, 0.2, 0.5);
  const auto v = Weight::ones(sp);
  const auto r = verify_modular_extrapolation(F, YoungFunction::plog(2.0, 1.0), u, v, I, 2.0);
  expect_pass(r);

  // C₁ is nondecreasing in N₂.
  ExtrapolationConfig lo, hi;
  lo.rdf.N1 = hi.rdf.N1 = r.N1;
  lo.rdf.N2 = r.N2;
  hi.rdf.N2 = 2.0 * r.N2;
  const auto a = verify_modular_extrapolation(F, YoungFunction::power(2.0), u, v, I, 2.0, lo);
  const auto b = verify_modular_extrapolation(F, YoungFunction::power(2.0), u, v, I, 2.0, hi);
  CHECK(a.constant <= b.constant);

  std::vector<double> t, e;
  for (double x = 1e-4; x < 600.0; x *= 1.05) {
    t.push_back(x);
    e.push_back(std::expm1(x));
  }
  CHECK_THROWS_AS(verify_modular_extrapolation(F, YoungFunction::tabulated(t, e), u, v, I, 2.0), ParameterError);
}

TEST_CASE("limited range") {
  const auto sp = line(64);
  const auto I = Basis::enumerate(sp, BasisKind::intervals);
  const auto F = make_family(FamilyKind::sqfn, sp, small(4));
  const auto X = SpaceSpec::lorentz(sp, 3.0, 3.0);
  const auto full = verify_limited_range(F, X, I, 1.0, INFINITY);
  const auto bfs = verify_bfs_extrapolation(F, X, I, full.p0);
  CHECK(full.verdict == bfs.verdict);
  CHECK(full.constant == doctest::Approx(bfs.constant));
  expect_pass(full);
  expect_pass(verify_limited_range(F, SpaceSpec::lp(sp, 3.0), I, 1.0, 6.0));
}

TEST_CASE("reports are deterministic and scale invariant") {
  const auto sp = line(64);
  const auto I = Basis::enumerate(sp, BasisKind::intervals);
  const auto F = make_family(FamilyKind::hilbert, sp, small(4));
  const auto spec = SpaceSpec::lorentz(sp, 2.0, 1.0);
  const auto a = verify_bfs_extrapolation(F, spec, I, 2.0);
  const auto b = verify_bfs_extrapolation(F, spec, I, 2.0);
  const auto c = verify_bfs_extrapolation(scaled(F, 7.5), spec, I, 2.0);
  CHECK(a.verdict == b.verdict);
  CHECK(a.constant == b.constant);
  CHECK(a.verdict == c.verdict);
  REQUIRE(a.pairs.size() == c.pairs.size());
  for (std::size_t k = 0; k < a.pairs.size(); ++k) {
    CHECK(a.pairs[k].lhs == b.pairs[k].lhs);
    CHECK(a.pairs[k].rhs == b.pairs[k].rhs);
    CHECK(c.pairs[k].ratio() == doctest::Approx(a.pairs[k].ratio()).epsilon(1e-9));
  }
}

TEST_CASE("hypothesis failures are inconclusive, never failures") {
  const auto sp = line(64);
  const auto I = Basis::enumerate(sp, BasisKind::intervals);
  // u^2 = |x - 1/2|^{-1.2} is not locally integrable enough for A_2, so N is huge.
  const auto spec = SpaceSpec::lp(sp, 2.0).with_u(make_power_weight(sp, -0.6, 0.5));
  ExtrapolationConfig cfg;
  cfg.hypothesis_cap = 1.5;
  const auto r = verify_bfs_extrapolation(make_family(FamilyKind::hilbert, sp, small(3)), spec, I, 2.0, cfg);
  CHECK(r.verdict == Verdict::inconclusive);
}
