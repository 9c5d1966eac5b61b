#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fockbench/criteria.hpp"
#include "oracles.hpp"

using namespace fockbench;

namespace {
constexpr double kPi = std::numbers::pi;

SymbolPair pair_of(const char* g, const char* psi = "z") { return {parse_symbol(g), parse_symbol(psi)}; }

CriteriaOptions quick() {
  CriteriaOptions o;
  o.w_radii = 4;
  o.w_angles = 4;
  o.b_probes = {1, 2, 4, 8, 16};
  return o;
}
}  // namespace

TEST(Transforms, PointValues) {
  EXPECT_NEAR(eval_P_psi(pair_of("1", "z"), 1.0, cplx(3.0, 4.0)), 1.0 / 6.0, 1e-14);
  EXPECT_NEAR(eval_P_psi(pair_of("1", "0.5*z"), 1.0, 2.0), std::exp(-1.5) / 3.0, 1e-14);
  EXPECT_NEAR(eval_Q_g(pair_of("1"), 1.0, 0.0), 1.0, 1e-15);
  for (cplx z : oracle::disc_points(20, 6.0, 71)) {
    EXPECT_NEAR(eval_M(pair_of("1"), 1.0, z, MVariant::G), 1.0, 1e-12);
    EXPECT_NEAR(eval_M(pair_of("z"), 1.0, z, MVariant::G), std::abs(z), 1e-12 * (1 + std::abs(z)));
  }
}

TEST(Transforms, ScalingExampleMDecays) {
  // M <= (|z|/2 + 1)/(1 + |z|) e^{-|z|^2/8}
  const SymbolPair sp = pair_of("exp(0.25*z^2)", "0.5*z");
  for (cplx z : oracle::disc_points(50, 10.0, 73)) {
    const double r = std::abs(z);
    EXPECT_LE(eval_M(sp, 1.0, z, MVariant::G), (0.5 * r + 1.0) / (1.0 + r) * std::exp(-r * r / 8.0) * (1 + 1e-12));
  }
}

TEST(Berezin, OriginMatchesRadialOracle) {
  const double want = oracle::radial_plane_integral([](double t) { return std::exp(-t * t) / ((1 + t) * (1 + t)); });
  const BerezinValue b = berezin_B(pair_of("1"), {1.0, 2.0, 2.0}, 0.0, BVariant::GPsi, 1e-8);
  ASSERT_TRUE(b.certified);
  EXPECT_NEAR(b.value / want, 1.0, 1e-6);
}

TEST(Berezin, ZeroSymbolVanishes) {
  for (cplx w : {cplx(0.0), cplx(2.0, 1.0), cplx(-5.0, 3.0)}) {
    const BerezinValue b = berezin_B(pair_of("0"), {1.0, 2.0, 2.0}, w, BVariant::G);
    EXPECT_TRUE(b.certified);
    EXPECT_EQ(b.value, 0.0);
  }
}

TEST(Berezin, UnitSymbolPlateaus) {
  // g = 1, psi = z, q = 2: B(w) -> pi as |w| grows, so it is bounded but not vanishing.
  std::vector<double> gap;
  for (double r : {2.0, 4.0, 8.0, 16.0})
    gap.push_back(std::abs(berezin_B(pair_of("1"), {1.0, 2.0, 2.0}, r, BVariant::GPsi, 1e-7).value - kPi));
  for (std::size_t i = 1; i < gap.size(); ++i) EXPECT_LT(gap[i], gap[i - 1]);
  EXPECT_LT(gap.back(), 0.05 * kPi);
}

TEST(Berezin, RotationInvariantForRadialSymbols) {
  const SymbolPair sp = pair_of("z");
  const double a = berezin_B(sp, {1.0, 2.0, 2.0}, 3.0, BVariant::G, 1e-7).value;
  const double b = berezin_B(sp, {1.0, 2.0, 2.0}, std::polar(3.0, 1.1), BVariant::G, 1e-7).value;
  EXPECT_NEAR(a / b, 1.0, 1e-6);
}

TEST(Berezin, FastGrowthIsUncertified) {
  EXPECT_FALSE(berezin_B(pair_of("exp(z^2)"), {1.0, 2.0, 2.0}, 1.0, BVariant::G).certified);
}

TEST(Special, DegreeRule) {
  const auto a = classify_special(OperatorKind::Vg, pair_of("z^2"), {1.0, 2.0, 2.0});
  ASSERT_TRUE(a);
  EXPECT_EQ(a->bounded.route, Route::VgDegreeRule);
  EXPECT_EQ(a->bounded.label(), "exact-positive");
  EXPECT_EQ(a->compact.label(), "exact-negative");
  const auto lin = classify_special(OperatorKind::Vg, pair_of("3*z + 1"), {1.0, 2.0, 2.0});
  EXPECT_TRUE(lin->compact.holds);
  const auto cubic = classify_special(OperatorKind::Vg, pair_of("z^3"), {1.0, 2.0, 2.0});
  EXPECT_FALSE(cubic->bounded.holds);
}

TEST(Special, ConstantAndZeroSymbols) {
  for (double q : {2.0, kInfinity}) {
    const auto c = classify_special(OperatorKind::Jg, pair_of("3+0i"), {1.0, 2.0, q});
    ASSERT_TRUE(c);
    EXPECT_EQ(c->bounded.label(), "exact-positive");
    EXPECT_EQ(c->compact.label(), "exact-negative");
    EXPECT_EQ(c->bounded.route, Route::Corollary1);
  }
  const auto z = classify_special(OperatorKind::Jg, pair_of("0"), {1.0, 2.0, 2.0});
  EXPECT_EQ(z->compact.label(), "exact-positive");
  EXPECT_FALSE(classify_special(OperatorKind::Jg, pair_of("z"), {1.0, 2.0, 2.0}));
}

TEST(Special, NonlinearPsiIsInadmissible) {
  const auto a = classify_special(OperatorKind::J_g_psi, pair_of("1", "z^2"), {1.0, 2.0, kInfinity});
  ASSERT_TRUE(a);
  EXPECT_EQ(a->bounded.route, Route::PsiInadmissible);
  EXPECT_EQ(a->bounded.label(), "exact-negative");
}

TEST(Theorem1, UnitSymbolSupRoute) {
  const Assessment a = assess(OperatorKind::J_g_psi, pair_of("1"), {1.0, kInfinity, kInfinity});
  EXPECT_EQ(a.bounded.route, Route::Corollary1);
  EXPECT_EQ(a.bounded.label(), "exact-positive");
}

TEST(Theorem1, IdentitySymbolGrows) {
  const Assessment a = verdict_theorem1(OperatorKind::J_g_psi, pair_of("z"), {1.0, 2.0, 2.0}, quick());
  EXPECT_EQ(a.bounded.label(), "negative-evidence");
  const auto& probe = a.bounded.tables.at("B_probe");
  for (std::size_t i = 1; i < probe.size(); ++i) EXPECT_GT(probe[i], probe[i - 1]);
}

TEST(Theorem1, ScalingExample) {
  const Assessment a = verdict_theorem1(OperatorKind::J_g_psi, pair_of("exp(0.25*z^2)", "0.5*z"), {1.0, 2.0, kInfinity});
  EXPECT_EQ(a.bounded.label(), "positive-evidence");
  EXPECT_EQ(a.compact.label(), "positive-evidence");
  EXPECT_GE(a.compact.numbers.at("M_decay_factor"), 10.0);
}

TEST(Theorem1, DiagnosticsIndependentOfP) {
  const SymbolPair sp = pair_of("z", "0.5*z");
  const Assessment ref = verdict_theorem1(OperatorKind::J_g_psi, sp, {1.0, 0.5, 2.0}, quick());
  for (double p : {1.0, 2.0}) {
    const Assessment a = verdict_theorem1(OperatorKind::J_g_psi, sp, {1.0, p, 2.0}, quick());
    EXPECT_EQ(a.bounded.numbers, ref.bounded.numbers);
    EXPECT_EQ(a.bounded.tables, ref.bounded.tables);
    EXPECT_EQ(a.compact.numbers, ref.compact.numbers);
    EXPECT_EQ(a.bounded.label(), ref.bounded.label());
  }
}

TEST(Theorem2, ZeroSymbol) {
  const Assessment a = assess(OperatorKind::C_g_psi, pair_of("0", "0.5*z"), {1.0, 4.0, 2.0});
  EXPECT_EQ(a.bounded.label(), "exact-positive");
  EXPECT_EQ(a.compact.label(), "exact-positive");
}

TEST(Theorem2, PlateauIsNotIntegrable) {
  const Assessment a = verdict_theorem2(OperatorKind::J_g_psi, pair_of("1"), {1.0, 4.0, 2.0}, quick());
  EXPECT_EQ(a.bounded.route, Route::Theorem2);
  EXPECT_EQ(a.bounded.label(), "negative-evidence");
  EXPECT_EQ(a.compact.label(), "negative-evidence");
}

TEST(Criterion, SamplesIncludeOrigin) {
  const auto s = sample_criterion(CriterionKind::M_gpsi, pair_of("1"), {1.0, 2.0, kInfinity}, 4.0, 3, 5);
  ASSERT_EQ(s.size(), 16u);
  EXPECT_EQ(s.front().z, cplx(0.0));
  for (const auto& x : s) EXPECT_NEAR(x.value, 1.0, 1e-12);
  EXPECT_EQ(parse_criterion_kind(to_string(CriterionKind::B_gpsi)), CriterionKind::B_gpsi);
}
