#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fockbench/fock.hpp"
#include "oracles.hpp"

using namespace fockbench;

namespace {
EntireExpr monomial(int n) { return n == 0 ? EntireExpr::constant(1.0) : pow(EntireExpr::variable(), n); }
}  // namespace

TEST(FockNorm, ConstantIsOne) {
  for (double p : {0.5, 1.0, 2.0, 4.0, kInfinity})
    for (double alpha : {0.5, 1.0, 2.0}) {
      const NormResult r = fock_norm(parse_symbol("1"), p, alpha);
      EXPECT_EQ(r.status, NormStatus::Finite);
      EXPECT_NEAR(r.value, 1.0, 1e-8) << "p=" << p << " alpha=" << alpha;
    }
}

TEST(FockNorm, MonomialsMatchGammaFormula) {
  for (int n = 1; n <= 6; ++n)
    for (double p : {1.0, 2.0, 4.0})
      for (double alpha : {0.5, 2.0}) {
        const double want = oracle::monomial_norm(n, p, alpha);
        EXPECT_NEAR(fock_norm(monomial(n), p, alpha).value / want, 1.0, 1e-6) << n << " " << p << " " << alpha;
      }
  EXPECT_NEAR(fock_norm(parse_symbol("z"), 2.0, 1.0).value, 1.0, 1e-7);
}

TEST(FockNorm, SupNormOfMonomials) {
  for (int n = 1; n <= 4; ++n)
    for (double alpha : {0.5, 1.0}) {
      const NormResult r = fock_norm(monomial(n), kInfinity, alpha);
      EXPECT_TRUE(r.attained_inside);
      EXPECT_NEAR(r.value / oracle::monomial_sup_norm(n, alpha), 1.0, 1e-6);
    }
}

TEST(FockNorm, Homogeneous) {
  const EntireExpr f = parse_symbol("exp(0.2*z^2)*(z - 1)");
  const cplx c{-1.5, 2.0};
  for (double p : {1.0, 2.0, kInfinity}) {
    const double a = fock_norm(f, p, 1.0).value;
    const double b = fock_norm(EntireExpr::constant(c) * f, p, 1.0).value;
    EXPECT_NEAR(b / (std::abs(c) * a), 1.0, 1e-6);
  }
}

TEST(FockNorm, FastGrowthDiverges) {
  const NormResult r = fock_norm(parse_symbol("exp(z^2)"), 2.0, 1.0);
  EXPECT_EQ(r.status, NormStatus::Diverges);
  EXPECT_TRUE(std::isinf(r.value));
  EXPECT_EQ(fock_norm(parse_symbol("exp(exp(z))"), 2.0, 1.0).status, NormStatus::Diverges);
}

TEST(FockNorm, NestingAcrossExponents) {
  // ||f||_q <= C ||f||_p for p <= q, one C for the family.
  const char* family[] = {"1", "z", "z^3", "exp(0.2*z^2)", "exp(0.5*z)"};
  const double ps[] = {1.0, 2.0, 4.0, kInfinity};
  double worst = 0.0;
  for (const char* text : family) {
    const EntireExpr f = parse_symbol(text);
    std::vector<double> n;
    for (double p : ps) n.push_back(fock_norm(f, p, 1.0).value);
    for (std::size_t i = 0; i < n.size(); ++i)
      for (std::size_t j = i + 1; j < n.size(); ++j) worst = std::max(worst, n[j] / n[i]);
  }
  EXPECT_LE(worst, 1.0 + 1e-6);
}

TEST(Kernels, Definitions) {
  const cplx w{1.0, -2.0};
  const double alpha = 0.7;
  EXPECT_EQ(kernel(0.0, alpha)(cplx(3.0, 1.0)), cplx(1.0));
  EXPECT_LT(std::abs(kernel(w, alpha)(w) - std::exp(alpha * std::norm(w))), 1e-12 * std::exp(alpha * std::norm(w)));
  EXPECT_LT(std::abs(normalized_kernel(0.0, alpha)(cplx(2.0, 2.0)) - 1.0), 1e-15);
}

TEST(Kernels, UnitNorms) {
  for (cplx w : {cplx(1.0, 0.0), cplx(0.0, 2.0), cplx(3.0, -3.0)})
    for (double alpha : {0.5, 1.0, 2.0})
      for (double p : {1.0, 2.0, kInfinity})
        EXPECT_NEAR(fock_norm(normalized_kernel(w, alpha), p, alpha).value, 1.0, 1e-6) << w << " " << alpha << " " << p;
}

TEST(LittlewoodPaley, ConstantKeepsOnlyValueAtZero) {
  for (double p : {1.0, 2.0, kInfinity}) EXPECT_NEAR(littlewood_paley_rhs(parse_symbol("1"), p, 1.0).value, 1.0, 1e-12);
}

TEST(LittlewoodPaley, IdentityMatchesRadialOracle) {
  const double I = oracle::radial_plane_integral([](double t) { return std::exp(-t * t) / ((1 + t) * (1 + t)); });
  EXPECT_NEAR(littlewood_paley_rhs(parse_symbol("z"), 2.0, 1.0).value / std::sqrt(I), 1.0, 1e-7);
}

TEST(LittlewoodPaley, KernelWindowBounded) {
  double lo = kInfinity, hi = 0.0;
  for (double r : {0.0, 1.5, 3.0, 4.5, 6.0}) {
    const EntireExpr k = normalized_kernel(cplx(r, 0.3 * r), 1.0);
    const double ratio = littlewood_paley_rhs(k, 2.0, 1.0, {1e-6, 0}).value / fock_norm(k, 2.0, 1.0, {1e-6, 0}).value;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  EXPECT_GT(lo, 0.0);
  EXPECT_LT(hi / lo, 100.0);
}

TEST(LittlewoodPaley, WindowStableUnderRefinement) {
  const std::vector<cplx> pts{{0.5, 0.0}, {0.0, 1.0}, {-1.5, 0.5}, {1.0, -2.0}, {2.5, 1.5}};
  const LpWindow a = littlewood_paley_window(2.0, 1.0, pts, {1e-6, 0});
  const LpWindow b = littlewood_paley_window(2.0, 1.0, pts, {1e-6, 1});
  EXPECT_EQ(a.entries.size(), 9u);
  EXPECT_LE(a.spread(), 100.0);
  EXPECT_NEAR(b.lo / a.lo, 1.0, 0.05);
  EXPECT_NEAR(b.hi / a.hi, 1.0, 0.05);
}

TEST(PointwiseBound, Examples) {
  const std::vector<cplx> samples = oracle::disc_points(200, 4.0, 17);
  std::vector<cplx> with_origin = samples;
  with_origin.push_back(0.0);
  EXPECT_EQ(pointwise_derivative_bound_ratio(parse_symbol("1"), 2.0, 1.0, with_origin), 0.0);
  EXPECT_NEAR(pointwise_derivative_bound_ratio(parse_symbol("z"), 2.0, 1.0, with_origin), 1.0, 1e-7);
  double worst = 0.0;
  for (double r : {0.0, 2.0, 4.0, 6.0})
    worst = std::max(worst, pointwise_derivative_bound_ratio(normalized_kernel(r, 1.0), 2.0, 1.0, with_origin));
  EXPECT_LT(worst, 10.0);
}

TEST(Subharmonic, LocalMeanBound) {
  // |f'(z)|^p e^{-p alpha |z|^2/2} <= C int_{D(z,1)} |f'|^p e^{-p alpha |w|^2/2} dm with one C.
  const char* family[] = {"z^2", "exp(0.3*z)", "exp(0.2*z^2)"};
  const double p = 2.0, alpha = 1.0;
  const GaussLegendre& gl = GaussLegendre::get(12);
  double worst = 0.0;
  for (const char* text : family) {
    const EntireExpr d = differentiate(parse_symbol(text));
    auto dens = [&](cplx w) { return std::exp(p * (d.log_abs(w) - 0.5 * alpha * std::norm(w))); };
    for (cplx z : oracle::disc_points(20, 4.0, 29)) {
      double mean = 0.0;
      for (int i = 0; i < gl.order(); ++i) {
        const double rho = 0.5 * (1.0 + gl.nodes[i]);
        for (int k = 0; k < 48; ++k)
          mean += 0.5 * gl.weights[i] * rho * (2.0 * std::numbers::pi / 48) * dens(z + std::polar(rho, 2.0 * std::numbers::pi * k / 48));
      }
      worst = std::max(worst, dens(z) / mean);
    }
  }
  EXPECT_LT(worst, 50.0);
}

TEST(FockParamsValidation, RejectsBadValues) {
  EXPECT_THROW((FockParams{0.0, 2.0, 2.0}.validate()), std::invalid_argument);
  EXPECT_THROW((FockParams{1.0, -1.0, 2.0}.validate()), std::invalid_argument);
  EXPECT_NO_THROW((FockParams{1.0, kInfinity, 0.5}.validate()));
}
