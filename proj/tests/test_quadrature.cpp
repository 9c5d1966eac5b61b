#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fockbench/expr.hpp"
#include "fockbench/quadrature.hpp"
#include "oracles.hpp"

using namespace fockbench;

namespace {
constexpr double kPi = std::numbers::pi;

double gaussian(cplx z) { return std::exp(-std::norm(z)); }
double weighted_gaussian(cplx z) { return std::exp(-std::norm(z)) / std::pow(1.0 + std::abs(z), 2); }
}  // namespace

TEST(GaussLegendre, ExactForPolynomials) {
  for (int n : {4, 8, 16, 20}) {
    const GaussLegendre& gl = GaussLegendre::get(n);
    double wsum = 0.0;
    for (double w : gl.weights) wsum += w;
    EXPECT_NEAR(wsum, 2.0, 1e-14);
    for (int d = 0; d <= 2 * n - 1; ++d) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += gl.weights[j] * std::pow(gl.nodes[j], d);
      const double want = d % 2 == 1 ? 0.0 : 2.0 / (d + 1);
      EXPECT_NEAR(s, want, 1e-13) << "order " << n << " degree " << d;
    }
    for (int j = 1; j < n; ++j) EXPECT_LT(gl.nodes[j - 1], gl.nodes[j]);
  }
}

TEST(PlaneIntegrate, GaussianMass) {
  QuadOptions o;
  o.tol = 1e-9;
  const Integral I = plane_integrate(RealField(gaussian), TailCertificate::gaussian(1.0, 0.0, 1.0), o);
  EXPECT_NEAR(I.value / kPi, 1.0, 1e-8);
  for (double c : {0.5, 3.0}) {
    const Integral J =
        plane_integrate(RealField([c](cplx z) { return std::exp(-c * std::norm(z)); }), TailCertificate::gaussian(1.0, 0.0, c), o);
    EXPECT_NEAR(J.value * c / kPi, 1.0, 1e-8);
  }
}

TEST(PlaneIntegrate, GammaMoments) {
  // int |z|^{2n} e^{-|z|^2} dm = pi n!
  QuadOptions o;
  o.tol = 1e-9;
  for (int n = 0; n <= 6; ++n) {
    auto f = [n](cplx z) { return std::pow(std::norm(z), n) * std::exp(-std::norm(z)); };
    const Integral I = plane_integrate(RealField(f), TailCertificate::gaussian(1.0, 2.0 * n, 1.0), o);
    EXPECT_NEAR(I.value / (kPi * std::tgamma(n + 1.0)), 1.0, 1e-8) << n;
  }
}

TEST(PlaneIntegrate, RadialOracle) {
  const double want = oracle::radial_plane_integral([](double t) { return std::exp(-t * t) / ((1 + t) * (1 + t)); });
  QuadOptions o;
  o.tol = 1e-10;
  const Integral I = plane_integrate(RealField(weighted_gaussian), TailCertificate::gaussian(1.0, -2.0, 1.0), o);
  EXPECT_NEAR(I.value / want, 1.0, 1e-9);
}

TEST(PlaneIntegrate, GaussianConvolution) {
  // int e^{-|z-w|^2} e^{-|z|^2} dm = (pi/2) e^{-|w|^2/2}
  QuadOptions o;
  o.tol = 1e-9;
  for (cplx w : {cplx(0.5, 0.0), cplx(1.0, -2.0), cplx(-2.5, 1.5)}) {
    auto f = [w](cplx z) { return std::exp(-std::norm(z - w) - std::norm(z)); };
    // |z-w|^2 >= (|z|-|w|)^2 bounds the integrand by e^{-|w|^2} e^{-2|z|^2 + 2|w||z|}.
    TailCertificate c;
    c.gauss = 2.0;
    c.lin = 2.0 * std::abs(w);
    c.log_scale = -std::norm(w);
    const Integral I = plane_integrate(RealField(f), c, o);
    EXPECT_NEAR(I.value / (0.5 * kPi * std::exp(-0.5 * std::norm(w))), 1.0, 1e-8);
  }
}

TEST(PlaneIntegrate, RotationInvariant) {
  QuadOptions o;
  o.tol = 1e-7;
  auto f = [](cplx z) { return std::exp(-std::norm(z - cplx(1.0, 0.5)) - 0.5 * std::norm(z)); };
  TailCertificate c;
  c.gauss = 1.5;
  c.lin = 2.0 * std::abs(cplx(1.0, 0.5));
  const double base = plane_integrate(RealField(f), c, o).value;
  for (double theta : {kPi / 7, kPi / 3}) {
    const cplx rot = std::polar(1.0, theta);
    const double turned = plane_integrate(RealField([&](cplx z) { return f(rot * z); }), c, o).value;
    EXPECT_NEAR(turned / base, 1.0, 2 * o.tol);
  }
}

TEST(PlaneIntegrate, RefinementWithinErrorEstimate) {
  const RealField fields[] = {RealField(gaussian), RealField([](cplx z) { return std::norm(z) * gaussian(z); }),
                              RealField(weighted_gaussian)};
  const TailCertificate certs[] = {TailCertificate::gaussian(1, 0, 1), TailCertificate::gaussian(1, 2, 1),
                                   TailCertificate::gaussian(1, -2, 1)};
  for (int i = 0; i < 3; ++i) {
    QuadOptions o;
    o.tol = 1e-8;
    const Integral a = plane_integrate(fields[i], certs[i], o);
    o.base_level = 1;
    const Integral b = plane_integrate(fields[i], certs[i], o);
    EXPECT_LE(std::abs(a.value - b.value), std::max(a.error, 1e-14 * a.value) + 1e-8 * a.value) << i;
  }
}

TEST(PlaneIntegrate, RefusesWithoutCertificate) {
  TailCertificate none;
  none.gauss = 0.0;
  EXPECT_THROW(plane_integrate(RealField([](cplx z) { return 1.0 / (1.0 + std::abs(z)); }), none), QuadratureError);
}

TEST(PlaneIntegrate, DetectsViolatedCertificate) {
  // e^{-|z|^2/4} claimed to decay like e^{-|z|^2}.
  auto f = [](cplx z) { return std::exp(-0.25 * std::norm(z)); };
  EXPECT_THROW(plane_integrate(RealField(f), TailCertificate::gaussian(1.0, 0.0, 1.0, 2.0)), QuadratureError);
}

TEST(PlaneIntegrate, ComplexField) {
  QuadOptions o;
  o.tol = 1e-9;
  // int z conj(z) e^{-|z|^2} = pi; int z e^{-|z|^2} = 0.
  auto f = [](cplx z) { return cplx(std::norm(z), 0.0) * std::exp(-std::norm(z)) + z * std::exp(-std::norm(z)); };
  const ComplexIntegral I = plane_integrate(ComplexField(f), TailCertificate::gaussian(1.0, 2.0, 1.0), o);
  EXPECT_NEAR(I.value.real() / kPi, 1.0, 1e-8);
  EXPECT_NEAR(I.value.imag(), 0.0, 1e-10);
}

TEST(PathIntegrate, Antiderivatives) {
  const cplx z{1.3, -0.7};
  EXPECT_LT(std::abs(path_integrate([](cplx) { return cplx(1.0); }, z) - z), 1e-14);
  EXPECT_LT(std::abs(path_integrate([](cplx w) { return w; }, z) - 0.5 * z * z), 1e-14);
  const cplx e = path_integrate([](cplx w) { return std::exp(w); }, cplx(1.0, 1.0));
  EXPECT_LT(std::abs(e - (std::exp(cplx(1.0, 1.0)) - 1.0)), 1e-10);
}

TEST(PathIntegrate, FundamentalTheorem) {
  for (const char* text : {"z^3", "exp(z)", "exp(0.2*z^2)"}) {
    const EntireExpr f = parse_symbol(text);
    const EntireExpr d = differentiate(f);
    for (cplx z : oracle::disc_points(50, 3.0, 21)) {
      const cplx got = path_integrate([&](cplx w) { return d(w); }, z, 1e-12);
      const cplx want = f(z) - f(0.0);
      EXPECT_LT(std::abs(got - want), 1e-12 * (1.0 + std::abs(want))) << text;
    }
  }
}

TEST(SupField, ShiftedGaussianPeak) {
  const SupResult s =
      sup_field([](cplx z) { return std::exp(-std::norm(z - 2.0)); }, TailCertificate{0.0, 0.0, 1.0, 4.0, 0.0});
  EXPECT_FALSE(s.refused);
  EXPECT_NEAR(s.value, 1.0, 1e-8);
  EXPECT_LT(std::abs(s.argmax - 2.0), 1e-3);
  EXPECT_TRUE(s.attained_inside);
}

TEST(SupField, RefusesWithoutGaussian) {
  TailCertificate none;
  const SupResult s = sup_field([](cplx z) { return 1.0 / (1.0 + std::abs(z)); }, none);
  EXPECT_TRUE(s.refused);
}

TEST(Certificate, TailIntegralBoundsTruth) {
  const TailCertificate c = TailCertificate::gaussian(1.0, 0.0, 1.0);
  for (double R : {1.0, 2.0, 3.0}) {
    const double truth = kPi * std::exp(-R * R);
    EXPECT_GE(c.tail_integral(R), truth * (1 - 1e-12));
    EXPECT_LE(c.tail_integral(R), 10.0 * truth);
  }
  EXPECT_NEAR(c.log_bound(2.0), -4.0, 1e-12);
}

TEST(Parallel, ForCoversEveryIndexOnce) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
}

TEST(CompensatedSum, RecoversSmallTerms) {
  CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 1000000; ++i) s.add(1e-16);
  s.add(-1.0);
  EXPECT_NEAR(s.value(), 1e-10, 1e-20);
}
