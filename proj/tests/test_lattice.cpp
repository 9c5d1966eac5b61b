#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fockbench/fock.hpp"
#include "fockbench/lattice.hpp"
#include "oracles.hpp"

using namespace fockbench;

namespace {
constexpr double kPi = std::numbers::pi;

MeasureOptions general_path() {
  MeasureOptions o;
  o.radial = false;
  return o;
}
}  // namespace

TEST(Lattice, Construction) {
  const Lattice L = make_lattice(1.0, 5.0);
  EXPECT_NEAR(L.spacing, std::sqrt(2.0), 1e-15);
  std::size_t count = 0;
  for (int m = -5; m <= 5; ++m)
    for (int n = -5; n <= 5; ++n)
      if (2.0 * (m * m + n * n) <= 25.0) ++count;
  EXPECT_EQ(L.points.size(), count);
  const LatticeCheck c = check_lattice(L, 500);
  EXPECT_TRUE(c.covering);
  EXPECT_NEAR(c.min_distance, std::sqrt(2.0), 1e-12);
}

TEST(Lattice, InvariantsAcrossR) {
  for (double r : {0.5, 1.0, 2.0}) {
    const LatticeCheck c = check_lattice(make_lattice(r, 10.0), 1000);
    EXPECT_TRUE(c.ok()) << r;
    EXPECT_LE(c.worst_cover_distance, r);
    EXPECT_LE(c.max_overlap, kNmax);
    EXPECT_EQ(c.probes, 1000);
  }
}

TEST(DiscMeasure, Examples) {
  const PlaneMeasure flat = PlaneMeasure::disc_indicator(10.0, 1.0 / kPi);
  EXPECT_NEAR(disc_measure(flat, 0.0, 1.0), 1.0, 1e-4);
  const PlaneMeasure pushed = PlaneMeasure::gaussian().pushforward(parse_symbol("2*z"));
  EXPECT_NEAR(disc_measure(pushed, 0.0, 2.0) / (kPi * (1.0 - std::exp(-1.0))), 1.0, 1e-4);
  EXPECT_EQ(disc_measure(PlaneMeasure::zero(), 1.0, 3.0), 0.0);
}

TEST(DiscMeasure, OffCentreAgreesWithGeneralPath) {
  const PlaneMeasure mu = PlaneMeasure::gaussian();
  for (cplx c : {cplx(1.0, 0.5), cplx(-2.0, 1.0)}) {
    const double a = disc_measure(mu, c, 1.0);
    const double b = disc_measure(mu, c, 1.0, general_path());
    EXPECT_NEAR(a / b, 1.0, 1e-5) << c;
  }
}

TEST(DiscMeasure, NonlinearPushforwardKeepsMass) {
  const PlaneMeasure mu = PlaneMeasure::gaussian().pushforward(parse_symbol("z^2"));
  EXPECT_NEAR(disc_measure(mu, 0.0, 40.0) / kPi, 1.0, 1e-4);
  // |z^2| <= 1 iff |z| <= 1
  EXPECT_NEAR(disc_measure(mu, 0.0, 1.0) / (kPi * (1.0 - std::exp(-1.0))), 1.0, 1e-4);
}

TEST(MuTilde, GaussianConvolution) {
  // q = 2: (1+|w|)^2 int e^{-|zeta - w|^2} e^{-|zeta|^2} dm = (1+|w|)^2 (pi/2) e^{-|w|^2/2}
  const PlaneMeasure mu = PlaneMeasure::gaussian();
  for (cplx w : {cplx(0.0), cplx(1.0, 1.0), cplx(-2.5, 0.5)}) {
    const double r = std::abs(w);
    const double want = (1 + r) * (1 + r) * 0.5 * kPi * std::exp(-0.5 * r * r);
    EXPECT_NEAR(mu_tilde(mu, 2.0, 1.0, w) / want, 1.0, 1e-5);
    EXPECT_NEAR(mu_tilde(mu, 2.0, 1.0, w, general_path()) / want, 1.0, 1e-5);
  }
  EXPECT_EQ(mu_tilde(PlaneMeasure::zero(), 2.0, 1.0, 1.0), 0.0);
}

TEST(DRq, Examples) {
  const PlaneMeasure flat = PlaneMeasure::disc_indicator(10.0, 1.0 / kPi);
  EXPECT_NEAR(D_rq(flat, 2.0, 1.0, 0.0), 1.0, 1e-4);
  EXPECT_NEAR(D_rq(flat, 2.0, 1.0, 3.0), 16.0, 16e-4);
  EXPECT_EQ(D_rq(PlaneMeasure::zero(), 2.0, 1.0, 0.0), 0.0);
}

TEST(Equivalence, ZeroMeasure) {
  const EquivalenceReport rep = equivalence_report(PlaneMeasure::zero(), 1.0, 2.0, 1.0, make_lattice(1.0, 5.0));
  EXPECT_EQ(rep.mu_tilde.value, 0.0);
  EXPECT_EQ(rep.d_rq.value, 0.0);
  EXPECT_EQ(rep.sequence.value, 0.0);
}

TEST(Equivalence, WindowOnBasicMeasures) {
  const PlaneMeasure measures[] = {PlaneMeasure::gaussian(), PlaneMeasure::disc_indicator(3.0),
                                   PlaneMeasure::gaussian().pushforward(parse_symbol("2*z"))};
  for (const PlaneMeasure& mu : measures)
    for (double q : {1.0, 2.0})
      for (double p : {1.0, 2.0, kInfinity}) {
        const Lattice L = make_lattice(1.0, default_lattice_radius(mu, 1.0));
        const EquivalenceReport rep = equivalence_report(mu, q, p, 1.0, L);
        EXPECT_TRUE(rep.all_finite()) << mu.name();
        EXPECT_LE(rep.window, 100.0) << mu.name() << " q=" << q << " p=" << p;
      }
}

TEST(Equivalence, IndicatorAcrossR) {
  const PlaneMeasure mu = PlaneMeasure::disc_indicator(3.0);
  const double a = lattice_sequence_norm(mu, 2.0, kInfinity, make_lattice(0.5, 5.0)).value;
  const double b = lattice_sequence_norm(mu, 2.0, kInfinity, make_lattice(1.0, 6.0)).value;
  EXPECT_GT(a, 0.0);
  EXPECT_LT(std::max(a / b, b / a), 100.0);
}

TEST(Membership, IndependentOfR) {
  // Heavy-tailed density (1+|z|)^{-4}: D_rq in L^p iff p (q - 4) + 2 < 0.
  RadialProfile heavy;
  heavy.power = -4.0;
  const PlaneMeasure mu = PlaneMeasure::radial(heavy, "heavy");
  for (double q : {0.5, 1.0, 2.0, 3.0})
    for (double p : {1.0, 2.0, kInfinity}) {
      const bool want = std::isinf(p) ? q - 4.0 <= 0.0 : p * (q - 4.0) + 2.0 < 0.0;
      for (double r : {0.5, 1.0, 2.0}) EXPECT_EQ(D_rq_norm(mu, q, p, r).finite, want) << q << " " << p << " " << r;
    }
}

TEST(Norms, GaussianClosedForms) {
  // ||D_0q||-free check: mu~ with q = 0 is the mass, sup of D at origin for the Gaussian.
  const PlaneMeasure mu = PlaneMeasure::gaussian();
  const LpValue sup = D_rq_norm(mu, 0.0, kInfinity, 1.0);
  EXPECT_NEAR(sup.value / (kPi * (1.0 - std::exp(-1.0))), 1.0, 1e-6);
  // ||e^{-|z|^2}||_{L^1} = pi
  EXPECT_NEAR(weighted_lp_norm(mu, 0.0, 1.0).value / kPi, 1.0, 1e-8);
}

TEST(LocalAverages, BoundedByWeightedNorm) {
  // ||D_rq||_p <= C ||h||_{L^p_q} and ||mu~_q||_p <= C ||h||_{L^p_q}, one C over p.
  RadialProfile poly;
  poly.power = -6.0;  // (1+|z|)^{-q-3} with q = 3
  const PlaneMeasure densities[] = {PlaneMeasure::gaussian(), PlaneMeasure::radial(poly, "poly")};
  for (const PlaneMeasure& mu : densities) {
    const double q = 3.0;
    std::vector<double> ratios;
    for (double p : {1.0, 2.0, kInfinity}) {
      const double base = weighted_lp_norm(mu, q, p).value;
      ratios.push_back(D_rq_norm(mu, q, p, 1.0).value / base);
      ratios.push_back(mu_tilde_norm(mu, q, p, 1.0).value / base);
    }
    for (double x : ratios) {
      EXPECT_TRUE(std::isfinite(x)) << mu.name();
      EXPECT_LT(x, 100.0) << mu.name();
    }
    MeasureOptions fine;
    fine.tol = 1e-10;
    const double coarse = D_rq_norm(mu, q, 2.0, 1.0).value, refined = D_rq_norm(mu, q, 2.0, 1.0, fine).value;
    EXPECT_NEAR(refined / coarse, 1.0, 0.1);
  }
}

TEST(Pushforward, ScalesRadialProfile) {
  const RadialProfile p = PlaneMeasure::gaussian().pushforward(parse_symbol("2*z")).profile().value();
  EXPECT_NEAR(p.scale, 0.25, 1e-15);
  EXPECT_NEAR(p.gauss, 0.25, 1e-15);
  EXPECT_NEAR(p.mass(), kPi, 1e-9);
  EXPECT_THROW(PlaneMeasure::gaussian().pushforward(parse_symbol("3")), std::invalid_argument);
}
