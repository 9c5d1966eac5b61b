#pragma once

// Square r/2-lattices, planar measures given by densities (or their
// pushforwards), disc measures, the transforms mu~_q and D_rq, and the
// three-way comparison of their L^p / l^p sizes.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fockbench/expr.hpp"
#include "fockbench/quadrature.hpp"

namespace fockbench {

// ----------------------------------------------------------------- lattice

inline constexpr int kNmax = 37;

struct Lattice {
  double r = 1.0;        // covering parameter
  double spacing = 0.0;  // r sqrt(2)
  double radius = 0.0;   // truncation radius R_lattice
  std::vector<cplx> points;
};

/// Nodes s (m + n i), s = r sqrt(2), with |z_j| <= R.
Lattice make_lattice(double r, double R);

struct LatticeCheck {
  int probes = 0;
  bool covering = false;          // every probe in |z| <= R - r lies within r of a node
  double worst_cover_distance = 0.0;
  bool disjoint = false;          // min node distance >= r
  double min_distance = 0.0;
  int max_overlap = 0;            // largest number of discs D(z_j, 2r) containing a probe
  bool overlap_ok = false;        // max_overlap <= kNmax
  bool ok() const { return covering && disjoint && overlap_ok; }
};

LatticeCheck check_lattice(const Lattice& lattice, int probes = 1000, std::uint64_t seed = 0x5eed);

// ----------------------------------------------------------------- measures

/// h(t) = scale (1 + t/sigma)^power e^{-gauss t^2} for t <= support, else 0.
struct RadialProfile {
  double scale = 1.0;
  double power = 0.0;
  double sigma = 1.0;
  double gauss = 0.0;
  double support = std::numeric_limits<double>::infinity();

  double operator()(double t) const;
  /// Profile of the pushforward under z -> a z with |a| = modulus.
  RadialProfile scaled(double modulus) const;
  bool compact() const { return std::isfinite(support); }
  /// Bound of the form used by plane quadrature; c > 0 or compact support required.
  TailCertificate certificate() const;
  /// Total mass, +inf when not integrable.
  double mass() const;
  /// Smallest t beyond which h <= ratio * max h (support radius when compact).
  double effective_radius(double ratio = 1e-12) const;
};

/// A density h dm, optionally pushed forward by an entire psi:
/// mu(E) = int_{psi^{-1}(E)} h dm.
class PlaneMeasure {
public:
  static PlaneMeasure zero();
  static PlaneMeasure radial(const RadialProfile& profile, std::string name = "radial");
  static PlaneMeasure gaussian(double scale = 1.0, double c = 1.0);
  static PlaneMeasure disc_indicator(double support, double height = 1.0);
  /// General density; `cert` must bound h (gauss > 0 or vanishing).
  static PlaneMeasure density(RealField h, const TailCertificate& cert, std::string name = "density");

  PlaneMeasure pushforward(const EntireExpr& psi) const;

  bool is_zero() const { return zero_; }
  const std::string& name() const { return name_; }
  /// Radial description of the measure itself (after any pushforward), when known.
  const std::optional<RadialProfile>& profile() const { return profile_; }
  const std::optional<EntireExpr>& psi() const { return psi_; }
  double h(cplx z) const { return h_(z); }
  const TailCertificate& certificate() const { return cert_; }

private:
  bool zero_ = false;
  std::string name_;
  RealField h_;
  TailCertificate cert_;
  std::optional<EntireExpr> psi_;
  std::optional<RadialProfile> profile_;
};

struct MeasureOptions {
  double tol = 1e-8;         // relative tolerance of 1-D radial integrals
  double plane_tol = 1e-6;   // relative tolerance of 2-D integrals
  int max_depth = 8;         // boundary subdivision depth of the cell tree
  bool radial = true;        // use the radial reduction when a profile is known
};

/// mu(D(center, radius)).
double disc_measure(const PlaneMeasure& mu, cplx center, double radius, const MeasureOptions& opts = {});

/// mu~_q(w) = (1+|w|)^q int e^{-alpha q |zeta - w|^2 / 2} dmu(zeta).
double mu_tilde(const PlaneMeasure& mu, double q, double alpha, cplx w, const MeasureOptions& opts = {});

/// D_rq(z) = (1+|z|)^q mu(D(z, r)).
double D_rq(const PlaneMeasure& mu, double q, double r, cplx z, const MeasureOptions& opts = {});

struct LpValue {
  bool finite = true;
  double value = 0.0;  // +inf when not finite
};

/// ||mu~_q||_{L^p(dm)}; radial measures only.
LpValue mu_tilde_norm(const PlaneMeasure& mu, double q, double p, double alpha, const MeasureOptions& opts = {});
/// ||D_rq||_{L^p(dm)}; radial measures only.
LpValue D_rq_norm(const PlaneMeasure& mu, double q, double p, double r, const MeasureOptions& opts = {});
/// l^p norm of (1+|z_j|)^q mu(D(z_j, r)) over the lattice nodes.
LpValue lattice_sequence_norm(const PlaneMeasure& mu, double q, double p, const Lattice& lattice,
                              const MeasureOptions& opts = {});
/// ||h (1+|z|)^q||_{L^p(dm)} for a radial density (the L^p_{phi_q} norm).
LpValue weighted_lp_norm(const PlaneMeasure& mu, double q, double p, const MeasureOptions& opts = {});

/// Lattice radius covering the effective support of mu plus one disc radius.
double default_lattice_radius(const PlaneMeasure& mu, double r);

struct EquivalenceReport {
  double q = 0.0, p = 0.0, r = 0.0, alpha = 1.0;
  LpValue mu_tilde, d_rq, sequence;
  double ratio_mu_d = 0.0;    // mu_tilde / d_rq
  double ratio_mu_seq = 0.0;  // mu_tilde / sequence
  double ratio_d_seq = 0.0;   // d_rq / sequence
  double window = 0.0;        // max over ratios of max(x, 1/x); 1 when all vanish
  std::size_t nodes = 0;
  bool all_finite() const { return mu_tilde.finite && d_rq.finite && sequence.finite; }
};

EquivalenceReport equivalence_report(const PlaneMeasure& mu, double q, double p, double r, const Lattice& lattice,
                                     double alpha = 1.0, const MeasureOptions& opts = {});

}  // namespace fockbench
