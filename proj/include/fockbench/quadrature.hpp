#pragma once

// Deterministic integration over the complex plane.
//
// Plane integrals use a polar product rule: composite Gauss-Legendre in the
// radius times the periodic trapezoid rule in the angle. Integration out to
// infinity is justified by a TailCertificate supplied by the caller; the part
// of the plane beyond the truncation radius is bounded in closed form.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fockbench/expr.hpp"

namespace fockbench {

class QuadratureError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Gauss-Legendre rule on [-1, 1] together with its spectral integration
/// matrix: cumulative(j, k) integrates the interpolant of samples at the nodes
/// from -1 up to node j.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> cumulative;  // row-major n x n

  explicit GaussLegendre(int order);
  int order() const { return static_cast<int>(nodes.size()); }
  double cumulative_at(int j, int k) const { return cumulative[static_cast<std::size_t>(j) * nodes.size() + k]; }

  static const GaussLegendre& get(int order);  // cached
};

/// Bound |F(z)| <= exp(log_scale) (1+|z|)^power exp(-gauss |z|^2 + lin |z|) for |z| >= radius.
///
/// The linear term is an extension of the plain Gaussian form; with lin = 0 it
/// is the usual A (1+|z|)^k e^{-c|z|^2}. log_scale = -inf means F vanishes for
/// |z| >= radius.
struct TailCertificate {
  double log_scale = 0.0;
  double power = 0.0;
  double gauss = 0.0;
  double lin = 0.0;
  double radius = 0.0;

  static TailCertificate gaussian(double scale, double power, double gauss, double radius = 0.0);
  static TailCertificate vanishing_beyond(double radius);

  bool valid() const { return gauss > 0.0; }
  bool vanishes() const;
  double log_bound(double r) const;
  /// Upper bound for the integral of the bound over |z| > R (R >= radius).
  double tail_integral(double R) const;
  /// Upper bound for sup of the bound over |z| >= R.
  double log_sup_beyond(double R) const;
};

/// Certificate for a field whose log-modulus is bounded by `g`; empty unless
/// g.quad < 0 or g describes the zero function.
std::optional<TailCertificate> certificate_from(const GrowthBound& g);

struct QuadOptions {
  double tol = 1e-7;
  double panel_width = 0.5;
  double arc_spacing = 0.5;
  int min_angles = 16;
  int max_refinements = 12;
  int base_level = 0;
  int order = 16;
  std::vector<double> breakpoints;  // radii where the field may have kinks
  bool radial = false;              // field depends on |z| only
  bool check_certificate = true;
  double abs_floor = 1e-300;
};

struct RadialPanel {
  double lo;
  double hi;
};

struct PolarGrid {
  std::vector<RadialPanel> panels;
  int order = 16;
  int angles = 16;
  double radius = 0.0;

  static PolarGrid make(double radius, const QuadOptions& opts, int radial_level, int angular_level);
  std::size_t size() const { return panels.size() * static_cast<std::size_t>(order) * angles; }
  double angle(int k) const;
};

struct Integral {
  double value = 0.0;
  double error = 0.0;
  double radius = 0.0;  // truncation radius actually used
  int level = 0;  // radial + angular refinement level reached
};

struct ComplexIntegral {
  cplx value{};
  double error = 0.0;
  double radius = 0.0;
  int level = 0;
};

using RealField = std::function<double(cplx)>;
using ComplexField = std::function<cplx(cplx)>;

/// Integral of `field` over C with respect to area measure.
Integral plane_integrate(const RealField& field, const TailCertificate& cert, const QuadOptions& opts = {});
ComplexIntegral plane_integrate(const ComplexField& field, const TailCertificate& cert,
                                const QuadOptions& opts = {});

/// Node values for a whole grid, laid out as for integrate_nodal.
using GridField = std::function<std::vector<double>(const PolarGrid&)>;

/// As plane_integrate, for fields that are cheaper to evaluate grid-at-a-time
/// (e.g. running integrals along rays). The certificate is not sampled.
Integral plane_integrate_grid(const GridField& field, const TailCertificate& cert, const QuadOptions& opts = {});

/// Integral over the grid of a field given by node values laid out as
/// values[(panel * order + radial node) * angles + angle]. Used when nodal
/// values come from a sweep rather than pointwise evaluation.
double integrate_nodal(const PolarGrid& grid, const std::vector<double>& values);

/// Straight-segment integral of h from `from` to `to` (composite Gauss-Legendre,
/// panels doubled until two successive estimates agree to tol).
cplx path_integrate(const ComplexField& h, cplx from, cplx to, double tol = 1e-12);
inline cplx path_integrate(const ComplexField& h, cplx endpoint, double tol = 1e-12) {
  return path_integrate(h, cplx{0.0, 0.0}, endpoint, tol);
}

struct SupResult {
  bool refused = false;        // no Gaussian certificate: sup may be infinite
  double value = 0.0;          // attained value (a lower bound for the true sup)
  cplx argmax{};
  bool attained_inside = false;
  double radius = 0.0;         // R*: certificate bound beyond is below `value`
  double grid_spacing = 0.0;   // resolution caveat
};

struct SupOptions {
  double panel_width = 0.25;
  double arc_spacing = 0.25;
  int min_angles = 32;
  bool polish = true;
};

SupResult sup_field(const RealField& field, const TailCertificate& cert, const SupOptions& opts = {});

/// Local maximization of `field` started at `start` (pattern search).
cplx polish_maximum(const RealField& field, cplx start, double step, double* value);

/// Thread count from FOCKBENCH_THREADS (default: hardware concurrency).
unsigned worker_count();
/// Runs fn(i) for i in [0, n); each index must write only its own output slot.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// Neumaier-compensated accumulator.
class CompensatedSum {
public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class ComplexCompensatedSum {
public:
  void add(cplx x) {
    re_.add(x.real());
    im_.add(x.imag());
  }
  cplx value() const { return {re_.value(), im_.value()}; }

private:
  CompensatedSum re_, im_;
};

}  // namespace fockbench
