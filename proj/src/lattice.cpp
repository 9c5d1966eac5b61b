#include "fockbench/lattice.hpp"

#include <gsl/gsl_sf_bessel.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>

namespace fockbench {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

using Fn = std::function<double(double)>;

// Composite Gauss-Legendre on [a, b]; panels double until two passes agree.
double integrate_1d(const Fn& f, double a, double b, double tol, double panel = 1.0) {
  if (!(b > a)) return 0.0;
  const GaussLegendre& gl = GaussLegendre::get(20);
  auto pass = [&](int panels) {
    const double h = (b - a) / panels;
    CompensatedSum s;
    for (int i = 0; i < panels; ++i) {
      const double mid = a + (i + 0.5) * h;
      for (int j = 0; j < gl.order(); ++j) s.add(0.5 * h * gl.weights[j] * f(mid + 0.5 * h * gl.nodes[j]));
    }
    return s.value();
  };
  int n = std::max(1, static_cast<int>(std::ceil((b - a) / panel)));
  double prev = pass(n);
  for (int k = 0; k < 14; ++k) {
    n *= 2;
    const double cur = pass(n);
    if (std::abs(cur - prev) <= tol * std::abs(cur) + 1e-290) return cur;
    prev = cur;
  }
  throw QuadratureError("1-D integral did not converge on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
}

// Same, after t = a + (b - a)(1 - cos(pi s))/2, which smooths square-root endpoints.
double integrate_1d_sqrt_ends(const Fn& f, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  const double len = b - a;
  auto g = [&](double s) {
    return f(a + 0.5 * len * (1.0 - std::cos(kPi * s))) * 0.5 * len * kPi * std::sin(kPi * s);
  };
  return integrate_1d(g, 0.0, 1.0, tol, 1.0 / std::max(1.0, std::ceil(len)));
}

// int_T^inf f via t = T / u.
double integrate_halfline(const Fn& f, double T, double tol) {
  auto g = [&](double u) { return f(T / u) * T / (u * u); };
  return integrate_1d(g, 0.0, 1.0, tol, 0.25);
}

// Integral over [0, inf) (or [0, end]) with the given interior breakpoints.
double integrate_radial(const Fn& f, std::vector<double> breaks, double end, double tol) {
  breaks.push_back(0.0);
  const bool infinite = !std::isfinite(end);
  breaks.push_back(infinite ? 1.0 : end);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  if (!infinite) breaks.erase(std::remove_if(breaks.begin(), breaks.end(), [&](double x) { return x > end; }),
                              breaks.end());
  breaks.erase(std::remove_if(breaks.begin(), breaks.end(), [](double x) { return x < 0.0; }), breaks.end());
  CompensatedSum s;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) s.add(integrate_1d(f, breaks[i], breaks[i + 1], tol));
  if (infinite) s.add(integrate_halfline(f, std::max(breaks.back(), 1.0), tol));
  return s.value();
}

// Maximum of f over [0, end]: grid scan, then golden-section refinement.
double sup_radial(const Fn& f, double end) {
  std::vector<double> xs;
  for (double x = 0.0; x <= std::min(end, 16.0); x += 0.0625) xs.push_back(x);
  for (double x = 16.0 * 1.05; x <= end; x *= 1.05) xs.push_back(x);
  if (xs.back() < end) xs.push_back(end);
  std::vector<double> ys(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) { ys[i] = f(xs[i]); });
  const std::size_t k = static_cast<std::size_t>(std::max_element(ys.begin(), ys.end()) - ys.begin());
  double lo = xs[k > 0 ? k - 1 : 0], hi = xs[std::min(k + 1, xs.size() - 1)];
  double best = ys[k];
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 60 && hi - lo > 1e-10; ++it) {
    if (f1 < f2) {
      lo = x1; x1 = x2; f1 = f2; x2 = lo + g * (hi - lo); f2 = f(x2);
    } else {
      hi = x2; x2 = x1; f2 = f1; x1 = hi - g * (hi - lo); f1 = f(x1);
    }
  }
  return std::max({best, f1, f2});
}

// Finite L^p size of a radial field behaving like t^e at infinity.
bool power_tail_finite(double e, double p) { return std::isinf(p) ? e <= 0.0 : p * e + 2.0 < 0.0; }

bool decays_fast(const RadialProfile& h) { return h.compact() || h.gauss > 0.0; }

// mu(D(d, r)) for a radial density, d = |center|: exact arc length per circle |zeta| = t.
double radial_disc_mass(const RadialProfile& h, double d, double r, double tol) {
  const double S = h.support;
  CompensatedSum s;
  if (d < 1e-12 * r) {
    s.add(integrate_1d([&](double t) { return 2.0 * kPi * t * h(t); }, 0.0, std::min(r, S), tol));
    return s.value();
  }
  const double inner = r - d;
  if (inner > 0.0)
    s.add(integrate_1d([&](double t) { return 2.0 * kPi * t * h(t); }, 0.0, std::min(inner, S), tol));
  const double lo = std::abs(d - r), hi = d + r;
  if (S > lo) {
    auto band = [&](double t) {
      if (t <= 0.0) return 0.0;
      const double c = std::clamp((t * t + d * d - r * r) / (2.0 * t * d), -1.0, 1.0);
      return 2.0 * t * h(t) * std::acos(c);
    };
    s.add(integrate_1d_sqrt_ends(band, lo, std::min(hi, S), tol));
  }
  return s.value();
}

// mu~_q at |w| = rho for a radial density.
double radial_mu_tilde(const RadialProfile& h, double q, double alpha, double rho, double tol) {
  const double aq = alpha * q;
  Fn integrand;
  std::vector<double> breaks;
  if (q == 0.0) {
    integrand = [&](double t) { return 2.0 * kPi * t * h(t); };
    breaks = {1.0, 4.0};
  } else {
    integrand = [&, aq, rho](double t) {
      const double x = aq * t * rho;
      const double i0e = gsl_sf_bessel_I0_scaled(x);
      return 2.0 * kPi * t * h(t) * std::exp(-0.5 * aq * (t - rho) * (t - rho)) * i0e;
    };
    const double w = 1.0 / std::sqrt(aq);
    breaks = {rho - 8.0 * w, rho - 2.0 * w, rho, rho + 2.0 * w, rho + 8.0 * w};
  }
  const double end = h.compact() ? h.support : kInf;
  return std::pow(1.0 + rho, q) * integrate_radial(integrand, breaks, end, tol);
}

// --- two-dimensional paths -----------------------------------------------

struct Box {
  double x0, y0, size;
};

// int h over a square, by tensor Gauss-Legendre on sub-squares of side <= 0.5.
double integrate_square(const RealField& h, const Box& b) {
  const int split = std::max(1, static_cast<int>(std::ceil(b.size / 0.5)));
  const double side = b.size / split;
  const GaussLegendre& gl = GaussLegendre::get(8);
  CompensatedSum s;
  for (int i = 0; i < split; ++i)
    for (int j = 0; j < split; ++j) {
      const double cx = b.x0 + (i + 0.5) * side, cy = b.y0 + (j + 0.5) * side;
      for (int a = 0; a < gl.order(); ++a)
        for (int c = 0; c < gl.order(); ++c)
          s.add(0.25 * side * side * gl.weights[a] * gl.weights[c] *
                h({cx + 0.5 * side * gl.nodes[a], cy + 0.5 * side * gl.nodes[c]}));
    }
  return s.value();
}

// int over the part of a square inside the disc D(c, R): exact chords in y.
double integrate_chords(const RealField& h, const Box& b, cplx c, double R) {
  const GaussLegendre& gl = GaussLegendre::get(8);
  CompensatedSum s;
  for (int a = 0; a < gl.order(); ++a) {
    const double x = b.x0 + 0.5 * b.size * (1.0 + gl.nodes[a]);
    const double dx = x - c.real();
    if (std::abs(dx) >= R) continue;
    const double half = std::sqrt(R * R - dx * dx);
    const double y0 = std::max(b.y0, c.imag() - half), y1 = std::min(b.y0 + b.size, c.imag() + half);
    if (!(y1 > y0)) continue;
    for (int k = 0; k < gl.order(); ++k) {
      const double y = 0.5 * (y0 + y1) + 0.5 * (y1 - y0) * gl.nodes[k];
      s.add(0.25 * b.size * (y1 - y0) * gl.weights[a] * gl.weights[k] * h({x, y}));
    }
  }
  return s.value();
}

// int_{D(c, R)} h dm by cell subdivision at the boundary.
double disc_tree(const RealField& h, cplx c, double R, const Box& b, int depth, int max_depth) {
  const double x1 = b.x0 + b.size, y1 = b.y0 + b.size;
  const double nx = std::clamp(c.real(), b.x0, x1), ny = std::clamp(c.imag(), b.y0, y1);
  if (std::hypot(nx - c.real(), ny - c.imag()) >= R) return 0.0;
  const double fx = std::max(std::abs(b.x0 - c.real()), std::abs(x1 - c.real()));
  const double fy = std::max(std::abs(b.y0 - c.imag()), std::abs(y1 - c.imag()));
  if (std::hypot(fx, fy) <= R) return integrate_square(h, b);
  if (depth >= max_depth) return integrate_chords(h, b, c, R);
  const double half = 0.5 * b.size;
  double total = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      total += disc_tree(h, c, R, {b.x0 + i * half, b.y0 + j * half, half}, depth + 1, max_depth);
  return total;
}

// int h(z) chi(z) dm over a square when chi is only known pointwise.
double indicator_tree(const RealField& h, const std::function<bool(cplx)>& inside, const Box& b, int depth,
                      int max_depth) {
  constexpr int kMinDepth = 4;
  int count = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) count += inside({b.x0 + 0.5 * i * b.size, b.y0 + 0.5 * j * b.size}) ? 1 : 0;
  if (depth >= kMinDepth && (count == 0 || count == 9)) return count == 0 ? 0.0 : integrate_square(h, b);
  if (depth >= max_depth) {
    const GaussLegendre& gl = GaussLegendre::get(8);
    CompensatedSum s;
    for (int a = 0; a < gl.order(); ++a)
      for (int k = 0; k < gl.order(); ++k) {
        const cplx z{b.x0 + 0.5 * b.size * (1.0 + gl.nodes[a]), b.y0 + 0.5 * b.size * (1.0 + gl.nodes[k])};
        if (inside(z)) s.add(0.25 * b.size * b.size * gl.weights[a] * gl.weights[k] * h(z));
      }
    return s.value();
  }
  const double half = 0.5 * b.size;
  double total = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      total += indicator_tree(h, inside, {b.x0 + i * half, b.y0 + j * half, half}, depth + 1, max_depth);
  return total;
}

// psi = a z + b when psi is affine.
std::optional<std::pair<cplx, cplx>> affine_coefficients(const EntireExpr& psi) {
  const SymbolClass& cls = psi.symbol_class();
  if (!cls.is_linear()) return std::nullopt;
  const auto& c = cls.poly.coeffs;
  const cplx b = c.empty() ? cplx{} : c[0];
  const cplx a = c.size() > 1 ? c[1] : cplx{};
  return std::make_pair(a, b);
}

// Radius beyond which the certified tail of h carries less than `budget`.
double truncation_radius(const TailCertificate& cert, double budget) {
  if (cert.vanishes()) return cert.radius;
  double R = std::max(cert.radius, 1.0);
  while (cert.tail_integral(R) > budget && R < 1e4) R *= 1.25;
  return R;
}

std::vector<double> compact_breaks(const RadialProfile& h) {
  return h.compact() ? std::vector<double>{h.support} : std::vector<double>{};
}

}  // namespace

// ------------------------------------------------------------------ lattice

Lattice make_lattice(double r, double R) {
  if (!(r > 0.0)) throw std::invalid_argument("lattice parameter r must be positive");
  Lattice L;
  L.r = r;
  L.spacing = r * std::numbers::sqrt2;
  L.radius = R;
  const int n = static_cast<int>(std::floor(R / L.spacing));
  for (int i = -n; i <= n; ++i)
    for (int j = -n; j <= n; ++j) {
      const cplx z{i * L.spacing, j * L.spacing};
      if (std::abs(z) <= R) L.points.push_back(z);
    }
  return L;
}

LatticeCheck check_lattice(const Lattice& lattice, int probes, std::uint64_t seed) {
  LatticeCheck out;
  out.probes = probes;
  const auto& pts = lattice.points;
  const double r = lattice.r;

  double dmin = kInf;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) dmin = std::min(dmin, std::abs(pts[i] - pts[j]));
  out.min_distance = dmin;
  out.disjoint = dmin >= r * (1.0 - 1e-12);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&](double radius) {
    const double rho = radius * std::sqrt(unit(rng));
    return std::polar(rho, 2.0 * kPi * unit(rng));
  };
  const double cover_radius = std::max(0.0, lattice.radius - r);
  out.covering = true;
  for (int k = 0; k < probes; ++k) {
    const cplx z = draw(cover_radius);
    double best = kInf;
    for (cplx p : pts) best = std::min(best, std::abs(z - p));
    out.worst_cover_distance = std::max(out.worst_cover_distance, best);
    if (best > r * (1.0 + 1e-12)) out.covering = false;
  }
  for (int k = 0; k < probes; ++k) {
    const cplx z = draw(lattice.radius);
    int count = 0;
    for (cplx p : pts) count += std::abs(z - p) < 2.0 * r ? 1 : 0;
    out.max_overlap = std::max(out.max_overlap, count);
  }
  out.overlap_ok = out.max_overlap <= kNmax;
  return out;
}

// ----------------------------------------------------------------- profiles

double RadialProfile::operator()(double t) const {
  if (t > support || scale == 0.0) return 0.0;
  double v = scale;
  if (power != 0.0) v *= std::pow(1.0 + t / sigma, power);
  if (gauss != 0.0) v *= std::exp(-gauss * t * t);
  return v;
}

RadialProfile RadialProfile::scaled(double modulus) const {
  if (!(modulus > 0.0)) throw std::invalid_argument("pushforward needs a nonzero linear coefficient");
  RadialProfile out = *this;
  out.scale = scale / (modulus * modulus);
  out.sigma = sigma * modulus;
  out.gauss = gauss / (modulus * modulus);
  out.support = support * modulus;
  return out;
}

TailCertificate RadialProfile::certificate() const {
  if (compact()) return TailCertificate::vanishing_beyond(support);
  // (1 + t/sigma)^k <= m^k (1 + t)^k with m = max(1, 1/sigma) for k >= 0, min(1, 1/sigma) for k < 0.
  const double m = power >= 0.0 ? std::max(1.0, 1.0 / sigma) : std::min(1.0, 1.0 / sigma);
  TailCertificate c;
  c.log_scale = scale > 0.0 ? std::log(scale) + power * std::log(m) : -kInf;
  c.power = power;
  c.gauss = gauss;
  return c;
}

double RadialProfile::mass() const {
  if (scale == 0.0) return 0.0;
  if (!decays_fast(*this) && power >= -2.0) return kInf;
  return integrate_radial([&](double t) { return 2.0 * kPi * t * (*this)(t); }, compact_breaks(*this),
                          compact() ? support : kInf, 1e-10);
}

double RadialProfile::effective_radius(double ratio) const {
  if (compact()) return support;
  if (scale == 0.0) return 0.0;
  if (gauss <= 0.0 && power >= 0.0) return kInf;
  double peak_t = 0.0;
  if (power > 0.0) peak_t = 0.5 * (-sigma + std::sqrt(sigma * sigma + 2.0 * power / gauss));
  const double target = ratio * (*this)(peak_t);
  double lo = peak_t, hi = std::max(1.0, 2.0 * peak_t);
  while ((*this)(hi) > target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e8) return kInf;
  }
  for (int i = 0; i < 100 && hi - lo > 1e-9 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    ((*this)(mid) > target ? lo : hi) = mid;
  }
  return hi;
}

// ----------------------------------------------------------------- measures

PlaneMeasure PlaneMeasure::zero() {
  PlaneMeasure m;
  m.zero_ = true;
  m.name_ = "0";
  m.h_ = [](cplx) { return 0.0; };
  m.cert_ = TailCertificate::vanishing_beyond(0.0);
  RadialProfile p;
  p.scale = 0.0;
  m.profile_ = p;
  return m;
}

PlaneMeasure PlaneMeasure::radial(const RadialProfile& profile, std::string name) {
  if (profile.scale < 0.0) throw std::invalid_argument("density must be nonnegative");
  if (profile.scale == 0.0) return zero();
  PlaneMeasure m;
  m.name_ = std::move(name);
  m.h_ = [profile](cplx z) { return profile(std::abs(z)); };
  m.cert_ = profile.certificate();
  m.profile_ = profile;
  return m;
}

PlaneMeasure PlaneMeasure::gaussian(double scale, double c) {
  RadialProfile p;
  p.scale = scale;
  p.gauss = c;
  return radial(p, "gaussian");
}

PlaneMeasure PlaneMeasure::disc_indicator(double support, double height) {
  RadialProfile p;
  p.scale = height;
  p.support = support;
  return radial(p, "disc-indicator");
}

PlaneMeasure PlaneMeasure::density(RealField h, const TailCertificate& cert, std::string name) {
  PlaneMeasure m;
  m.name_ = std::move(name);
  m.h_ = std::move(h);
  m.cert_ = cert;
  return m;
}

PlaneMeasure PlaneMeasure::pushforward(const EntireExpr& psi) const {
  if (zero_) return *this;
  const auto aff = affine_coefficients(psi);
  if (aff && aff->first == cplx{}) throw std::invalid_argument("pushforward by a constant map is an atom");
  PlaneMeasure m = *this;
  m.name_ = name_ + "@" + psi.to_string();
  m.psi_ = psi_ ? compose(psi, *psi_) : psi;
  m.profile_.reset();
  if (profile_ && aff && aff->second == cplx{}) m.profile_ = profile_->scaled(std::abs(aff->first));
  return m;
}

// ---------------------------------------------------------- point values

double disc_measure(const PlaneMeasure& mu, cplx center, double radius, const MeasureOptions& opts) {
  if (mu.is_zero() || !(radius > 0.0)) return 0.0;
  if (opts.radial && mu.profile()) return radial_disc_mass(*mu.profile(), std::abs(center), radius, opts.tol);

  const RealField h = [&](cplx z) { return mu.h(z); };
  // Preimage disc under an affine psi.
  cplx c = center;
  double R = radius;
  bool disc = true;
  if (mu.psi()) {
    const auto aff = affine_coefficients(*mu.psi());
    if (aff) {
      c = (center - aff->second) / aff->first;
      R = radius / std::abs(aff->first);
    } else {
      disc = false;
    }
  }
  if (disc) {
    if (mu.certificate().vanishes() && std::abs(c) >= R + mu.certificate().radius) return 0.0;
    return disc_tree(h, c, R, {c.real() - R, c.imag() - R, 2.0 * R}, 0, opts.max_depth);
  }
  const EntireExpr psi = *mu.psi();
  const double total = plane_integrate(h, mu.certificate(), QuadOptions{}).value;
  const double Rz = truncation_radius(mu.certificate(), 1e-3 * opts.plane_tol * total);
  auto inside = [&](cplx z) { return std::abs(psi(z) - center) < radius; };
  return indicator_tree(h, inside, {-Rz, -Rz, 2.0 * Rz}, 0, opts.max_depth);
}

double mu_tilde(const PlaneMeasure& mu, double q, double alpha, cplx w, const MeasureOptions& opts) {
  if (q < 0.0) throw std::invalid_argument("q must be >= 0");
  if (mu.is_zero()) return 0.0;
  if (opts.radial && mu.profile()) return radial_mu_tilde(*mu.profile(), q, alpha, std::abs(w), opts.tol);
  const TailCertificate& cert = mu.certificate();
  if (!cert.valid() && !cert.vanishes()) throw QuadratureError("no tail certificate for the density");
  const double aq = alpha * q;
  const std::optional<EntireExpr>& psi = mu.psi();
  RealField field = [&](cplx z) {
    const cplx image = psi ? (*psi)(z) : z;
    return std::exp(-0.5 * aq * std::norm(image - w)) * mu.h(z);
  };
  QuadOptions qo;
  qo.tol = opts.plane_tol;
  if (cert.vanishes()) qo.breakpoints.push_back(cert.radius);
  return std::pow(1.0 + std::abs(w), q) * plane_integrate(field, cert, qo).value;
}

double D_rq(const PlaneMeasure& mu, double q, double r, cplx z, const MeasureOptions& opts) {
  if (q < 0.0) throw std::invalid_argument("q must be >= 0");
  return std::pow(1.0 + std::abs(z), q) * disc_measure(mu, z, r, opts);
}

// ------------------------------------------------------------------ norms

namespace {

const RadialProfile& require_profile(const PlaneMeasure& mu) {
  if (!mu.profile()) throw QuadratureError("L^p norms need a radial measure (no certificate in w)");
  return *mu.profile();
}

double lp_of_radial(const Fn& F, double p, const std::vector<double>& breaks, double end, double sup_end,
                    double tol) {
  if (std::isinf(p)) return sup_radial(F, sup_end);
  const double I = integrate_radial([&](double t) { return 2.0 * kPi * t * std::pow(F(t), p); }, breaks, end, tol);
  return std::pow(I, 1.0 / p);
}

// Radius past which a field dominated by h(t) (1+t)^q is negligible for sup scans.
double sup_scan_end(const RadialProfile& h, double extra) {
  const double eff = h.effective_radius(1e-14);
  return std::isfinite(eff) ? eff + extra : 1e4;
}

}  // namespace

LpValue mu_tilde_norm(const PlaneMeasure& mu, double q, double p, double alpha, const MeasureOptions& opts) {
  if (mu.is_zero()) return {};
  const RadialProfile& h = require_profile(mu);
  if (q == 0.0) {
    const double m = h.mass();
    if (!std::isfinite(m) || !std::isinf(p)) return {false, kInf};
    return {true, m};
  }
  if (!decays_fast(h) && !power_tail_finite(q + h.power, p)) return {false, kInf};
  const double tol = std::max(100.0 * opts.tol, 1e-9);
  auto F = [&](double rho) { return radial_mu_tilde(h, q, alpha, rho, opts.tol); };
  const double extra = 10.0 / std::sqrt(alpha * q) + 2.0;
  std::vector<double> breaks = compact_breaks(h);
  for (double x = 1.0; x < (h.compact() ? h.support + extra : 8.0); x += 1.0) breaks.push_back(x);
  return {true, lp_of_radial(F, p, breaks, kInf, sup_scan_end(h, extra), tol)};
}

LpValue D_rq_norm(const PlaneMeasure& mu, double q, double p, double r, const MeasureOptions& opts) {
  if (mu.is_zero()) return {};
  const RadialProfile& h = require_profile(mu);
  if (!decays_fast(h) && !power_tail_finite(q + h.power, p)) return {false, kInf};
  const double tol = std::max(100.0 * opts.tol, 1e-9);
  auto F = [&](double rho) { return std::pow(1.0 + rho, q) * radial_disc_mass(h, rho, r, opts.tol); };
  std::vector<double> breaks{r};
  double end = kInf;
  if (h.compact()) {
    breaks.push_back(std::max(0.0, h.support - r));
    end = h.support + r;
  }
  for (double x = 1.0; x < (h.compact() ? end : 8.0); x += 1.0) breaks.push_back(x);
  return {true, lp_of_radial(F, p, breaks, end, h.compact() ? end : sup_scan_end(h, r + 2.0), tol)};
}

LpValue weighted_lp_norm(const PlaneMeasure& mu, double q, double p, const MeasureOptions& opts) {
  if (mu.is_zero()) return {};
  const RadialProfile& h = require_profile(mu);
  if (!decays_fast(h) && !power_tail_finite(q + h.power, p)) return {false, kInf};
  auto F = [&](double t) { return h(t) * std::pow(1.0 + t, q); };
  const double end = h.compact() ? h.support : kInf;
  std::vector<double> breaks;
  for (double x = 1.0; x < (h.compact() ? end : 8.0); x += 1.0) breaks.push_back(x);
  return {true, lp_of_radial(F, p, breaks, end, h.compact() ? end : sup_scan_end(h, 2.0),
                             std::max(100.0 * opts.tol, 1e-9))};
}

LpValue lattice_sequence_norm(const PlaneMeasure& mu, double q, double p, const Lattice& lattice,
                              const MeasureOptions& opts) {
  if (mu.is_zero()) return {};
  // Radial measures: one evaluation per distinct node modulus.
  std::vector<double> values(lattice.points.size());
  if (opts.radial && mu.profile()) {
    std::map<long long, std::size_t> index;
    std::vector<double> moduli;
    std::vector<long long> keys(lattice.points.size());
    for (std::size_t i = 0; i < lattice.points.size(); ++i) {
      const cplx z = lattice.points[i] / lattice.spacing;
      const long long key = std::llround(std::norm(z));
      keys[i] = key;
      if (index.emplace(key, moduli.size()).second) moduli.push_back(std::abs(lattice.points[i]));
    }
    std::vector<double> unique(moduli.size());
    parallel_for(moduli.size(), [&](std::size_t k) { unique[k] = D_rq(mu, q, lattice.r, moduli[k], opts); });
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = unique[index[keys[i]]];
  } else {
    parallel_for(values.size(),
                 [&](std::size_t i) { values[i] = D_rq(mu, q, lattice.r, lattice.points[i], opts); });
  }
  if (std::isinf(p)) return {true, values.empty() ? 0.0 : *std::max_element(values.begin(), values.end())};
  CompensatedSum s;
  for (double v : values) s.add(std::pow(v, p));
  return {true, std::pow(s.value(), 1.0 / p)};
}

double default_lattice_radius(const PlaneMeasure& mu, double r) {
  if (mu.is_zero()) return r;
  if (mu.profile()) return mu.profile()->effective_radius(1e-12) + r;
  const TailCertificate& c = mu.certificate();
  if (c.vanishes()) return c.radius + r;
  const double peak = c.log_bound(c.radius);
  double R = std::max(c.radius, 1.0);
  while (c.log_bound(R) > peak + std::log(1e-12) && R < 1e4) R *= 1.1;
  return R + r;
}

EquivalenceReport equivalence_report(const PlaneMeasure& mu, double q, double p, double r, const Lattice& lattice,
                                     double alpha, const MeasureOptions& opts) {
  EquivalenceReport rep;
  rep.q = q;
  rep.p = p;
  rep.r = r;
  rep.alpha = alpha;
  rep.nodes = lattice.points.size();
  rep.mu_tilde = mu_tilde_norm(mu, q, p, alpha, opts);
  rep.d_rq = D_rq_norm(mu, q, p, r, opts);
  rep.sequence = lattice_sequence_norm(mu, q, p, lattice, opts);
  auto ratio = [](const LpValue& a, const LpValue& b) {
    if (!a.finite || !b.finite) return std::numeric_limits<double>::quiet_NaN();
    if (a.value == 0.0 && b.value == 0.0) return 1.0;
    return a.value / b.value;
  };
  rep.ratio_mu_d = ratio(rep.mu_tilde, rep.d_rq);
  rep.ratio_mu_seq = ratio(rep.mu_tilde, rep.sequence);
  rep.ratio_d_seq = ratio(rep.d_rq, rep.sequence);
  rep.window = 1.0;
  for (double x : {rep.ratio_mu_d, rep.ratio_mu_seq, rep.ratio_d_seq}) {
    if (std::isnan(x)) {
      rep.window = std::numeric_limits<double>::quiet_NaN();
      break;
    }
    rep.window = std::max(rep.window, std::max(x, 1.0 / x));
  }
  return rep;
}

}  // namespace fockbench
