#include "fockbench/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <thread>

namespace fockbench {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kMaxRadius = 1e5;

// Legendre P_n(x) and P_{n-1}(x).
void legendre(int n, double x, double& pn, double& pn1) {
  double p0 = 1.0, p1 = x;
  if (n == 0) {
    pn = 1.0;
    pn1 = 0.0;
    return;
  }
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  pn = p1;
  pn1 = p0;
}

// log erfc(x), upper bound for large x where erfc underflows.
double log_erfc(double x) {
  if (x < 25.0) return std::log(std::erfc(x));
  return -x * x - std::log(x * std::sqrt(std::numbers::pi));
}

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace

// -------------------------------------------------------- Gauss-Legendre

GaussLegendre::GaussLegendre(int order) {
  const int n = order;
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double pn, pn1;
      legendre(n, x, pn, pn1);
      const double dp = n * (x * pn - pn1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double pn, pn1;
    legendre(n, x, pn, pn1);
    const double dp = n * (x * pn - pn1) / (x * x - 1.0);
    nodes[n - 1 - i] = x;
    weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }

  // S_jk = w_k sum_m (2m+1)/2 P_m(x_k) int_{-1}^{x_j} P_m
  cumulative.assign(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<double> pk(n + 1), pj(n + 2);
  for (int j = 0; j < n; ++j) {
    const double xj = nodes[j];
    for (int m = 0; m <= n; ++m) {
      double a, b;
      legendre(m, xj, a, b);
      pj[m] = a;
    }
    std::vector<double> integ(n);
    integ[0] = xj + 1.0;
    for (int m = 1; m < n; ++m) integ[m] = (pj[m + 1] - pj[m - 1]) / (2.0 * m + 1.0);
    for (int k = 0; k < n; ++k) {
      double acc = 0.0;
      for (int m = 0; m < n; ++m) {
        double a, b;
        legendre(m, nodes[k], a, b);
        acc += (2.0 * m + 1.0) / 2.0 * a * integ[m];
      }
      cumulative[static_cast<std::size_t>(j) * n + k] = weights[k] * acc;
    }
  }
}

const GaussLegendre& GaussLegendre::get(int order) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussLegendre>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<GaussLegendre>(order);
  return *slot;
}

// ------------------------------------------------------ TailCertificate

TailCertificate TailCertificate::gaussian(double scale, double power, double gauss, double radius) {
  TailCertificate c;
  c.log_scale = scale > 0.0 ? std::log(scale) : kNegInf;
  c.power = power;
  c.gauss = gauss;
  c.radius = radius;
  return c;
}

TailCertificate TailCertificate::vanishing_beyond(double radius) {
  TailCertificate c;
  c.log_scale = kNegInf;
  c.gauss = 1.0;
  c.radius = radius;
  return c;
}

bool TailCertificate::vanishes() const { return log_scale == kNegInf; }

double TailCertificate::log_bound(double r) const {
  if (vanishes()) return kNegInf;
  return log_scale + power * std::log1p(r) - gauss * r * r + lin * r;
}

double TailCertificate::tail_integral(double R) const {
  if (vanishes()) return 0.0;
  R = std::max(R, radius);
  // (1+r)^k <= (1+R)^k exp(k (r-R)/(1+R)) for k >= 0 (concavity of log),
  // and <= (1+R)^k for k < 0.
  const double kp = std::max(power, 0.0);
  const double b = lin + kp / (1.0 + R);
  const double c = gauss;
  const double pre = log_scale + power * std::log1p(R) - kp * R / (1.0 + R);
  const double shift = std::sqrt(c) * (R - b / (2.0 * c));
  const double log_i0 = 0.5 * std::log(std::numbers::pi / (4.0 * c)) + b * b / (4.0 * c) + log_erfc(shift);
  double log_i1 = -c * R * R + b * R - std::log(2.0 * c);
  if (b > 0.0) log_i1 = log_add(log_i1, std::log(b / (2.0 * c)) + log_i0);
  return std::exp(std::log(kTwoPi) + pre + log_i1);
}

double TailCertificate::log_sup_beyond(double R) const {
  if (vanishes()) return kNegInf;
  R = std::max(R, radius);
  auto deriv = [&](double r) { return power / (1.0 + r) - 2.0 * gauss * r + lin; };
  const double r_end = (lin + std::max(power, 0.0)) / (2.0 * gauss) + 1.0;
  if (power >= 0.0) {
    // concave: single maximizer
    if (deriv(R) <= 0.0) return log_bound(R);
    double lo = R, hi = std::max(r_end, R + 1.0);
    while (deriv(hi) > 0.0) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (deriv(mid) > 0.0 ? lo : hi) = mid;
    }
    return log_bound(0.5 * (lo + hi));
  }
  double best = log_bound(R);
  const double step = std::min(0.05, 0.1 / std::sqrt(gauss));
  for (double r = R; r <= std::max(R, r_end); r += step) best = std::max(best, log_bound(r));
  return best + 1e-9;
}

std::optional<TailCertificate> certificate_from(const GrowthBound& g) {
  if (g.is_zero()) return TailCertificate::vanishing_beyond(0.0);
  if (!(g.quad < 0.0)) return std::nullopt;
  TailCertificate c;
  c.log_scale = g.log_scale;
  c.power = g.power;
  c.gauss = -g.quad;
  c.lin = g.lin;
  return c;
}

// ------------------------------------------------------------ PolarGrid

PolarGrid PolarGrid::make(double radius, const QuadOptions& opts, int radial_level, int angular_level) {
  PolarGrid grid;
  grid.order = opts.order;
  grid.radius = radius;
  const int rr = radial_level;
  const int ra = angular_level;

  std::vector<double> cuts{0.0};
  for (double b : opts.breakpoints)
    if (b > 0.0 && b < radius) cuts.push_back(b);
  cuts.push_back(radius);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s], b = cuts[s + 1];
    const long count = std::max(1L, static_cast<long>(std::ceil((b - a) / opts.panel_width - 1e-9))) << rr;
    for (long i = 0; i < count; ++i)
      grid.panels.push_back({a + (b - a) * i / count, a + (b - a) * (i + 1) / count});
  }

  if (opts.radial) {
    grid.angles = 1;
  } else {
    long n = std::max<long>(opts.min_angles, static_cast<long>(std::ceil(kTwoPi * radius / opts.arc_spacing)));
    n += n % 2;
    grid.angles = static_cast<int>(n << ra);
  }
  return grid;
}

double PolarGrid::angle(int k) const { return kTwoPi * k / angles; }

// ------------------------------------------------------------ parallel

unsigned worker_count() {
  if (const char* env = std::getenv("FOCKBENCH_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {
thread_local bool in_parallel_region = false;  // nested calls run serially
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), n));
  if (workers <= 1 || in_parallel_region) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      in_parallel_region = true;
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// ------------------------------------------------------ plane integrate

namespace {

double magnitude(double v) { return std::abs(v); }
double magnitude(cplx v) { return std::abs(v); }

template <class T>
struct Accumulator;
template <>
struct Accumulator<double> {
  CompensatedSum s;
  void add(double v) { s.add(v); }
  double value() const { return s.value(); }
};
template <>
struct Accumulator<cplx> {
  ComplexCompensatedSum s;
  void add(cplx v) { s.add(v); }
  cplx value() const { return s.value(); }
};

template <class T>
struct GridSum {
  T value{};
  double skipped = 0.0;  // bound on the mass of skipped panels
};

template <class T, class Field>
GridSum<T> integrate_grid(const Field& field, const PolarGrid& grid, const TailCertificate& cert,
                          double skip_threshold) {
  const auto& gl = GaussLegendre::get(grid.order);
  const std::size_t np = grid.panels.size();
  std::vector<T> partial(np, T{});
  std::vector<double> skipped(np, 0.0);
  std::vector<cplx> rot(grid.angles);
  for (int k = 0; k < grid.angles; ++k) rot[k] = std::polar(1.0, grid.angle(k));
  const double dtheta = kTwoPi / grid.angles;

  parallel_for(np, [&](std::size_t p) {
    const auto [lo, hi] = grid.panels[p];
    if (skip_threshold > 0.0 && lo >= cert.radius) {
      const double mass = std::exp(cert.log_sup_beyond(lo)) * std::numbers::pi * (hi * hi - lo * lo);
      if (mass <= skip_threshold) {
        skipped[p] = mass;
        return;
      }
    }
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    Accumulator<T> acc;
    for (int j = 0; j < grid.order; ++j) {
      const double r = mid + half * gl.nodes[j];
      Accumulator<T> ring;
      for (int k = 0; k < grid.angles; ++k) ring.add(field(r * rot[k]));
      acc.add(ring.value() * (half * gl.weights[j] * r * dtheta));
    }
    partial[p] = acc.value();
  });

  GridSum<T> out;
  Accumulator<T> total;
  for (std::size_t p = 0; p < np; ++p) {
    total.add(partial[p]);
    out.skipped += skipped[p];
  }
  out.value = total.value();
  return out;
}

template <class Field>
void check_certificate(const Field& field, const TailCertificate& cert) {
  const double base = std::max(cert.radius, 1.0);
  for (double scale : {1.0, 1.25, 1.5}) {
    const double rho = base * scale;
    const double bound = std::exp(cert.log_bound(rho));
    for (int k = 0; k < 64; ++k) {
      const cplx z = std::polar(rho, kTwoPi * k / 64.0);
      const double v = magnitude(field(z));
      if (!(v <= bound * (1.0 + 1e-9) + 1e-300))
        throw QuadratureError("tail certificate violated at |z| = " + std::to_string(rho));
    }
  }
}

double peak_radius(const TailCertificate& cert) {
  if (cert.vanishes()) return cert.radius;
  auto deriv = [&](double r) { return cert.power / (1.0 + r) - 2.0 * cert.gauss * r + cert.lin; };
  double lo = 0.0, hi = 1.0;
  if (deriv(0.0) <= 0.0) return 0.0;
  while (deriv(hi) > 0.0) hi *= 2.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (deriv(mid) > 0.0 ? lo : hi) = mid;
  }
  return lo;
}

double radius_for(const TailCertificate& cert, double target, double start) {
  if (cert.vanishes()) return cert.radius;
  double r = std::max(start, cert.radius);
  const double step = 0.25 / std::sqrt(cert.gauss);
  while (cert.tail_integral(r) > target) {
    r += step;
    if (r > kMaxRadius) throw QuadratureError("truncation radius exceeds limit");
  }
  return r;
}

void check_preconditions(const TailCertificate& cert, const QuadOptions& opts) {
  if (!(opts.tol > 1e-12 && opts.tol < 1e-2))
    throw std::invalid_argument("plane_integrate: tol must lie in (1e-12, 1e-2)");
  if (!cert.valid() && !cert.vanishes()) throw QuadratureError("no tail certificate (c <= 0)");
}

// sum(grid, skip_threshold) -> GridSum<T> evaluates one grid.
template <class T, class Summer>
std::tuple<T, double, double, int> plane_integrate_impl(const Summer& sum, const TailCertificate& cert,
                                                        const QuadOptions& opts) {
  if (cert.vanishes() && cert.radius == 0.0) return {T{}, 0.0, 0.0, 0};

  double R = cert.vanishes() ? cert.radius
                             : std::max(cert.radius, peak_radius(cert) + 3.0 / std::sqrt(cert.gauss));
  R = std::max(R, 1e-3);
  int lr = opts.base_level, la = opts.radial ? 0 : opts.base_level;
  auto agree = [&](const T& a, const T& b) {
    return magnitude(a - b) <= opts.tol * magnitude(a) + opts.abs_floor;
  };
  for (int restart = 0; restart < 64; ++restart) {
    GridSum<T> cur = sum(PolarGrid::make(R, opts, lr, la), 0.0);
    // Settle the truncation radius on the coarse grid before refining.
    for (int grow = 0; grow < 64 && !cert.vanishes(); ++grow) {
      const double target = 5e-3 * opts.tol * magnitude(cur.value) + opts.abs_floor;
      if (cert.tail_integral(R) <= 2.0 * target) break;
      R = std::max(radius_for(cert, target, R), R + 0.5);
      cur = sum(PolarGrid::make(R, opts, lr, la), 0.0);
    }
    GridSum<T> best;
    double diff = 0.0;
    bool converged = false;
    for (int k = 0; k < opts.max_refinements; ++k) {
      const double skip = 1e-3 * opts.tol * magnitude(cur.value);
      GridSum<T> rad = sum(PolarGrid::make(R, opts, lr + 1, la), skip);
      const bool ok_r = agree(rad.value, cur.value);
      bool ok_a = true;
      GridSum<T> ang = cur;
      if (!opts.radial) {
        ang = sum(PolarGrid::make(R, opts, lr, la + 1), skip);
        ok_a = agree(ang.value, cur.value);
      }
      if (ok_r && ok_a) {
        best = rad;
        diff = std::max(magnitude(rad.value - cur.value), magnitude(ang.value - cur.value));
        best.skipped = std::max(rad.skipped, ang.skipped);
        converged = true;
        break;
      }
      if (!ok_r && !ok_a) {
        ++lr;
        ++la;
        cur = sum(PolarGrid::make(R, opts, lr, la), skip);
      } else if (!ok_r) {
        ++lr;
        cur = rad;
      } else {
        ++la;
        cur = ang;
      }
    }
    if (!converged) throw QuadratureError("plane_integrate: no convergence after maximal refinement");
    const double tail = cert.tail_integral(R);
    if (tail <= 1e-2 * opts.tol * magnitude(best.value) + opts.abs_floor) {
      return {best.value, diff + tail + best.skipped, R, lr + la};
    }
    const double next = radius_for(cert, 5e-3 * opts.tol * magnitude(best.value) + opts.abs_floor, R);
    R = std::max(next, R + 0.5);
  }
  throw QuadratureError("plane_integrate: truncation radius did not settle");
}

}  // namespace

Integral plane_integrate(const RealField& field, const TailCertificate& cert, const QuadOptions& opts) {
  check_preconditions(cert, opts);
  if (opts.check_certificate && !cert.vanishes()) check_certificate(field, cert);
  auto sum = [&](const PolarGrid& grid, double skip) { return integrate_grid<double>(field, grid, cert, skip); };
  auto [v, err, R, level] = plane_integrate_impl<double>(sum, cert, opts);
  return {v, err, R, level};
}

ComplexIntegral plane_integrate(const ComplexField& field, const TailCertificate& cert, const QuadOptions& opts) {
  check_preconditions(cert, opts);
  if (opts.check_certificate && !cert.vanishes()) check_certificate(field, cert);
  auto sum = [&](const PolarGrid& grid, double skip) { return integrate_grid<cplx>(field, grid, cert, skip); };
  auto [v, err, R, level] = plane_integrate_impl<cplx>(sum, cert, opts);
  return {v, err, R, level};
}

Integral plane_integrate_grid(const GridField& field, const TailCertificate& cert, const QuadOptions& opts) {
  check_preconditions(cert, opts);
  auto sum = [&](const PolarGrid& grid, double) {
    const std::vector<double> values = field(grid);
    if (values.size() != grid.size()) throw std::logic_error("plane_integrate_grid: node count mismatch");
    return GridSum<double>{integrate_nodal(grid, values), 0.0};
  };
  auto [v, err, R, level] = plane_integrate_impl<double>(sum, cert, opts);
  return {v, err, R, level};
}

double integrate_nodal(const PolarGrid& grid, const std::vector<double>& values) {
  const auto& gl = GaussLegendre::get(grid.order);
  const double dtheta = kTwoPi / grid.angles;
  CompensatedSum total;
  std::size_t idx = 0;
  for (const auto& [lo, hi] : grid.panels) {
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    CompensatedSum panel;
    for (int j = 0; j < grid.order; ++j) {
      const double r = mid + half * gl.nodes[j];
      CompensatedSum ring;
      for (int k = 0; k < grid.angles; ++k) ring.add(values[idx++]);
      panel.add(ring.value() * half * gl.weights[j] * r * dtheta);
    }
    total.add(panel.value());
  }
  return total.value();
}

// -------------------------------------------------------- path integrate

cplx path_integrate(const ComplexField& h, cplx from, cplx to, double tol) {
  const cplx span = to - from;
  const double len = std::abs(span);
  if (len == 0.0) return 0.0;
  const auto& gl = GaussLegendre::get(16);
  auto composite = [&](long panels, double& mass) {
    ComplexCompensatedSum acc;
    CompensatedSum m;
    for (long p = 0; p < panels; ++p) {
      const double a = static_cast<double>(p) / panels, b = static_cast<double>(p + 1) / panels;
      const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
      for (int j = 0; j < gl.order(); ++j) {
        const cplx v = h(from + span * (mid + half * gl.nodes[j])) * (half * gl.weights[j]);
        acc.add(v);
        m.add(std::abs(v));
      }
    }
    mass = m.value() * len;
    return acc.value() * span;
  };
  long panels = std::max(1L, static_cast<long>(std::ceil(len)));
  double mass = 0.0;
  cplx prev = composite(panels, mass);
  for (int k = 0; k < 12; ++k) {
    panels *= 2;
    const cplx cur = composite(panels, mass);
    if (std::abs(cur - prev) <= tol * std::max(std::abs(cur), 1e-6 * mass) || mass == 0.0) return cur;
    prev = cur;
  }
  throw QuadratureError("path_integrate: no convergence");
}

// ------------------------------------------------------------ suprema

cplx polish_maximum(const RealField& field, cplx start, double step, double* value) {
  cplx best = start;
  double fbest = field(best);
  static const cplx dirs[8] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1},
                               {0.7071067811865476, 0.7071067811865476},
                               {-0.7071067811865476, 0.7071067811865476},
                               {0.7071067811865476, -0.7071067811865476},
                               {-0.7071067811865476, -0.7071067811865476}};
  while (step > 1e-10 * std::max(1.0, std::abs(best))) {
    bool moved = false;
    for (const auto& d : dirs) {
      const cplx cand = best + step * d;
      const double fc = field(cand);
      if (fc > fbest) {
        fbest = fc;
        best = cand;
        moved = true;
      }
    }
    if (!moved) step *= 0.5;
  }
  if (value) *value = fbest;
  return best;
}

SupResult sup_field(const RealField& field, const TailCertificate& cert, const SupOptions& opts) {
  SupResult res;
  if (!cert.valid() && !cert.vanishes()) {
    res.refused = true;
    return res;
  }
  double R = std::max({1.0, cert.radius, cert.vanishes() ? 0.0 : peak_radius(cert) + 2.0 / std::sqrt(cert.gauss)});

  struct Candidate {
    double value;
    cplx z;
  };
  std::vector<Candidate> top;
  for (;;) {
    const long nr = static_cast<long>(std::ceil(R / opts.panel_width));
    long na = std::max<long>(opts.min_angles, static_cast<long>(std::ceil(kTwoPi * R / opts.arc_spacing)));
    na += na % 2;
    res.grid_spacing = std::max(R / nr, kTwoPi * R / na);
    std::vector<Candidate> ring_best(nr + 1, {-1.0, {}});
    parallel_for(static_cast<std::size_t>(nr + 1), [&](std::size_t i) {
      const double r = R * static_cast<double>(i) / nr;
      Candidate best{-1.0, {}};
      const long count = i == 0 ? 1 : na;
      for (long k = 0; k < count; ++k) {
        const cplx z = std::polar(r, kTwoPi * k / na);
        const double v = field(z);
        if (v > best.value) best = {v, z};
      }
      ring_best[i] = best;
    });
    for (const auto& c : ring_best) top.push_back(c);
    std::sort(top.begin(), top.end(), [](const Candidate& a, const Candidate& b) {
      if (a.value != b.value) return a.value > b.value;
      if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
      return a.z.imag() < b.z.imag();
    });
    if (top.size() > 8) top.resize(8);
    const double lbest = top.front().value > 0.0 ? std::log(top.front().value) : std::log(1e-300);
    if (cert.log_sup_beyond(R) < lbest) break;
    if (R > 1e4) break;
    R *= 1.5;
  }
  res.radius = R;
  res.value = top.front().value;
  res.argmax = top.front().z;
  if (opts.polish && res.value > 0.0) {
    for (const auto& c : top) {
      if (c.value <= 0.0) continue;
      double v = 0.0;
      const cplx z = polish_maximum(field, c.z, res.grid_spacing, &v);
      if (v > res.value) {
        res.value = v;
        res.argmax = z;
      }
    }
  }
  res.attained_inside = res.value > 0.0 && std::log(res.value) > cert.log_sup_beyond(R);
  return res;
}

}  // namespace fockbench
