#include "fockbench/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace fockbench {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct TagEntry {
  OperatorKind kind;
  const char* tag;
};

constexpr TagEntry kTags[] = {
    {OperatorKind::Vg, "Vg"},         {OperatorKind::Jg, "Jg"},           {OperatorKind::Mg, "Mg"},
    {OperatorKind::Vg_psi, "Vg_psi"}, {OperatorKind::Cg_psi, "Cg_psi"},   {OperatorKind::J_g_psi, "J_g_psi"},
    {OperatorKind::C_g_psi, "C_g_psi"},
};

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

ComplexField as_field(const EntireExpr& e) {
  return [e](cplx z) { return e(z); };
}

// log ||z^n||_p, closed form.
double log_monomial_norm(int n, double p, double alpha) {
  if (n == 0) return 0.0;
  if (std::isinf(p)) return 0.5 * n * (std::log(n / alpha) - 1.0);
  const double a = 0.5 * n * p;
  return (a * std::log(2.0 / (alpha * p)) + std::lgamma(a + 1.0)) / p;
}

std::string kernel_id(cplx w) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "k_w(%.17g,%.17g)", w.real(), w.imag());
  return buf;
}

}  // namespace

const char* to_string(OperatorKind op) {
  for (const auto& e : kTags)
    if (e.kind == op) return e.tag;
  return "?";
}

OperatorKind parse_operator_kind(std::string_view tag) {
  for (const auto& e : kTags)
    if (tag == e.tag) return e.kind;
  throw std::invalid_argument("unknown operator tag '" + std::string(tag) + "'");
}

bool uses_psi(OperatorKind op) {
  return op == OperatorKind::Vg_psi || op == OperatorKind::Cg_psi || op == OperatorKind::J_g_psi ||
         op == OperatorKind::C_g_psi;
}

cplx apply(OperatorKind op, const SymbolPair& pair, const EntireExpr& f, cplx z, double tol) {
  const EntireExpr& g = pair.g;
  const EntireExpr& psi = pair.psi;
  switch (op) {
    case OperatorKind::Vg: return path_integrate(as_field(f * differentiate(g)), z, tol);
    case OperatorKind::Jg: return path_integrate(as_field(differentiate(f) * g), z, tol);
    case OperatorKind::Mg: return g(z) * f(z);
    case OperatorKind::Vg_psi: return path_integrate(as_field(compose(f, psi) * differentiate(g)), z, tol);
    case OperatorKind::Cg_psi: return path_integrate(as_field(f * differentiate(g)), psi(z), tol);
    case OperatorKind::J_g_psi: return path_integrate(as_field(compose(differentiate(f), psi) * g), z, tol);
    case OperatorKind::C_g_psi: return path_integrate(as_field(differentiate(f) * g), psi(z), tol);
  }
  throw std::logic_error("apply: bad operator");
}

OperatorImage image(OperatorKind op, const SymbolPair& pair, const EntireExpr& f) {
  const EntireExpr& g = pair.g;
  const EntireExpr& psi = pair.psi;
  OperatorImage img;
  switch (op) {
    case OperatorKind::Mg:
      img.is_explicit = true;
      img.value = g * f;
      break;
    case OperatorKind::Vg: img.derivative = f * differentiate(g); break;
    case OperatorKind::Jg: img.derivative = differentiate(f) * g; break;
    case OperatorKind::Vg_psi: img.derivative = compose(f, psi) * differentiate(g); break;
    case OperatorKind::J_g_psi: img.derivative = compose(differentiate(f), psi) * g; break;
    case OperatorKind::Cg_psi:
    case OperatorKind::C_g_psi: {
      const EntireExpr inner = op == OperatorKind::Cg_psi ? f * differentiate(g) : differentiate(f) * g;
      img.derivative = compose(inner, psi) * differentiate(psi);
      img.at_zero = path_integrate(as_field(inner), psi(0.0));
      break;
    }
  }
  return img;
}

std::optional<GrowthBound> OperatorImage::growth() const {
  if (is_explicit) return value.growth();
  const auto d = derivative.growth();
  if (!d) return std::nullopt;
  const double lc = at_zero == 0.0 ? kNegInf : std::log(std::abs(at_zero));
  GrowthBound b;
  if (d->is_zero()) {
    b.log_scale = lc;
    return b;
  }
  // |T f(z)| <= |c| + |z| max_{t <= |z|} B(t); B made monotone by clamping exponents at 0.
  b.log_scale = log_add(lc, d->log_scale);
  b.power = std::max(d->power, 0.0) + 1.0;
  b.quad = std::max(d->quad, 0.0);
  b.lin = std::max(d->lin, 0.0);
  return b;
}

cplx OperatorImage::operator()(cplx z, double tol) const {
  if (is_explicit) return value(z);
  return at_zero + path_integrate(as_field(derivative), z, tol);
}

std::vector<ScaledValue> sweep_image(const OperatorImage& img, const PolarGrid& grid) {
  const auto& gl = GaussLegendre::get(grid.order);
  const int n = grid.order;
  std::vector<ScaledValue> out(grid.size());
  auto index = [&](std::size_t panel, int j, int k) {
    return (panel * n + j) * static_cast<std::size_t>(grid.angles) + k;
  };
  parallel_for(static_cast<std::size_t>(grid.angles), [&](std::size_t ks) {
    const int k = static_cast<int>(ks);
    const cplx dir = std::polar(1.0, grid.angle(k));
    if (img.is_explicit) {
      for (std::size_t p = 0; p < grid.panels.size(); ++p) {
        const auto [lo, hi] = grid.panels[p];
        for (int j = 0; j < n; ++j) {
          const double r = 0.5 * (hi + lo) + 0.5 * (hi - lo) * gl.nodes[j];
          out[index(p, j, k)] = img.value.eval_scaled(r * dir);
        }
      }
      return;
    }
    ScaledValue running = normalize({img.at_zero, 0.0});
    std::vector<ScaledValue> h(n);
    std::vector<cplx> m(n);
    for (std::size_t p = 0; p < grid.panels.size(); ++p) {
      const auto [lo, hi] = grid.panels[p];
      const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
      double smax = kNegInf;
      for (int j = 0; j < n; ++j) {
        h[j] = img.derivative.eval_scaled((mid + half * gl.nodes[j]) * dir);
        if (h[j].m != 0.0) smax = std::max(smax, h[j].s);
      }
      if (smax == kNegInf) {
        for (int j = 0; j < n; ++j) out[index(p, j, k)] = running;
        continue;
      }
      for (int j = 0; j < n; ++j) m[j] = h[j].m * std::exp(h[j].s - smax) * dir * half;
      for (int j = 0; j < n; ++j) {
        cplx local = 0.0;
        for (int i = 0; i < n; ++i) local += gl.cumulative_at(j, i) * m[i];
        out[index(p, j, k)] = scaled_add(running, normalize({local, smax}));
      }
      cplx whole = 0.0;
      for (int i = 0; i < n; ++i) whole += gl.weights[i] * m[i];
      running = scaled_add(running, normalize({whole, smax}));
    }
  });
  return out;
}

NormResult image_norm(const OperatorImage& img, double q, double alpha, const NormOptions& opts) {
  if (img.is_explicit) return fock_norm(img.value, q, alpha, opts);
  const auto growth = img.growth();
  if (!growth) return {NormStatus::Diverges, kInfinity, 0.0, false};
  if (growth->is_zero()) return {};

  const auto& gl = GaussLegendre::get(16);
  auto node_radius = [&](const PolarGrid& grid, std::size_t idx) {
    const std::size_t row = idx / grid.angles;
    const auto& panel = grid.panels[row / grid.order];
    return 0.5 * (panel.hi + panel.lo) + 0.5 * (panel.hi - panel.lo) * gl.nodes[row % grid.order];
  };

  NormResult out;
  if (std::isinf(q)) {
    TailCertificate cert;
    cert.log_scale = growth->log_scale;
    cert.power = growth->power;
    cert.lin = growth->lin;
    cert.gauss = 0.5 * alpha - growth->quad;
    if (!cert.valid()) return {NormStatus::Diverges, kInfinity, 0.0, false};

    const SupOptions sopt = opts.sup();
    QuadOptions gopt;
    gopt.panel_width = sopt.panel_width * 4.0;  // 16 nodes per panel
    gopt.arc_spacing = sopt.arc_spacing;
    gopt.min_angles = sopt.min_angles;
    const double peak = (cert.lin + cert.power) / (2.0 * cert.gauss);
    double R = std::max(1.0, peak + 2.0 / std::sqrt(cert.gauss));
    double best_log = kNegInf;
    cplx best_z = 0.0;
    for (;;) {
      const PolarGrid grid = PolarGrid::make(R, gopt, 0, 0);
      const auto vals = sweep_image(img, grid);
      for (std::size_t i = 0; i < vals.size(); ++i) {
        const double r = node_radius(grid, i);
        const double l = vals[i].log_abs() - 0.5 * alpha * r * r;
        if (l > best_log) {
          best_log = l;
          const int k = static_cast<int>(i % grid.angles);
          best_z = std::polar(r, grid.angle(k));
        }
      }
      if (cert.log_sup_beyond(R) < best_log || R > 1e4) break;
      R *= 1.5;
    }
    if (best_log == kNegInf) return {};
    auto field = [&](cplx z) {
      const cplx v = img(z);
      return std::exp(std::log(std::abs(v)) - 0.5 * alpha * std::norm(z));
    };
    double polished = 0.0;
    const double step = std::max(gopt.panel_width / 16.0, sopt.arc_spacing);
    polish_maximum(field, best_z, step, &polished);
    out.value = std::max(std::exp(best_log), polished);
    out.error = step;
    out.attained_inside = std::log(out.value) > cert.log_sup_beyond(R);
    out.status = out.attained_inside ? NormStatus::Finite : NormStatus::LowerBound;
    return out;
  }

  TailCertificate cert;
  const double prefactor = alpha * q / (2.0 * std::numbers::pi);
  cert.log_scale = q * growth->log_scale + std::log(prefactor);
  cert.power = q * growth->power;
  cert.lin = q * growth->lin;
  cert.gauss = q * (0.5 * alpha - growth->quad);
  if (!cert.valid()) return {NormStatus::Diverges, kInfinity, 0.0, false};

  auto field = [&](const PolarGrid& grid) {
    const auto vals = sweep_image(img, grid);
    std::vector<double> w(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const double r = node_radius(grid, i);
      w[i] = prefactor * std::exp(q * (vals[i].log_abs() - 0.5 * alpha * r * r));
    }
    return w;
  };
  QuadOptions qopt = opts.quad();
  qopt.panel_width = 1.0;
  const Integral I = plane_integrate_grid(field, cert, qopt);
  out.value = std::pow(I.value, 1.0 / q);
  out.error = I.value > 0.0 ? out.value * I.error / (q * I.value) : 0.0;
  return out;
}

std::vector<FamilyMember> test_family(const TestFamilySpec& spec, double p, double alpha) {
  std::vector<FamilyMember> family;
  for (int i = 1; i <= spec.radii; ++i) {
    const double r = spec.W * i / spec.radii;
    for (int k = 0; k < spec.angles; ++k) {
      const cplx w = std::polar(r, 2.0 * std::numbers::pi * k / spec.angles);
      family.push_back({kernel_id(w), normalized_kernel(w, alpha), 1.0});
    }
  }
  for (int n = 0; n <= spec.monomials; ++n) {
    const EntireExpr f = n == 0 ? EntireExpr::constant(1.0) : pow(EntireExpr::variable(), static_cast<unsigned>(n));
    family.push_back({"z^" + std::to_string(n), f, std::exp(log_monomial_norm(n, p, alpha))});
  }
  return family;
}

EmpiricalNorm empirical_norm(OperatorKind op, const SymbolPair& pair, const FockParams& params,
                             const TestFamilySpec& spec, const NormOptions& opts) {
  const auto family = test_family(spec, params.p, params.alpha);
  std::vector<NormResult> norms(family.size());
  parallel_for(family.size(), [&](std::size_t i) {
    norms[i] = image_norm(image(op, pair, family[i].f), params.q, params.alpha, opts);
  });
  EmpiricalNorm out;
  out.ratios.resize(family.size());
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (!norms[i].finite()) {
      if (out.status != NormStatus::Diverges) {
        out.status = NormStatus::Diverges;
        out.value = kInfinity;
        out.witness = family[i].id;
      }
      out.ratios[i] = kInfinity;
      continue;
    }
    out.ratios[i] = norms[i].value / family[i].norm;
    if (out.status != NormStatus::Diverges && out.ratios[i] > out.value) {
      out.value = out.ratios[i];
      out.witness = family[i].id;
    }
  }
  return out;
}

ProbeResult compactness_probe(OperatorKind op, const SymbolPair& pair, const FockParams& params, double r0,
                              int count, const NormOptions& opts) {
  ProbeResult out;
  out.radii.resize(count);
  out.norms.resize(count);
  std::vector<NormResult> norms(count);
  for (int n = 0; n < count; ++n) out.radii[n] = std::ldexp(r0, n);
  parallel_for(static_cast<std::size_t>(count), [&](std::size_t n) {
    const EntireExpr k = normalized_kernel(out.radii[n], params.alpha);
    norms[n] = image_norm(image(op, pair, k), params.q, params.alpha, opts);
  });
  for (int n = 0; n < count; ++n) {
    out.norms[n] = norms[n].value;
    if (!norms[n].finite()) out.diverges = true;
  }
  out.decaying = !out.diverges && count > 0 && out.norms.back() <= out.norms.front() / 10.0;
  return out;
}

}  // namespace fockbench
