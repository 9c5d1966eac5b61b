#include "fockbench/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace fockbench {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::string complex_label(cplx w) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "k_w(%.6g%+.6gi)", w.real(), w.imag());
  return buf;
}

}  // namespace

void FockParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be a positive real");
  if (!(p > 0.0)) throw std::invalid_argument("p must lie in (0, inf]");
  if (!(q > 0.0)) throw std::invalid_argument("q must lie in (0, inf]");
}

const char* to_string(NormStatus s) {
  switch (s) {
    case NormStatus::Finite: return "finite";
    case NormStatus::LowerBound: return "lower-bound";
    case NormStatus::Diverges: return "diverges";
  }
  return "?";
}

QuadOptions NormOptions::quad() const {
  QuadOptions q;
  q.tol = tol;
  q.base_level = refine;
  return q;
}

SupOptions NormOptions::sup() const {
  SupOptions s;
  const double scale = std::ldexp(1.0, -refine);
  s.panel_width *= scale;
  s.arc_spacing *= scale;
  return s;
}

NormResult fock_norm_from_log(const std::function<double(cplx)>& log_abs, const GrowthBound& growth, double p,
                              double alpha, const NormOptions& opts) {
  NormResult out;
  if (growth.is_zero()) return out;
  if (std::isinf(p)) {
    TailCertificate cert;
    cert.log_scale = growth.log_scale;
    cert.power = growth.power;
    cert.lin = growth.lin;
    cert.gauss = 0.5 * alpha - growth.quad;
    if (!cert.valid()) {
      out.status = NormStatus::Diverges;
      out.value = kInfinity;
      return out;
    }
    auto field = [&](cplx z) { return std::exp(log_abs(z) - 0.5 * alpha * std::norm(z)); };
    const SupResult s = sup_field(field, cert, opts.sup());
    out.value = s.value;
    out.error = s.grid_spacing;
    out.attained_inside = s.attained_inside;
    out.status = s.attained_inside ? NormStatus::Finite : NormStatus::LowerBound;
    return out;
  }
  TailCertificate cert;
  const double prefactor = alpha * p / (2.0 * std::numbers::pi);
  cert.log_scale = p * growth.log_scale + std::log(prefactor);
  cert.power = p * growth.power;
  cert.lin = p * growth.lin;
  cert.gauss = p * (0.5 * alpha - growth.quad);
  if (!cert.valid()) {
    out.status = NormStatus::Diverges;
    out.value = kInfinity;
    return out;
  }
  auto field = [&](cplx z) { return prefactor * std::exp(p * (log_abs(z) - 0.5 * alpha * std::norm(z))); };
  const Integral I = plane_integrate(RealField(field), cert, opts.quad());
  out.value = std::pow(I.value, 1.0 / p);
  out.error = I.value > 0.0 ? out.value * I.error / (p * I.value) : 0.0;
  return out;
}

NormResult fock_norm(const EntireExpr& f, double p, double alpha, const NormOptions& opts) {
  const auto growth = f.growth();
  if (!growth) return {NormStatus::Diverges, kInfinity, 0.0, false};
  return fock_norm_from_log([&](cplx z) { return f.log_abs(z); }, *growth, p, alpha, opts);
}

EntireExpr kernel(cplx w, double alpha) {
  return exp(EntireExpr::constant(alpha * std::conj(w)) * EntireExpr::variable());
}

EntireExpr normalized_kernel(cplx w, double alpha) {
  return exp(EntireExpr::constant(alpha * std::conj(w)) * EntireExpr::variable() -
             EntireExpr::constant(0.5 * alpha * std::norm(w)));
}

NormResult littlewood_paley_rhs(const EntireExpr& f, double p, double alpha, const NormOptions& opts) {
  const double f0 = std::abs(f(0.0));
  const EntireExpr d = differentiate(f);
  const auto growth = d.growth();
  if (!growth) return {NormStatus::Diverges, kInfinity, 0.0, false};
  // |f'|/(1+|z|) as a log-modulus with the matching growth bound.
  GrowthBound g = *growth;
  g.power -= 1.0;
  auto log_abs = [&](cplx z) { return d.log_abs(z) - std::log1p(std::abs(z)); };

  NormResult out;
  if (std::isinf(p)) {
    if (g.is_zero()) return {NormStatus::Finite, f0, 0.0, true};
    out = fock_norm_from_log(log_abs, g, p, alpha, opts);
    if (out.finite()) out.value += f0;
    return out;
  }
  if (g.is_zero()) return {NormStatus::Finite, f0, 0.0, true};
  // fock_norm_from_log includes the factor alpha p / 2pi, which this form omits.
  out = fock_norm_from_log(log_abs, g, p, alpha, opts);
  if (!out.finite()) return out;
  const double prefactor = alpha * p / (2.0 * std::numbers::pi);
  const double integral = std::pow(out.value, p) / prefactor;
  const double rel = out.value > 0.0 ? p * out.error / out.value : 0.0;
  const double total = std::pow(f0, p) + integral;
  out.value = std::pow(total, 1.0 / p);
  out.error = total > 0.0 ? out.value * rel * integral / (p * total) : 0.0;
  return out;
}

double pointwise_derivative_bound_ratio(const EntireExpr& f, double p, double alpha,
                                        const std::vector<cplx>& samples, const NormOptions& opts) {
  const NormResult n = fock_norm(f, p, alpha, opts);
  if (!n.finite()) throw std::domain_error("pointwise_derivative_bound_ratio: norm diverges");
  const EntireExpr d = differentiate(f);
  if (n.value == 0.0) return 0.0;
  const double log_norm = std::log(n.value);
  double best = 0.0;
  for (cplx z : samples) {
    const double l = d.log_abs(z);
    if (l == kNegInf) continue;
    best = std::max(best, std::exp(l - std::log1p(std::abs(z)) - 0.5 * alpha * std::norm(z) - log_norm));
  }
  return best;
}

LpWindow littlewood_paley_window(double p, double alpha, const std::vector<cplx>& kernel_points,
                                 const NormOptions& opts) {
  std::vector<std::pair<std::string, EntireExpr>> family = {
      {"1", parse_symbol("1")},
      {"z", parse_symbol("z")},
      {"z^2", parse_symbol("z^2")},
      {"exp(0.2*z^2)", parse_symbol("exp(0.2*z^2)")},
  };
  for (cplx w : kernel_points) family.emplace_back(complex_label(w), normalized_kernel(w, alpha));

  LpWindow win;
  win.entries.resize(family.size());
  parallel_for(family.size(), [&](std::size_t i) {
    WindowEntry e;
    e.name = family[i].first;
    e.lhs = fock_norm(family[i].second, p, alpha, opts).value;
    e.rhs = littlewood_paley_rhs(family[i].second, p, alpha, opts).value;
    e.ratio = e.rhs / e.lhs;
    win.entries[i] = e;
  });
  win.lo = kInfinity;
  win.hi = 0.0;
  for (const auto& e : win.entries) {
    win.lo = std::min(win.lo, e.ratio);
    win.hi = std::max(win.hi, e.ratio);
  }
  return win;
}

}  // namespace fockbench
