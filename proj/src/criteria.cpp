#include "fockbench/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace fockbench {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_zero_symbol(const EntireExpr& e) { return e.symbol_class().kind == SymbolKind::Zero; }

bool is_constant_symbol(const EntireExpr& e) {
  const auto k = e.symbol_class().kind;
  return k == SymbolKind::Zero || k == SymbolKind::Constant;
}

// psi = a z + b, when psi is affine.
std::optional<std::pair<cplx, cplx>> affine_coeffs(const EntireExpr& psi) {
  const SymbolClass& c = psi.symbol_class();
  if (!c.is_linear()) return std::nullopt;
  const auto& k = c.poly.coeffs;
  const cplx b = k.size() > 0 ? k[0] : cplx{};
  const cplx a = k.size() > 1 ? k[1] : cplx{};
  return std::make_pair(a, b);
}

bool is_identity(const EntireExpr& psi) {
  const auto ab = affine_coeffs(psi);
  return ab && ab->first == cplx{1.0, 0.0} && ab->second == cplx{0.0, 0.0};
}

Verdict make_verdict(Question q, Route r, Outcome o, bool holds, std::string note = {}) {
  Verdict v;
  v.question = q;
  v.route = r;
  v.outcome = o;
  v.holds = holds;
  v.note = std::move(note);
  return v;
}

Assessment both(Route r, Outcome o, bool bounded, bool compact, const std::string& note = {}) {
  return {make_verdict(Question::Bounded, r, o, bounded, note), make_verdict(Question::Compact, r, o, compact, note)};
}

void set_evidence(Verdict& v, bool holds) {
  v.outcome = holds ? Outcome::PositiveEvidence : Outcome::NegativeEvidence;
  v.holds = holds;
}

double safe_exp(double l) { return l == kNegInf ? 0.0 : std::exp(l); }

// Max over `angles` equally spaced points of exp(logf) on |z| = r.
template <class LogF>
double ring_max(const LogF& logf, double r, int angles) {
  double best = kNegInf;
  for (int k = 0; k < angles; ++k) best = std::max(best, logf(std::polar(r, kTwoPi * k / angles)));
  return safe_exp(best);
}

struct Trend {
  bool decaying = false;  // first / last >= factor
  bool growing = false;   // nondecreasing and last / first >= factor
};

Trend trend(const std::vector<double>& v, double factor) {
  Trend t;
  if (v.empty()) return t;
  const double first = v.front(), last = v.back();
  t.decaying = last * factor <= first && first > 0.0;
  bool monotone = true;
  for (std::size_t i = 1; i < v.size(); ++i) monotone = monotone && v[i] >= v[i - 1];
  t.growing = monotone && last >= factor * first && last > 0.0;
  return t;
}

std::vector<double> decay_radii(const CriteriaOptions& opts) {
  std::vector<double> r(opts.decay_steps);
  for (int n = 0; n < opts.decay_steps; ++n) r[n] = std::ldexp(opts.decay_r0, n);
  return r;
}

}  // namespace

// -------------------------------------------------------------- transforms

double log_P_psi(const SymbolPair& pair, double alpha, cplx z) {
  const double lp = pair.psi.log_abs(z);
  const double psi2 = lp == kNegInf ? 0.0 : std::exp(2.0 * lp);
  return 0.5 * alpha * (psi2 - std::norm(z)) - std::log1p(std::abs(z));
}

double log_Q_g(const SymbolPair& pair, double alpha, cplx z) {
  return pair.g.log_abs(z) - 0.5 * alpha * std::norm(z) - std::log1p(std::abs(z));
}

double eval_P_psi(const SymbolPair& pair, double alpha, cplx z) { return safe_exp(log_P_psi(pair, alpha, z)); }
double eval_Q_g(const SymbolPair& pair, double alpha, cplx z) { return safe_exp(log_Q_g(pair, alpha, z)); }

double log_M(const SymbolPair& pair, double alpha, cplx z, MVariant variant) {
  const double lg = variant == MVariant::G ? pair.g.log_abs(z) : pair.g.log_abs(pair.psi(z));
  if (lg == kNegInf) return kNegInf;
  const double lp = pair.psi.log_abs(z);
  const double abs_psi = lp == kNegInf ? 0.0 : std::exp(lp);
  return lg + std::log1p(abs_psi) + log_P_psi(pair, alpha, z);
}

double eval_M(const SymbolPair& pair, double alpha, cplx z, MVariant variant) {
  return safe_exp(log_M(pair, alpha, z, variant));
}

namespace {

struct AffineFactor {
  AffineData data;
  EntireExpr factor;
};

std::optional<AffineFactor> affine_factor(const SymbolPair& pair, const EntireExpr& factor) {
  const auto ab = affine_coeffs(pair.psi);
  if (!ab) return std::nullopt;
  const auto growth = factor.growth();
  if (!growth) return std::nullopt;
  AffineFactor out;
  out.data.a = ab->first;
  out.data.b = ab->second;
  out.data.g = *growth;
  out.data.zero = is_zero_symbol(factor);
  out.factor = factor;
  return out;
}

std::optional<AffineFactor> affine_factor(const SymbolPair& pair, BVariant variant) {
  if (variant == BVariant::G) return affine_factor(pair, pair.g);
  return affine_factor(pair, compose(pair.g, pair.psi) * differentiate(pair.psi));
}

std::optional<AffineFactor> affine_factor(const SymbolPair& pair, MVariant variant) {
  if (variant == MVariant::G) return affine_factor(pair, pair.g);
  return affine_factor(pair, compose(pair.g, pair.psi));
}

// |integrand of B| <= cert(|z - conj(a) w|); see berezin_B.
TailCertificate b_certificate(const AffineData& d, double q, double alpha, cplx w) {
  const GrowthBound& G = d.g;
  const double aw = std::abs(w);
  const double z0 = std::abs(d.a) * aw;
  const double k1 = std::max(G.power - 1.0, 0.0);
  const double cw = 0.5 * alpha * (std::norm(d.a) - 1.0) * aw * aw + alpha * std::real(d.b * std::conj(w)) +
                    std::log1p(aw);
  TailCertificate c;
  c.log_scale = q * (cw + G.log_scale + k1 * std::log1p(z0) + G.quad * z0 * z0 + G.lin * z0);
  c.power = q * k1;
  c.lin = q * (2.0 * G.quad * z0 + G.lin);
  c.gauss = q * (0.5 * alpha - G.quad);
  return c;
}

// Certificate in w for B(w)^s, from the closed-form Gaussian bound on B.
std::optional<TailCertificate> b_power_certificate(const AffineData& d, double q, double alpha, double s) {
  const GrowthBound& G = d.g;
  const double A = std::abs(d.a), bb = std::abs(d.b);
  const double k1 = std::max(G.power - 1.0, 0.0);
  const double kp = q * k1;
  const double c = q * (0.5 * alpha - G.quad);
  if (!(c > 0.0)) return std::nullopt;
  const double l1 = 2.0 * q * G.quad * A, l0 = q * G.lin;
  const double k2 = q * (0.5 * alpha * (A * A - 1.0) + G.quad * A * A) + l1 * l1 / (4.0 * c);
  const double kl = q * (alpha * bb + G.lin * A) + 2.0 * l1 * (l0 + kp + 1.0) / (4.0 * c);
  const double k0 = q * G.log_scale + kp * std::log(std::max(1.0, A)) +
                    std::log(kTwoPi * std::sqrt(std::numbers::pi / c)) +
                    (l0 + kp + 1.0) * (l0 + kp + 1.0) / (4.0 * c);
  if (!(k2 < 0.0)) return std::nullopt;
  TailCertificate t;
  t.log_scale = s * k0;
  t.power = s * (q + kp);
  t.gauss = -s * k2;
  t.lin = s * kl;
  return t;
}

// log of the M bound: log M(z) <= cert(|z|).
TailCertificate m_certificate(const AffineData& d, double alpha) {
  const GrowthBound& G = d.g;
  const double A = std::abs(d.a), bb = std::abs(d.b);
  TailCertificate c;
  c.log_scale = G.log_scale + std::log(A + bb + 1.0) + 0.5 * alpha * bb * bb;
  c.power = G.power;
  c.gauss = -(G.quad + 0.5 * alpha * (A * A - 1.0));
  c.lin = G.lin + alpha * A * bb;
  return c;
}

}  // namespace

std::optional<AffineData> affine_data(const SymbolPair& pair, MVariant variant) {
  auto f = affine_factor(pair, variant);
  if (!f) return std::nullopt;
  return f->data;
}

std::optional<AffineData> affine_data(const SymbolPair& pair, BVariant variant) {
  auto f = affine_factor(pair, variant);
  if (!f) return std::nullopt;
  return f->data;
}

BerezinValue berezin_B(const SymbolPair& pair, const FockParams& params, cplx w, BVariant variant, double tol) {
  if (std::isinf(params.q)) throw std::invalid_argument("berezin_B: q must be finite");
  const auto af = affine_factor(pair, variant);
  BerezinValue out;
  if (!af) return out;
  if (af->data.zero) {
    out.certified = true;
    return out;
  }
  const double q = params.q, alpha = params.alpha;
  const TailCertificate cert = b_certificate(af->data, q, alpha, w);
  if (!cert.valid()) return out;

  // The integrand peaks near z0 = conj(a) w; integrate in u = z - z0.
  const cplx z0 = std::conj(af->data.a) * w;
  const double log_w = std::log1p(std::abs(w)) - 0.5 * alpha * std::norm(w);
  const EntireExpr& factor = af->factor;
  auto field = [&](cplx u) {
    const cplx z = z0 + u;
    const double lf = factor.log_abs(z);
    if (lf == kNegInf) return 0.0;
    const double lk = alpha * std::real(pair.psi(z) * std::conj(w)) + log_w;
    return std::exp(q * (lk + lf - 0.5 * alpha * std::norm(z) - std::log1p(std::abs(z))));
  };
  QuadOptions qo;
  qo.tol = tol;
  qo.panel_width = 1.0;
  const Integral I = plane_integrate(RealField(field), cert, qo);
  out.certified = true;
  out.value = I.value;
  out.error = I.error;
  return out;
}

// --------------------------------------------------------------- verdicts

const char* to_string(Question q) { return q == Question::Bounded ? "bounded" : "compact"; }

const char* to_string(Route r) {
  switch (r) {
    case Route::Theorem1: return "theorem1";
    case Route::Theorem2: return "theorem2";
    case Route::Corollary1: return "corollary1";
    case Route::Corollary2: return "corollary2";
    case Route::VgDegreeRule: return "vg-degree-rule";
    case Route::PsiInadmissible: return "psi-inadmissible";
  }
  return "?";
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::PositiveEvidence: return "positive-evidence";
    case Outcome::NegativeEvidence: return "negative-evidence";
    case Outcome::Exact: return "exact";
    case Outcome::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::string Verdict::label() const {
  if (outcome == Outcome::Exact) return holds ? "exact-positive" : "exact-negative";
  return to_string(outcome);
}

std::optional<Assessment> classify_special(OperatorKind op, const SymbolPair& pair, const FockParams& params) {
  const bool p_le_q = params.p <= params.q;
  const Route theorem = p_le_q ? Route::Theorem1 : Route::Theorem2;

  const bool vg_like = op == OperatorKind::Vg || ((op == OperatorKind::Vg_psi || op == OperatorKind::Cg_psi) &&
                                                  is_identity(pair.psi));
  if (vg_like) {
    const SymbolClass& c = pair.g.symbol_class();
    if (c.kind == SymbolKind::General)
      return both(Route::VgDegreeRule, Outcome::Inconclusive, false, false, "symbol not classified");
    const auto deg = c.degree();
    if (!deg) return both(Route::VgDegreeRule, Outcome::Exact, false, false, "symbol is not a polynomial");
    Assessment a = p_le_q ? both(Route::VgDegreeRule, Outcome::Exact, *deg <= 2, *deg <= 1)
                          : both(Route::VgDegreeRule, Outcome::Exact, *deg <= 1, *deg <= 1);
    a.bounded.numbers["degree"] = *deg;
    a.compact.numbers["degree"] = *deg;
    return a;
  }

  const bool jg_like = op == OperatorKind::Jg || op == OperatorKind::Mg ||
                       ((op == OperatorKind::J_g_psi || op == OperatorKind::C_g_psi) && is_identity(pair.psi));
  if (jg_like) {
    if (is_zero_symbol(pair.g)) return both(Route::Corollary1, Outcome::Exact, true, true, "g = 0");
    if (p_le_q && is_constant_symbol(pair.g))
      return both(Route::Corollary1, Outcome::Exact, true, false, "g constant, nonzero");
    return std::nullopt;
  }

  if (is_zero_symbol(pair.g)) {
    const Route r = (op == OperatorKind::Vg_psi || op == OperatorKind::Cg_psi) ? Route::Corollary2 : theorem;
    return both(r, Outcome::Exact, true, true, "g = 0: zero operator");
  }

  if (op == OperatorKind::J_g_psi && std::isinf(params.q) && !is_zero_symbol(pair.psi)) {
    const auto ab = affine_coeffs(pair.psi);
    bool admissible = false;
    if (ab) {
      const double A = std::abs(ab->first);
      const bool unit = std::abs(A - 1.0) <= 1e-12;
      admissible = (A < 1.0 || unit) && (!unit || ab->second == cplx{});
    }
    if (!admissible)
      return both(Route::PsiInadmissible, Outcome::Exact, false, false, "psi is not a z + b with |a| <= 1 (b = 0 if |a| = 1)");
  }
  return std::nullopt;
}

namespace {

// q = inf: suprema and decay of M.
Assessment theorem1_sup(OperatorKind op, const SymbolPair& pair, const FockParams& params,
                        const CriteriaOptions& opts) {
  const MVariant variant = op == OperatorKind::J_g_psi ? MVariant::G : MVariant::GPsi;
  const double alpha = params.alpha;
  Assessment out = both(Route::Theorem1, Outcome::Inconclusive, false, false);

  const auto radii = decay_radii(opts);
  std::vector<double> probe(radii.size());
  auto logm = [&](cplx z) { return log_M(pair, alpha, z, variant); };
  parallel_for(radii.size(), [&](std::size_t i) { probe[i] = ring_max(logm, radii[i], opts.m_probe_angles); });
  out.bounded.tables["M_probe_radii"] = radii;
  out.bounded.tables["M_probe"] = probe;
  out.compact.tables["M_probe_radii"] = radii;
  out.compact.tables["M_probe"] = probe;
  const Trend t = trend(probe, opts.decay_factor);
  if (probe.front() > 0.0) {
    out.compact.numbers["M_decay_factor"] = probe.front() / probe.back();
    out.bounded.numbers["M_growth_factor"] = probe.back() / probe.front();
  }

  const auto ad = affine_data(pair, variant);
  if (ad && !ad->zero) {
    const double lead = ad->g.quad + 0.5 * alpha * (std::norm(ad->a) - 1.0);
    out.bounded.numbers["leading_exponent"] = lead;
    out.compact.numbers["leading_exponent"] = lead;
    if (lead > 0.0) {
      out = both(Route::Theorem1, Outcome::Exact, false, false, "M grows like exp(c |z|^2), c > 0");
      out.bounded.numbers["leading_exponent"] = lead;
      out.compact.numbers["leading_exponent"] = lead;
      return out;
    }
    if (lead < 0.0) {
      const TailCertificate cert = m_certificate(*ad, alpha);
      const SupResult s = sup_field([&](cplx z) { return safe_exp(logm(z)); }, cert);
      out.bounded.numbers["M_sup"] = s.value;
      out.bounded.numbers["M_sup_argmax_re"] = s.argmax.real();
      out.bounded.numbers["M_sup_argmax_im"] = s.argmax.imag();
      out.bounded.numbers["M_sup_radius"] = s.radius;
      out.bounded.numbers["attained_inside"] = s.attained_inside ? 1.0 : 0.0;
      out.bounded.numbers["norm_estimate"] = s.value;
      if (s.attained_inside) {
        set_evidence(out.bounded, true);
        out.bounded.note = "certified supremum of M";
      } else {
        out.bounded.note = "supremum not certified";
      }
      if (out.bounded.holds) {
        set_evidence(out.compact, t.decaying);
        out.compact.note = t.decaying ? "M decays along doubling radii" : "no decay observed";
      }
      return out;
    }
  }

  // Probe-only decision.
  if (t.growing) {
    set_evidence(out.bounded, false);
    set_evidence(out.compact, false);
    out.bounded.note = out.compact.note = "M grows along doubling radii";
  } else if (t.decaying) {
    set_evidence(out.bounded, true);
    set_evidence(out.compact, true);
    out.bounded.note = out.compact.note = "M decays along doubling radii";
  } else {
    set_evidence(out.bounded, true);
    set_evidence(out.compact, false);
    out.bounded.note = out.compact.note = "M plateaus along doubling radii";
  }
  double sup = 0.0;
  for (double v : probe) sup = std::max(sup, v);
  out.bounded.numbers["M_probe_max"] = sup;
  return out;
}

struct BTables {
  bool certified = true;
  std::vector<double> grid;        // w = 0 then radius-major
  std::vector<double> probe_radii, probe;
  std::vector<double> decay_radii, decay;
  double grid_sup = 0.0;
  cplx grid_argmax{};
};

double b_ring_max(const SymbolPair& pair, const FockParams& params, BVariant variant, double r, int angles,
                  double tol, bool& certified) {
  double best = 0.0;
  for (int k = 0; k < angles; ++k) {
    const BerezinValue v = berezin_B(pair, params, std::polar(r, kTwoPi * k / angles), variant, tol);
    if (!v.certified) certified = false;
    best = std::max(best, v.value);
  }
  return best;
}

BTables b_tables(const SymbolPair& pair, const FockParams& params, BVariant variant, const CriteriaOptions& opts,
                 bool with_grid) {
  BTables t;
  std::vector<double> radii = opts.b_probes;
  for (double r : decay_radii(opts))
    if (std::find(radii.begin(), radii.end(), r) == radii.end()) radii.push_back(r);
  std::vector<double> ring(radii.size());
  std::vector<char> ok(radii.size(), 1);
  parallel_for(radii.size(), [&](std::size_t i) {
    bool c = true;
    ring[i] = b_ring_max(pair, params, variant, radii[i], opts.probe_angles, opts.b_tol, c);
    ok[i] = c;
  });
  for (char c : ok) t.certified = t.certified && c;
  auto lookup = [&](double r) { return ring[std::find(radii.begin(), radii.end(), r) - radii.begin()]; };
  t.probe_radii = opts.b_probes;
  for (double r : t.probe_radii) t.probe.push_back(lookup(r));
  t.decay_radii = decay_radii(opts);
  for (double r : t.decay_radii) t.decay.push_back(lookup(r));

  if (with_grid && t.certified) {
    std::vector<cplx> pts{0.0};
    for (int i = 1; i <= opts.w_radii; ++i)
      for (int k = 0; k < opts.w_angles; ++k)
        pts.push_back(std::polar(opts.w_radius * i / opts.w_radii, kTwoPi * k / opts.w_angles));
    t.grid.resize(pts.size());
    std::vector<char> gok(pts.size(), 1);
    parallel_for(pts.size(), [&](std::size_t i) {
      const BerezinValue v = berezin_B(pair, params, pts[i], variant, opts.b_tol);
      t.grid[i] = v.value;
      gok[i] = v.certified;
    });
    for (std::size_t i = 0; i < pts.size(); ++i) {
      t.certified = t.certified && gok[i];
      if (t.grid[i] > t.grid_sup) {
        t.grid_sup = t.grid[i];
        t.grid_argmax = pts[i];
      }
    }
  }
  return t;
}

void attach(Verdict& v, const BTables& t) {
  v.tables["B_probe_radii"] = t.probe_radii;
  v.tables["B_probe"] = t.probe;
  v.tables["B_decay_radii"] = t.decay_radii;
  v.tables["B_decay"] = t.decay;
}

BVariant b_variant(OperatorKind op) { return op == OperatorKind::J_g_psi ? BVariant::G : BVariant::GPsi; }

Assessment theorem1_berezin(OperatorKind op, const SymbolPair& pair, const FockParams& params,
                            const CriteriaOptions& opts) {
  Assessment out = both(Route::Theorem1, Outcome::Inconclusive, false, false);
  const BTables t = b_tables(pair, params, b_variant(op), opts, true);
  if (!t.certified) {
    out = both(Route::Theorem1, Outcome::NegativeEvidence, false, false, "no tail certificate for B (diverges or unknown)");
    return out;
  }
  attach(out.bounded, t);
  attach(out.compact, t);
  double sup = t.grid_sup;
  for (double v : t.probe) sup = std::max(sup, v);
  out.bounded.numbers["B_sup_grid"] = t.grid_sup;
  out.bounded.numbers["B_sup_argmax_re"] = t.grid_argmax.real();
  out.bounded.numbers["B_sup_argmax_im"] = t.grid_argmax.imag();
  out.bounded.numbers["B_sup"] = sup;
  out.bounded.numbers["norm_estimate"] = std::pow(sup, 1.0 / params.q);

  const Trend growth = trend(t.probe, opts.decay_factor);
  const Trend decay = trend(t.decay, opts.decay_factor);
  if (t.decay.front() > 0.0) out.compact.numbers["B_decay_factor"] = t.decay.front() / t.decay.back();
  if (t.probe.front() > 0.0) out.bounded.numbers["B_growth_factor"] = t.probe.back() / t.probe.front();
  if (growth.growing) {
    set_evidence(out.bounded, false);
    set_evidence(out.compact, false);
    out.bounded.note = out.compact.note = "B grows along doubling radii";
  } else if (decay.decaying) {
    set_evidence(out.bounded, true);
    set_evidence(out.compact, true);
    out.bounded.note = out.compact.note = "B vanishes along doubling radii";
  } else {
    set_evidence(out.bounded, true);
    set_evidence(out.compact, false);
    out.bounded.note = out.compact.note = "B plateaus along doubling radii";
  }
  return out;
}

}  // namespace

Assessment verdict_theorem1(OperatorKind op, const SymbolPair& pair, const FockParams& params,
                            const CriteriaOptions& opts) {
  if (op != OperatorKind::J_g_psi && op != OperatorKind::C_g_psi)
    throw std::invalid_argument("verdict_theorem1: operator must be J_g_psi or C_g_psi");
  if (!(params.p <= params.q)) throw std::invalid_argument("verdict_theorem1: requires p <= q");
  if (std::isinf(params.q)) return theorem1_sup(op, pair, params, opts);
  return theorem1_berezin(op, pair, params, opts);
}

Assessment verdict_theorem2(OperatorKind op, const SymbolPair& pair, const FockParams& params,
                            const CriteriaOptions& opts) {
  if (op != OperatorKind::J_g_psi && op != OperatorKind::C_g_psi)
    throw std::invalid_argument("verdict_theorem2: operator must be J_g_psi or C_g_psi");
  if (!(params.q < params.p)) throw std::invalid_argument("verdict_theorem2: requires q < p");
  const double s = std::isinf(params.p) ? 1.0 : params.p / (params.p - params.q);
  const BVariant variant = b_variant(op);
  Assessment out = both(Route::Theorem2, Outcome::Inconclusive, false, false);

  const BTables t = b_tables(pair, params, variant, opts, false);
  if (!t.certified)
    return both(Route::Theorem2, Outcome::NegativeEvidence, false, false, "no tail certificate for B (diverges or unknown)");
  attach(out.bounded, t);
  attach(out.compact, t);
  out.bounded.numbers["s"] = s;
  const Trend decay = trend(t.decay, opts.decay_factor);
  if (!decay.decaying) {
    Assessment neg = both(Route::Theorem2, Outcome::NegativeEvidence, false, false,
                          "B does not vanish at infinity, so B is not in L^s");
    attach(neg.bounded, t);
    attach(neg.compact, t);
    neg.bounded.numbers["s"] = s;
    return neg;
  }

  const auto af = affine_data(pair, variant);
  const auto wcert = af ? b_power_certificate(*af, params.q, params.alpha, s) : std::nullopt;
  if (!wcert) {
    out.bounded.note = out.compact.note = "B decays but no certificate in w";
    return out;
  }
  auto field = [&](cplx w) {
    const BerezinValue v = berezin_B(pair, params, w, variant, opts.b_tol);
    return std::pow(v.value, s);
  };
  QuadOptions qo;
  qo.tol = opts.integral_tol;
  qo.panel_width = 4.0;
  qo.arc_spacing = 2.0;
  qo.order = 8;
  try {
    const Integral I = plane_integrate(RealField(field), *wcert, qo);
    out = both(Route::Theorem2, Outcome::PositiveEvidence, true, true, "B^s integrable under certificate");
    attach(out.bounded, t);
    attach(out.compact, t);
    for (Verdict* v : {&out.bounded, &out.compact}) {
      v->numbers["s"] = s;
      v->numbers["B_Ls_integral"] = I.value;
      v->numbers["B_Ls_error"] = I.error;
      v->numbers["norm_estimate"] = std::pow(I.value, 1.0 / s);
    }
  } catch (const QuadratureError& e) {
    out.bounded.note = out.compact.note = std::string("integral failed: ") + e.what();
  }
  return out;
}

Assessment assess(OperatorKind op, const SymbolPair& pair, const FockParams& params, const CriteriaOptions& opts) {
  params.validate();
  if (auto special = classify_special(op, pair, params)) return *special;
  const bool p_le_q = params.p <= params.q;
  auto theorem = [&](OperatorKind o, const SymbolPair& sp) {
    return p_le_q ? verdict_theorem1(o, sp, params, opts) : verdict_theorem2(o, sp, params, opts);
  };
  switch (op) {
    case OperatorKind::Jg: return theorem(OperatorKind::J_g_psi, {pair.g, EntireExpr::variable()});
    case OperatorKind::Mg: {
      Assessment a = theorem(OperatorKind::J_g_psi, {pair.g, EntireExpr::variable()});
      a.bounded.route = a.compact.route = Route::Corollary1;
      return a;
    }
    case OperatorKind::J_g_psi:
    case OperatorKind::C_g_psi: return theorem(op, pair);
    case OperatorKind::Vg_psi:
    case OperatorKind::Cg_psi: {
      const OperatorKind src = op == OperatorKind::Vg_psi ? OperatorKind::J_g_psi : OperatorKind::C_g_psi;
      const Assessment s = assess(src, pair, params, opts);
      Assessment a = both(Route::Corollary2, Outcome::Inconclusive, false, false,
                          std::string("no conclusion: ") + to_string(src) + " is not bounded");
      auto lift = [&](const Verdict& from, Verdict& to) {
        if (from.holds && (from.outcome == Outcome::Exact || from.outcome == Outcome::PositiveEvidence)) {
          to.outcome = from.outcome;
          to.holds = true;
          to.note = std::string("implied by ") + to_string(src);
          to.numbers = from.numbers;
        } else {
          to.note = std::string("no conclusion from ") + to_string(src);
        }
      };
      lift(s.bounded, a.bounded);
      lift(s.compact, a.compact);
      return a;
    }
    case OperatorKind::Vg: break;  // always settled by classify_special
  }
  throw std::logic_error("assess: unhandled operator");
}

// ------------------------------------------------------- sampled fields

namespace {
constexpr std::pair<CriterionKind, const char*> kCriterionTags[] = {
    {CriterionKind::P_psi, "P_psi"},   {CriterionKind::Q_g, "Q_g"}, {CriterionKind::M_gpsi, "M_gpsi"},
    {CriterionKind::M_gpsipsi, "M_gpsipsi"}, {CriterionKind::B_g, "B_g"}, {CriterionKind::B_gpsi, "B_gpsi"},
};
}  // namespace

const char* to_string(CriterionKind k) {
  for (const auto& [kind, tag] : kCriterionTags)
    if (kind == k) return tag;
  return "?";
}

CriterionKind parse_criterion_kind(const std::string& tag) {
  for (const auto& [kind, t] : kCriterionTags)
    if (tag == t) return kind;
  throw std::invalid_argument("unknown criterion field '" + tag + "'");
}

std::vector<FieldSample> sample_criterion(CriterionKind which, const SymbolPair& pair, const FockParams& params,
                                          double radius, int radii, int angles, double tol) {
  std::vector<cplx> pts{0.0};
  for (int i = 1; i <= radii; ++i)
    for (int k = 0; k < angles; ++k) pts.push_back(std::polar(radius * i / radii, kTwoPi * k / angles));
  std::vector<FieldSample> out(pts.size());
  const double alpha = params.alpha;
  parallel_for(pts.size(), [&](std::size_t i) {
    const cplx z = pts[i];
    double v = 0.0;
    switch (which) {
      case CriterionKind::P_psi: v = eval_P_psi(pair, alpha, z); break;
      case CriterionKind::Q_g: v = eval_Q_g(pair, alpha, z); break;
      case CriterionKind::M_gpsi: v = eval_M(pair, alpha, z, MVariant::G); break;
      case CriterionKind::M_gpsipsi: v = eval_M(pair, alpha, z, MVariant::GPsi); break;
      case CriterionKind::B_g:
      case CriterionKind::B_gpsi: {
        const BerezinValue b =
            berezin_B(pair, params, z, which == CriterionKind::B_g ? BVariant::G : BVariant::GPsi, tol);
        v = b.certified ? b.value : std::numeric_limits<double>::quiet_NaN();
        break;
      }
    }
    out[i] = {z, v};
  });
  return out;
}

}  // namespace fockbench
