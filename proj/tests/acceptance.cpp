// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fockbench/criteria.hpp"
#include "fockbench/lattice.hpp"
#include "fockbench/report.hpp"
#include "oracles.hpp"

using namespace fockbench;

namespace {

struct Result {
  bool pass = true;
  std::string detail;
};

// Collects the worst deviation and the first failure message.
struct Tracker {
  Result out;
  double worst = 0.0;
  void check(bool ok, const std::string& what) {
    if (!ok && out.pass) out.detail = what;
    out.pass = out.pass && ok;
  }
  void deviation(double d, double tol, const std::string& what) {
    worst = std::max(worst, d);
    check(d <= tol, what);
  }
  Result done(const std::string& summary) {
    if (out.pass) out.detail = summary;
    return out;
  }
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::string str(cplx z) { return "(" + fmt(z.real()) + "," + fmt(z.imag()) + ")"; }

EntireExpr monomial(int n) { return n == 0 ? EntireExpr::constant(1.0) : pow(EntireExpr::variable(), n); }

Result closed_form_norms() {
  Tracker t;
  for (double alpha : {0.5, 1.0, 2.0})
    for (double p : {1.0, 2.0, 4.0}) {
      for (int n = 1; n <= 6; ++n) {
        const double rel = std::abs(fock_norm(monomial(n), p, alpha).value / oracle::monomial_norm(n, p, alpha) - 1.0);
        t.deviation(rel, 1e-6, "z^" + std::to_string(n) + " p=" + fmt(p) + " alpha=" + fmt(alpha));
      }
      t.deviation(std::abs(fock_norm(monomial(0), p, alpha).value - 1.0), 1e-8, "f=1 p=" + fmt(p));
    }
  return t.done("max relative deviation " + fmt(t.worst));
}

Result unit_kernels() {
  Tracker t;
  for (double x : {-4.0 / std::sqrt(2.0), 0.0, 4.0 / std::sqrt(2.0)})
    for (double y : {-4.0 / std::sqrt(2.0), 0.0, 4.0 / std::sqrt(2.0)}) {
      const cplx w{x, y};
      for (double alpha : {0.5, 1.0, 2.0})
        for (double p : {1.0, 2.0, kInfinity})
          t.deviation(std::abs(fock_norm(normalized_kernel(w, alpha), p, alpha).value - 1.0), 1e-6,
                      "w=" + str(w) + " p=" + fmt(p) + " alpha=" + fmt(alpha));
    }
  return t.done("max |norm - 1| " + fmt(t.worst));
}

Result operator_identity() {
  Tracker t;
  const std::pair<const char*, const char*> cases[] = {{"exp(0.3*z)", "z^2 + 1"}, {"z^3", "exp(0.1*z)"}};
  for (auto [ft, gt] : cases) {
    const EntireExpr f = parse_symbol(ft);
    const SymbolPair pair{parse_symbol(gt)};
    for (cplx z : oracle::disc_points(20, 3.0, 2024)) {
      const cplx lhs = apply(OperatorKind::Vg, pair, f, z) + apply(OperatorKind::Jg, pair, f, z);
      const cplx rhs = apply(OperatorKind::Mg, pair, f, z) - f(0.0) * pair.g(0.0);
      t.deviation(std::abs(lhs - rhs), 1e-8, std::string(ft) + ", " + gt + " at " + str(z));
    }
  }
  return t.done("max residual " + fmt(t.worst));
}

Result reductions() {
  Tracker t;
  const char* fs[] = {"exp(0.3*z)", "z^3 - 2*z", "exp(0.2*z^2)"};
  const char* gs[] = {"z^2 + 1", "exp(0.1*z)"};
  const char* psis[] = {"0.5*z + 1", "z^2 - i", "2*z"};
  const auto pts = oracle::disc_points(10, 1.5, 7);
  for (const char* ft : fs) {
    const EntireExpr f = parse_symbol(ft);
    for (const char* gt : gs) {
      const SymbolPair pair{parse_symbol(gt)};
      for (cplx z : pts) {
        const cplx j = apply(OperatorKind::Jg, pair, f, z);
        t.deviation(std::abs(apply(OperatorKind::J_g_psi, pair, f, z) - j), 1e-9, "J_(g,z) at " + str(z));
        t.deviation(std::abs(apply(OperatorKind::C_g_psi, pair, f, z) - j), 1e-9, "C_(g,z) at " + str(z));
      }
    }
    for (const char* pt : psis) {
      const SymbolPair pair{EntireExpr::constant(1.0), parse_symbol(pt)};
      for (cplx z : pts) {
        const cplx want = f(pair.psi(z)) - f(0.0);
        t.deviation(std::abs(apply(OperatorKind::C_g_psi, pair, f, z) - want), 1e-9 * std::max(1.0, std::abs(want)),
                    "C_(1,psi) psi=" + std::string(pt) + " at " + str(z));
      }
    }
  }
  return t.done("max deviation " + fmt(t.worst));
}

Result lp_window() {
  Tracker t;
  const std::vector<cplx> pts{{0.5, 0.0}, {0.0, 1.0}, {-1.5, 0.5}, {1.0, -2.0}, {2.5, 1.5}};
  std::string summary;
  for (double p : {1.0, 2.0, kInfinity}) {
    const LpWindow a = littlewood_paley_window(p, 1.0, pts, {1e-6, 0});
    const LpWindow b = littlewood_paley_window(p, 1.0, pts, {1e-6, 1});
    t.check(a.spread() <= 100.0, "spread " + fmt(a.spread()) + " at p=" + fmt(p));
    t.check(std::abs(b.lo / a.lo - 1.0) <= 0.05 && std::abs(b.hi / a.hi - 1.0) <= 0.05,
            "refinement moved the window at p=" + fmt(p));
    summary += (summary.empty() ? "" : ", ") + std::string("p=") + fmt(p) + " C/c=" + fmt(a.spread());
  }
  return t.done(summary);
}

Result corollary_oracle() {
  Tracker t;
  const FockParams pq{1.0, 2.0, 2.0};
  const SymbolPair two{parse_symbol("2")}, zee{parse_symbol("z")}, zero{parse_symbol("0")}, one{parse_symbol("1")};
  const Assessment a = assess(OperatorKind::Jg, two, pq);
  t.check(a.bounded.label() == "exact-positive" && a.compact.label() == "exact-negative", "g=2: " + a.bounded.label());

  CriteriaOptions o;
  o.b_probes = {1, 2, 4, 8};
  const Assessment b = assess(OperatorKind::Jg, zee, pq, o);
  t.check(b.bounded.label() == "negative-evidence", "g=z: " + b.bounded.label());
  const auto& probe = b.bounded.tables.at("B_probe");
  bool monotone = probe.size() == 4;
  for (std::size_t i = 1; i < probe.size(); ++i) monotone = monotone && probe[i] > probe[i - 1];
  t.check(monotone, "g=z: B not increasing over |w| = 1, 2, 4, 8");

  const Assessment c = assess(OperatorKind::Jg, zero, pq);
  t.check(c.compact.label() == "exact-positive", "g=0: " + c.compact.label());

  const Assessment d = assess(OperatorKind::Jg, one, {1.0, 4.0, 2.0});
  t.check(d.bounded.label() == "negative-evidence" && d.bounded.route == Route::Theorem2, "q<p, g=1: " + d.bounded.label());
  return t.done("g=2 exact bounded/not compact; g=z B " + fmt(probe.front()) + " -> " + fmt(probe.back()) +
                "; g=0 exact compact; q<p g=1 " + d.bounded.label());
}

Result p_independence() {
  Tracker t;
  const SymbolPair pair{parse_symbol("z"), parse_symbol("0.5*z")};
  auto dump = [&](double p) {
    const Assessment a = verdict_theorem1(OperatorKind::J_g_psi, pair, {1.0, p, 2.0});
    return canonical_dump(nlohmann::json{{"bounded", to_json(a.bounded)}, {"compact", to_json(a.compact)}});
  };
  const std::string ref = dump(0.5);
  for (double p : {1.0, 2.0}) t.check(dump(p) == ref, "diagnostics differ at p=" + fmt(p));
  return t.done("diagnostics identical for p = 0.5, 1, 2 (" + std::to_string(ref.size()) + " bytes)");
}

Result scaling_example() {
  Tracker t;
  CriteriaOptions o;
  o.decay_r0 = 2.0;
  o.decay_steps = 6;  // radii 2 .. 64
  const Assessment a = verdict_theorem1(OperatorKind::J_g_psi, {parse_symbol("exp(0.25*z^2)"), parse_symbol("0.5*z")},
                                        {1.0, 2.0, kInfinity}, o);
  t.check(a.bounded.label() == "positive-evidence", "bounded: " + a.bounded.label());
  t.check(a.compact.label() == "positive-evidence", "compact: " + a.compact.label());
  const auto& probe = a.compact.tables.at("M_probe");
  const double decay = probe.back() > 0.0 ? probe.front() / probe.back() : kInfinity;
  t.check(decay >= 10.0, "M decay factor " + fmt(decay));
  return t.done("bounded and compact evidence, M decay " + fmt(decay) + "x over radii 2..64");
}

Result psi_admissibility() {
  Tracker t;
  const Assessment a = assess(OperatorKind::J_g_psi, {parse_symbol("1"), parse_symbol("z^2")}, {1.0, 2.0, kInfinity});
  t.check(a.bounded.route == Route::PsiInadmissible, std::string("route ") + to_string(a.bounded.route));
  t.check(a.bounded.label() == "exact-negative", a.bounded.label());
  return t.done("exact negative via the linear-form rule");
}

Result lemma_window() {
  Tracker t;
  const PlaneMeasure measures[] = {PlaneMeasure::gaussian(), PlaneMeasure::disc_indicator(3.0),
                                   PlaneMeasure::gaussian().pushforward(parse_symbol("2*z"))};
  double worst = 1.0;
  for (const PlaneMeasure& mu : measures)
    for (double q : {1.0, 2.0})
      for (double p : {1.0, 2.0, kInfinity}) {
        const std::string tag = mu.name() + " q=" + fmt(q) + " p=" + fmt(p);
        const EquivalenceReport rep =
            equivalence_report(mu, q, p, 1.0, make_lattice(1.0, default_lattice_radius(mu, 1.0)));
        t.check(rep.all_finite(), tag + " not finite");
        t.check(rep.window <= 100.0, tag + " window " + fmt(rep.window));
        worst = std::max(worst, rep.window);
        const bool member = rep.d_rq.finite;
        for (double r : {0.5, 2.0})
          t.check(D_rq_norm(mu, q, p, r).finite == member &&
                      lattice_sequence_norm(mu, q, p, make_lattice(r, default_lattice_radius(mu, r))).finite ==
                          rep.sequence.finite,
                  tag + " membership changes at r=" + fmt(r));
      }
  return t.done("18 cases, worst window " + fmt(worst) + ", membership r-invariant");
}

Result lattice_soundness() {
  Tracker t;
  std::string summary;
  for (double r : {0.5, 1.0, 2.0}) {
    const LatticeCheck c = check_lattice(make_lattice(r, 10.0), 1000);
    t.check(c.covering, "covering fails at r=" + fmt(r));
    t.check(c.disjoint, "discs overlap at r=" + fmt(r));
    t.check(c.max_overlap <= kNmax, "overlap " + std::to_string(c.max_overlap) + " at r=" + fmt(r));
    summary += (summary.empty() ? "" : ", ") + std::string("r=") + fmt(r) + " overlap " + std::to_string(c.max_overlap);
  }
  return t.done(summary + " (N_max " + std::to_string(kNmax) + ")");
}

Result determinism() {
  Tracker t;
  const RunConfig c = parse_config(
      R"j({"id":"scaling","op":"J_g_psi","g":"exp(0.25*z^2)","psi":"0.5*z","alpha":1,"p":2,"q":"inf"})j");
  auto dump = [&] {
    nlohmann::json j = to_json(run_verdict(c));
    j.erase("wall_time_s");
    return canonical_dump(j);
  };
  const std::string a = dump(), b = dump();
  t.check(a == b, "records differ");
  return t.done("two runs, " + std::to_string(a.size()) + " identical bytes");
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Result()>>> criteria{
      {1, closed_form_norms}, {2, unit_kernels},     {3, operator_identity},  {4, reductions},
      {5, lp_window},         {6, corollary_oracle}, {7, p_independence},     {8, scaling_example},
      {9, psi_admissibility}, {10, lemma_window},    {11, lattice_soundness}, {12, determinism},
  };
  int failures = 0;
  for (const auto& [n, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Result o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= 60.0) {
      o.pass = false;
      o.detail += " (over 60 s)";
    }
    failures += o.pass ? 0 : 1;
    std::printf("criterion %d: %s  %s  [%.2f s]\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
