// Command-line front end: norms, operator values, criterion fields, verdicts,
// corpus suites, lattice checks and Littlewood-Paley windows.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fockbench/criteria.hpp"
#include "fockbench/fock.hpp"
#include "fockbench/lattice.hpp"
#include "fockbench/operators.hpp"
#include "fockbench/report.hpp"

namespace fs = std::filesystem;
using namespace fockbench;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumeric = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

double parse_exponent(const std::string& text, const char* name) {
  if (text == "inf") return kInfinity;
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(std::string("option --") + name + ": expected a number or 'inf'");
}

cplx parse_point(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) return {std::stod(text), 0.0};
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw ConfigError("option --z: expected 're,im'");
  }
}

void parse_grid(const std::string& text, GridOverrides& grid) {
  const auto x = text.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument("no x");
    grid.radii = std::stoi(text.substr(0, x));
    grid.angles = std::stoi(text.substr(x + 1));
  } catch (const std::exception&) {
    throw ConfigError("option --grid: expected RxA, e.g. 8x16");
  }
}

void emit(const std::string& text, const std::string& out_dir, const std::string& name) {
  if (out_dir.empty()) {
    std::cout << text;
    return;
  }
  fs::create_directories(out_dir);
  std::ofstream(fs::path(out_dir) / name) << text;
}

struct Overrides {
  std::string config;
  std::string out;
  double tol = 0.0;
  std::string grid;
  double radius = 0.0;

  void add_to(CLI::App* app, bool need_config) {
    auto* c = app->add_option("--config", config, "JSON config file");
    if (need_config) c->required();
    app->add_option("--out", out, "output directory (default: stdout)");
    app->add_option("--tol", tol, "per-sample tolerance of nested integrals");
    app->add_option("--grid", grid, "sampling grid RxA (radii x angles)");
    app->add_option("--radius", radius, "sampling radius W");
  }

  void apply(RunConfig& cfg) const {
    if (tol > 0.0) cfg.grid.tol = tol;
    if (!grid.empty()) parse_grid(grid, cfg.grid);
    if (radius > 0.0) cfg.grid.W = radius;
    cfg.validate();
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical toolkit for integral operators on Fock spaces"};
  app.require_subcommand(1);

  // norm
  std::string norm_f, norm_p = "2";
  double norm_alpha = 1.0, norm_tol = 1e-8;
  auto* norm = app.add_subcommand("norm", "Fock norm ||f||_p of an entire function");
  norm->add_option("--f", norm_f, "expression in z")->required();
  norm->add_option("--p", norm_p, "exponent in (0, inf]");
  norm->add_option("--alpha", norm_alpha, "weight parameter");
  norm->add_option("--tol", norm_tol, "relative tolerance");

  // apply
  std::string ap_op, ap_g, ap_psi = "z", ap_f, ap_z = "0";
  auto* apply = app.add_subcommand("apply", "Evaluate (T f)(z)");
  apply->add_option("--op", ap_op, "Vg, Jg, Mg, Vg_psi, Cg_psi, J_g_psi or C_g_psi")->required();
  apply->add_option("--g", ap_g, "symbol g")->required();
  apply->add_option("--psi", ap_psi, "symbol psi");
  apply->add_option("--f", ap_f, "argument f")->required();
  apply->add_option("--z", ap_z, "point 're,im'");

  // criterion
  Overrides crit_o;
  std::string crit_which;
  auto* crit = app.add_subcommand("criterion", "Sample one criterion field as CSV");
  crit_o.add_to(crit, true);
  crit->add_option("--which", crit_which, "P_psi, Q_g, M_gpsi, M_gpsipsi, B_g or B_gpsi")->required();

  // verdict
  Overrides verd_o;
  bool verd_no_checks = false;
  auto* verd = app.add_subcommand("verdict", "Boundedness / compactness verdict for one config");
  verd_o.add_to(verd, true);
  verd->add_flag("--no-cross-checks", verd_no_checks, "skip empirical_norm and compactness_probe");

  // suite
  Overrides suite_o;
  auto* suite = app.add_subcommand("suite", "Run a JSON array of configs");
  suite_o.add_to(suite, true);

  // lattice-check
  std::vector<double> lat_r{0.5, 1.0, 2.0};
  double lat_R = 10.0;
  int lat_probes = 1000;
  std::string lat_measure;
  double lat_q = 1.0;
  std::string lat_p = "2";
  auto* lat = app.add_subcommand("lattice-check", "Lattice invariants, optionally an equivalence report");
  lat->add_option("--r", lat_r, "covering parameters");
  lat->add_option("--radius", lat_R, "lattice truncation radius");
  lat->add_option("--probes", lat_probes, "random probes per check");
  lat->add_option("--measure", lat_measure, "gaussian, disc3 or gaussian-2z: add an equivalence report");
  lat->add_option("--q", lat_q, "weight exponent for the report");
  lat->add_option("--p", lat_p, "outer exponent for the report");

  // lp-verify
  std::string lp_p = "2";
  double lp_alpha = 1.0, lp_tol = 1e-6;
  bool lp_refine = false;
  auto* lp = app.add_subcommand("lp-verify", "Littlewood-Paley window report");
  lp->add_option("--p", lp_p, "exponent in (0, inf]");
  lp->add_option("--alpha", lp_alpha, "weight parameter");
  lp->add_option("--tol", lp_tol, "relative tolerance");
  lp->add_flag("--refine", lp_refine, "one grid-refinement doubling");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*norm) {
      NormOptions opts{norm_tol, 0};
      const double p = parse_exponent(norm_p, "p");
      EntireExpr f;
      try {
        f = parse_symbol(norm_f);
      } catch (const std::exception& e) {
        throw ConfigError(std::string("option --f: ") + e.what());
      }
      const NormResult r = fock_norm(f, p, norm_alpha, opts);
      json j = {{"f", f.to_string()},     {"p", number_to_json(p)},          {"alpha", number_to_json(norm_alpha)},
                {"status", to_string(r.status)}, {"value", number_to_json(r.value)}, {"error", number_to_json(r.error)}};
      std::cout << canonical_dump(j);
      return kExitOk;
    }

    if (*apply) {
      RunConfig cfg;
      cfg.op = ap_op;
      cfg.g = ap_g;
      cfg.psi = ap_psi;
      const OperatorKind op = cfg.op_kind();
      const SymbolPair pair = cfg.pair();
      EntireExpr f;
      try {
        f = parse_symbol(ap_f);
      } catch (const std::exception& e) {
        throw ConfigError(std::string("option --f: ") + e.what());
      }
      const cplx z = parse_point(ap_z);
      const cplx v = fockbench::apply(op, pair, f, z);
      json j = {{"op", to_string(op)},
                {"z", {number_to_json(z.real()), number_to_json(z.imag())}},
                {"value", {number_to_json(v.real()), number_to_json(v.imag())}}};
      std::cout << canonical_dump(j);
      return kExitOk;
    }

    if (*crit) {
      RunConfig cfg = parse_config(read_file(crit_o.config));
      crit_o.apply(cfg);
      CriterionKind which;
      try {
        which = parse_criterion_kind(crit_which);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("option --which: ") + e.what());
      }
      const auto samples = sample_criterion(which, cfg.pair(), cfg.params(), cfg.grid.W.value_or(4.0),
                                            cfg.grid.radii.value_or(8), cfg.grid.angles.value_or(16),
                                            cfg.grid.tol.value_or(1e-4));
      emit(samples_csv(samples), crit_o.out, cfg.id + "_" + crit_which + ".csv");
      return kExitOk;
    }

    if (*verd) {
      RunConfig cfg = parse_config(read_file(verd_o.config));
      verd_o.apply(cfg);
      if (verd_no_checks) cfg.cross_checks = false;
      const RunRecord rec = run_verdict(cfg);
      const std::string out = !verd_o.out.empty() ? verd_o.out : cfg.out_dir;
      if (out.empty())
        std::cout << canonical_dump(to_json(rec));
      else
        write_record(rec, out);
      if (rec.status == RunStatus::ConfigError) {
        std::cerr << "config error: " << rec.error << "\n";
        return kExitConfig;
      }
      if (rec.status == RunStatus::NumericFailure) {
        std::cerr << "numeric failure: " << rec.error << "\n";
        return kExitNumeric;
      }
      return kExitOk;
    }

    if (*suite) {
      std::vector<json> corpus = parse_corpus(read_file(suite_o.config));
      for (auto& entry : corpus) {
        if (!entry.is_object()) continue;
        if (suite_o.tol > 0.0) entry["grid"]["tol"] = suite_o.tol;
        if (suite_o.radius > 0.0) entry["grid"]["W"] = suite_o.radius;
        if (!suite_o.grid.empty()) {
          GridOverrides g;
          parse_grid(suite_o.grid, g);
          entry["grid"]["radii"] = *g.radii;
          entry["grid"]["angles"] = *g.angles;
        }
      }
      const SuiteResult res = run_suite(corpus);
      const std::string summary = summary_csv(res);
      if (!suite_o.out.empty()) {
        for (const auto& r : res.records) write_record(r, suite_o.out);
        std::ofstream(fs::path(suite_o.out) / "summary.csv") << summary;
      }
      std::cout << summary;
      return res.hard_failure ? kExitNumeric : kExitOk;
    }

    if (*lat) {
      json checks = json::array();
      bool ok = true;
      for (double r : lat_r) {
        const Lattice L = make_lattice(r, lat_R);
        const LatticeCheck c = check_lattice(L, lat_probes);
        ok = ok && c.ok();
        checks.push_back({{"r", r},
                          {"spacing", L.spacing},
                          {"nodes", L.points.size()},
                          {"probes", c.probes},
                          {"covering", c.covering},
                          {"worst_cover_distance", c.worst_cover_distance},
                          {"disjoint", c.disjoint},
                          {"min_distance", c.min_distance},
                          {"max_overlap", c.max_overlap},
                          {"overlap_ok", c.overlap_ok}});
      }
      json j = {{"radius", lat_R}, {"n_max", kNmax}, {"checks", checks}, {"ok", ok}};
      if (!lat_measure.empty()) {
        PlaneMeasure mu = PlaneMeasure::zero();
        if (lat_measure == "gaussian") mu = PlaneMeasure::gaussian();
        else if (lat_measure == "disc3") mu = PlaneMeasure::disc_indicator(3.0);
        else if (lat_measure == "gaussian-2z") mu = PlaneMeasure::gaussian().pushforward(parse_symbol("2*z"));
        else throw ConfigError("option --measure: expected gaussian, disc3 or gaussian-2z");
        const double p = parse_exponent(lat_p, "p");
        json reports = json::array();
        for (double r : lat_r) {
          const Lattice L = make_lattice(r, default_lattice_radius(mu, r));
          const EquivalenceReport rep = equivalence_report(mu, lat_q, p, r, L);
          reports.push_back({{"r", r},
                             {"nodes", rep.nodes},
                             {"mu_tilde", number_to_json(rep.mu_tilde.value)},
                             {"d_rq", number_to_json(rep.d_rq.value)},
                             {"sequence", number_to_json(rep.sequence.value)},
                             {"window", number_to_json(rep.window)}});
        }
        j["equivalence"] = {{"measure", mu.name()}, {"q", lat_q}, {"p", number_to_json(p)}, {"reports", reports}};
      }
      std::cout << canonical_dump(j);
      return kExitOk;
    }

    if (*lp) {
      const double p = parse_exponent(lp_p, "p");
      const std::vector<cplx> pts{{0.5, 0.0}, {0.0, 1.0}, {-1.5, 0.5}, {1.0, -2.0}, {2.5, 1.5}};
      NormOptions opts{lp_tol, lp_refine ? 1 : 0};
      const LpWindow w = littlewood_paley_window(p, lp_alpha, pts, opts);
      json entries = json::array();
      for (const auto& e : w.entries)
        entries.push_back({{"f", e.name},
                           {"lhs", number_to_json(e.lhs)},
                           {"rhs", number_to_json(e.rhs)},
                           {"ratio", number_to_json(e.ratio)}});
      json j = {{"p", number_to_json(p)},
                {"alpha", lp_alpha},
                {"c", number_to_json(w.lo)},
                {"C", number_to_json(w.hi)},
                {"spread", number_to_json(w.hi / w.lo)},
                {"entries", entries}};
      std::cout << canonical_dump(j);
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}
