#include "fockbench/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "fockbench/quadrature.hpp"

namespace fockbench {

using nlohmann::json;

namespace {

template <class Enum, std::size_t N>
Enum enum_from(const std::string& tag, const Enum (&values)[N], const std::string& field) {
  for (Enum e : values)
    if (tag == to_string(e)) return e;
  throw ConfigError("field '" + field + "': unknown value '" + tag + "'");
}

constexpr Question kQuestions[] = {Question::Bounded, Question::Compact};
constexpr Route kRoutes[] = {Route::Theorem1,   Route::Theorem2,     Route::Corollary1,
                             Route::Corollary2, Route::VgDegreeRule, Route::PsiInadmissible};
constexpr Outcome kOutcomes[] = {Outcome::PositiveEvidence, Outcome::NegativeEvidence, Outcome::Exact,
                                 Outcome::Inconclusive};
constexpr NormStatus kNormStatuses[] = {NormStatus::Finite, NormStatus::LowerBound, NormStatus::Diverges};
constexpr RunStatus kRunStatuses[] = {RunStatus::Ok, RunStatus::ConfigError, RunStatus::NumericFailure};

json vector_to_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number_to_json(x));
  return a;
}

std::vector<double> vector_from_json(const json& j, const std::string& field) {
  if (!j.is_array()) throw ConfigError("field '" + field + "': expected an array");
  std::vector<double> out;
  for (const auto& x : j) out.push_back(number_from_json(x, field));
  return out;
}

const json& require(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string string_field(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_string()) throw ConfigError(std::string("field '") + key + "': expected a string");
  return v.get<std::string>();
}

int int_field(const json& j, const std::string& key) {
  if (!j.is_number_integer()) throw ConfigError("field '" + key + "': expected an integer");
  return j.get<int>();
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json empirical_to_json(const EmpiricalNorm& e) {
  return {{"status", to_string(e.status)},
          {"value", number_to_json(e.value)},
          {"witness", e.witness},
          {"ratios", vector_to_json(e.ratios)}};
}

EmpiricalNorm empirical_from_json(const json& j) {
  EmpiricalNorm e;
  e.status = enum_from(string_field(j, "status"), kNormStatuses, "status");
  e.value = number_from_json(require(j, "value"), "value");
  e.witness = string_field(j, "witness");
  e.ratios = vector_from_json(require(j, "ratios"), "ratios");
  return e;
}

json probe_to_json(const ProbeResult& p) {
  return {{"radii", vector_to_json(p.radii)},
          {"norms", vector_to_json(p.norms)},
          {"diverges", p.diverges},
          {"decaying", p.decaying}};
}

ProbeResult probe_from_json(const json& j) {
  ProbeResult p;
  p.radii = vector_from_json(require(j, "radii"), "radii");
  p.norms = vector_from_json(require(j, "norms"), "norms");
  p.diverges = require(j, "diverges").get<bool>();
  p.decaying = require(j, "decaying").get<bool>();
  return p;
}

// The field whose samples accompany a verdict.
CriterionKind sample_kind(OperatorKind op, const FockParams& params) {
  const bool composed = op == OperatorKind::C_g_psi || op == OperatorKind::Cg_psi;
  if (std::isinf(params.q)) return composed ? CriterionKind::M_gpsipsi : CriterionKind::M_gpsi;
  return composed ? CriterionKind::B_gpsi : CriterionKind::B_g;
}

}  // namespace

// ---------------------------------------------------------------- numbers

json number_to_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number_from_json(const json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ConfigError("field '" + field + "': expected a number or \"inf\"");
}

// ----------------------------------------------------------------- config

OperatorKind RunConfig::op_kind() const {
  try {
    return parse_operator_kind(op);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("field 'op': ") + e.what());
  }
}

SymbolPair RunConfig::pair() const {
  SymbolPair sp;
  try {
    sp.g = parse_symbol(g);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("field 'g': ") + e.what());
  }
  try {
    sp.psi = parse_symbol(psi);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("field 'psi': ") + e.what());
  }
  return sp;
}

FockParams RunConfig::params() const {
  FockParams fp{alpha, p, q};
  try {
    fp.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("parameters: ") + e.what());
  }
  return fp;
}

CriteriaOptions RunConfig::criteria_options() const {
  CriteriaOptions o;
  if (grid.radii) o.w_radii = *grid.radii;
  if (grid.angles) o.w_angles = *grid.angles;
  if (grid.W) o.w_radius = *grid.W;
  if (grid.tol) o.b_tol = *grid.tol;
  return o;
}

void RunConfig::validate() const {
  if (id.empty() || id.find_first_of("/\\") != std::string::npos)
    throw ConfigError("field 'id': must be a nonempty name without path separators");
  op_kind();
  pair();
  params();
  if (grid.radii && *grid.radii < 1) throw ConfigError("field 'grid.radii': must be >= 1");
  if (grid.angles && *grid.angles < 1) throw ConfigError("field 'grid.angles': must be >= 1");
  if (grid.W && !(*grid.W > 0.0)) throw ConfigError("field 'grid.W': must be positive");
  if (grid.tol && !(*grid.tol > 1e-12 && *grid.tol < 1e-2))
    throw ConfigError("field 'grid.tol': must lie in (1e-12, 1e-2)");
}

json to_json(const RunConfig& c) {
  json grid = json::object();
  if (c.grid.radii) grid["radii"] = *c.grid.radii;
  if (c.grid.angles) grid["angles"] = *c.grid.angles;
  if (c.grid.W) grid["W"] = number_to_json(*c.grid.W);
  if (c.grid.tol) grid["tol"] = number_to_json(*c.grid.tol);
  json j = {{"id", c.id},
            {"op", c.op},
            {"g", c.g},
            {"psi", c.psi},
            {"alpha", number_to_json(c.alpha)},
            {"p", number_to_json(c.p)},
            {"q", number_to_json(c.q)},
            {"grid", grid},
            {"cross_checks", c.cross_checks}};
  if (!c.out_dir.empty()) j["out"] = c.out_dir;
  return j;
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known{"id", "op", "g", "psi", "alpha", "p", "q", "grid", "out", "cross_checks"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw ConfigError("unknown field '" + key + "'");
  RunConfig c;
  if (j.contains("id")) c.id = string_field(j, "id");
  c.op = string_field(j, "op");
  c.g = string_field(j, "g");
  if (j.contains("psi")) c.psi = string_field(j, "psi");
  if (j.contains("alpha")) c.alpha = number_from_json(j["alpha"], "alpha");
  if (j.contains("p")) c.p = number_from_json(j["p"], "p");
  if (j.contains("q")) c.q = number_from_json(j["q"], "q");
  if (j.contains("out")) c.out_dir = string_field(j, "out");
  if (j.contains("cross_checks")) {
    if (!j["cross_checks"].is_boolean()) throw ConfigError("field 'cross_checks': expected a boolean");
    c.cross_checks = j["cross_checks"].get<bool>();
  }
  if (j.contains("grid")) {
    const json& g = j["grid"];
    if (!g.is_object()) throw ConfigError("field 'grid': expected an object");
    for (const auto& [key, value] : g.items()) {
      if (key == "radii") c.grid.radii = int_field(value, "grid.radii");
      else if (key == "angles") c.grid.angles = int_field(value, "grid.angles");
      else if (key == "W") c.grid.W = number_from_json(value, "grid.W");
      else if (key == "tol") c.grid.tol = number_from_json(value, "grid.tol");
      else throw ConfigError("unknown field 'grid." + key + "'");
    }
  }
  c.validate();
  return c;
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(e.what());
  }
  return config_from_json(j);
}

std::vector<json> parse_corpus(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(e.what());
  }
  if (!j.is_array()) throw ConfigError("corpus must be a JSON array of configs");
  return {j.begin(), j.end()};
}

// ----------------------------------------------------------------- records

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Ok: return "ok";
    case RunStatus::ConfigError: return "config-error";
    case RunStatus::NumericFailure: return "numeric-failure";
  }
  return "?";
}

json to_json(const Verdict& v) {
  json numbers = json::object();
  for (const auto& [k, x] : v.numbers) numbers[k] = number_to_json(x);
  json tables = json::object();
  for (const auto& [k, t] : v.tables) tables[k] = vector_to_json(t);
  return {{"question", to_string(v.question)},
          {"route", to_string(v.route)},
          {"outcome", to_string(v.outcome)},
          {"label", v.label()},
          {"holds", v.holds},
          {"numbers", numbers},
          {"tables", tables},
          {"note", v.note}};
}

Verdict verdict_from_json(const json& j) {
  Verdict v;
  v.question = enum_from(string_field(j, "question"), kQuestions, "question");
  v.route = enum_from(string_field(j, "route"), kRoutes, "route");
  v.outcome = enum_from(string_field(j, "outcome"), kOutcomes, "outcome");
  v.holds = require(j, "holds").get<bool>();
  for (const auto& [k, x] : require(j, "numbers").items()) v.numbers[k] = number_from_json(x, k);
  for (const auto& [k, t] : require(j, "tables").items()) v.tables[k] = vector_from_json(t, k);
  v.note = string_field(j, "note");
  return v;
}

json to_json(const RunRecord& r) {
  json j = {{"config", to_json(r.config)},
            {"status", to_string(r.status)},
            {"error", r.error},
            {"version", r.version},
            {"wall_time_s", number_to_json(r.wall_time)}};
  if (r.assessment) j["verdicts"] = {{"bounded", to_json(r.assessment->bounded)},
                                     {"compact", to_json(r.assessment->compact)}};
  json checks = {{"note", r.checks.note}};
  if (r.checks.empirical) checks["empirical_norm"] = empirical_to_json(*r.checks.empirical);
  if (r.checks.probe) checks["compactness_probe"] = probe_to_json(*r.checks.probe);
  j["cross_checks"] = checks;
  if (!r.criterion.empty()) {
    json rows = json::array();
    for (const auto& s : r.samples)
      rows.push_back({number_to_json(s.z.real()), number_to_json(s.z.imag()), number_to_json(s.value)});
    j["samples"] = {{"field", r.criterion}, {"rows", rows}};
  }
  return j;
}

RunRecord record_from_json(const json& j) {
  RunRecord r;
  r.config = config_from_json(require(j, "config"));
  r.status = enum_from(string_field(j, "status"), kRunStatuses, "status");
  r.error = string_field(j, "error");
  r.version = string_field(j, "version");
  r.wall_time = number_from_json(require(j, "wall_time_s"), "wall_time_s");
  if (j.contains("verdicts")) {
    Assessment a;
    a.bounded = verdict_from_json(j["verdicts"].at("bounded"));
    a.compact = verdict_from_json(j["verdicts"].at("compact"));
    r.assessment = a;
  }
  const json& checks = require(j, "cross_checks");
  r.checks.note = string_field(checks, "note");
  if (checks.contains("empirical_norm")) r.checks.empirical = empirical_from_json(checks["empirical_norm"]);
  if (checks.contains("compactness_probe")) r.checks.probe = probe_from_json(checks["compactness_probe"]);
  if (j.contains("samples")) {
    r.criterion = string_field(j["samples"], "field");
    for (const auto& row : j["samples"].at("rows")) {
      const double re = number_from_json(row.at(0), "samples"), im = number_from_json(row.at(1), "samples");
      r.samples.push_back({cplx{re, im}, number_from_json(row.at(2), "samples")});
    }
  }
  return r;
}

std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

// -------------------------------------------------------------------- runs

RunRecord run_verdict(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.config = config;
  auto finish = [&] {
    rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
  };

  OperatorKind op;
  SymbolPair pair;
  FockParams params;
  try {
    config.validate();
    op = config.op_kind();
    pair = config.pair();
    params = config.params();
  } catch (const ConfigError& e) {
    rec.status = RunStatus::ConfigError;
    rec.error = e.what();
    return finish();
  }

  try {
    rec.assessment = assess(op, pair, params, config.criteria_options());

    const CriterionKind kind = sample_kind(op, params);
    rec.criterion = to_string(kind);
    const double W = config.grid.W.value_or(4.0);
    const int radii = config.grid.radii.value_or(3);
    const int angles = config.grid.angles.value_or(8);
    rec.samples = sample_criterion(kind, pair, params, W, radii, angles, config.grid.tol.value_or(1e-4));
  } catch (const std::exception& e) {
    rec.status = RunStatus::NumericFailure;
    rec.error = e.what();
    return finish();
  }

  if (config.cross_checks) {
    // Reduced family: the checks corroborate the verdict, they do not decide it.
    TestFamilySpec family;
    family.W = 4.0;
    family.radii = 3;
    family.angles = 4;
    family.monomials = 4;
    std::vector<std::string> notes;
    try {
      rec.checks.empirical = empirical_norm(op, pair, params, family, NormOptions{1e-5, 0});
    } catch (const std::exception& e) {
      notes.push_back(std::string("empirical_norm: ") + e.what());
    }
    try {
      rec.checks.probe = compactness_probe(op, pair, params, 0.5, 5, NormOptions{1e-5, 0});
    } catch (const std::exception& e) {
      notes.push_back(std::string("compactness_probe: ") + e.what());
    }
    for (std::size_t i = 0; i < notes.size(); ++i) rec.checks.note += (i ? "; " : "") + notes[i];
  }
  return finish();
}

std::string samples_csv(const std::vector<FieldSample>& samples) {
  std::string out = "re,im,value\n";
  for (const auto& s : samples)
    out += fmt17(s.z.real()) + "," + fmt17(s.z.imag()) + "," + fmt17(s.value) + "\n";
  return out;
}

void write_record(const RunRecord& record, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream(dir / (record.config.id + ".json")) << canonical_dump(to_json(record));
  if (!record.samples.empty()) std::ofstream(dir / (record.config.id + "_samples.csv")) << samples_csv(record.samples);
}

SuiteResult run_suite(const std::vector<json>& corpus) {
  SuiteResult out;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    char fallback[32];
    std::snprintf(fallback, sizeof fallback, "case-%03zu", i);
    const json& entry = corpus[i];
    RunConfig cfg;
    cfg.id = fallback;
    try {
      json j = entry;
      if (j.is_object() && !j.contains("id")) j["id"] = fallback;
      cfg = config_from_json(j);
    } catch (const std::exception& e) {
      if (entry.is_object() && entry.contains("id") && entry["id"].is_string()) cfg.id = entry["id"].get<std::string>();
      if (entry.is_object()) {
        for (const char* key : {"op", "g", "psi"})
          if (entry.contains(key) && entry[key].is_string()) {
            std::string& slot = key[0] == 'o' ? cfg.op : key[0] == 'g' ? cfg.g : cfg.psi;
            slot = entry[key].get<std::string>();
          }
      }
      RunRecord rec;
      rec.config = cfg;
      rec.status = RunStatus::ConfigError;
      rec.error = e.what();
      out.records.push_back(rec);
      continue;
    }
    out.records.push_back(run_verdict(cfg));
    if (out.records.back().status == RunStatus::NumericFailure) out.hard_failure = true;
  }
  std::stable_sort(out.records.begin(), out.records.end(),
                   [](const RunRecord& a, const RunRecord& b) { return a.config.id < b.config.id; });
  return out;
}

std::string summary_csv(const SuiteResult& suite) {
  std::ostringstream os;
  os << "case_id,status,op,bounded_route,bounded_outcome,compact_route,compact_outcome,norm_estimate,"
        "empirical_norm,error\n";
  for (const auto& r : suite.records) {
    os << csv_quote(r.config.id) << ',' << to_string(r.status) << ',' << csv_quote(r.config.op) << ',';
    if (r.assessment) {
      const Verdict& b = r.assessment->bounded;
      const Verdict& c = r.assessment->compact;
      os << to_string(b.route) << ',' << b.label() << ',' << to_string(c.route) << ',' << c.label() << ',';
      const auto it = b.numbers.find("norm_estimate");
      if (it != b.numbers.end()) os << fmt17(it->second);
    } else {
      os << ",,,,";
    }
    os << ',';
    if (r.checks.empirical) os << fmt17(r.checks.empirical->value);
    os << ',' << csv_quote(r.error) << '\n';
  }
  return os.str();
}

}  // namespace fockbench
