#pragma once

// Run configurations, verdict records and their JSON / CSV forms.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fockbench/criteria.hpp"
#include "fockbench/operators.hpp"

namespace fockbench {

inline constexpr const char* kToolVersion = "fockbench 0.1.0";

/// Malformed configuration (bad JSON, missing field, unparseable symbol).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct GridOverrides {
  std::optional<int> radii;
  std::optional<int> angles;
  std::optional<double> W;
  std::optional<double> tol;
};

struct RunConfig {
  std::string id = "run";
  std::string op = "Jg";
  std::string g = "1";
  std::string psi = "z";
  double alpha = 1.0;
  double p = 2.0;
  double q = 2.0;
  GridOverrides grid;
  std::string out_dir;
  bool cross_checks = true;

  OperatorKind op_kind() const;
  SymbolPair pair() const;
  FockParams params() const;
  CriteriaOptions criteria_options() const;
  /// Throws ConfigError on any invalid field.
  void validate() const;
};

/// JSON numbers with "inf" / "-inf" / "nan" strings for non-finite values.
nlohmann::json number_to_json(double x);
double number_from_json(const nlohmann::json& j, const std::string& field);

nlohmann::json to_json(const RunConfig& c);
RunConfig config_from_json(const nlohmann::json& j);
/// Parses text; syntax errors carry the byte offset.
RunConfig parse_config(const std::string& text);
std::vector<nlohmann::json> parse_corpus(const std::string& text);

struct CrossChecks {
  std::optional<EmpiricalNorm> empirical;
  std::optional<ProbeResult> probe;
  std::string note;
};

enum class RunStatus { Ok, ConfigError, NumericFailure };
const char* to_string(RunStatus s);

struct RunRecord {
  RunConfig config;
  RunStatus status = RunStatus::Ok;
  std::string error;
  std::optional<Assessment> assessment;
  CrossChecks checks;
  std::string criterion;             // which field the samples show
  std::vector<FieldSample> samples;
  std::string version = kToolVersion;
  double wall_time = 0.0;            // seconds; not part of determinism
};

nlohmann::json to_json(const Verdict& v);
Verdict verdict_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunRecord& r);
RunRecord record_from_json(const nlohmann::json& j);
/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string canonical_dump(const nlohmann::json& j);

/// classify_special / theorem dispatch, cross-checks and field samples.
RunRecord run_verdict(const RunConfig& config);

/// Rows "re,im,value" with 17 significant digits, preceded by a header.
std::string samples_csv(const std::vector<FieldSample>& samples);

/// Writes <dir>/<id>.json and, when samples exist, <dir>/<id>_samples.csv.
void write_record(const RunRecord& record, const std::filesystem::path& dir);

struct SuiteResult {
  std::vector<RunRecord> records;  // sorted by case id
  bool hard_failure = false;
};

/// Runs every corpus entry in isolation; entries without "id" get "case-NNN".
SuiteResult run_suite(const std::vector<nlohmann::json>& corpus);
std::string summary_csv(const SuiteResult& suite);

}  // namespace fockbench
