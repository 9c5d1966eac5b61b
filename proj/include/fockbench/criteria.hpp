#pragma once

// Characterizing transforms P_psi, Q_g, M, B and the boundedness /
// compactness verdicts built on them.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fockbench/fock.hpp"
#include "fockbench/operators.hpp"

namespace fockbench {

// ------------------------------------------------------------- transforms

/// P_psi(z) = e^{(alpha/2)(|psi|^2 - |z|^2)} / (1+|z|); log versions avoid overflow.
double log_P_psi(const SymbolPair& pair, double alpha, cplx z);
/// Q_g(z) = |g| e^{-alpha |z|^2/2} / (1+|z|).
double log_Q_g(const SymbolPair& pair, double alpha, cplx z);
double eval_P_psi(const SymbolPair& pair, double alpha, cplx z);
double eval_Q_g(const SymbolPair& pair, double alpha, cplx z);

enum class MVariant { G, GPsi };  // M_(g,psi) and M_(g(psi),psi)

/// M(z) = |g(z)| (|psi(z)|+1) P_psi(z), with g(psi(z)) in place of g(z) for GPsi.
double log_M(const SymbolPair& pair, double alpha, cplx z, MVariant variant);
double eval_M(const SymbolPair& pair, double alpha, cplx z, MVariant variant);

enum class BVariant { G, GPsi };  // B_(|g|^q,psi) and B_(|g(psi)|^q,psi)

struct BerezinValue {
  bool certified = false;  // false: no tail certificate (diverges or unknown)
  double value = 0.0;
  double error = 0.0;
};

/// Berezin-type transform at w (q < inf). Needs psi of degree <= 1 and a
/// Gaussian-dominated g; otherwise returns certified = false.
BerezinValue berezin_B(const SymbolPair& pair, const FockParams& params, cplx w, BVariant variant,
                       double tol = 1e-5);

/// Growth-rate data for the symbols entering M and B; empty unless psi is
/// affine and the (composed) symbol has a growth bound.
struct AffineData {
  cplx a, b;         // psi = a z + b
  GrowthBound g;     // bound for the symbol factor
  bool zero = false; // symbol factor vanishes identically
};
std::optional<AffineData> affine_data(const SymbolPair& pair, MVariant variant);
std::optional<AffineData> affine_data(const SymbolPair& pair, BVariant variant);

// ---------------------------------------------------------------- verdicts

enum class Question { Bounded, Compact };
enum class Route { Theorem1, Theorem2, Corollary1, Corollary2, VgDegreeRule, PsiInadmissible };
enum class Outcome { PositiveEvidence, NegativeEvidence, Exact, Inconclusive };

const char* to_string(Question q);
const char* to_string(Route r);
const char* to_string(Outcome o);

struct Verdict {
  Question question = Question::Bounded;
  Route route = Route::Theorem1;
  Outcome outcome = Outcome::Inconclusive;
  bool holds = false;  // the answer, for exact and evidence outcomes
  std::map<std::string, double> numbers;
  std::map<std::string, std::vector<double>> tables;
  std::string note;

  /// "exact-positive", "negative-evidence", ... ; "inconclusive".
  std::string label() const;
};

struct Assessment {
  Verdict bounded;
  Verdict compact;
};

/// Settings for the numeric routes.
struct CriteriaOptions {
  double b_tol = 1e-4;          // per-sample tolerance of B
  double w_radius = 8.0;        // w-grid extent
  int w_radii = 10;
  int w_angles = 16;
  std::vector<double> b_probes{1, 2, 4, 8, 16, 32, 64};
  int probe_angles = 4;
  double decay_r0 = 2.0;        // vanishing test radii decay_r0 * 2^n, n = 0..decay_steps-1
  int decay_steps = 6;
  double decay_factor = 10.0;
  int m_probe_angles = 64;
  double integral_tol = 1e-3;   // outer tolerance of the Theorem-2 integral
};

/// Exact answers from symbol classes, when available.
std::optional<Assessment> classify_special(OperatorKind op, const SymbolPair& pair, const FockParams& params);

/// p <= q; op in {J_g_psi, C_g_psi}. Does not look at params.p.
Assessment verdict_theorem1(OperatorKind op, const SymbolPair& pair, const FockParams& params,
                            const CriteriaOptions& opts = {});
/// q < p; op in {J_g_psi, C_g_psi}.
Assessment verdict_theorem2(OperatorKind op, const SymbolPair& pair, const FockParams& params,
                            const CriteriaOptions& opts = {});

/// Full dispatch for any operator: fast paths first, then the matching theorem.
Assessment assess(OperatorKind op, const SymbolPair& pair, const FockParams& params,
                  const CriteriaOptions& opts = {});

// ------------------------------------------------------ sampled fields

enum class CriterionKind { P_psi, Q_g, M_gpsi, M_gpsipsi, B_g, B_gpsi };
const char* to_string(CriterionKind k);
CriterionKind parse_criterion_kind(const std::string& tag);

struct FieldSample {
  cplx z;
  double value;
};

/// Samples on a polar grid of `radii` x `angles` points out to `radius`, plus the origin.
std::vector<FieldSample> sample_criterion(CriterionKind which, const SymbolPair& pair, const FockParams& params,
                                          double radius, int radii, int angles, double tol = 1e-5);

}  // namespace fockbench
