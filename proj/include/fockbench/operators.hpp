#pragma once

// Integral, multiplication and composition-type operators induced by a pair
// of entire symbols (g, psi), and empirical estimates of their norms.
//
//   Vg      f -> int_0^z f g'
//   Jg      f -> int_0^z f' g
//   Mg      f -> g f
//   Vg_psi  f -> int_0^z (f o psi) g'
//   Cg_psi  f -> int_0^psi(z) f g'
//   J_g_psi f -> int_0^z (f' o psi) g
//   C_g_psi f -> int_0^psi(z) f' g
//
// Every path is the straight segment from 0 to the endpoint.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fockbench/expr.hpp"
#include "fockbench/fock.hpp"
#include "fockbench/quadrature.hpp"

namespace fockbench {

enum class OperatorKind { Vg, Jg, Mg, Vg_psi, Cg_psi, J_g_psi, C_g_psi };

const char* to_string(OperatorKind op);
/// Accepts the tags printed by to_string; throws std::invalid_argument otherwise.
OperatorKind parse_operator_kind(std::string_view tag);
bool uses_psi(OperatorKind op);

struct SymbolPair {
  EntireExpr g;
  EntireExpr psi = EntireExpr::variable();
};

/// (T f)(z) by direct path integration.
cplx apply(OperatorKind op, const SymbolPair& pair, const EntireExpr& f, cplx z, double tol = 1e-12);

/// T f written as at_zero + int_0^z derivative (or as `value` when explicit).
struct OperatorImage {
  bool is_explicit = false;
  EntireExpr value;       // explicit form (Mg)
  EntireExpr derivative;  // (T f)'
  cplx at_zero{};         // (T f)(0)

  /// Bound on |T f| for all z; empty when no bound is available.
  std::optional<GrowthBound> growth() const;
  cplx operator()(cplx z, double tol = 1e-12) const;
};

OperatorImage image(OperatorKind op, const SymbolPair& pair, const EntireExpr& f);

/// Scaled values of T f at every node of the grid (layout of integrate_nodal),
/// computed by running integrals along rays.
std::vector<ScaledValue> sweep_image(const OperatorImage& img, const PolarGrid& grid);

/// ||T f||_q in F_alpha^q.
NormResult image_norm(const OperatorImage& img, double q, double alpha, const NormOptions& opts = {});

struct TestFamilySpec {
  double W = 8.0;     // kernel points on |w| <= W
  int radii = 12;     // radii W i / radii, i = 1..radii
  int angles = 16;
  int monomials = 12; // z^n for n = 0..monomials
};

struct FamilyMember {
  std::string id;
  EntireExpr f;
  double norm = 1.0;  // ||f||_p (closed form)
};

/// Kernels k_w first (radius-major, then angle), then monomials by degree.
std::vector<FamilyMember> test_family(const TestFamilySpec& spec, double p, double alpha);

struct EmpiricalNorm {
  NormStatus status = NormStatus::Finite;
  double value = 0.0;  // lower bound for the operator norm
  std::string witness;
  std::vector<double> ratios;  // per family member, family order
};

EmpiricalNorm empirical_norm(OperatorKind op, const SymbolPair& pair, const FockParams& params,
                             const TestFamilySpec& spec = {}, const NormOptions& opts = {1e-5, 0});

struct ProbeResult {
  std::vector<double> radii;
  std::vector<double> norms;  // ||T k_w||_q at w = radius (real axis)
  bool diverges = false;
  bool decaying = false;      // last <= first / 10
};

/// Image norms of k_w for |w| = r0 2^n, n = 0..count-1.
ProbeResult compactness_probe(OperatorKind op, const SymbolPair& pair, const FockParams& params, double r0 = 2.0,
                              int count = 6, const NormOptions& opts = {1e-5, 0});

}  // namespace fockbench
