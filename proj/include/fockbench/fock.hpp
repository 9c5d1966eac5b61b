#pragma once

// Fock norms, reproducing kernels and Littlewood-Paley quantities.

#include <limits>
#include <string>
#include <vector>

#include "fockbench/expr.hpp"
#include "fockbench/quadrature.hpp"

namespace fockbench {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct FockParams {
  double alpha = 1.0;
  double p = 2.0;
  double q = 2.0;

  /// Throws std::invalid_argument unless alpha > 0 and p, q in (0, inf].
  void validate() const;
  bool p_le_q() const { return p <= q; }
};

struct FockFunction {
  EntireExpr expr;
  double alpha = 1.0;
};

enum class NormStatus {
  Finite,      // value is the norm (within tolerance)
  LowerBound,  // p = inf and the sup was not certified as attained inside
  Diverges,    // no Gaussian certificate: norm treated as infinite
};

const char* to_string(NormStatus s);

struct NormResult {
  NormStatus status = NormStatus::Finite;
  double value = 0.0;
  double error = 0.0;
  bool attained_inside = true;  // meaningful for p = inf

  bool finite() const { return status != NormStatus::Diverges; }
};

struct NormOptions {
  double tol = 1e-7;
  int refine = 0;  // extra refinement levels (grid doubling) for stability checks

  QuadOptions quad() const;
  SupOptions sup() const;
};

/// ||f||_p in F_alpha^p; p = kInfinity gives the growth-space norm.
NormResult fock_norm(const EntireExpr& f, double p, double alpha, const NormOptions& opts = {});
inline NormResult fock_norm(const FockFunction& f, double p, const NormOptions& opts = {}) {
  return fock_norm(f.expr, p, f.alpha, opts);
}

/// Norm of a function known only through log|f| and a growth bound for it.
NormResult fock_norm_from_log(const std::function<double(cplx)>& log_abs, const GrowthBound& growth, double p,
                              double alpha, const NormOptions& opts = {});

/// K_w(z) = exp(alpha z conj(w)).
EntireExpr kernel(cplx w, double alpha);
/// k_w(z) = exp(alpha z conj(w) - alpha |w|^2 / 2).
EntireExpr normalized_kernel(cplx w, double alpha);

/// Derivative form of the norm: (|f(0)|^p + int |f'|^p (1+|z|)^-p e^{-p alpha |z|^2/2})^{1/p},
/// and |f(0)| + sup |f'| (1+|z|)^-1 e^{-alpha |z|^2/2} for p = inf.
NormResult littlewood_paley_rhs(const EntireExpr& f, double p, double alpha, const NormOptions& opts = {});

/// max over samples of |f'(z)| / ((1+|z|) e^{alpha |z|^2/2} ||f||_p).
double pointwise_derivative_bound_ratio(const EntireExpr& f, double p, double alpha,
                                        const std::vector<cplx>& samples, const NormOptions& opts = {});

struct WindowEntry {
  std::string name;
  double lhs = 0.0;  // fock norm
  double rhs = 0.0;  // Littlewood-Paley form
  double ratio = 0.0;
};

struct LpWindow {
  std::vector<WindowEntry> entries;
  double lo = 0.0;  // min ratio
  double hi = 0.0;  // max ratio
  double spread() const { return lo > 0.0 ? hi / lo : kInfinity; }
};

/// Ratios rhs/lhs over the standard family {1, z, z^2, exp(0.2 z^2), k_w for the given w}.
LpWindow littlewood_paley_window(double p, double alpha, const std::vector<cplx>& kernel_points,
                                 const NormOptions& opts = {});

}  // namespace fockbench
