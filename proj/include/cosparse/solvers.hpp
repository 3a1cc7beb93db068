#pragma once

#include <optional>
#include <vector>

#include "cosparse/cosupport.hpp"
#include "cosparse/model.hpp"
#include "cosparse/operators.hpp"
#include "cosparse/types.hpp"

namespace cosparse {

enum class SolveStatus { Converged, MaxIterations, StaticStop };

const char* to_string(SolveStatus s);

struct RecoveryResult {
  Vector x_hat;
  Cosupport estimated_cosupport;
  Index iterations = 0;
  SolveStatus status = SolveStatus::Converged;
  bool indeterminate = false;  // stacked system did not pin the signal down
  // rows eliminated at each iteration (indices into the rows of Omega)
  std::vector<std::vector<Index>> eliminated;
};

struct GapConfig {
  double selection_factor = 1.0;   // t in (0, 1]
  double lambda = 0.0;             // 0 = auto: 1e-6 * (|M| / |Omega|)^2
  std::optional<Index> target_cosparsity;
  Index max_iterations = 0;        // 0 = no extra cap beyond the stop rule
  bool stop_on_static = true;
  double static_tol = 1e-8;
  bool matrix_free = false;
  // matrix-free mode eliminates at most max(1, ceil(fraction * active)) rows
  // per iteration; dense mode removes the full threshold set
  double elimination_cap_fraction = 0.02;
  double cg_tol = 1e-10;
  Index cg_max_iter = 2000;
};

// Minimizer of |y - M x|^2 + lambda |Omega_active x|^2, solved as a stacked
// least-squares problem on [M; sqrt(lambda) Omega_active]. Dense by default;
// conjugate-gradient when either operator only exists as a map.
Vector regularized_analysis_ls(const MeasurementSystem& m, const AnalysisOperator& omega_active,
                               const Vector& y, double lambda);

// Exact minimizer of |Omega x|_2 subject to M x = y, through the null-space
// parametrization x = x_pinv + W' alpha. Dense operators only.
Vector constrained_min_analysis_l2(const MeasurementSystem& m, const AnalysisOperator& omega,
                                   const Vector& y);

// Greedy cosupport carving: start from all rows, repeatedly eliminate the
// rows with the largest analysis coefficients, refit, and stop once only a
// plausible cosupport is left. Dense mode refits with the exact constrained
// minimizer; matrix-free mode uses the lambda-regularized stack via CG.
RecoveryResult gap_solve(const MeasurementSystem& m, const Vector& y,
                         const AnalysisOperator& omega, const GapConfig& cfg = {});

struct L1Result {
  Vector x;
  bool converged = false;
  Index iterations = 0;
  double primal_change = 0.0;
  double constraint_residual = 0.0;
  double duality_gap = 0.0;  // |Omega x|_1 minus its dual certificate value
};

// Approximate minimizer of |Omega x|_1 subject to M x = y by a first-order
// primal-dual scheme. With dense operators the constraint is eliminated
// through the null-space parametrization, so the returned point satisfies
// M x = y exactly; in matrix-free mode the constraint is handled by a dual
// variable and converges to tolerance.
L1Result analysis_l1_solve(const MeasurementSystem& m, const Vector& y,
                           const AnalysisOperator& omega, double tol = 1e-9,
                           Index max_iter = 100000);

// Estimate the cosupport of x_raw, then solve the stacked system
// [M; Omega_cosupport] x = [y; 0] exactly in the least-squares sense.
RecoveryResult debias(const Vector& x_raw, const AnalysisOperator& omega,
                      const MeasurementSystem& m, const Vector& y,
                      double zero_tol = 1e-6);

}  // namespace cosparse
