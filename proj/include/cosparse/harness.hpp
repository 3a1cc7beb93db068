#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cosparse/operators.hpp"
#include "cosparse/solvers.hpp"
#include "cosparse/types.hpp"

namespace cosparse {

enum class Algorithm { Gap, L1, Backprojection };

const char* to_string(Algorithm a);

// Exact recovery sends the ratio to infinity; everything downstream (CSV,
// trend checks) wants finite numbers, so it is capped here instead.
inline constexpr double kSnrSentinelDb = 300.0;

// 20 log10(|x| / |x - x_hat|), reported as the sentinel once the error falls
// below numerical precision (1e-12 relative). A zero reference signal has no
// meaningful ratio and reports 0.
double snr_db(const Vector& x, const Vector& x_hat);

// Adjoint of the measurement map applied to y, rescaled by the least-squares
// fit of a single scalar gain.
Vector backproject(const MeasurementSystem& m, const Vector& y);

// k equispaced grid points (1/k, 2/k, ..., 1)
std::vector<double> unit_grid(Index k);

// Success-rate map over (delta, rho) at a fixed overcompleteness sigma. Each
// cell uses m = round(delta d), l = d - round(rho m), p = round(sigma d) and
// draws `trials` fresh instances: Gaussian M, random tight frame Omega, a
// signal with cosupport size l. Recovery counts as success when the relative
// error is below success_tol. The l1 route runs the debias pass afterwards.
struct PhaseDiagramConfig {
  double sigma = 2.0;
  Index d = 200;
  std::vector<double> delta_values;  // in (0, 1]
  std::vector<double> rho_values;    // in (0, 1]
  Index trials = 20;
  double success_tol = 1e-6;
  Algorithm algorithm = Algorithm::Gap;
  uint64_t seed = 0;
  int jobs = 1;  // worker threads; cells are independent
  double l1_tol = 1e-9;
  Index l1_max_iterations = 100000;
};

struct PhaseGrid {
  double sigma = 0.0;
  Index d = 0;
  std::vector<double> delta_values;
  std::vector<double> rho_values;
  Index trials = 0;
  double success_tol = 1e-6;
  Algorithm algorithm = Algorithm::Gap;
  uint64_t seed = 0;
  Matrix rate;       // rho index (row) x delta index (column); NaN = infeasible
  Matrix successes;  // raw counts; -1 = infeasible

  Index p() const;
  Index m_at(Index delta_index) const;
  Index l_at(Index rho_index, Index delta_index) const;
  bool feasible_at(Index rho_index, Index delta_index) const;
};

// Deterministic for a fixed config: every (cell, trial) derives its own seed,
// so results do not depend on the number of workers.
PhaseGrid run_phase_diagram(const PhaseDiagramConfig& cfg);

// Radial-line tomography of the Shepp-Logan phantom: measure with
// radial_fourier_system(n, lines), recover, and compare against the truth.
struct PhantomConfig {
  bool modified_contrast = false;
  double success_tol = 1e-6;
  // Forced to matrix-free. The preset eliminates whole coefficient chunks per
  // iteration (a tiny selection factor hands control to the cap) and skips
  // the static stop, whose consecutive-solution test is blind below the
  // accuracy of warm-started CG and fires mid-carve.
  GapConfig gap = {.selection_factor = 1e-3, .stop_on_static = false,
                   .elimination_cap_fraction = 0.005};
  double l1_tol = 1e-7;
  Index l1_max_iterations = 100000;
  double missed_zero_tol = 1e-6;
  // cosupport threshold for the refits after the carve, sized to sit between
  // the carve's coefficient noise and the smallest phantom contrast step
  // (0.01 absolute, about 1.5e-4 of the image norm)
  double gap_debias_tol = 1e-5;
};

struct PhantomRun {
  Index n = 0;
  Index lines = 0;
  Index m = 0;
  Algorithm algorithm = Algorithm::Gap;
  double snr_db = 0.0;
  bool exact = false;       // relative error below success_tol
  bool degenerate = false;  // no measurements taken (lines = 0)
  SolveStatus status = SolveStatus::Converged;
  Index iterations = 0;
  Matrix recovered;    // n x n image
  Matrix missed_mask;  // 1 at pixels touching a difference the recovery
                       // declared zero while the truth is nonzero
};

PhantomRun run_phantom_recovery(Index n, Index lines, Algorithm algorithm,
                                const PhantomConfig& cfg = {});

struct SnrEntry {
  Index n = 0;
  Index lines = 0;
  Index m = 0;
  Algorithm algorithm = Algorithm::Gap;
  double snr_db = 0.0;
  std::string status;  // ok | degenerate | max-iter | error
};

// Sweep of line counts; individual failures are recorded and the sweep
// continues.
std::vector<SnrEntry> run_snr_vs_lines(Index n, const std::vector<Index>& line_counts,
                                       const std::vector<Algorithm>& algorithms,
                                       const PhantomConfig& cfg = {});

}  // namespace cosparse
