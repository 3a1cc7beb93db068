#include "cosparse/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "cosparse/model.hpp"
#include "cosparse/phantom.hpp"
#include "cosparse/rng.hpp"

namespace cosparse {

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Gap: return "gap";
    case Algorithm::L1: return "l1";
    case Algorithm::Backprojection: return "backprojection";
  }
  return "?";
}

double snr_db(const Vector& x, const Vector& x_hat) {
  const double ref = x.norm();
  if (ref == 0.0) return 0.0;
  const double err = (x_hat - x).norm();
  // below numerical precision the ratio measures roundoff, not recovery
  // quality, so such recoveries all report the sentinel
  if (err <= 1e-12 * ref) return kSnrSentinelDb;
  return std::min(kSnrSentinelDb, 20.0 * std::log10(ref / err));
}

Vector backproject(const MeasurementSystem& m, const Vector& y) {
  require(y.size() == m.m(), "backproject: dimension mismatch");
  const Vector bp = m.apply_adjoint(y);
  const Vector z = m.apply(bp);
  const double den = z.squaredNorm();
  if (den == 0.0) return Vector::Zero(m.d());
  return (y.dot(z) / den) * bp;
}

std::vector<double> unit_grid(Index k) {
  require(k >= 1, "unit_grid: need k >= 1");
  std::vector<double> out(static_cast<size_t>(k));
  for (Index i = 0; i < k; ++i)
    out[static_cast<size_t>(i)] = static_cast<double>(i + 1) / static_cast<double>(k);
  return out;
}

Index PhaseGrid::p() const { return static_cast<Index>(std::llround(sigma * static_cast<double>(d))); }

Index PhaseGrid::m_at(Index delta_index) const {
  return static_cast<Index>(
      std::llround(delta_values[static_cast<size_t>(delta_index)] * static_cast<double>(d)));
}

Index PhaseGrid::l_at(Index rho_index, Index delta_index) const {
  const double rho = rho_values[static_cast<size_t>(rho_index)];
  return d - static_cast<Index>(std::llround(rho * static_cast<double>(m_at(delta_index))));
}

bool PhaseGrid::feasible_at(Index rho_index, Index delta_index) const {
  const Index m = m_at(delta_index);
  const Index l = l_at(rho_index, delta_index);
  return m >= 1 && m <= d && l < d && l <= p();
}

namespace {

bool phase_trial(const PhaseDiagramConfig& cfg, Index m_count, Index l, Index p, uint64_t base) {
  try {
    const AnalysisOperator omega =
        random_tight_frame_operator(p, cfg.d, derive_seed(base, 1));
    const Vector x0 = generate_cosparse_signal(omega, l, derive_seed(base, 2));
    const MeasurementSystem meas = gaussian_measurement(m_count, cfg.d, derive_seed(base, 3));
    const Vector y = meas.apply(x0);

    Vector x_hat;
    if (m_count == cfg.d) {
      // square system, the constraint alone pins the signal down
      x_hat = meas.dense().colPivHouseholderQr().solve(y);
    } else if (cfg.algorithm == Algorithm::L1) {
      const L1Result raw = analysis_l1_solve(meas, y, omega, cfg.l1_tol, cfg.l1_max_iterations);
      x_hat = debias(raw.x, omega, meas, y).x_hat;
    } else {
      x_hat = gap_solve(meas, y, omega).x_hat;
    }
    return (x_hat - x0).norm() <= cfg.success_tol * x0.norm();
  } catch (const NumericalError&) {
    return false;
  }
}

}  // namespace

PhaseGrid run_phase_diagram(const PhaseDiagramConfig& cfg) {
  require(cfg.d >= 2, "run_phase_diagram: need d >= 2");
  require(cfg.sigma > 0.0, "run_phase_diagram: need sigma > 0");
  require(cfg.trials >= 1, "run_phase_diagram: need trials >= 1");
  require(cfg.success_tol > 0.0, "run_phase_diagram: need success_tol > 0");
  require(!cfg.delta_values.empty() && !cfg.rho_values.empty(),
          "run_phase_diagram: empty grid");
  require(cfg.algorithm != Algorithm::Backprojection,
          "run_phase_diagram: backprojection is not a recovery algorithm here");
  for (double v : cfg.delta_values)
    require(v > 0.0 && v <= 1.0, "run_phase_diagram: delta outside (0, 1]");
  for (double v : cfg.rho_values)
    require(v > 0.0 && v <= 1.0, "run_phase_diagram: rho outside (0, 1]");

  PhaseGrid grid;
  grid.sigma = cfg.sigma;
  grid.d = cfg.d;
  grid.delta_values = cfg.delta_values;
  grid.rho_values = cfg.rho_values;
  grid.trials = cfg.trials;
  grid.success_tol = cfg.success_tol;
  grid.algorithm = cfg.algorithm;
  grid.seed = cfg.seed;

  const Index n_rho = static_cast<Index>(cfg.rho_values.size());
  const Index n_delta = static_cast<Index>(cfg.delta_values.size());
  grid.rate.setConstant(n_rho, n_delta, std::numeric_limits<double>::quiet_NaN());
  grid.successes.setConstant(n_rho, n_delta, -1.0);

  const Index cells = n_rho * n_delta;
  std::atomic<Index> next{0};
  auto worker = [&]() {
    while (true) {
      const Index c = next.fetch_add(1);
      if (c >= cells) break;
      const Index i = c / n_delta, j = c % n_delta;
      if (!grid.feasible_at(i, j)) continue;
      const Index m_count = grid.m_at(j), l = grid.l_at(i, j);
      Index hits = 0;
      for (Index k = 0; k < cfg.trials; ++k) {
        const uint64_t base = derive_seed(cfg.seed, static_cast<uint64_t>(i),
                                          static_cast<uint64_t>(j), static_cast<uint64_t>(k));
        if (phase_trial(cfg, m_count, l, grid.p(), base)) ++hits;
      }
      grid.successes(i, j) = static_cast<double>(hits);
      grid.rate(i, j) = static_cast<double>(hits) / static_cast<double>(cfg.trials);
    }
  };

  const int jobs = std::max(1, cfg.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(jobs));
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return grid;
}

namespace {

Matrix missed_mask_from(const PixelGraph& graph, const Vector& true_coeffs,
                        const Cosupport& estimated) {
  Matrix mask = Matrix::Zero(graph.n, graph.n);
  for (Index r : estimated.rows()) {
    if (true_coeffs[r] == 0.0) continue;
    const auto [a, b] = graph.edge_endpoints(r);
    mask(a / graph.n, a % graph.n) = 1.0;
    mask(b / graph.n, b % graph.n) = 1.0;
  }
  return mask;
}

}  // namespace

PhantomRun run_phantom_recovery(Index n, Index lines, Algorithm algorithm,
                                const PhantomConfig& cfg) {
  require(lines >= 0, "run_phantom_recovery: negative line count");
  const Matrix img = shepp_logan_phantom(n, cfg.modified_contrast);
  const Vector x = image_to_vector(img);
  const AnalysisOperator omega = finite_difference_2d(n);
  const Vector coeffs = omega.apply(x);
  const PixelGraph graph(n);

  PhantomRun run;
  run.n = n;
  run.lines = lines;
  run.algorithm = algorithm;

  if (lines == 0) {
    run.degenerate = true;
    run.snr_db = snr_db(x, Vector::Zero(n * n));
    run.recovered = Matrix::Zero(n, n);
    run.missed_mask = missed_mask_from(graph, coeffs, Cosupport::full(omega.p()));
    return run;
  }

  const MeasurementSystem meas = radial_fourier_system(n, lines);
  run.m = meas.m();
  const Vector y = meas.apply(x);

  Vector x_hat;
  Cosupport estimated = Cosupport::empty(omega.p());
  switch (algorithm) {
    case Algorithm::Gap: {
      GapConfig g = cfg.gap;
      g.matrix_free = true;
      // The carve is run all the way down: early eliminations are polluted by
      // the ringing of the radial backprojection, so stopping at the phantom's
      // own cosparsity keeps wrong rows, while over-carving still sharpens the
      // iterate. The cosupport is then re-read off the sharp image and refit,
      // twice; the second pass starts from an essentially exact iterate and
      // settles on the true cosupport.
      const RecoveryResult carve = gap_solve(meas, y, omega, g);
      RecoveryResult res = debias(carve.x_hat, omega, meas, y, cfg.gap_debias_tol);
      res = debias(res.x_hat, omega, meas, y, cfg.gap_debias_tol);
      x_hat = res.x_hat;
      estimated = res.estimated_cosupport;
      run.status = res.status;
      run.iterations = carve.iterations;
      break;
    }
    case Algorithm::L1: {
      const L1Result raw = analysis_l1_solve(meas, y, omega, cfg.l1_tol, cfg.l1_max_iterations);
      const RecoveryResult deb = debias(raw.x, omega, meas, y, cfg.missed_zero_tol);
      x_hat = deb.x_hat;
      estimated = deb.estimated_cosupport;
      run.status = raw.converged ? deb.status : SolveStatus::MaxIterations;
      run.iterations = raw.iterations;
      break;
    }
    case Algorithm::Backprojection: {
      x_hat = backproject(meas, y);
      estimated = cosupport_of(omega, x_hat, cfg.missed_zero_tol);
      break;
    }
  }

  run.snr_db = snr_db(x, x_hat);
  run.exact = (x_hat - x).norm() <= cfg.success_tol * x.norm();
  run.recovered = vector_to_image(x_hat, n);
  run.missed_mask = missed_mask_from(graph, coeffs, estimated);
  return run;
}

std::vector<SnrEntry> run_snr_vs_lines(Index n, const std::vector<Index>& line_counts,
                                       const std::vector<Algorithm>& algorithms,
                                       const PhantomConfig& cfg) {
  std::vector<SnrEntry> out;
  for (Index lines : line_counts) {
    for (Algorithm alg : algorithms) {
      SnrEntry entry;
      entry.n = n;
      entry.lines = lines;
      entry.algorithm = alg;
      try {
        const PhantomRun run = run_phantom_recovery(n, lines, alg, cfg);
        entry.m = run.m;
        entry.snr_db = run.snr_db;
        entry.status = run.degenerate                            ? "degenerate"
                       : run.status == SolveStatus::MaxIterations ? "max-iter"
                                                                  : "ok";
      } catch (const NumericalError&) {
        entry.status = "error";
      }
      out.push_back(entry);
    }
  }
  return out;
}

}  // namespace cosparse
