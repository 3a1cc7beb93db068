#include <cmath>
#include <vector>

#include "cosparse/harness.hpp"
#include "cosparse/model.hpp"
#include "cosparse/operators.hpp"
#include "cosparse/phantom.hpp"
#include "cosparse/rng.hpp"
#include "doctest.h"

using namespace cosparse;

TEST_CASE("snr is the log ratio of signal to error norm") {
  Rng rng(0x201);
  const Vector x = rng.normal_vector(40);
  Vector noise = rng.normal_vector(40);
  noise *= 0.1 * x.norm() / noise.norm();
  CHECK(snr_db(x, x + noise) == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(snr_db(x, Vector::Zero(40)) == doctest::Approx(0.0));
}

TEST_CASE("snr sentinel marks numerically exact recovery") {
  Rng rng(0x202);
  const Vector x = rng.normal_vector(10);
  CHECK(snr_db(x, x) == kSnrSentinelDb);
  Vector close = x;
  close[0] += 1e-14 * x.norm();
  CHECK(snr_db(x, close) == kSnrSentinelDb);
  CHECK(snr_db(Vector::Zero(5), Vector::Ones(5)) == 0.0);
}

TEST_CASE("backprojection applies the adjoint with a least-squares gain") {
  Rng rng(0x203);
  const auto m = MeasurementSystem::from_dense(rng.normal_matrix(6, 15));
  const Vector y = rng.normal_vector(6);
  const Vector x_hat = backproject(m, y);

  // x_hat = g M' y with the scalar g minimizing |y - g M M' y|
  const Vector z = m.apply(m.apply_adjoint(y));
  CHECK(std::abs((y - m.apply(x_hat)).dot(z)) <= 1e-10 * y.norm() * z.norm());
  CHECK(backproject(m, Vector::Zero(6)).norm() == 0.0);
  CHECK_THROWS_AS(backproject(m, Vector::Zero(5)), std::invalid_argument);
}

TEST_CASE("unit grid spans (0, 1] uniformly") {
  const auto g = unit_grid(4);
  REQUIRE(g.size() == 4);
  CHECK(g[0] == doctest::Approx(0.25));
  CHECK(g[3] == doctest::Approx(1.0));
}

TEST_CASE("phase grid cell arithmetic") {
  PhaseGrid g;
  g.sigma = 2.0;
  g.d = 200;
  g.delta_values = {0.625, 1.0};
  g.rho_values = {0.375};
  CHECK(g.p() == 400);
  CHECK(g.m_at(0) == 125);
  CHECK(g.m_at(1) == 200);
  CHECK(g.l_at(0, 0) == 200 - 47);  // round(0.375 * 125) = 47
  CHECK(g.feasible_at(0, 0));
}

TEST_CASE("phase diagram on a tiny grid: shapes, feasibility, full-sampling column") {
  PhaseDiagramConfig cfg;
  cfg.sigma = 1.5;
  cfg.d = 24;
  cfg.delta_values = {0.5, 1.0};
  cfg.rho_values = {0.25, 0.75};
  cfg.trials = 4;
  cfg.algorithm = Algorithm::Gap;
  cfg.seed = 3;

  const PhaseGrid g = run_phase_diagram(cfg);
  REQUIRE(g.rate.rows() == 2);
  REQUIRE(g.rate.cols() == 2);
  CHECK(g.p() == 36);

  // delta = 1 means m = d: the cell is solved directly and always succeeds
  CHECK(g.rate(0, 1) == 1.0);
  CHECK(g.rate(1, 1) == 1.0);
  // frozen outcomes for this seed
  CHECK(g.rate(0, 0) == 0.25);
  CHECK(g.rate(1, 0) == 0.0);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) {
      CHECK(g.feasible_at(i, j));
      CHECK(g.successes(i, j) == g.rate(i, j) * cfg.trials);
    }
}

TEST_CASE("phase diagram is deterministic and worker-count independent") {
  PhaseDiagramConfig cfg;
  cfg.sigma = 1.5;
  cfg.d = 20;
  cfg.delta_values = {0.6, 1.0};
  cfg.rho_values = {0.5};
  cfg.trials = 3;
  cfg.algorithm = Algorithm::Gap;
  cfg.seed = 11;

  const PhaseGrid a = run_phase_diagram(cfg);
  const PhaseGrid b = run_phase_diagram(cfg);
  cfg.jobs = 2;
  const PhaseGrid c = run_phase_diagram(cfg);
  CHECK(a.successes == b.successes);
  CHECK(a.successes == c.successes);
}

TEST_CASE("phase diagram marks impossible cells instead of running them") {
  PhaseDiagramConfig cfg;
  cfg.sigma = 0.5;  // undercomplete: large cosupports cannot fit into p rows
  cfg.d = 24;
  cfg.delta_values = {0.02, 1.0};
  cfg.rho_values = {0.1};
  cfg.trials = 2;
  cfg.seed = 1;

  const PhaseGrid g = run_phase_diagram(cfg);
  // m = round(0.02 * 24) = 0: no measurements
  CHECK_FALSE(g.feasible_at(0, 0));
  CHECK(std::isnan(g.rate(0, 0)));
  CHECK(g.successes(0, 0) == -1.0);
  // m = 24, l = 24 - 2 = 22 > p = 12: no such cosupport
  CHECK_FALSE(g.feasible_at(0, 1));
  CHECK(std::isnan(g.rate(0, 1)));
}

TEST_CASE("phase diagram through the l1 route") {
  PhaseDiagramConfig cfg;
  cfg.sigma = 1.5;
  cfg.d = 16;
  cfg.delta_values = {0.75};
  cfg.rho_values = {0.25};
  cfg.trials = 2;
  cfg.algorithm = Algorithm::L1;
  cfg.seed = 7;

  const PhaseGrid g = run_phase_diagram(cfg);
  CHECK(g.m_at(0) == 12);
  CHECK(g.l_at(0, 0) == 13);
  CHECK(g.rate(0, 0) == 1.0);
}

TEST_CASE("phase diagram rejects broken configurations") {
  PhaseDiagramConfig good;
  good.delta_values = {0.5};
  good.rho_values = {0.5};

  auto broken = good;
  broken.trials = 0;
  CHECK_THROWS_AS(run_phase_diagram(broken), std::invalid_argument);
  broken = good;
  broken.d = 1;
  CHECK_THROWS_AS(run_phase_diagram(broken), std::invalid_argument);
  broken = good;
  broken.sigma = 0.0;
  CHECK_THROWS_AS(run_phase_diagram(broken), std::invalid_argument);
  broken = good;
  broken.delta_values = {};
  CHECK_THROWS_AS(run_phase_diagram(broken), std::invalid_argument);
  broken = good;
  broken.rho_values = {1.5};
  CHECK_THROWS_AS(run_phase_diagram(broken), std::invalid_argument);
  broken = good;
  broken.algorithm = Algorithm::Backprojection;
  CHECK_THROWS_AS(run_phase_diagram(broken), std::invalid_argument);
}

TEST_CASE("phantom analysis counts are frozen per size and identical across variants") {
  struct Expect {
    Index n, p, nnz, regions;
  };
  // nonzero one-step differences, and connected constant regions = dim of the
  // analysis subspace the image lives in
  const Expect table[] = {{16, 480, 101, 9}, {32, 1984, 263, 34}, {64, 8064, 610, 44}};
  for (const auto& e : table)
    for (bool modified : {false, true}) {
      CAPTURE(e.n);
      CAPTURE(modified);
      const Matrix img = shepp_logan_phantom(e.n, modified);
      const AnalysisOperator omega = finite_difference_2d(e.n);
      const Vector coeffs = omega.apply(image_to_vector(img));
      CHECK(omega.p() == e.p);
      CHECK((coeffs.array().abs() > 0.0).count() == e.nnz);
      CHECK(count_constant_regions(img) == e.regions);
      const PixelGraph graph(e.n);
      const Cosupport lambda = cosupport_of(omega, image_to_vector(img), 1e-12);
      CHECK(subspace_dim_dif(graph, lambda) == e.regions);
    }
}

TEST_CASE("image flattening round-trips and matches the lattice convention") {
  Matrix img(2, 3);
  img << 1, 2, 3, 4, 5, 6;
  const Vector v = image_to_vector(img);
  REQUIRE(v.size() == 6);
  CHECK(v[0 * 3 + 2] == 3);  // x[i*cols + j] = img(i, j)
  CHECK(v[1 * 3 + 0] == 4);

  Matrix sq(2, 2);
  sq << 1, 2, 3, 4;
  CHECK(vector_to_image(image_to_vector(sq), 2) == sq);
  CHECK_THROWS_AS(vector_to_image(v, 2), std::invalid_argument);
}

TEST_CASE("phantom sizes below the table resolution are rejected") {
  CHECK_THROWS_AS(shepp_logan_phantom(15), std::invalid_argument);
  CHECK_THROWS_AS(shepp_logan_phantom(0), std::invalid_argument);
  CHECK_THROWS_AS(run_phantom_recovery(15, 4, Algorithm::Gap), std::invalid_argument);
  CHECK_THROWS_AS(run_phantom_recovery(16, -1, Algorithm::Gap), std::invalid_argument);
}

TEST_CASE("zero radial lines degenerate to the zero reconstruction") {
  const PhantomRun run = run_phantom_recovery(16, 0, Algorithm::Gap);
  CHECK(run.degenerate);
  CHECK(run.m == 0);
  CHECK_FALSE(run.exact);
  CHECK(run.snr_db == 0.0);
  CHECK(run.recovered == Matrix::Zero(16, 16));
  // claiming every difference is zero misses every true edge
  CHECK(run.missed_mask.sum() > 0);
}

TEST_CASE("gap recovers the phantom exactly at sufficient line budgets") {
  for (auto [n, lines] : {std::pair<Index, Index>{16, 8}, {32, 10}}) {
    CAPTURE(n);
    const PhantomRun run = run_phantom_recovery(n, lines, Algorithm::Gap);
    CHECK(run.exact);
    CHECK(run.snr_db >= 150.0);
    CHECK(run.status == SolveStatus::Converged);
    CHECK(run.missed_mask.sum() == 0.0);
    const Matrix truth = shepp_logan_phantom(n);
    CHECK((run.recovered - truth).cwiseAbs().maxCoeff() <= 1e-6);
  }
}

TEST_CASE("gap under-sampled leaves missed nonzero locations") {
  const PhantomRun run = run_phantom_recovery(16, 4, Algorithm::Gap);
  CHECK_FALSE(run.exact);
  CHECK(run.snr_db < 25.0);
  CHECK(run.missed_mask.sum() >= 10.0);
  CHECK(run.missed_mask.maxCoeff() == 1.0);
  CHECK(run.missed_mask.minCoeff() == 0.0);
}

TEST_CASE("analysis l1 with debias recovers the phantom") {
  const PhantomRun run = run_phantom_recovery(16, 8, Algorithm::L1);
  CHECK(run.exact);
  CHECK(run.snr_db >= 150.0);
  CHECK(run.status == SolveStatus::Converged);
  CHECK(run.missed_mask.sum() == 0.0);
}

TEST_CASE("backprojection improves monotonically with line count but stays far from exact") {
  double prev = -1.0;
  for (Index lines : {4, 8, 16, 32}) {
    const PhantomRun run = run_phantom_recovery(32, lines, Algorithm::Backprojection);
    CHECK_FALSE(run.exact);
    CHECK(run.snr_db > prev);
    CHECK(run.snr_db > 3.0);
    CHECK(run.snr_db < 12.0);
    prev = run.snr_db;
  }
}

TEST_CASE("snr sweep records every (lines, algorithm) pair and keeps going") {
  const auto entries = run_snr_vs_lines(16, {0, 4, 8},
                                        {Algorithm::Backprojection, Algorithm::Gap});
  REQUIRE(entries.size() == 6);
  CHECK(entries[0].status == "degenerate");
  CHECK(entries[1].status == "degenerate");
  CHECK(entries[0].lines == 0);
  CHECK(entries[5].algorithm == Algorithm::Gap);
  CHECK(entries[5].lines == 8);
  CHECK(entries[5].m == 112);
  CHECK(entries[5].status == "ok");
  CHECK(entries[5].snr_db >= 150.0);
  // backprojection at 8 lines lands in the same band as the 32x32 run
  CHECK(entries[4].snr_db > 3.0);
  CHECK(entries[4].snr_db < 25.0);
}

TEST_CASE("algorithm names") {
  CHECK(std::string(to_string(Algorithm::Gap)) == "gap");
  CHECK(std::string(to_string(Algorithm::L1)) == "l1");
  CHECK(std::string(to_string(Algorithm::Backprojection)) == "backprojection");
}
