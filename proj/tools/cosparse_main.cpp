#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "cosparse/guarantees.hpp"
#include "cosparse/harness.hpp"
#include "cosparse/io.hpp"
#include "cosparse/model.hpp"
#include "cosparse/phantom.hpp"
#include "cosparse/rng.hpp"
#include "cosparse/solvers.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cosparse;

namespace {

struct Common {
  std::string out = ".";
  uint64_t seed = 0;
  bool seed_given = false;
  int jobs = 0;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--out", c.out, "output directory (created if missing)");
  cmd->add_option("--seed", c.seed, "rng seed (overrides COSPARSE_SEED)")
      ->each([&c](const std::string&) { c.seed_given = true; });
  cmd->add_option("--jobs", c.jobs, "worker threads (0 = all cores)");
}

void resolve_common(Common& c) {
  if (!c.seed_given) {
    if (const char* env = std::getenv("COSPARSE_SEED")) c.seed = std::stoull(env);
  }
  if (c.jobs <= 0) c.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  fs::create_directories(c.out);
}

std::string out_path(const Common& c, const std::string& name) {
  return (fs::path(c.out) / name).string();
}

void write_manifest(const Common& c, const std::string& command, json options,
                    std::vector<std::string> outputs) {
  json m;
  m["command"] = command;
  m["seed"] = c.seed;
  m["jobs"] = c.jobs;
  m["options"] = std::move(options);
  m["outputs"] = std::move(outputs);
  write_json(out_path(c, "manifest.json"), m);
}

// Operators travel as files: a dense matrix in text form, or a descriptor
// json for the structured kinds.
AnalysisOperator load_operator(const std::string& path) {
  if (fs::path(path).extension() == ".json") {
    const json j = read_json(path);
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "dif2d") return finite_difference_2d(j.at("n").get<Index>());
    throw std::invalid_argument("unknown operator descriptor kind: " + kind);
  }
  return AnalysisOperator::from_dense(read_matrix_text(path));
}

MeasurementSystem load_measurement(const std::string& path) {
  if (fs::path(path).extension() == ".json") {
    const json j = read_json(path);
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "radial-fourier")
      return radial_fourier_system(j.at("n").get<Index>(), j.at("lines").get<Index>());
    throw std::invalid_argument("unknown measurement descriptor kind: " + kind);
  }
  return MeasurementSystem::from_dense(read_matrix_text(path));
}

Cosupport load_cosupport(const std::string& path, Index p) {
  const Vector v = read_vector_text(path);
  std::vector<Index> rows(static_cast<size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) rows[static_cast<size_t>(i)] = static_cast<Index>(v[i]);
  return Cosupport(p, std::move(rows));
}

int run_gen_operator(const Common& c, const std::string& type, Index p, Index d, Index n,
                     Index lines) {
  json opts{{"type", type}, {"p", p}, {"d", d}, {"n", n}, {"lines", lines}};
  if (type == "tight") {
    require(p > 0 && d > 0, "gen-operator: tight frame needs --p and --d");
    const AnalysisOperator om = random_tight_frame_operator(p, d, c.seed);
    write_matrix_text(out_path(c, "omega.txt"), om.dense());
    write_manifest(c, "gen-operator", opts, {"omega.txt"});
    std::cout << "omega.txt: " << p << " x " << d << " tight frame\n";
  } else if (type == "dif") {
    require(n >= 2, "gen-operator: dif needs --n >= 2");
    write_json(out_path(c, "omega.json"), json{{"kind", "dif2d"}, {"n", n}});
    write_manifest(c, "gen-operator", opts, {"omega.json"});
    std::cout << "omega.json: 2d difference operator on " << n << " x " << n << "\n";
  } else if (type == "gaussian") {
    require(p > 0 && d > 0, "gen-operator: gaussian needs --p (rows) and --d");
    const MeasurementSystem m = gaussian_measurement(p, d, c.seed);
    write_matrix_text(out_path(c, "measurement.txt"), m.dense());
    write_manifest(c, "gen-operator", opts, {"measurement.txt"});
    std::cout << "measurement.txt: " << p << " x " << d << " gaussian\n";
  } else if (type == "radial") {
    require(n >= 2 && lines >= 1, "gen-operator: radial needs --n and --lines");
    const MeasurementSystem m = radial_fourier_system(n, lines);
    write_json(out_path(c, "measurement.json"),
               json{{"kind", "radial-fourier"}, {"n", n}, {"lines", lines}});
    write_manifest(c, "gen-operator", opts, {"measurement.json"});
    std::cout << "measurement.json: " << lines << " radial lines, m = " << m.m() << "\n";
  } else {
    throw std::invalid_argument("gen-operator: unknown --type " + type);
  }
  return 0;
}

int run_gen_signal(const Common& c, const std::string& omega_path, Index l) {
  const AnalysisOperator om = load_operator(omega_path);
  const Vector x = generate_cosparse_signal(om, l, c.seed);
  write_vector_text(out_path(c, "x.txt"), x);
  write_manifest(c, "gen-signal", json{{"omega", omega_path}, {"l", l}}, {"x.txt"});
  std::cout << "x.txt: d = " << x.size() << ", cosparsity " << cosparsity(om, x) << "\n";
  return 0;
}

struct SolveArgs {
  std::string meas, omega, y_path, x0_path;
  double t = 1.0, lambda = 0.0, tol = 1e-9;
  Index target_l = -1, max_iter = 0;
  bool matrix_free = false, no_debias = false;
  double cap = 0.02;
};

int run_solve(const Common& c, const std::string& which, const SolveArgs& a) {
  require(!a.y_path.empty() || !a.x0_path.empty(), "solve: need --y or --x0");
  const MeasurementSystem m = load_measurement(a.meas);
  const AnalysisOperator om = load_operator(a.omega);
  std::optional<Vector> x0;
  if (!a.x0_path.empty()) x0 = read_vector_text(a.x0_path);
  const Vector y = a.y_path.empty() ? m.apply(*x0) : read_vector_text(a.y_path);

  json result;
  Vector x_hat;
  std::vector<std::string> outputs{"x_hat.txt", "result.json"};
  if (which == "gap") {
    GapConfig cfg;
    cfg.selection_factor = a.t;
    cfg.lambda = a.lambda;
    cfg.max_iterations = a.max_iter;
    cfg.matrix_free = a.matrix_free;
    cfg.elimination_cap_fraction = a.cap;
    if (a.target_l >= 0) cfg.target_cosparsity = a.target_l;
    const RecoveryResult res = gap_solve(m, y, om, cfg);
    x_hat = res.x_hat;
    result = recovery_to_json(res);
    write_gap_trace_csv(out_path(c, "trace.csv"), res);
    outputs.push_back("trace.csv");
  } else {
    const Index iters = a.max_iter > 0 ? a.max_iter : 100000;
    const L1Result raw = analysis_l1_solve(m, y, om, a.tol, iters);
    result["l1_converged"] = raw.converged;
    result["l1_iterations"] = raw.iterations;
    result["duality_gap"] = raw.duality_gap;
    result["constraint_residual"] = raw.constraint_residual;
    if (a.no_debias) {
      x_hat = raw.x;
      result["status"] = raw.converged ? "converged" : "max-iter";
    } else {
      const RecoveryResult deb = debias(raw.x, om, m, y);
      x_hat = deb.x_hat;
      result.update(recovery_to_json(deb));
    }
  }
  if (x0) {
    const double rel = (x_hat - *x0).norm() / std::max(x0->norm(), 1e-300);
    result["relative_error"] = rel;
    result["snr_db"] = snr_db(*x0, x_hat);
  }
  write_vector_text(out_path(c, "x_hat.txt"), x_hat);
  write_json(out_path(c, "result.json"), result);
  write_manifest(c, "solve " + which,
                 json{{"meas", a.meas},
                      {"omega", a.omega},
                      {"y", a.y_path},
                      {"x0", a.x0_path},
                      {"t", a.t},
                      {"lambda", a.lambda},
                      {"tol", a.tol},
                      {"target_l", a.target_l},
                      {"max_iter", a.max_iter},
                      {"matrix_free", a.matrix_free},
                      {"no_debias", a.no_debias},
                      {"cap", a.cap}},
                 outputs);
  std::cout << result.dump(2) << "\n";
  return 0;
}

struct CertifyArgs {
  std::string omega, meas, cosupport_path, signal_path, x0_path;
  double zero_tol = 1e-6, t = 1.0;
  Index samples = 200;
};

int run_certify(const Common& c, const std::string& which, const CertifyArgs& a) {
  const AnalysisOperator om = load_operator(a.omega);
  const MeasurementSystem m = load_measurement(a.meas);
  require(!a.cosupport_path.empty() || !a.signal_path.empty(),
          "certify: need --cosupport or --signal");
  const Cosupport lambda = !a.cosupport_path.empty()
                               ? load_cosupport(a.cosupport_path, om.p())
                               : cosupport_of(om, read_vector_text(a.signal_path), a.zero_tol);

  Certificate cert;
  if (which == "erc") {
    cert = erc_analysis(om, lambda, m);
  } else if (which == "nsc") {
    cert = nsc_sampled(om, lambda, m, a.samples, c.seed);
  } else if (which == "heuristic") {
    cert = heuristic_row_l2(om, lambda, m);
  } else {  // gap-relation
    require(!a.x0_path.empty() || !a.signal_path.empty(), "certify gap-relation: need --x0");
    const Vector x0 =
        read_vector_text(!a.x0_path.empty() ? a.x0_path : a.signal_path);
    const Vector y = m.apply(x0);
    cert = gap_relation_residual(om, lambda, m, y, x0);
  }

  json j = certificate_to_json(cert);
  j["fingerprint"] = json{{"p", om.p()}, {"d", om.d()}, {"m", m.m()},
                          {"lambda_size", lambda.size()}, {"seed", c.seed}};
  write_json(out_path(c, "certificate.json"), j);
  write_manifest(c, "certify " + which,
                 json{{"omega", a.omega},
                      {"meas", a.meas},
                      {"cosupport", a.cosupport_path},
                      {"signal", a.signal_path},
                      {"x0", a.x0_path},
                      {"zero_tol", a.zero_tol},
                      {"samples", a.samples}},
                 {"certificate.json"});
  std::cout << to_string(cert.kind) << ": value = " << cert.value;
  if (cert.threshold) std::cout << ", threshold = " << *cert.threshold;
  std::cout << ", holds = " << (cert.holds ? "yes" : "no") << "\n";
  return 0;
}

// the benchmark interval quoted for the 256 x 256 difference operator
struct KappaBenchmark {
  Index d, l;
  double lo, hi;
};
constexpr KappaBenchmark kKappaBenchmarks[] = {{65536, 128014, 1270.0, 1524.0}};

int run_kappa(const Common& c, const std::string& which, bool dif, Index n, Index d, Index l,
              const std::string& omega_path, double max_subsets) {
  json result{{"mode", which}, {"l", l}};
  if (which == "bounds") {
    require(dif, "kappa bounds: only the --dif lattice bounds are implemented");
    require(n >= 2, "kappa bounds: need --n");
    const KappaBounds b = kappa_dif_bounds(n * n, l);
    result["d"] = n * n;
    result["lower"] = b.lower;
    result["upper"] = b.upper;
    result["lower_applicable"] = b.lower_applicable;
    std::cout << "kappa bounds for the " << n << " x " << n << " difference operator, l = " << l
              << ":\n  formula: " << b.lower << " <= kappa <= " << b.upper;
    if (!b.lower_applicable) std::cout << "  (lower bound needs l >= 5)";
    std::cout << "\n";
    for (const auto& bench : kKappaBenchmarks)
      if (bench.d == n * n && bench.l == l) {
        std::cout << "  benchmark interval: " << bench.lo << " <= kappa <= " << bench.hi << "\n";
        result["benchmark"] = json{{"lower", bench.lo}, {"upper", bench.hi}};
      }
  } else if (which == "exact") {
    require(d >= 1, "kappa exact: need --d");
    const double k = kappa_general_position(d, l);
    result["d"] = d;
    result["kappa"] = k;
    std::cout << "kappa = " << k << " (general position, d = " << d << ", l = " << l << ")\n";
  } else {  // brute
    require(!omega_path.empty(), "kappa brute: need --omega");
    const AnalysisOperator om = load_operator(omega_path);
    const Index k = kappa_brute_force(om, l, max_subsets);
    result["d"] = om.d();
    result["kappa"] = k;
    std::cout << "kappa = " << k << " (brute force over all size-" << l << " cosupports)\n";
  }
  write_json(out_path(c, "kappa.json"), result);
  write_manifest(c, "kappa " + which,
                 json{{"dif", dif}, {"n", n}, {"d", d}, {"l", l}, {"omega", omega_path}},
                 {"kappa.json"});
  return 0;
}

int run_unique(const Common& c, Index m_count, bool dif, Index n, Index d, Index l,
               double kappa_value) {
  UniquenessVerdict v;
  json opts{{"m", m_count}, {"dif", dif}, {"n", n}, {"d", d}, {"l", l}};
  if (kappa_value >= 0.0) {
    v = uniqueness_verdict(kappa_value, m_count);
    opts["kappa"] = kappa_value;
  } else if (dif) {
    require(n >= 2, "unique: --dif needs --n");
    v = uniqueness_verdict(kappa_dif_bounds(n * n, l), m_count);
  } else {
    require(d >= 1, "unique: need --kappa, --dif, or --d with --l");
    v = uniqueness_verdict(kappa_general_position(d, l), m_count);
  }
  auto name = [](Guarantee g) {
    return g == Guarantee::Guaranteed      ? "guaranteed"
           : g == Guarantee::NotGuaranteed ? "not-guaranteed"
                                           : "indeterminate";
  };
  json result{{"kappa_lower", v.kappa_lower},
              {"kappa_upper", v.kappa_upper},
              {"kappa_exact", v.kappa_exact},
              {"m", v.m},
              {"known_cosupport", name(v.known_cosupport)},
              {"unknown_cosupport", name(v.unknown_cosupport)},
              {"required_m_known", json{{"lower", v.required_m_known_lower},
                                        {"upper", v.required_m_known_upper}}},
              {"required_m_unknown", json{{"lower", v.required_m_unknown_lower},
                                          {"upper", v.required_m_unknown_upper}}}};
  write_json(out_path(c, "unique.json"), result);
  write_manifest(c, "unique", opts, {"unique.json"});
  std::cout << "known cosupport:   " << name(v.known_cosupport)
            << " (needs m >= " << v.required_m_known_upper << ")\n"
            << "unknown cosupport: " << name(v.unknown_cosupport)
            << " (needs m >= " << v.required_m_unknown_upper << ")\n";
  return 0;
}

int run_phase_diagram(const Common& c, double sigma, Index d, Index grid, Index trials,
                      const std::string& alg, const std::string& preset) {
  PhaseDiagramConfig cfg;
  cfg.sigma = sigma;
  cfg.d = d;
  cfg.trials = trials;
  cfg.seed = c.seed;
  cfg.jobs = c.jobs;
  Index k = grid;
  if (preset == "smoke") { k = 8; cfg.trials = 20; }
  if (preset == "full") { k = 16; cfg.trials = 50; }
  cfg.delta_values = unit_grid(k);
  cfg.rho_values = unit_grid(k);
  cfg.algorithm = alg == "l1" ? Algorithm::L1 : Algorithm::Gap;
  require(alg == "l1" || alg == "gap", "phase-diagram: --alg must be gap or l1");

  const PhaseGrid out = run_phase_diagram(cfg);
  write_phase_grid_csv(out_path(c, "phase.csv"), out);
  write_manifest(c, "phase-diagram",
                 json{{"sigma", sigma}, {"d", d}, {"grid", k}, {"trials", cfg.trials},
                      {"alg", alg}, {"preset", preset}},
                 {"phase.csv"});
  std::cout << "phase.csv: " << k << " x " << k << " grid, sigma = " << sigma << ", "
            << cfg.trials << " trials per cell\n";
  return 0;
}

int run_phantom_cmd(const Common& c, Index n, Index lines, const std::string& alg, bool modified,
                    double t, double cap, Index max_iter) {
  Algorithm a = alg == "l1"               ? Algorithm::L1
                : alg == "backprojection" ? Algorithm::Backprojection
                                          : Algorithm::Gap;
  require(alg == "gap" || alg == "l1" || alg == "backprojection",
          "phantom: --alg must be gap, l1, or backprojection");
  PhantomConfig cfg;
  cfg.modified_contrast = modified;
  cfg.gap.selection_factor = t;
  cfg.gap.elimination_cap_fraction = cap;
  if (max_iter > 0) {
    cfg.gap.max_iterations = max_iter;
    cfg.l1_max_iterations = max_iter;
  }
  const PhantomRun run = run_phantom_recovery(n, lines, a, cfg);
  write_pgm(out_path(c, "phantom.pgm"), shepp_logan_phantom(n, modified), 8);
  write_pgm(out_path(c, "recovered.pgm"), run.recovered, 8);
  write_pgm(out_path(c, "missed.pgm"), run.missed_mask, 8);
  write_matrix_raw(out_path(c, "recovered.raw"), run.recovered);
  json result{{"n", run.n},
              {"lines", run.lines},
              {"m", run.m},
              {"algorithm", to_string(run.algorithm)},
              {"snr_db", run.snr_db},
              {"exact", run.exact},
              {"degenerate", run.degenerate},
              {"status", to_string(run.status)},
              {"iterations", run.iterations}};
  write_json(out_path(c, "result.json"), result);
  write_manifest(c, "phantom",
                 json{{"n", n}, {"lines", lines}, {"alg", alg}, {"modified", modified},
                      {"t", t}, {"cap", cap}, {"max_iter", max_iter}},
                 {"phantom.pgm", "recovered.pgm", "missed.pgm", "recovered.raw", "result.json"});
  std::cout << "snr_db = " << run.snr_db << " (m = " << run.m << ", "
            << to_string(run.status) << ")\n";
  return 0;
}

int run_snr_sweep(const Common& c, Index n, const std::vector<Index>& lines,
                  const std::vector<std::string>& algs, double t, double cap) {
  PhantomConfig cfg;
  cfg.gap.selection_factor = t;
  cfg.gap.elimination_cap_fraction = cap;
  std::vector<Algorithm> as;
  for (const auto& s : algs) {
    if (s == "gap") as.push_back(Algorithm::Gap);
    else if (s == "l1") as.push_back(Algorithm::L1);
    else if (s == "backprojection") as.push_back(Algorithm::Backprojection);
    else throw std::invalid_argument("snr-sweep: unknown algorithm " + s);
  }
  const auto entries = run_snr_vs_lines(n, lines, as, cfg);
  write_snr_csv(out_path(c, "snr.csv"), entries);
  json opts{{"n", n}, {"lines", lines}, {"algs", algs}, {"t", t}, {"cap", cap}};
  write_manifest(c, "snr-sweep", opts, {"snr.csv"});
  std::cout << "snr.csv: " << entries.size() << " rows\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cosparse analysis recovery toolkit"};
  app.require_subcommand(1);

  Common c;
  std::string type = "tight", alg = "gap", preset;
  Index p = 0, d = 0, n = 0, lines = 0, l = 0, grid = 8, trials = 20, m_count = 0;
  Index max_iter = 0;
  double sigma = 2.0, max_subsets = 1e7, kappa_value = -1.0;
  double t = PhantomConfig{}.gap.selection_factor;
  double cap = PhantomConfig{}.gap.elimination_cap_fraction;
  bool dif = false, modified = false;
  std::string omega_path, signal_lpath;
  std::vector<Index> lines_list;
  std::vector<std::string> algs{"gap", "backprojection"};
  SolveArgs sa;
  CertifyArgs ca;

  auto* genop = app.add_subcommand("gen-operator", "generate an operator or measurement file");
  add_common(genop, c);
  genop->add_option("--type", type, "tight | dif | gaussian | radial");
  genop->add_option("--p", p, "rows");
  genop->add_option("--d", d, "signal dimension");
  genop->add_option("--n", n, "lattice side");
  genop->add_option("--lines", lines, "radial line count");

  auto* gensig = app.add_subcommand("gen-signal", "draw a cosparse signal");
  add_common(gensig, c);
  gensig->add_option("--omega", omega_path, "analysis operator file")->required();
  gensig->add_option("--l", l, "cosupport size")->required();

  auto* solve = app.add_subcommand("solve", "recover a signal from measurements");
  solve->require_subcommand(1);
  for (const char* name : {"gap", "l1"}) {
    auto* sub = solve->add_subcommand(name);
    add_common(sub, c);
    sub->add_option("--meas", sa.meas, "measurement file")->required();
    sub->add_option("--omega", sa.omega, "analysis operator file")->required();
    sub->add_option("--y", sa.y_path, "observation vector file");
    sub->add_option("--x0", sa.x0_path, "ground truth (y computed, error reported)");
    sub->add_option("--max-iter", sa.max_iter, "iteration cap");
    if (std::string(name) == "gap") {
      sub->add_option("--t", sa.t, "selection factor in (0, 1]");
      sub->add_option("--lambda", sa.lambda, "regularization (0 = auto)");
      sub->add_option("--target-l", sa.target_l, "stop at this cosparsity");
      sub->add_option("--cap", sa.cap, "matrix-free per-iteration elimination cap fraction");
      sub->add_flag("--matrix-free", sa.matrix_free, "force the matrix-free path");
    } else {
      sub->add_option("--tol", sa.tol, "convergence tolerance");
      sub->add_flag("--no-debias", sa.no_debias, "skip the debias pass");
    }
  }

  auto* certify = app.add_subcommand("certify", "evaluate recovery certificates");
  certify->require_subcommand(1);
  for (const char* name : {"erc", "nsc", "gap-relation", "heuristic"}) {
    auto* sub = certify->add_subcommand(name);
    add_common(sub, c);
    sub->add_option("--omega", ca.omega, "analysis operator file")->required();
    sub->add_option("--meas", ca.meas, "measurement file")->required();
    sub->add_option("--cosupport", ca.cosupport_path, "row index file");
    sub->add_option("--signal", ca.signal_path, "signal file (cosupport inferred)");
    sub->add_option("--zero-tol", ca.zero_tol, "cosupport zero tolerance");
    if (std::string(name) == "nsc")
      sub->add_option("--samples", ca.samples, "sign-pattern samples");
    if (std::string(name) == "gap-relation")
      sub->add_option("--x0", ca.x0_path, "ground-truth signal file");
  }

  auto* kappa = app.add_subcommand("kappa", "uniqueness exponent kappa");
  kappa->require_subcommand(1);
  for (const char* name : {"exact", "bounds", "brute"}) {
    auto* sub = kappa->add_subcommand(name);
    add_common(sub, c);
    sub->add_option("--l", l, "cosparsity")->required();
    sub->add_flag("--dif", dif, "2d difference operator on an n x n lattice");
    sub->add_option("--n", n, "lattice side");
    sub->add_option("--d", d, "signal dimension");
    sub->add_option("--omega", omega_path, "analysis operator file");
    sub->add_option("--max-subsets", max_subsets, "enumeration budget");
  }

  auto* unique = app.add_subcommand("unique", "uniqueness verdict for given m");
  add_common(unique, c);
  unique->add_option("--m", m_count, "measurement count")->required();
  unique->add_option("--kappa", kappa_value, "kappa value, if known");
  unique->add_flag("--dif", dif, "use lattice bounds");
  unique->add_option("--n", n, "lattice side");
  unique->add_option("--d", d, "signal dimension (general position)");
  unique->add_option("--l", l, "cosparsity");

  auto* phase = app.add_subcommand("phase-diagram", "success-rate map over (delta, rho)");
  add_common(phase, c);
  phase->add_option("--sigma", sigma, "overcompleteness p/d");
  phase->add_option("--d", d, "signal dimension")->default_val(Index{200});
  phase->add_option("--grid", grid, "grid points per axis");
  phase->add_option("--trials", trials, "trials per cell");
  phase->add_option("--alg", alg, "gap | l1");
  phase->add_option("--preset", preset, "smoke (8x8, 20) | full (16x16, 50)");

  auto* phantom = app.add_subcommand("phantom", "radial-line phantom recovery");
  add_common(phantom, c);
  phantom->add_option("--n", n, "image side")->required();
  phantom->add_option("--lines", lines, "radial line count")->required();
  phantom->add_option("--alg", alg, "gap | l1 | backprojection");
  phantom->add_flag("--modified", modified, "high-contrast intensity variant");
  phantom->add_option("--t", t, "gap selection factor");
  phantom->add_option("--cap", cap, "gap elimination cap fraction");
  phantom->add_option("--max-iter", max_iter, "iteration cap");

  auto* sweep = app.add_subcommand("snr-sweep", "snr versus radial line count");
  add_common(sweep, c);
  sweep->add_option("--n", n, "image side")->required();
  sweep->add_option("--lines", lines_list, "line counts")->required();
  sweep->add_option("--algs", algs, "algorithms to run");
  sweep->add_option("--t", t, "gap selection factor");
  sweep->add_option("--cap", cap, "gap elimination cap fraction");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 1;
  }

  try {
    resolve_common(c);
    if (genop->parsed()) return run_gen_operator(c, type, p, d, n, lines);
    if (gensig->parsed()) return run_gen_signal(c, omega_path, l);
    if (solve->parsed())
      return run_solve(c, solve->get_subcommands().front()->get_name(), sa);
    if (certify->parsed())
      return run_certify(c, certify->get_subcommands().front()->get_name(), ca);
    if (kappa->parsed())
      return run_kappa(c, kappa->get_subcommands().front()->get_name(), dif, n, d, l,
                       omega_path, max_subsets);
    if (unique->parsed()) return run_unique(c, m_count, dif, n, d, l, kappa_value);
    if (phase->parsed()) return run_phase_diagram(c, sigma, d, grid, trials, alg, preset);
    if (phantom->parsed()) return run_phantom_cmd(c, n, lines, alg, modified, t, cap, max_iter);
    if (sweep->parsed()) return run_snr_sweep(c, n, lines_list, algs, t, cap);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
