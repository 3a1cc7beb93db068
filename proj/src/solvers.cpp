#include "cosparse/solvers.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "cosparse/numerics.hpp"
#include "cosparse/rng.hpp"

namespace cosparse {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIterations: return "max-iter";
    case SolveStatus::StaticStop: return "static-stop";
  }
  return "unknown";
}

namespace {

constexpr Index kDenseEntryBudget = 50'000'000;

bool dense_feasible(const MeasurementSystem& m, const AnalysisOperator& omega) {
  if (m.kind() != MeasurementSystem::Kind::DenseGaussian &&
      m.m() * m.d() > kDenseEntryBudget)
    return false;
  return omega.p() * omega.d() <= kDenseEntryBudget;
}

double auto_lambda(const MeasurementSystem& m, const AnalysisOperator& omega) {
  const double nm = op_norm2_estimate(m.to_linear_map(), 40, 0xa1);
  const double no = op_norm2_estimate(omega.to_linear_map(), 40, 0xa2);
  if (no == 0.0) return 1e-6;
  return 1e-6 * (nm * nm) / (no * no);
}

Matrix stacked_dense(const MeasurementSystem& m, const AnalysisOperator& omega,
                     double omega_weight) {
  Matrix s(m.m() + omega.p(), m.d());
  s.topRows(m.m()) = m.dense();
  if (omega.p() > 0) s.bottomRows(omega.p()) = omega_weight * omega.dense();
  return s;
}

Vector stacked_rhs(const Vector& y, Index omega_rows) {
  Vector rhs = Vector::Zero(y.size() + omega_rows);
  rhs.head(y.size()) = y;
  return rhs;
}

struct RegLsOutcome {
  Vector x;
  bool converged = true;
};

RegLsOutcome regularized_analysis_ls_impl(const MeasurementSystem& m,
                                          const AnalysisOperator& omega_active,
                                          const Vector& y, double lambda,
                                          double cg_tol, Index cg_max_iter,
                                          const Vector* warm, bool check_adjoint) {
  require(lambda > 0.0, "regularized_analysis_ls: lambda must be positive");
  require(y.size() == m.m(), "regularized_analysis_ls: dimension mismatch");
  require(m.d() == omega_active.d(), "regularized_analysis_ls: operator dimensions differ");

  const double w = std::sqrt(lambda);
  if (dense_feasible(m, omega_active) && !m.matrix_free()) {
    return {least_squares_min_norm(stacked_dense(m, omega_active, w),
                                   stacked_rhs(y, omega_active.p())),
            true};
  }
  const LinearMap stack =
      LinearMap::stacked(m.to_linear_map(), omega_active.to_linear_map(), w);
  const Vector rhs = stacked_rhs(y, omega_active.p());
  const CgResult cg =
      cg_least_squares(stack, rhs, cg_tol, cg_max_iter, warm, check_adjoint);
  return {cg.x, cg.converged};
}

}  // namespace

Vector regularized_analysis_ls(const MeasurementSystem& m, const AnalysisOperator& omega_active,
                               const Vector& y, double lambda) {
  return regularized_analysis_ls_impl(m, omega_active, y, lambda, 1e-12, 10000,
                                      nullptr, true)
      .x;
}

Vector constrained_min_analysis_l2(const MeasurementSystem& m, const AnalysisOperator& omega,
                                   const Vector& y) {
  require(y.size() == m.m(), "constrained_min_analysis_l2: dimension mismatch");
  require(m.m() < m.d(), "constrained_min_analysis_l2: need m < d");
  const Matrix md = m.dense();
  const Matrix w = null_space_basis(md);
  const Vector x_mn = least_squares_min_norm(md, y);
  const Matrix b = omega.apply_columns(w.transpose());
  const Vector c = omega.apply(x_mn);
  const Vector alpha = least_squares_min_norm(b, -c);
  return x_mn + w.transpose() * alpha;
}

// ------------------------------------------------------------------- GAP

namespace {

struct GapStops {
  Index k_bound = 0;       // the p - d + m (or p - l) rule
  Index max_iterations = 0;
};

// Shared selection rule: indices of active rows whose |coefficient| reaches
// t * max, optionally capped to the largest `cap` of them.
std::vector<Index> select_rows(const std::vector<Index>& active, const Vector& coeff_active,
                               double t, Index cap) {
  double top = 0.0;
  for (Index i = 0; i < coeff_active.size(); ++i)
    top = std::max(top, std::abs(coeff_active[i]));
  const double threshold = t * top;
  std::vector<Index> hit;  // positions within `active`
  for (Index i = 0; i < coeff_active.size(); ++i)
    if (std::abs(coeff_active[i]) >= threshold) hit.push_back(i);
  if (cap > 0 && static_cast<Index>(hit.size()) > cap) {
    std::nth_element(hit.begin(), hit.begin() + cap, hit.end(),
                     [&](Index a, Index b) {
                       return std::abs(coeff_active[a]) > std::abs(coeff_active[b]);
                     });
    hit.resize(static_cast<size_t>(cap));
    std::sort(hit.begin(), hit.end());
  }
  std::vector<Index> rows;
  rows.reserve(hit.size());
  for (Index pos : hit) rows.push_back(active[static_cast<size_t>(pos)]);
  return rows;
}

std::vector<Index> remove_rows(const std::vector<Index>& active, const std::vector<Index>& gone) {
  std::vector<Index> out;
  out.reserve(active.size() - gone.size());
  std::set_difference(active.begin(), active.end(), gone.begin(), gone.end(),
                      std::back_inserter(out));
  return out;
}

RecoveryResult gap_solve_dense(const MeasurementSystem& m, const Vector& y,
                               const AnalysisOperator& omega, const GapConfig& cfg) {
  const Index p = omega.p(), d = omega.d(), meas = m.m();
  const Matrix md = m.dense();
  const Matrix w = null_space_basis(md);          // (d - meas) x d
  const Index r = d - meas;
  const Vector x_mn = least_squares_min_norm(md, y);
  const Matrix b = omega.apply_columns(w.transpose());  // p x r
  const Vector c = omega.apply(x_mn);

  std::vector<Index> active(static_cast<size_t>(p));
  std::iota(active.begin(), active.end(), Index{0});

  // normal equations of min_alpha |c_active + B_active alpha|^2, downdated as
  // rows leave; refreshed periodically to shed accumulated roundoff
  Matrix gram = b.transpose() * b;
  Vector h = b.transpose() * c;
  Index since_refresh = 0;

  auto assemble_active = [&](const std::vector<Index>& act, Matrix& ba, Vector& ca) {
    ba.resize(static_cast<Index>(act.size()), r);
    ca.resize(static_cast<Index>(act.size()));
    for (size_t i = 0; i < act.size(); ++i) {
      ba.row(static_cast<Index>(i)) = b.row(act[i]);
      ca[static_cast<Index>(i)] = c[act[i]];
    }
  };

  auto refresh = [&](const std::vector<Index>& act) {
    Matrix ba;
    Vector ca;
    assemble_active(act, ba, ca);
    gram = ba.transpose() * ba;
    h = ba.transpose() * ca;
    since_refresh = 0;
  };

  auto solve_alpha = [&](const std::vector<Index>& act) {
    for (int attempt = 0; attempt < 2; ++attempt) {
      Eigen::LLT<Matrix> llt(gram);
      if (llt.info() == Eigen::Success) {
        Vector alpha = llt.solve(-h);
        if (alpha.allFinite()) return alpha;
      }
      if (attempt == 0) refresh(act);  // downdates may have drifted; rebuild
    }
    Matrix ba;
    Vector ca;
    assemble_active(act, ba, ca);
    return least_squares_min_norm(ba, -ca);
  };

  // exact solution for the final answer, away from the downdating arithmetic
  auto polish = [&](const std::vector<Index>& act) {
    Matrix ba;
    Vector ca;
    assemble_active(act, ba, ca);
    const Vector alpha = least_squares_min_norm(ba, -ca);
    return Vector(x_mn + w.transpose() * alpha);
  };

  Vector alpha = solve_alpha(active);
  Vector x_hat = x_mn + w.transpose() * alpha;

  GapStops stops;
  stops.k_bound = p - d + meas;
  if (cfg.target_cosparsity)
    stops.k_bound = std::min(stops.k_bound, p - *cfg.target_cosparsity);
  stops.max_iterations = cfg.max_iterations;

  // the k >= p - l iteration rule assumes one elimination per iteration; with
  // ties (or a cap) several rows can leave at once, so the carve is bounded by
  // the active-set size directly and clamped to land on the target exactly
  const Index floor_size = d - meas;
  const Index stop_size = cfg.target_cosparsity ? *cfg.target_cosparsity : floor_size;

  RecoveryResult res;
  res.status = SolveStatus::Converged;

  Index k = 0;
  while (k < stops.k_bound && static_cast<Index>(active.size()) > stop_size) {
    // analysis coefficients on the active rows
    Vector coeff(static_cast<Index>(active.size()));
    for (size_t i = 0; i < active.size(); ++i)
      coeff[static_cast<Index>(i)] = c[active[i]] + b.row(active[i]).dot(alpha);

    const Index allowed =
        cfg.target_cosparsity ? static_cast<Index>(active.size()) - stop_size : 0;
    const std::vector<Index> gone = select_rows(active, coeff, cfg.selection_factor, allowed);
    const std::vector<Index> next = remove_rows(active, gone);

    if (static_cast<Index>(next.size()) < floor_size) {
      res.status = SolveStatus::MaxIterations;  // carved past the useful floor
      break;
    }

    for (Index row : gone) {
      gram.noalias() -= b.row(row).transpose() * b.row(row);
      h.noalias() -= c[row] * b.row(row).transpose();
    }
    active = next;
    if (++since_refresh >= 64) refresh(active);

    alpha = solve_alpha(active);
    const Vector x_next = x_mn + w.transpose() * alpha;
    ++k;
    res.eliminated.push_back(gone);

    const bool is_static =
        cfg.stop_on_static && (x_next - x_hat).norm() <= cfg.static_tol * x_next.norm();
    x_hat = x_next;
    if (is_static) {
      res.status = SolveStatus::StaticStop;
      break;
    }
    if (stops.max_iterations > 0 && k >= stops.max_iterations) {
      res.status = SolveStatus::MaxIterations;
      break;
    }
  }

  res.iterations = k;
  res.x_hat = polish(active);
  res.estimated_cosupport = Cosupport(p, active);
  return res;
}

RecoveryResult gap_solve_matrix_free(const MeasurementSystem& m, const Vector& y,
                                     const AnalysisOperator& omega, const GapConfig& cfg) {
  const Index p = omega.p(), d = omega.d(), meas = m.m();
  const LinearMap m_map = m.to_linear_map();
  if (!m_map.adjoint_consistent(1e-10))
    throw NumericalError("gap_solve: measurement adjoint pair is inconsistent");
  if (!omega.to_linear_map().adjoint_consistent(1e-10))
    throw NumericalError("gap_solve: analysis adjoint pair is inconsistent");

  const double lambda = cfg.lambda > 0.0 ? cfg.lambda : auto_lambda(m, omega);

  std::vector<Index> active(static_cast<size_t>(p));
  std::iota(active.begin(), active.end(), Index{0});

  auto solve = [&](const std::vector<Index>& act, const Vector* warm) {
    const AnalysisOperator sub = restrict_rows(omega, Cosupport(p, act));
    return regularized_analysis_ls_impl(m, sub, y, lambda, cfg.cg_tol,
                                        cfg.cg_max_iter, warm, false)
        .x;
  };

  Vector x_hat = solve(active, nullptr);

  GapStops stops;
  stops.k_bound = p - d + meas;
  if (cfg.target_cosparsity)
    stops.k_bound = std::min(stops.k_bound, p - *cfg.target_cosparsity);
  stops.max_iterations = cfg.max_iterations;

  // size-based stop, as in the dense path: the cap eliminates whole batches,
  // so counting iterations against p - l would carve far past the target
  const Index floor_size = d - meas;
  const Index stop_size = cfg.target_cosparsity ? *cfg.target_cosparsity : floor_size;

  RecoveryResult res;
  res.status = SolveStatus::Converged;

  Index k = 0;
  while (k < stops.k_bound && static_cast<Index>(active.size()) > stop_size) {
    const Vector coeff_full = omega.apply(x_hat);
    Vector coeff(static_cast<Index>(active.size()));
    for (size_t i = 0; i < active.size(); ++i)
      coeff[static_cast<Index>(i)] = coeff_full[active[i]];

    Index cap = std::max<Index>(
        1, static_cast<Index>(std::ceil(cfg.elimination_cap_fraction *
                                        static_cast<double>(active.size()))));
    if (cfg.target_cosparsity)
      cap = std::min(cap, static_cast<Index>(active.size()) - stop_size);
    const std::vector<Index> gone = select_rows(active, coeff, cfg.selection_factor, cap);
    const std::vector<Index> next = remove_rows(active, gone);

    if (static_cast<Index>(next.size()) < floor_size) {
      res.status = SolveStatus::MaxIterations;
      break;
    }

    active = next;
    const Vector x_next = solve(active, &x_hat);
    ++k;
    res.eliminated.push_back(gone);

    const bool is_static =
        cfg.stop_on_static && (x_next - x_hat).norm() <= cfg.static_tol * x_next.norm();
    x_hat = x_next;
    if (is_static) {
      res.status = SolveStatus::StaticStop;
      break;
    }
    if (stops.max_iterations > 0 && k >= stops.max_iterations) {
      res.status = SolveStatus::MaxIterations;
      break;
    }
  }

  res.iterations = k;
  // The lambda-weighted refits carry an O(lambda) bias, so the kept rows are
  // promoted to full weight for the final estimate; on a correct cosupport
  // the stack [M; Omega_active] is consistent and this lands on the signal.
  res.x_hat = regularized_analysis_ls_impl(m, restrict_rows(omega, Cosupport(p, active)), y,
                                           1.0, cfg.cg_tol, cfg.cg_max_iter, &x_hat, false)
                  .x;
  res.estimated_cosupport = Cosupport(p, active);
  return res;
}

}  // namespace

RecoveryResult gap_solve(const MeasurementSystem& m, const Vector& y,
                         const AnalysisOperator& omega, const GapConfig& cfg) {
  require(cfg.selection_factor > 0.0 && cfg.selection_factor <= 1.0,
          "gap_solve: selection factor must lie in (0, 1]");
  require(cfg.lambda >= 0.0, "gap_solve: lambda must be nonnegative");
  require(m.m() < m.d(), "gap_solve: need m < d");
  require(m.d() == omega.d(), "gap_solve: operator dimensions differ");
  require(y.size() == m.m(), "gap_solve: dimension mismatch");
  require(y.allFinite(), "gap_solve: measurements must be finite");
  if (cfg.target_cosparsity)
    require(*cfg.target_cosparsity >= 0 && *cfg.target_cosparsity <= omega.p(),
            "gap_solve: target cosparsity out of range");

  const bool use_dense = !cfg.matrix_free && dense_feasible(m, omega) && !m.matrix_free();
  return use_dense ? gap_solve_dense(m, y, omega, cfg)
                   : gap_solve_matrix_free(m, y, omega, cfg);
}

// -------------------------------------------------------------------- l1

namespace {

L1Result analysis_l1_dense(const MeasurementSystem& m, const Vector& y,
                           const AnalysisOperator& omega, double tol, Index max_iter) {
  const Matrix md = m.dense();
  const Matrix w = null_space_basis(md);
  const Vector x_mn = least_squares_min_norm(md, y);
  const Matrix b = omega.apply_columns(w.transpose());  // p x r
  const Vector c = omega.apply(x_mn);
  const Index r = b.cols();

  const double norm_b = op_norm2_estimate(LinearMap::from_dense(b), 80, 0xb1);
  const double step = (norm_b > 0.0) ? 0.95 / norm_b : 1.0;
  const double sigma = step, tau = step;

  const Vector g = w * x_mn;  // for |x|^2 = |x_mn|^2 + 2 g'alpha + |alpha|^2
  const double xmn2 = x_mn.squaredNorm();

  Vector alpha = Vector::Zero(r), q = Vector::Zero(b.rows());
  Vector v = b * alpha, v_prev = v;  // running B alpha, so the residual is free
  L1Result out;
  Index consecutive = 0;

  for (Index n = 0; n < max_iter; ++n) {
    q += sigma * (2.0 * v - v_prev + c);  // B applied to the extrapolated point
    q = q.cwiseMax(-1.0).cwiseMin(1.0);
    const Vector alpha_next = alpha - tau * (b.transpose() * q);
    v_prev = v;
    v = b * alpha_next;

    const double delta = (alpha_next - alpha).norm();
    alpha = alpha_next;
    out.iterations = n + 1;

    const double xnorm =
        std::sqrt(std::max(0.0, xmn2 + 2.0 * g.dot(alpha) + alpha.squaredNorm()));
    out.primal_change = (xnorm > 0.0) ? delta / xnorm : delta;

    // A small step is necessary but not sufficient: the primal can sit still
    // for hundreds of iterations while a dual coordinate drifts toward its
    // bound and then kicks the iterate again. The duality gap of
    // min |B a + c|_1, namely |resid|_1 - q'resid, closes only at optimality.
    const Vector resid = v + c;
    const double obj = resid.lpNorm<1>();
    const double dgap = obj - q.dot(resid);
    out.duality_gap = dgap;
    const bool pass =
        out.primal_change <= tol && dgap <= 10.0 * tol * std::max(obj, 1e-12);
    consecutive = pass ? consecutive + 1 : 0;
    if (consecutive >= 5) {
      out.converged = true;
      break;
    }
  }

  out.x = x_mn + w.transpose() * alpha;
  const double ynorm = y.norm();
  out.constraint_residual =
      (ynorm > 0.0) ? (md * out.x - y).norm() / ynorm : (md * out.x - y).norm();
  return out;
}

L1Result analysis_l1_matrix_free(const MeasurementSystem& m, const Vector& y,
                                 const AnalysisOperator& omega, double tol,
                                 Index max_iter) {
  const LinearMap m_map = m.to_linear_map();
  const LinearMap o_map = omega.to_linear_map();
  if (!m_map.adjoint_consistent(1e-10) || !o_map.adjoint_consistent(1e-10))
    throw NumericalError("analysis_l1_solve: adjoint pair is inconsistent");

  const double nm = op_norm2_estimate(m_map, 40, 0xc1);
  const double no = op_norm2_estimate(o_map, 40, 0xc2);
  const double l = std::sqrt(nm * nm + no * no);
  const double sigma = (l > 0.0) ? 0.95 / l : 1.0;
  const double tau = sigma;

  // feasible-ish start keeps the constraint dual small
  Vector x = cg_least_squares(m_map, y, 1e-10, 200, nullptr, false).x;
  Vector q = Vector::Zero(omega.p());
  Vector mu = Vector::Zero(m.m());
  Vector ox = o_map.apply(x), ox_prev = ox;  // running Omega x and M x
  Vector mx = m_map.apply(x), mx_prev = mx;

  const double ynorm = y.norm();
  L1Result out;
  Index consecutive = 0;

  for (Index n = 0; n < max_iter; ++n) {
    q += sigma * (2.0 * ox - ox_prev);
    q = q.cwiseMax(-1.0).cwiseMin(1.0);
    mu += sigma * (2.0 * mx - mx_prev - y);
    const Vector x_next = x - tau * (o_map.apply_adjoint(q) + m_map.apply_adjoint(mu));
    ox_prev = ox;
    mx_prev = mx;
    ox = o_map.apply(x_next);
    mx = m_map.apply(x_next);

    const double delta = (x_next - x).norm();
    x = x_next;
    out.iterations = n + 1;

    const double xnorm = x.norm();
    out.primal_change = (xnorm > 0.0) ? delta / xnorm : delta;

    // same stall hazard as the eliminated form: certify with the analysis
    // duality gap and demand a feasible point on top of the small step
    const double obj = ox.lpNorm<1>();
    const double dgap = obj - q.dot(ox);
    out.duality_gap = dgap;
    const double feas = (ynorm > 0.0) ? (mx - y).norm() / ynorm : (mx - y).norm();
    out.constraint_residual = feas;
    const bool pass = out.primal_change <= tol &&
                      dgap <= 10.0 * tol * std::max(obj, 1e-12) && feas <= 1e3 * tol;
    consecutive = pass ? consecutive + 1 : 0;
    if (consecutive >= 5) {
      out.converged = true;
      break;
    }
  }

  out.x = x;
  out.constraint_residual =
      (ynorm > 0.0) ? (m_map.apply(x) - y).norm() / ynorm : (m_map.apply(x) - y).norm();
  return out;
}

}  // namespace

L1Result analysis_l1_solve(const MeasurementSystem& m, const Vector& y,
                           const AnalysisOperator& omega, double tol, Index max_iter) {
  require(m.m() < m.d(), "analysis_l1_solve: need m < d");
  require(m.d() == omega.d(), "analysis_l1_solve: operator dimensions differ");
  require(y.size() == m.m(), "analysis_l1_solve: dimension mismatch");
  require(tol > 0.0 && max_iter > 0, "analysis_l1_solve: bad tolerance or budget");

  const bool use_dense = dense_feasible(m, omega) && !m.matrix_free();
  return use_dense ? analysis_l1_dense(m, y, omega, tol, max_iter)
                   : analysis_l1_matrix_free(m, y, omega, tol, max_iter);
}

// ---------------------------------------------------------------- debias

RecoveryResult debias(const Vector& x_raw, const AnalysisOperator& omega,
                      const MeasurementSystem& m, const Vector& y, double zero_tol) {
  require(x_raw.size() == omega.d(), "debias: dimension mismatch");
  require(y.size() == m.m(), "debias: dimension mismatch");

  const Cosupport lambda = cosupport_of(omega, x_raw, zero_tol);
  const AnalysisOperator sub = restrict_rows(omega, lambda);

  RecoveryResult res;
  res.estimated_cosupport = lambda;
  res.status = SolveStatus::Converged;

  if (dense_feasible(m, sub) && !m.matrix_free()) {
    const Matrix s = stacked_dense(m, sub, 1.0);
    res.x_hat = least_squares_min_norm(s, stacked_rhs(y, sub.p()));
    res.indeterminate = numerical_rank(s) < m.d();
    return res;
  }

  const LinearMap stack = LinearMap::stacked(m.to_linear_map(), sub.to_linear_map(), 1.0);
  const CgResult cg = cg_least_squares(stack, stacked_rhs(y, sub.p()),
                                                 1e-12, 4000, &x_raw, true);
  res.x_hat = cg.x;
  if (!cg.converged) res.status = SolveStatus::MaxIterations;
  return res;
}

}  // namespace cosparse
