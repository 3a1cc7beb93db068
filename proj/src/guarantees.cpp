#include "cosparse/guarantees.hpp"

#include <cmath>
#include <set>
#include <vector>

#include "cosparse/numerics.hpp"
#include "cosparse/rng.hpp"
#include "cosparse/solvers.hpp"

namespace cosparse {

const char* to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::Erc: return "erc";
    case CertificateKind::NscSampled: return "nsc-sampled";
    case CertificateKind::GapRelation: return "gap-relation";
    case CertificateKind::HeuristicL2: return "heuristic-l2";
  }
  return "unknown";
}

namespace {

double inf_norm(const Vector& v) {
  return v.size() > 0 ? v.cwiseAbs().maxCoeff() : 0.0;
}

struct CertContext {
  Matrix w;         // orthonormal rows spanning Null(M)
  Matrix omega_l;   // Omega restricted to Lambda, dense
  Matrix omega_lc;  // Omega restricted to the complement, dense
  Matrix a1;        // Omega_Lambda W'
  Matrix a2;        // Omega_Lambda^c W'
};

CertContext build_context(const AnalysisOperator& omega, const Cosupport& lambda,
                          const MeasurementSystem& m) {
  require(lambda.p() == omega.p(), "certificate: cosupport refers to a different operator");
  require(omega.d() == m.d(), "certificate: operator dimensions differ");
  require(m.m() < m.d(), "certificate: need m < d");
  CertContext ctx;
  ctx.w = null_space_basis(m.dense());
  ctx.omega_l = restrict_rows(omega, lambda).dense();
  ctx.omega_lc = restrict_rows(omega, lambda.complement()).dense();
  ctx.a1 = ctx.omega_l * ctx.w.transpose();
  ctx.a2 = ctx.omega_lc * ctx.w.transpose();
  return ctx;
}

void require_full_rank(const CertContext& ctx, const char* who) {
  const Index need = ctx.w.rows();
  const Index got = numerical_rank(ctx.a1);
  if (got < need)
    throw NumericalError(std::string(who) +
                         ": Omega_Lambda W' must have full column rank " +
                         std::to_string(need) + ", numerical rank is " +
                         std::to_string(got));
}

// (W Omega_Lambda')^+ W Omega_Lambda^c', rows indexed by Lambda
Matrix transpose_form(const CertContext& ctx) {
  return pseudo_inverse(ctx.a1.transpose()) * ctx.a2.transpose();
}

void stamp_dims(Certificate& cert, const AnalysisOperator& omega, const Cosupport& lambda,
                const MeasurementSystem& m) {
  cert.extras["d"] = static_cast<double>(omega.d());
  cert.extras["m"] = static_cast<double>(m.m());
  cert.extras["p"] = static_cast<double>(omega.p());
  cert.extras["cosupport_size"] = static_cast<double>(lambda.size());
}

Vector sign_pattern(const Vector& v) {
  Vector s(v.size());
  for (Index i = 0; i < v.size(); ++i)
    s[i] = (v[i] > 0.0) ? 1.0 : (v[i] < 0.0 ? -1.0 : 0.0);
  return s;
}

void check_instance_hypotheses(const CertContext& ctx, const MeasurementSystem& m,
                               const Vector& y, const Vector& x0, const char* who) {
  require(x0.size() == m.d(), std::string(who) + ": dimension mismatch");
  require(y.size() == m.m(), std::string(who) + ": dimension mismatch");
  const double xn = x0.norm();
  if (ctx.omega_l.rows() > 0 && inf_norm(ctx.omega_l * x0) > 1e-8 * (xn + 1e-300))
    throw NumericalError(std::string(who) +
                         ": x0 is not annihilated on the declared cosupport");
  if ((m.apply(x0) - y).norm() > 1e-8 * (y.norm() + xn + 1e-300))
    throw NumericalError(std::string(who) + ": y does not match M x0");
}

}  // namespace

Certificate erc_analysis(const AnalysisOperator& omega, const Cosupport& lambda,
                         const MeasurementSystem& m) {
  const CertContext ctx = build_context(omega, lambda, m);
  require_full_rank(ctx, "erc_analysis");

  const Matrix r = ctx.a2 * pseudo_inverse(ctx.a1);

  Certificate cert;
  cert.kind = CertificateKind::Erc;
  cert.value = op_norm_1_1(r);
  cert.threshold = 1.0;
  cert.holds = cert.value < *cert.threshold;
  stamp_dims(cert, omega, lambda, m);
  cert.extras["transpose_norm"] = op_norm_inf_inf(transpose_form(ctx));
  return cert;
}

Certificate nsc_sampled(const AnalysisOperator& omega, const Cosupport& lambda,
                        const MeasurementSystem& m, Index n_samples, uint64_t seed) {
  require(n_samples > 0, "nsc_sampled: need a positive sample budget");
  const CertContext ctx = build_context(omega, lambda, m);

  Certificate cert;
  cert.kind = CertificateKind::NscSampled;
  cert.threshold = 1.0;
  stamp_dims(cert, omega, lambda, m);

  const Index d = omega.d();
  const Matrix n_basis = null_space_basis_any(ctx.omega_l, d);
  const Index k = n_basis.rows();
  if (k == 0) {
    // no signal carries this cosupport; nothing to certify
    cert.holds = true;
    cert.extras["degenerate"] = 1.0;
    cert.extras["samples"] = 0.0;
    cert.extras["exact"] = 1.0;
    return cert;
  }

  const Matrix t = transpose_form(ctx);
  std::set<std::vector<int>> seen;
  double best = 0.0;
  auto eval = [&](const Vector& coeff) {
    const Vector s = sign_pattern(coeff);
    std::vector<int> key(static_cast<size_t>(s.size()));
    for (Index i = 0; i < s.size(); ++i)
      key[static_cast<size_t>(i)] = static_cast<int>(s[i]);
    seen.insert(std::move(key));
    best = std::max(best, inf_norm(t * s));
  };

  Index samples = 0;
  bool exact = false;
  if (k == 1) {
    const Vector coeff = ctx.omega_lc * n_basis.row(0).transpose();
    eval(coeff);
    eval(-coeff);
    samples = 2;
    exact = true;
  } else if (k == 2) {
    // coefficients trace c_i(theta) = <row_i, (cos, sin)>; the sign pattern
    // is constant between the angles where some row flips, so visiting one
    // interior point per arc covers every reachable pattern
    const Matrix c = ctx.omega_lc * n_basis.transpose();  // |Lc| x 2
    std::vector<double> cuts;
    for (Index i = 0; i < c.rows(); ++i) {
      if (c.row(i).norm() == 0.0) continue;
      double a = std::atan2(c(i, 1), c(i, 0)) + M_PI / 2.0;  // zero crossing
      a = std::fmod(a, M_PI);
      if (a < 0.0) a += M_PI;
      cuts.push_back(a);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double x, double y) { return std::abs(x - y) < 1e-13; }),
               cuts.end());
    std::vector<double> probes;
    if (cuts.empty()) {
      probes.push_back(0.0);
    } else {
      for (size_t i = 0; i + 1 < cuts.size(); ++i)
        probes.push_back(0.5 * (cuts[i] + cuts[i + 1]));
      probes.push_back(0.5 * (cuts.back() + cuts.front() + M_PI));  // wrap arc
    }
    for (double theta : probes) {
      const Vector dir = std::cos(theta) * Vector(c.col(0)) + std::sin(theta) * Vector(c.col(1));
      eval(dir);
      eval(-dir);
      samples += 2;
    }
    exact = true;
  } else {
    Rng rng(derive_seed(seed, 0x5c));
    for (Index i = 0; i < n_samples; ++i) {
      const Vector g = rng.normal_vector(k);
      eval(ctx.omega_lc * (n_basis.transpose() * g));
    }
    samples = n_samples;
  }

  cert.value = best;
  cert.holds = cert.value < *cert.threshold;
  cert.extras["samples"] = static_cast<double>(samples);
  cert.extras["distinct_patterns"] = static_cast<double>(seen.size());
  cert.extras["exact"] = exact ? 1.0 : 0.0;
  cert.extras["null_dim"] = static_cast<double>(k);
  return cert;
}

Certificate gap_relation_residual(const AnalysisOperator& omega, const Cosupport& lambda,
                                  const MeasurementSystem& m, const Vector& y,
                                  const Vector& x0) {
  const CertContext ctx = build_context(omega, lambda, m);
  check_instance_hypotheses(ctx, m, y, x0, "gap_relation_residual");

  const Vector x0_hat = constrained_min_analysis_l2(m, omega, y);
  const Vector lhs = ctx.omega_l * x0_hat;
  const Vector rhs = -(transpose_form(ctx) * (ctx.omega_lc * x0_hat));
  const double denom = omega.apply(x0_hat).norm();

  Certificate cert;
  cert.kind = CertificateKind::GapRelation;
  cert.value = (lhs - rhs).norm() / (denom > 0.0 ? denom : 1.0);
  cert.threshold = 1e-8;
  cert.holds = cert.value < *cert.threshold;
  stamp_dims(cert, omega, lambda, m);
  cert.extras["coefficient_norm"] = denom;
  return cert;
}

Certificate gap_one_step_check(const AnalysisOperator& omega, const Cosupport& lambda,
                               const MeasurementSystem& m, const Vector& x0, double t) {
  require(t > 0.0 && t <= 1.0, "gap_one_step_check: t must lie in (0, 1]");
  const CertContext ctx = build_context(omega, lambda, m);
  const Vector y = m.apply(x0);
  check_instance_hypotheses(ctx, m, y, x0, "gap_one_step_check");

  Certificate cert;
  cert.kind = CertificateKind::GapRelation;
  cert.threshold = 1.0;
  stamp_dims(cert, omega, lambda, m);
  cert.extras["t"] = t;

  const Vector x0_hat =
      (x0.norm() > 0.0) ? constrained_min_analysis_l2(m, omega, y) : Vector(Vector::Zero(m.d()));
  const double lhs = inf_norm(ctx.omega_l * x0_hat);
  const double rhs = t * inf_norm(ctx.omega_lc * x0_hat);
  cert.extras["lhs"] = lhs;
  cert.extras["rhs"] = rhs;

  if (rhs == 0.0) {
    cert.value = 0.0;
    cert.holds = false;
    cert.extras["degenerate"] = 1.0;
    return cert;
  }
  cert.value = lhs / rhs;
  cert.holds = cert.value < *cert.threshold;
  return cert;
}

Certificate heuristic_row_l2(const AnalysisOperator& omega, const Cosupport& lambda,
                             const MeasurementSystem& m) {
  const CertContext ctx = build_context(omega, lambda, m);
  require_full_rank(ctx, "heuristic_row_l2");

  const Matrix t = transpose_form(ctx);
  double best = 0.0;
  for (Index i = 0; i < t.rows(); ++i) best = std::max(best, t.row(i).norm());

  Certificate cert;
  cert.kind = CertificateKind::HeuristicL2;
  cert.value = best;
  cert.holds = false;  // diagnostic only
  stamp_dims(cert, omega, lambda, m);
  return cert;
}

}  // namespace cosparse
