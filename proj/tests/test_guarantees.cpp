#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "cosparse/guarantees.hpp"
#include "cosparse/model.hpp"
#include "cosparse/numerics.hpp"
#include "cosparse/operators.hpp"
#include "cosparse/rng.hpp"
#include "cosparse/solvers.hpp"
#include "doctest.h"

using namespace cosparse;

namespace {

MeasurementSystem dense_system(Index m, Index d, uint64_t seed) {
  Rng rng(seed);
  return MeasurementSystem::from_dense(rng.normal_matrix(m, d));
}

AnalysisOperator dense_operator(Index p, Index d, uint64_t seed) {
  Rng rng(seed);
  return AnalysisOperator::from_dense(rng.normal_matrix(p, d));
}

struct Instance {
  AnalysisOperator omega = AnalysisOperator::from_dense(Matrix::Identity(1, 1));
  MeasurementSystem sys = MeasurementSystem::from_dense(Matrix::Identity(1, 1));
  Cosupport lambda;
  Vector x;
};

Instance make_instance(Index d, Index p, Index l, Index m, uint64_t seed) {
  Instance inst;
  inst.omega = random_tight_frame_operator(p, d, derive_seed(seed, 1));
  inst.x = generate_cosparse_signal(inst.omega, l, derive_seed(seed, 2));
  inst.lambda = cosupport_of(inst.omega, inst.x);
  inst.sys = dense_system(m, d, derive_seed(seed, 3));
  return inst;
}

// the certificate's display form, assembled from scratch
Matrix transpose_form_oracle(const AnalysisOperator& omega, const Cosupport& lambda,
                             const MeasurementSystem& m) {
  const Matrix w = null_space_basis(m.dense());
  const Matrix ol = restrict_rows(omega, lambda).dense();
  const Matrix oc = restrict_rows(omega, lambda.complement()).dense();
  return pseudo_inverse(w * ol.transpose()) * (w * oc.transpose());
}

double inf_norm_of(const Vector& v) {
  return v.size() > 0 ? v.cwiseAbs().maxCoeff() : 0.0;
}

}  // namespace

TEST_CASE("erc equals the brute-force maximum over sign vectors") {
  for (uint64_t seed : {1u, 2u, 3u}) {
    const Index m = 6, d = 8, p = 10, lsize = 5;
    const auto omega = dense_operator(p, d, derive_seed(seed, 1));
    const auto sys = dense_system(m, d, derive_seed(seed, 2));
    Rng rng(derive_seed(seed, 3));
    const Cosupport lambda(p, rng.sample_without_replacement(p, lsize));

    const auto cert = erc_analysis(omega, lambda, sys);

    const Matrix t = transpose_form_oracle(omega, lambda, sys);
    const Index nc = t.cols();
    double brute = 0.0;
    for (Index mask = 0; mask < (Index{1} << nc); ++mask) {
      Vector s(nc);
      for (Index j = 0; j < nc; ++j) s[j] = (mask >> j) & 1 ? 1.0 : -1.0;
      brute = std::max(brute, inf_norm_of(t * s));
    }
    CHECK(cert.value == doctest::Approx(brute).epsilon(1e-10));
  }
}

TEST_CASE("erc value and its transposed form agree to duality precision") {
  for (uint64_t seed : {4u, 5u, 6u}) {
    const Index m = 7, d = 12, p = 18, lsize = 9;
    const auto omega = dense_operator(p, d, derive_seed(seed, 1));
    const auto sys = dense_system(m, d, derive_seed(seed, 2));
    Rng rng(derive_seed(seed, 3));
    const Cosupport lambda(p, rng.sample_without_replacement(p, lsize));
    const auto cert = erc_analysis(omega, lambda, sys);
    const double other = cert.extras.at("transpose_norm");
    CHECK(std::abs(cert.value - other) <= 1e-12 * std::max(1.0, cert.value));
    CHECK(cert.threshold == 1.0);
    CHECK(cert.holds == (cert.value < 1.0));
  }
}

TEST_CASE("erc on a full cosupport is zero and holds") {
  const Index m = 4, d = 9, p = 12;
  const auto omega = dense_operator(p, d, 0x11);
  const auto sys = dense_system(m, d, 0x12);
  const auto cert = erc_analysis(omega, Cosupport::full(p), sys);
  CHECK(cert.value == 0.0);
  CHECK(cert.holds);
  const auto heur = heuristic_row_l2(omega, Cosupport::full(p), sys);
  CHECK(heur.value == 0.0);
}

TEST_CASE("erc requires a full-rank restricted operator") {
  const Index m = 4, d = 6, p = 8;
  Rng rng(0x13);
  Matrix rows = rng.normal_matrix(p, d);
  rows.row(1) = rows.row(0);  // two identical analysis rows
  const auto omega = AnalysisOperator::from_dense(rows);
  const auto sys = dense_system(m, d, 0x14);
  const Cosupport lambda(p, {0, 1});
  CHECK_THROWS_AS(erc_analysis(omega, lambda, sys), NumericalError);
  CHECK_THROWS_AS(heuristic_row_l2(omega, lambda, sys), NumericalError);
}

TEST_CASE("nsc enumerates both patterns on a one-dimensional null space") {
  const Index m = 4, d = 6, p = 10, lsize = 5;
  const auto omega = dense_operator(p, d, 0x21);
  const auto sys = dense_system(m, d, 0x22);
  Rng rng(0x23);
  const Cosupport lambda(p, rng.sample_without_replacement(p, lsize));

  const auto cert = nsc_sampled(omega, lambda, sys, 50, 0x24);
  CHECK(cert.extras.at("null_dim") == 1.0);
  CHECK(cert.extras.at("exact") == 1.0);
  CHECK(cert.extras.at("samples") == 2.0);

  const Matrix ol = restrict_rows(omega, lambda).dense();
  const Matrix n_basis = null_space_basis_any(ol, d);
  REQUIRE(n_basis.rows() == 1);
  const Vector coeff = restrict_rows(omega, lambda.complement()).dense() * n_basis.row(0).transpose();
  Vector s(coeff.size());
  for (Index i = 0; i < coeff.size(); ++i) s[i] = coeff[i] > 0 ? 1.0 : (coeff[i] < 0 ? -1.0 : 0.0);
  const Matrix t = transpose_form_oracle(omega, lambda, sys);
  CHECK(cert.value == doctest::Approx(inf_norm_of(t * s)).epsilon(1e-12));

  const auto erc = erc_analysis(omega, lambda, sys);
  CHECK(cert.value <= erc.value + 1e-12);
}

TEST_CASE("nsc sweep on a two-dimensional null space dominates random sampling") {
  const Index m = 5, d = 8, p = 12, lsize = 6;
  const auto omega = dense_operator(p, d, 0x31);
  const auto sys = dense_system(m, d, 0x32);
  Rng rng(0x33);
  const Cosupport lambda(p, rng.sample_without_replacement(p, lsize));

  const auto cert = nsc_sampled(omega, lambda, sys, 10, 0x34);
  REQUIRE(cert.extras.at("null_dim") == 2.0);
  CHECK(cert.extras.at("exact") == 1.0);

  const Matrix ol = restrict_rows(omega, lambda).dense();
  const Matrix n_basis = null_space_basis_any(ol, d);
  const Matrix oc = restrict_rows(omega, lambda.complement()).dense();
  const Matrix t = transpose_form_oracle(omega, lambda, sys);
  Rng probe(0x35);
  double sampled = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const Vector coeff = oc * (n_basis.transpose() * probe.normal_vector(2));
    Vector s(coeff.size());
    for (Index j = 0; j < coeff.size(); ++j)
      s[j] = coeff[j] > 0 ? 1.0 : (coeff[j] < 0 ? -1.0 : 0.0);
    sampled = std::max(sampled, inf_norm_of(t * s));
  }
  CHECK(cert.value >= sampled - 1e-12);

  const auto erc = erc_analysis(omega, lambda, sys);
  CHECK(cert.value <= erc.value + 1e-12);
}

TEST_CASE("nsc sampling stays below erc and is deterministic") {
  const Index m = 6, d = 10, p = 14, lsize = 6;  // null dimension 4
  const auto omega = dense_operator(p, d, 0x41);
  const auto sys = dense_system(m, d, 0x42);
  Rng rng(0x43);
  const Cosupport lambda(p, rng.sample_without_replacement(p, lsize));

  const auto a = nsc_sampled(omega, lambda, sys, 300, 0x44);
  const auto b = nsc_sampled(omega, lambda, sys, 300, 0x44);
  CHECK(a.value == b.value);
  CHECK(a.extras.at("exact") == 0.0);
  CHECK(a.extras.at("samples") == 300.0);
  CHECK(a.extras.at("distinct_patterns") >= 1.0);

  const auto erc = erc_analysis(omega, lambda, sys);
  CHECK(a.value <= erc.value + 1e-12);
}

TEST_CASE("nsc with a trivial null space is degenerate") {
  const Index m = 4, d = 6, p = 12;
  const auto omega = dense_operator(p, d, 0x51);
  const auto sys = dense_system(m, d, 0x52);
  const auto cert = nsc_sampled(omega, Cosupport::full(p), sys, 10, 0x53);
  CHECK(cert.extras.at("degenerate") == 1.0);
  CHECK(cert.value == 0.0);
  CHECK(cert.holds);
}

TEST_CASE("gap relation identity holds on random instances") {
  for (uint64_t seed : {0x61u, 0x62u, 0x63u, 0x64u, 0x65u}) {
    const auto inst = make_instance(20, 24, 15, 10, seed);
    const Vector y = inst.sys.apply(inst.x);
    const auto cert = gap_relation_residual(inst.omega, inst.lambda, inst.sys, y, inst.x);
    CHECK(cert.value <= 1e-8);
    CHECK(cert.holds);
    CHECK(cert.threshold == 1e-8);
  }
}

TEST_CASE("gap relation on the zero instance is exact") {
  const Index m = 5, d = 10, p = 14;
  const auto omega = dense_operator(p, d, 0x71);
  const auto sys = dense_system(m, d, 0x72);
  const auto cert = gap_relation_residual(omega, Cosupport::full(p), sys,
                                          Vector::Zero(m), Vector::Zero(d));
  CHECK(cert.value == 0.0);
  CHECK(cert.holds);
}

TEST_CASE("gap relation rejects violated hypotheses") {
  const auto inst = make_instance(20, 24, 15, 10, 0x81);
  const Vector y = inst.sys.apply(inst.x);

  Rng rng(0x82);
  const Vector x_bad = inst.x + 0.3 * rng.normal_vector(20);
  CHECK_THROWS_AS(
      gap_relation_residual(inst.omega, inst.lambda, inst.sys, inst.sys.apply(x_bad), x_bad),
      NumericalError);

  Vector y_bad = y;
  y_bad[0] += 1.0;
  CHECK_THROWS_AS(gap_relation_residual(inst.omega, inst.lambda, inst.sys, y_bad, inst.x),
                  NumericalError);
}

TEST_CASE("two computations of the initializer agree") {
  // KKT oracle: stationarity of |Omega x|^2 on {M x = y} via the saddle system
  const Index m = 10, d = 20, p = 24;
  const auto omega = dense_operator(p, d, 0x91);
  const auto sys = dense_system(m, d, 0x92);
  Rng rng(0x93);
  const Vector y = rng.normal_vector(m);

  const Matrix od = omega.dense(), md = sys.dense();
  Matrix kkt = Matrix::Zero(d + m, d + m);
  kkt.topLeftCorner(d, d) = od.transpose() * od;
  kkt.topRightCorner(d, m) = md.transpose();
  kkt.bottomLeftCorner(m, d) = md;
  Vector rhs = Vector::Zero(d + m);
  rhs.tail(m) = y;
  const Vector x_kkt = kkt.lu().solve(rhs).head(d);

  const Vector x_ns = constrained_min_analysis_l2(sys, omega, y);
  CHECK((x_kkt - x_ns).norm() <= 1e-9 * (1.0 + x_ns.norm()));
}

TEST_CASE("one-step check holds whenever erc does") {
  Index n_holds = 0;
  for (int i = 0; i < 40; ++i) {
    const auto inst = make_instance(12, 14, 10, 10, derive_seed(0xa1, i));
    Certificate erc;
    try {
      erc = erc_analysis(inst.omega, inst.lambda, inst.sys);
    } catch (const NumericalError&) {
      continue;
    }
    if (!erc.holds) continue;
    ++n_holds;
    const auto one = gap_one_step_check(inst.omega, inst.lambda, inst.sys, inst.x, 1.0);
    CHECK(one.holds);
    CHECK(one.value < 1.0);
  }
  REQUIRE(n_holds >= 10);  // the implication must not pass vacuously
}

TEST_CASE("one-step check can hold even when erc fails") {
  Index found = 0;
  for (int i = 0; i < 60 && found == 0; ++i) {
    const auto inst = make_instance(8, 12, 6, 5, derive_seed(0xb1, i));
    Certificate erc;
    try {
      erc = erc_analysis(inst.omega, inst.lambda, inst.sys);
    } catch (const NumericalError&) {
      continue;
    }
    if (erc.holds) continue;
    const auto one = gap_one_step_check(inst.omega, inst.lambda, inst.sys, inst.x, 1.0);
    if (one.holds) ++found;
  }
  CHECK(found == 1);  // the condition is sufficient, not necessary
}

TEST_CASE("one-step check on the zero signal is degenerate") {
  const Index m = 5, d = 10, p = 14;
  const auto omega = dense_operator(p, d, 0xc1);
  const auto sys = dense_system(m, d, 0xc2);
  const auto cert = gap_one_step_check(omega, Cosupport::full(p), sys, Vector::Zero(d), 1.0);
  CHECK(cert.extras.at("degenerate") == 1.0);
  CHECK_FALSE(cert.holds);

  CHECK_THROWS_AS(gap_one_step_check(omega, Cosupport::full(p), sys, Vector::Zero(d), 0.0),
                  std::invalid_argument);
}

TEST_CASE("heuristic row norms sit below the erc value") {
  for (uint64_t seed : {0xd1u, 0xd2u, 0xd3u}) {
    const Index m = 6, d = 10, p = 14, lsize = 7;
    const auto omega = dense_operator(p, d, derive_seed(seed, 1));
    const auto sys = dense_system(m, d, derive_seed(seed, 2));
    Rng rng(derive_seed(seed, 3));
    const Cosupport lambda(p, rng.sample_without_replacement(p, lsize));

    const auto erc = erc_analysis(omega, lambda, sys);
    const auto heur = heuristic_row_l2(omega, lambda, sys);
    CHECK(heur.value <= erc.value + 1e-12);
    CHECK_FALSE(heur.threshold.has_value());
    CHECK_FALSE(heur.holds);
  }
}

TEST_CASE("removing a column never increases the max row sum") {
  Rng rng(0xe1);
  for (int draw = 0; draw < 20; ++draw) {
    const Matrix a = rng.normal_matrix(7, 9);
    const double full = op_norm_inf_inf(a);
    for (Index j = 0; j < a.cols(); ++j) {
      Matrix reduced(a.rows(), a.cols() - 1);
      reduced.leftCols(j) = a.leftCols(j);
      reduced.rightCols(a.cols() - 1 - j) = a.rightCols(a.cols() - 1 - j);
      CHECK(op_norm_inf_inf(reduced) <= full + 1e-15);
    }
  }
}

TEST_CASE("erc certifies gap recovery end to end") {
  Index n_holds = 0;
  for (int i = 0; i < 40; ++i) {
    const auto inst = make_instance(12, 14, 10, 10, derive_seed(0xf1, i));
    Certificate erc;
    try {
      erc = erc_analysis(inst.omega, inst.lambda, inst.sys);
    } catch (const NumericalError&) {
      continue;
    }
    if (!erc.holds) continue;
    ++n_holds;
    const auto res = gap_solve(inst.sys, inst.sys.apply(inst.x), inst.omega);
    CHECK((res.x_hat - inst.x).norm() <= 1e-6 * inst.x.norm());
  }
  REQUIRE(n_holds >= 10);
}

TEST_CASE("erc certifies l1 recovery end to end") {
  Index n_holds = 0;
  for (int i = 0; i < 15; ++i) {
    const auto inst = make_instance(12, 14, 10, 10, derive_seed(0xf5, i));
    Certificate erc;
    try {
      erc = erc_analysis(inst.omega, inst.lambda, inst.sys);
    } catch (const NumericalError&) {
      continue;
    }
    if (!erc.holds) continue;
    ++n_holds;
    const Vector y = inst.sys.apply(inst.x);
    const auto l1 = analysis_l1_solve(inst.sys, y, inst.omega);
    const auto polished = debias(l1.x, inst.omega, inst.sys, y);
    CHECK((polished.x_hat - inst.x).norm() <= 1e-6 * inst.x.norm());
  }
  REQUIRE(n_holds >= 4);
}

TEST_CASE("certificate kind names") {
  CHECK(std::string(to_string(CertificateKind::Erc)) == "erc");
  CHECK(std::string(to_string(CertificateKind::NscSampled)) == "nsc-sampled");
  CHECK(std::string(to_string(CertificateKind::GapRelation)) == "gap-relation");
  CHECK(std::string(to_string(CertificateKind::HeuristicL2)) == "heuristic-l2");
}
