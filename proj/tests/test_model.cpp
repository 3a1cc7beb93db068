#include "cosparse/model.hpp"

#include "cosparse/numerics.hpp"
#include "cosparse/rng.hpp"
#include "doctest.h"

using namespace cosparse;

namespace {

// rank route for the lattice subspace dimension, the oracle for union-find
Index dim_by_rank(const AnalysisOperator& omega, const std::vector<Index>& rows) {
  const Matrix dense = omega.dense();
  Matrix sub(static_cast<Index>(rows.size()), omega.d());
  for (size_t i = 0; i < rows.size(); ++i) sub.row(static_cast<Index>(i)) = dense.row(rows[i]);
  return omega.d() - numerical_rank(sub);
}

}  // namespace

TEST_CASE("cosparsity and cosupport on the identity operator") {
  const AnalysisOperator omega = AnalysisOperator::from_dense(Matrix::Identity(4, 4));
  Vector x(4);
  x << 0.0, 3.0, 0.0, 5.0;
  CHECK(cosparsity(omega, x) == 2);
  const Cosupport lambda = cosupport_of(omega, x);
  CHECK(lambda.rows() == std::vector<Index>{0, 2});
  CHECK(lambda.complement().rows() == std::vector<Index>{1, 3});
}

TEST_CASE("cosparsity threshold is relative to the signal norm") {
  const AnalysisOperator omega = AnalysisOperator::from_dense(Matrix::Identity(3, 3));
  Vector x(3);
  x << 1e-7, 0.0, 1.0;  // 1e-7 < 1e-6 * |x|
  CHECK(cosparsity(omega, x) == 2);
  CHECK(cosparsity(omega, x, 1e-8) == 1);
}

TEST_CASE("the zero signal is annihilated by every row") {
  const AnalysisOperator omega = finite_difference_2d(3);
  CHECK(cosparsity(omega, Vector::Zero(9)) == omega.p());
}

TEST_CASE("generated signals carry the requested cosparsity") {
  const AnalysisOperator frame = random_tight_frame_operator(24, 16, 2);
  for (Index l : {0, 4, 8}) {
    const Vector x = generate_cosparse_signal(frame, l, 1000 + uint64_t(l));
    CHECK(x.norm() > 0.0);
    CHECK(cosparsity(frame, x) >= l);
    const Cosupport lambda = cosupport_of(frame, x, 1e-10);
    const AnalysisOperator sub = restrict_rows(frame, lambda);
    if (sub.p() > 0)
      CHECK(sub.apply(x).cwiseAbs().maxCoeff() <= 1e-10 * x.norm());
  }
}

TEST_CASE("generated signals are deterministic per seed") {
  const AnalysisOperator omega = finite_difference_2d(4);
  const Vector a = generate_cosparse_signal(omega, 10, 5);
  const Vector b = generate_cosparse_signal(omega, 10, 5);
  const Vector c = generate_cosparse_signal(omega, 10, 6);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a - c).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("generation fails cleanly when only zero fits") {
  // the identity forces x = 0 once every row must vanish
  const AnalysisOperator omega = AnalysisOperator::from_dense(Matrix::Identity(5, 5));
  CHECK_THROWS_AS(generate_cosparse_signal(omega, 5, 3), NumericalError);
}

TEST_CASE("lattice subspace dimension: extremes") {
  const PixelGraph g(3);
  CHECK(subspace_dim_dif(g, Cosupport::empty(12)) == 9);  // nothing constrained
  CHECK(subspace_dim_dif(g, Cosupport::full(12)) == 1);   // constants only
}

TEST_CASE("lattice subspace dimension agrees with the rank route") {
  const PixelGraph g(3);
  const AnalysisOperator omega = finite_difference_2d(3);
  Rng rng(71);
  for (int trial = 0; trial < 120; ++trial) {
    const Index l = rng.uniform_index(13);
    const std::vector<Index> rows = rng.sample_without_replacement(12, l);
    const Cosupport lambda(12, rows);
    CHECK(subspace_dim_dif(g, lambda) == dim_by_rank(omega, rows));
    CHECK(subspace_dim_dense(omega, lambda) == subspace_dim_dif(g, lambda));
  }
}

TEST_CASE("general-position kappa is the clipped codimension") {
  CHECK(kappa_general_position(10, 3) == 7.0);
  CHECK(kappa_general_position(10, 10) == 0.0);
  CHECK(kappa_general_position(10, 14) == 0.0);
}

TEST_CASE("lattice kappa bounds at the benchmark size") {
  const KappaBounds b = kappa_dif_bounds(65536, 128014);
  CHECK(b.upper == doctest::Approx(1529.0).epsilon(1e-12));
  CHECK(b.lower == doctest::Approx(65536.0 - 64007.0 - std::sqrt(64007.0) - 1.0).epsilon(1e-12));
  CHECK(b.lower == doctest::Approx(1275.0).epsilon(1e-4));
  CHECK(b.lower_applicable);
  CHECK_FALSE(kappa_dif_bounds(16, 4).lower_applicable);
}

TEST_CASE("brute-force kappa matches general position for dense operators") {
  Rng rng(83);
  for (int trial = 0; trial < 6; ++trial) {
    const Index d = 2 + rng.uniform_index(5);   // up to 6
    const Index p = d + rng.uniform_index(8 - d + 1);
    const AnalysisOperator omega = AnalysisOperator::from_dense(rng.normal_matrix(p, d));
    for (Index l = 0; l <= p; ++l)
      CHECK(double(kappa_brute_force(omega, l)) == kappa_general_position(d, l));
  }
}

TEST_CASE("brute-force kappa on the 3x3 lattice respects the bounds") {
  const AnalysisOperator omega = finite_difference_2d(3);
  for (Index l = 5; l <= 12; ++l) {
    const Index kappa = kappa_brute_force(omega, l);
    const KappaBounds b = kappa_dif_bounds(9, l);
    CHECK(double(kappa) <= b.upper + 1e-9);
    CHECK(double(kappa) >= b.lower - 1e-9);
  }
}

TEST_CASE("brute-force kappa refuses oversized enumerations") {
  const AnalysisOperator omega = finite_difference_2d(8);
  CHECK_THROWS_AS(kappa_brute_force(omega, 56), std::invalid_argument);
}

TEST_CASE("kappa-tilde: sandwiched between kappa and twice kappa") {
  Rng rng(97);
  for (int trial = 0; trial < 4; ++trial) {
    const Index d = 3 + rng.uniform_index(2);
    const Index p = d + 2;
    const Index l = 2;
    const AnalysisOperator omega = AnalysisOperator::from_dense(rng.normal_matrix(p, d));
    const Index kappa = kappa_brute_force(omega, l);
    const Index tilde = kappa_tilde_brute_force(omega, l);
    CHECK(tilde >= kappa);
    CHECK(tilde <= std::min(2 * kappa, d));
  }
}

TEST_CASE("kappa-tilde agrees with the three-rank formula") {
  Rng rng(103);
  const Index d = 4, p = 6, l = 2;
  const AnalysisOperator omega = AnalysisOperator::from_dense(rng.normal_matrix(p, d));
  const Matrix dense = omega.dense();

  std::vector<std::vector<Index>> subsets;
  for (Index i = 0; i < p; ++i)
    for (Index j = i + 1; j < p; ++j) subsets.push_back({i, j});

  Index oracle = 0;
  for (const auto& s1 : subsets)
    for (const auto& s2 : subsets) {
      Matrix a1(2, d), a2(2, d), stacked(4, d);
      a1 << dense.row(s1[0]), dense.row(s1[1]);
      a2 << dense.row(s2[0]), dense.row(s2[1]);
      stacked << a1, a2;
      // dim(N1 + N2) = d - r1 - r2 + rank of the stacked rows
      const Index dim = d - numerical_rank(a1) - numerical_rank(a2) + numerical_rank(stacked);
      oracle = std::max(oracle, dim);
    }
  CHECK(kappa_tilde_brute_force(omega, l) == oracle);
}

TEST_CASE("uniqueness verdict with an exact kappa") {
  const UniquenessVerdict v = uniqueness_verdict(4.0, 10);
  CHECK(v.known_cosupport == Guarantee::Guaranteed);    // 4 <= 10
  CHECK(v.unknown_cosupport == Guarantee::Guaranteed);  // 8 <= 10
  const UniquenessVerdict w = uniqueness_verdict(6.0, 10);
  CHECK(w.known_cosupport == Guarantee::Guaranteed);
  CHECK(w.unknown_cosupport == Guarantee::NotGuaranteed);  // 12 > 10
  const UniquenessVerdict u = uniqueness_verdict(12.0, 10);
  CHECK(u.known_cosupport == Guarantee::NotGuaranteed);
}

TEST_CASE("uniqueness verdict in general position tracks the codimension") {
  // m below d - l: not even a known cosupport pins the signal down
  const UniquenessVerdict v = uniqueness_verdict(kappa_general_position(20, 14), 5);
  CHECK(v.known_cosupport == Guarantee::NotGuaranteed);
}

TEST_CASE("uniqueness verdict with interval kappa at the benchmark numbers") {
  KappaBounds b;
  b.lower = 1276.0;
  b.upper = 1524.0;
  const UniquenessVerdict v = uniqueness_verdict(b, 3000);
  CHECK(v.known_cosupport == Guarantee::Guaranteed);        // 1524 <= 3000
  CHECK(v.unknown_cosupport == Guarantee::Indeterminate);   // 2552 <= 3000 < 3048
  CHECK(v.required_m_unknown_lower == doctest::Approx(2552.0));
  CHECK(v.required_m_unknown_upper == doctest::Approx(3048.0));
  CHECK(uniqueness_verdict(b, 3048).unknown_cosupport == Guarantee::Guaranteed);
  CHECK(uniqueness_verdict(b, 2551).unknown_cosupport == Guarantee::NotGuaranteed);
}

TEST_CASE("subspace counting: entropy approximation lands within two percent") {
  const SubspaceCount c = subspace_count_log2(400, 200);
  CHECK(c.entropy_bits == 400.0);
  CHECK(std::abs(c.log2_exact - c.entropy_bits) / c.log2_exact < 0.02);
}

TEST_CASE("subspace counting: edge cases and the small-k growth trend") {
  CHECK(subspace_count_log2(100, 0).log2_exact == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(subspace_count_log2(100, 100).log2_exact == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(subspace_count_log2(100, 0).entropy_bits == 0.0);
  for (Index k : {4, 8}) {
    const double exact = subspace_count_log2(400, k).log2_exact;
    const double trend = double(k) * std::log2(400.0 / double(k));
    CHECK(exact >= trend);
    CHECK(exact <= 1.3 * trend);
  }
}
