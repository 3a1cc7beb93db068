#include "cosparse/model.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <numeric>

#include "cosparse/numerics.hpp"
#include "cosparse/rng.hpp"

namespace cosparse {

namespace {

std::vector<Index> zero_rows(const AnalysisOperator& omega, const Vector& x,
                             double zero_tol) {
  const Vector coeffs = omega.apply(x);
  const double cut = zero_tol * x.norm();
  std::vector<Index> rows;
  for (Index i = 0; i < coeffs.size(); ++i)
    if (std::abs(coeffs[i]) <= cut) rows.push_back(i);
  return rows;
}

struct UnionFind {
  std::vector<Index> parent;

  explicit UnionFind(Index n) : parent(static_cast<size_t>(n)) {
    std::iota(parent.begin(), parent.end(), Index{0});
  }

  Index find(Index a) {
    while (parent[static_cast<size_t>(a)] != a) {
      parent[static_cast<size_t>(a)] = parent[static_cast<size_t>(parent[static_cast<size_t>(a)])];
      a = parent[static_cast<size_t>(a)];
    }
    return a;
  }

  void unite(Index a, Index b) { parent[static_cast<size_t>(find(a))] = find(b); }
};

double log2_binomial(Index n, Index k) {
  return (std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) -
          std::lgamma(double(n - k) + 1.0)) /
         std::log(2.0);
}

// visits every size-k index subset of {0..n-1}
template <typename Fn>
void for_each_subset(Index n, Index k, Fn&& fn) {
  std::vector<Index> comb(static_cast<size_t>(k));
  std::iota(comb.begin(), comb.end(), Index{0});
  if (k > n) return;
  while (true) {
    fn(comb);
    Index i = k - 1;
    while (i >= 0 && comb[static_cast<size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++comb[static_cast<size_t>(i)];
    for (Index j = i + 1; j < k; ++j)
      comb[static_cast<size_t>(j)] = comb[static_cast<size_t>(j - 1)] + 1;
  }
}

Index subspace_dim_of_rows(const AnalysisOperator& omega, const std::vector<Index>& rows) {
  if (omega.kind() == AnalysisOperator::Kind::Dif2d && !omega.restricted()) {
    const PixelGraph g(omega.lattice_side());
    UnionFind uf(g.vertices());
    std::vector<char> covered(static_cast<size_t>(g.vertices()), 0);
    for (Index e : rows) {
      const auto [a, b] = g.edge_endpoints(e);
      covered[static_cast<size_t>(a)] = covered[static_cast<size_t>(b)] = 1;
      uf.unite(a, b);
    }
    Index v_covered = 0, components = 0;
    for (Index v = 0; v < g.vertices(); ++v) {
      if (!covered[static_cast<size_t>(v)]) continue;
      ++v_covered;
      if (uf.find(v) == v) ++components;  // unions touch covered vertices only
    }
    return g.vertices() - v_covered + components;
  }
  Matrix sub(static_cast<Index>(rows.size()), omega.d());
  const Matrix dense = omega.dense();
  for (size_t i = 0; i < rows.size(); ++i) sub.row(static_cast<Index>(i)) = dense.row(rows[i]);
  return omega.d() - numerical_rank(sub);
}

}  // namespace

Index cosparsity(const AnalysisOperator& omega, const Vector& x, double zero_tol) {
  require(x.size() == omega.d(), "cosparsity: dimension mismatch");
  return static_cast<Index>(zero_rows(omega, x, zero_tol).size());
}

Cosupport cosupport_of(const AnalysisOperator& omega, const Vector& x, double zero_tol) {
  require(x.size() == omega.d(), "cosupport_of: dimension mismatch");
  return Cosupport(omega.p(), zero_rows(omega, x, zero_tol));
}

Vector generate_cosparse_signal(const AnalysisOperator& omega, Index l, uint64_t seed) {
  const Index p = omega.p(), d = omega.d();
  require(l >= 0 && l <= p, "generate_cosparse_signal: cosparsity out of range");
  Rng rng(derive_seed(seed, 0x516ull));
  for (int attempt = 0; attempt < 100; ++attempt) {
    const std::vector<Index> lambda = rng.sample_without_replacement(p, l);
    const Vector v = rng.normal_vector(d);
    Vector x;
    if (l == 0) {
      x = v;
    } else {
      const AnalysisOperator sub = restrict_rows(omega, Cosupport(p, lambda));
      const Matrix a = sub.dense();
      x = v - pseudo_inverse(a) * (a * v);
    }
    if (x.norm() > 1e-12 * v.norm()) return x;
  }
  throw NumericalError(
      "generate_cosparse_signal: projection collapsed to zero on every "
      "attempt; the requested cosparsity admits only the zero signal");
}

Index subspace_dim_dif(const PixelGraph& graph, const Cosupport& lambda) {
  require(lambda.p() == graph.edges(), "subspace_dim_dif: cosupport is for a different edge count");
  AnalysisOperator omega = AnalysisOperator::dif2d(graph.n);
  return subspace_dim_of_rows(omega, lambda.rows());
}

Index subspace_dim_dense(const AnalysisOperator& omega, const Cosupport& lambda, double rtol) {
  require(lambda.p() == omega.p(), "subspace_dim_dense: cosupport is for a different row count");
  Matrix sub(lambda.size(), omega.d());
  const Matrix dense = omega.dense();
  for (Index i = 0; i < lambda.size(); ++i) sub.row(i) = dense.row(lambda[i]);
  return omega.d() - numerical_rank(sub, rtol);
}

double kappa_general_position(Index d, Index l) {
  return std::max<double>(double(d - l), 0.0);
}

KappaBounds kappa_dif_bounds(Index d, Index l) {
  KappaBounds b;
  b.upper = double(d) - double(l) / 2.0;
  b.lower = double(d) - double(l) / 2.0 - std::sqrt(double(l) / 2.0) - 1.0;
  b.lower_applicable = (l >= 5);
  return b;
}

Index kappa_brute_force(const AnalysisOperator& omega, Index l, double max_subsets) {
  const Index p = omega.p();
  require(l >= 0 && l <= p, "kappa_brute_force: cosparsity out of range");
  require(std::exp2(log2_binomial(p, l)) <= max_subsets,
          "kappa_brute_force: subset count over budget");
  Index best = 0;
  for_each_subset(p, l, [&](const std::vector<Index>& rows) {
    best = std::max(best, subspace_dim_of_rows(omega, rows));
  });
  return best;
}

Index kappa_tilde_brute_force(const AnalysisOperator& omega, Index l, double max_pairs) {
  const Index p = omega.p(), d = omega.d();
  require(l >= 0 && l <= p, "kappa_tilde_brute_force: cosparsity out of range");
  require(std::exp2(2.0 * log2_binomial(p, l)) <= max_pairs,
          "kappa_tilde_brute_force: pair count over budget");
  const Matrix dense = omega.dense();

  std::vector<Matrix> bases;
  for_each_subset(p, l, [&](const std::vector<Index>& rows) {
    Matrix sub(static_cast<Index>(rows.size()), d);
    for (size_t i = 0; i < rows.size(); ++i) sub.row(static_cast<Index>(i)) = dense.row(rows[i]);
    bases.push_back(null_space_basis_any(sub, d));
  });

  Index best = 0;
  for (size_t i = 0; i < bases.size(); ++i)
    for (size_t j = i; j < bases.size(); ++j) {
      Matrix joint(bases[i].rows() + bases[j].rows(), d);
      joint.topRows(bases[i].rows()) = bases[i];
      joint.bottomRows(bases[j].rows()) = bases[j];
      best = std::max(best, numerical_rank(joint));
    }
  return best;
}

namespace {

UniquenessVerdict make_verdict(double lo, double hi, bool exact, Index m) {
  UniquenessVerdict v;
  v.kappa_lower = lo;
  v.kappa_upper = hi;
  v.kappa_exact = exact;
  v.m = m;
  const double md = double(m);
  v.known_cosupport = (hi <= md)  ? Guarantee::Guaranteed
                      : (lo > md) ? Guarantee::NotGuaranteed
                                  : Guarantee::Indeterminate;
  v.unknown_cosupport = (2.0 * hi <= md)  ? Guarantee::Guaranteed
                        : (2.0 * lo > md) ? Guarantee::NotGuaranteed
                                          : Guarantee::Indeterminate;
  v.required_m_known_lower = lo;
  v.required_m_known_upper = hi;
  v.required_m_unknown_lower = 2.0 * lo;
  v.required_m_unknown_upper = 2.0 * hi;
  return v;
}

}  // namespace

UniquenessVerdict uniqueness_verdict(double kappa, Index m) {
  return make_verdict(kappa, kappa, true, m);
}

UniquenessVerdict uniqueness_verdict(const KappaBounds& bounds, Index m) {
  const double lo = bounds.lower_applicable ? std::max(bounds.lower, 0.0) : 0.0;
  return make_verdict(lo, bounds.upper, false, m);
}

SubspaceCount subspace_count_log2(Index n, Index k) {
  require(n >= 0 && k >= 0 && k <= n, "subspace_count_log2: need 0 <= k <= n");
  SubspaceCount out;
  out.log2_exact = log2_binomial(n, k);
  const double t = (n == 0) ? 0.0 : double(k) / double(n);
  double h = 0.0;
  if (t > 0.0 && t < 1.0) h = -t * std::log2(t) - (1.0 - t) * std::log2(1.0 - t);
  out.entropy_bits = double(n) * h;
  return out;
}

}  // namespace cosparse
