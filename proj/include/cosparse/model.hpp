#pragma once

#include "cosparse/cosupport.hpp"
#include "cosparse/numerics.hpp"
#include "cosparse/operators.hpp"
#include "cosparse/types.hpp"

namespace cosparse {

// Entries of Omega x with magnitude at most zero_tol * |x|_2 count as zero.
Index cosparsity(const AnalysisOperator& omega, const Vector& x, double zero_tol = 1e-6);
Cosupport cosupport_of(const AnalysisOperator& omega, const Vector& x, double zero_tol = 1e-6);

// Gaussian vector projected onto the null space of the rows named by a
// uniformly drawn size-l cosupport. Retries with a fresh draw (up to 100
// times) when the projection degenerates to zero; throws NumericalError if
// every attempt collapses, which happens when l rows only annihilate 0.
Vector generate_cosparse_signal(const AnalysisOperator& omega, Index l, uint64_t seed);

// dim of { x : x constant on each lattice component cut out by the kept
// edges }: |V| - |V(Lambda)| + (number of connected components of the
// subgraph on the edges in Lambda).
Index subspace_dim_dif(const PixelGraph& graph, const Cosupport& lambda);

// dim Null(Omega_Lambda) through a rank computation; works for any operator
Index subspace_dim_dense(const AnalysisOperator& omega, const Cosupport& lambda,
                         double rtol = kRankRtol);

// largest analysis-subspace dimension at cosparsity at least l, when every
// d x d row subset of Omega is nonsingular
double kappa_general_position(Index d, Index l);

struct KappaBounds {
  double lower = 0.0;
  double upper = 0.0;
  bool lower_applicable = true;  // the lower bound needs l >= 5
};

// bounds for the n x n lattice difference operator:
//   d - l/2 - sqrt(l/2) - 1  <=  kappa  <=  d - l/2
KappaBounds kappa_dif_bounds(Index d, Index l);

// exact kappa by enumerating all size-l cosupports; refuses blowups
Index kappa_brute_force(const AnalysisOperator& omega, Index l,
                        double max_subsets = 1e7);

// max over cosupport pairs of dim(W_{Lambda1} + W_{Lambda2}); the quantity
// that decides uniqueness without side information exactly. Brute force,
// small instances only.
Index kappa_tilde_brute_force(const AnalysisOperator& omega, Index l,
                              double max_pairs = 1e7);

enum class Guarantee { Guaranteed, NotGuaranteed, Indeterminate };

struct UniquenessVerdict {
  double kappa_lower = 0.0;
  double kappa_upper = 0.0;
  bool kappa_exact = true;
  Index m = 0;
  Guarantee known_cosupport = Guarantee::Indeterminate;    // needs kappa <= m
  Guarantee unknown_cosupport = Guarantee::Indeterminate;  // needs 2 kappa <= m
  double required_m_known_lower = 0.0;
  double required_m_known_upper = 0.0;
  double required_m_unknown_lower = 0.0;
  double required_m_unknown_upper = 0.0;
};

UniquenessVerdict uniqueness_verdict(double kappa, Index m);
UniquenessVerdict uniqueness_verdict(const KappaBounds& bounds, Index m);

struct SubspaceCount {
  double log2_exact = 0.0;    // log2 C(n, k) through log-gamma
  double entropy_bits = 0.0;  // n * H(k / n)
};

SubspaceCount subspace_count_log2(Index n, Index k);

}  // namespace cosparse
