#pragma once

#include <map>
#include <optional>
#include <string>

#include "cosparse/cosupport.hpp"
#include "cosparse/operators.hpp"
#include "cosparse/types.hpp"

namespace cosparse {

enum class CertificateKind { Erc, NscSampled, GapRelation, HeuristicL2 };

const char* to_string(CertificateKind k);

// Outcome of a recovery-condition evaluation. For kinds that carry a
// threshold, holds is exactly (value < threshold); the heuristic kind has no
// threshold and never claims to hold. extras keeps instance numbers worth
// logging (dimensions, sample counts, the two sides of an inequality).
struct Certificate {
  CertificateKind kind = CertificateKind::Erc;
  double value = 0.0;
  std::optional<double> threshold;
  bool holds = false;
  std::map<std::string, double> extras;
};

// Exact recovery condition for the analysis pair (Omega, M) at cosupport
// Lambda: with W spanning Null(M), the 1->1 operator norm of
// Omega_Lambda^c W' (Omega_Lambda W')^+ must fall below one. Requires
// Omega_Lambda W' to have full column rank d - m, otherwise NumericalError.
// extras carry the independently computed inf->inf norm of the transposed
// form, equal by duality.
Certificate erc_analysis(const AnalysisOperator& omega, const Cosupport& lambda,
                         const MeasurementSystem& m);

// Sign-aware sharpening of the same condition: the sup runs only over sign
// patterns of Omega_Lambda^c x realized by signals x in Null(Omega_Lambda).
// The patterns are enumerated exactly when that null space has dimension one
// (two patterns) or two (a sweep over the arrangement cells); otherwise
// n_samples Gaussian draws give a lower estimate, never a guarantee.
// extras: exact (0/1), samples (patterns evaluated), degenerate when
// Null(Omega_Lambda) is trivial.
Certificate nsc_sampled(const AnalysisOperator& omega, const Cosupport& lambda,
                        const MeasurementSystem& m, Index n_samples, uint64_t seed);

// Checks the identity tying the initializer's analysis coefficients on
// Lambda to those off Lambda:
//   Omega_Lambda x0_hat = -(W Omega_Lambda')^+ W Omega_Lambda^c' Omega_Lambda^c x0_hat
// where x0_hat minimizes |Omega x|_2 subject to M x = y. The certificate
// value is the relative residual, threshold 1e-8. The hypotheses
// Omega_Lambda x0 = 0 and y = M x0 are verified and violations throw.
Certificate gap_relation_residual(const AnalysisOperator& omega, const Cosupport& lambda,
                                  const MeasurementSystem& m, const Vector& y,
                                  const Vector& x0);

// One-step elimination test at the initializer:
//   |Omega_Lambda x0_hat|_inf < t |Omega_Lambda^c x0_hat|_inf.
// value is the ratio of the two sides (threshold 1), extras carry both sides
// and a degenerate flag for the vacuous case where the right side vanishes.
Certificate gap_one_step_check(const AnalysisOperator& omega, const Cosupport& lambda,
                               const MeasurementSystem& m, const Vector& x0, double t);

// Average-case diagnostic: the maximum row l2-norm of
// (W Omega_Lambda')^+ W Omega_Lambda^c'. Not a guarantee; no threshold.
Certificate heuristic_row_l2(const AnalysisOperator& omega, const Cosupport& lambda,
                             const MeasurementSystem& m);

}  // namespace cosparse
