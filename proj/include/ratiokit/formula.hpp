#pragma once

#include <complex>
#include <vector>

#include "ratiokit/params.hpp"

namespace ratiokit {

struct EvalOptions {
  /// Relative gap |1 - x_a/x_b| below which two x's count as one
  /// confluent cluster.
  double cluster_tol = 1e-6;
  /// Auto-delegate clustered inputs to the perturb-and-extrapolate path.
  bool confluent = true;
  /// Relative tangential perturbation used by that path.
  double confluent_epsilon = 1e-4;
  /// Re-evaluate in double-double when the cancellation diagnostic
  /// exceeds extended_precision_threshold.
  bool extended_precision = true;
  double extended_precision_threshold = 1e8;
  /// Keep the per-coset terms in the result (diagnostics).
  bool record_terms = false;
  /// Cap on the coset table size.
  std::uint64_t max_cosets = 1000000;
};

enum class EvalMethod { Direct, ConfluentExtrapolated };

struct EvalResult {
  Complex value{0.0, 0.0};
  EvalMethod method = EvalMethod::Direct;
  /// Cancellation diagnostic max|term| / |sum|, clamped to >= 1.
  double condition = 1.0;
  bool extended_precision_used = false;
  /// Perturbation size and extrapolation residual (confluent path only).
  double epsilon = 0.0;
  double extrapolation_residual = 0.0;
  std::vector<Complex> terms;
};

/// Full two-family average: sum over cosets of
///   prod_{l in L} x_l^N / prod_{l >= p} y_l^N
///   * prod_{j in J, l in L} (1 - y_j/x_l)(1 - x_j/y_l)
///                          / ((1 - x_j/x_l)(1 - y_j/y_l))
/// with y-indices keeping their original slot roles.  Clustered x's are
/// delegated to the confluent path when opts.confluent is set.
EvalResult eval_thm1(const SpectralParams& params, const EvalOptions& opts = {});

/// Unequal-count generalization normalized by the original x's instead
/// of the y's; p' + q' denominator factors against p + q numerator ones.
EvalResult eval_cor12(const ExtendedParams& params, const EvalOptions& opts = {});

/// Equal-x limit: sum over cosets of prod_{l in L} x_l^N
/// * prod_{j in J, l in L} 1/(1 - x_j/x_l).
EvalResult eval_compact(int p, int q, int N, const std::vector<Complex>& xs,
                        const EvalOptions& opts = {});

/// Stable-range closed form prod_{l >= p} y_l^{-N}
/// * prod_{j < p <= l} 1/(1 - y_j/y_l); no coset sum.
EvalResult eval_stable(int p, int q, int N, const std::vector<Complex>& ys);

/// Deterministic tangential perturbation at eps and eps/2 followed by
/// Richardson extrapolation; passthrough when no cluster is detected at
/// threshold tol.
EvalResult eval_confluent(const SpectralParams& params, double tol, EvalOptions opts = {});

/// Transitive clustering of near-coincident x's at relative gap tol;
/// only clusters with two or more members are returned, each sorted.
std::vector<std::vector<int>> find_clusters(const std::vector<Complex>& xs, double tol);

/// xs with cluster member k nudged to x * (1 + i*k*eps) (tangentially
/// for unit-modulus x); member 0 of each cluster stays put.
std::vector<Complex> perturb_clusters(const std::vector<Complex>& xs,
                                      const std::vector<std::vector<int>>& clusters, double eps);

/// 2*f(eps/2) - f(eps) with the instability check; the residual
/// |f(eps/2) - f(eps)| is written through if requested.  Throws
/// ExtrapolationUnstable when the residual exceeds 1e3 * tol relative
/// to the extrapolated value.
Complex richardson_pair(Complex f_eps, Complex f_half, double tol, double* residual = nullptr);

}  // namespace ratiokit
