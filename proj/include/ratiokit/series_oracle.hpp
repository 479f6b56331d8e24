#pragma once

#include "ratiokit/params.hpp"

namespace ratiokit {

/// Truncation control for the torus-average oracle.  Every denominator
/// factor 1/(1 - y z^{+-1}) is expanded as a geometric series cut at
/// `order`; the resulting a-priori tail bound must stay below
/// `tolerance` or the call refuses the answer.
struct TruncationPolicy {
  int order = 60;
  double tolerance = 1e-8;
};

struct SeriesResult {
  Complex value{0.0, 0.0};
  /// Rigorous bound on |returned - exact| from the dropped series tails.
  double tail_bound = 0.0;
};

/// Second oracle: the average as an N-fold circle integral against the
/// squared Vandermonde / N!.  The integrand factorizes through one
/// Laurent polynomial per torus variable, so the constant term reduces
/// to a double sum over permutation pairs with exact integer-exponent
/// bookkeeping.  Capacity: p, q <= 2 and N <= 3 (oracle, not a
/// production path).  Throws CapacityError beyond that,  ValueError if
/// policy.order < N, and TruncationTooCoarse when the tail bound
/// exceeds policy.tolerance.
SeriesResult torus_average(const SpectralParams& params, const TruncationPolicy& policy = {});

/// Same integral for the unequal-count integrand (no highest-weight
/// prefactor); counts capped at 2 each.
SeriesResult torus_average_extended(const ExtendedParams& params,
                                    const TruncationPolicy& policy = {});

}  // namespace ratiokit
