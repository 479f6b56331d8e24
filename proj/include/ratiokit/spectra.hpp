#pragma once

#include <vector>

#include "ratiokit/formula.hpp"
#include "ratiokit/params.hpp"

namespace ratiokit {

/// Discrete Fourier spectrum of the averaged ratio as a function of a
/// single unitary angle psi_k (x_k = e^{i psi_k}) with every other
/// parameter frozen.  Modes are indexed -grid/2 .. grid/2 - 1.
struct FourierProfile {
  int k = 0;
  int grid = 0;
  /// |c_m| for m = -grid/2 .. grid/2 - 1, stored at m + grid/2.
  std::vector<double> magnitudes;

  double magnitude(int mode) const;
  double max_magnitude() const;
};

/// Samples eval_thm1 at `grid` equispaced angles of variable k and
/// returns the mode magnitudes.  grid == 0 picks the default
/// max(16, 4N rounded up to a power of two); an explicit grid must be a
/// power of two (ValueError) and at least 4N (AliasWarning below).
/// Requires every x on the unit circle (DomainViolation) and
/// 0 <= k < p + q (ValueError).  The averaged ratio is a Laurent
/// polynomial in x_k supported on modes [0, N], so everything outside
/// that window is numerical leakage.
FourierProfile fourier_support(const SpectralParams& params, int k, int grid = 0,
                               const EvalOptions& opts = {});

/// Relative change |chi(permuted) - chi(original)| / |chi(original)|
/// under a symmetry-group element: perm_psi permutes all x's (global
/// slot values, a permutation of 0..p+q-1), perm_phi_p permutes the
/// contracting y's (a permutation of 0..p-1), perm_phi_q the expanding
/// y's (global slot values, a permutation of p..p+q-1).  A phi
/// permutation entry on the wrong side of the p/q split throws
/// BlockViolation; malformed permutations throw ShapeError/ValueError.
double weyl_orbit_check(const SpectralParams& params, const std::vector<int>& perm_psi,
                        const std::vector<int>& perm_phi_p, const std::vector<int>& perm_phi_q);

}  // namespace ratiokit
