#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ratiokit/params.hpp"

namespace ratiokit {

/// Spectrum of one Haar-distributed unitary matrix.  Eigenvalues are
/// stored sorted by (re, im) so equal matrices produce bitwise equal
/// samples and downstream evaluation is order-independent by
/// construction.
struct UnitarySample {
  std::vector<Complex> eigenvalues;
};

/// Streaming Monte Carlo result.  Same (seed, samples) always produces
/// the same mean bit-for-bit, regardless of the worker-thread count.
struct Estimate {
  Complex mean{0.0, 0.0};
  /// Componentwise max of the re/im standard errors of the mean.
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::string method;
};

struct McOptions {
  int threads = 1;
  /// Logical samples per accumulation block.  Fixed blocks plus a
  /// deterministic pairwise merge make the estimate independent of how
  /// blocks are scheduled across threads.
  std::uint64_t block_size = 1024;
};

/// Draws sample `index` of the stream keyed by `seed`: an N x N matrix
/// of independent standard complex Gaussians is orthonormalized by
/// Householder QR, each column is corrected by the phase of the
/// corresponding R diagonal entry (making the distribution exactly
/// Haar), and the spectrum is returned sorted.  Throws NumericalFailure
/// when the reconstruction ||U*U - I||_max exceeds 1e-12 or the
/// eigensolver residual ||U V - V diag(lambda)||_max exceeds 1e-8.
UnitarySample sample_haar_unitary(int N, std::uint64_t seed, std::uint64_t index);

/// Integrand of the average: prod_{l>=p} (x_l/y_l)^N
///   * prod_{j<p} prod_a (1 - x_j lam_a) / (1 - y_j lam_a)
///   * prod_{l>=p} prod_a (1 - conj(lam_a)/x_l) / (1 - conj(lam_a)/y_l).
/// Slots with x_k bitwise equal to y_k contribute the constant factor 1
/// and are skipped, so x = y pointwise evaluates to exactly 1.  Throws
/// SingularSample when a denominator factor has modulus below 1e-14.
Complex eval_Z(const SpectralParams& params, const UnitarySample& sample);

/// Same integrand for unequal counts: p+q numerator slots against
/// p'+q' denominator slots, normalized by x-powers so the large-|x|
/// slots stay finite: prod_{l>=p} x_l^N prod_a (1 - conj(lam_a)/x_l)
/// over prod_{l'>=p'} y_l^N prod_a (1 - conj(lam_a)/y_l), times the
/// plain numerator/denominator factors of the contracting slots.
Complex eval_Z_extended(const ExtendedParams& params, const UnitarySample& sample);

/// Mean and standard error of eval_Z over `samples` independent Haar
/// draws.  Sample i uses the counter-based stream (seed, i), so the
/// result is invariant under the degree of parallelism.
Estimate mc_estimate(const SpectralParams& params, std::uint64_t samples, std::uint64_t seed,
                     const McOptions& opts = {});

/// Monte Carlo average of eval_Z_extended with the same determinism
/// contract.
Estimate mc_estimate_extended(const ExtendedParams& params, std::uint64_t samples,
                              std::uint64_t seed, const McOptions& opts = {});

}  // namespace ratiokit
