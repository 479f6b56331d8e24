#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "ratiokit/errors.hpp"

namespace ratiokit {

using Complex = std::complex<double>;

/// Unvalidated parameter record as it arrives from files or flags.
///
/// Conventions: xs[k] = exp(i*psi_k) for k = 0..p+q-1; ys[j] = exp(phi_j)
/// with |ys[j]| < 1 for j < p (contracting) and |ys[l]| > 1 for l >= p
/// (expanding).  N is the matrix dimension the average is taken over.
struct RawParams {
  int p = 0;
  int q = 0;
  int N = 0;
  std::vector<Complex> xs;
  std::vector<Complex> ys;
};

/// Validated, immutable parameter record.  Construct through validate().
class SpectralParams {
 public:
  int p() const noexcept { return p_; }
  int q() const noexcept { return q_; }
  int N() const noexcept { return N_; }
  int n() const noexcept { return p_ + q_; }
  const std::vector<Complex>& xs() const noexcept { return xs_; }
  const std::vector<Complex>& ys() const noexcept { return ys_; }

  RawParams raw() const { return RawParams{p_, q_, N_, xs_, ys_}; }

  friend SpectralParams validate(const RawParams& raw);

 private:
  SpectralParams(int p, int q, int N, std::vector<Complex> xs, std::vector<Complex> ys)
      : p_(p), q_(q), N_(N), xs_(std::move(xs)), ys_(std::move(ys)) {}

  int p_, q_, N_;
  std::vector<Complex> xs_, ys_;
};

/// Checks counts, shapes and the y-modulus domain; throws ShapeError,
/// ValueError or DomainViolation (the latter carries the offending index).
SpectralParams validate(const RawParams& raw);

/// Idempotence overload: re-validating a validated record returns an
/// equal record.
SpectralParams validate(const SpectralParams& params);

/// Convenience: build the record from angle coordinates,
/// xs[k] = exp(i*psis[k]) and ys[j] = exp(phis[j]).
SpectralParams params_from_angles(int p, int q, int N, const std::vector<double>& psis,
                                  const std::vector<double>& phis);

/// Parameters of the unequal-count generalization: p+q numerator factors
/// against p'+q' denominator factors.  ys has length p'+q' with the
/// modulus split at p'.
struct ExtendedRawParams {
  int p = 0;
  int q = 0;
  int pprime = 0;
  int qprime = 0;
  int N = 0;
  std::vector<Complex> xs;
  std::vector<Complex> ys;
};

class ExtendedParams {
 public:
  int p() const noexcept { return p_; }
  int q() const noexcept { return q_; }
  int pprime() const noexcept { return pp_; }
  int qprime() const noexcept { return qp_; }
  int N() const noexcept { return N_; }
  const std::vector<Complex>& xs() const noexcept { return xs_; }
  const std::vector<Complex>& ys() const noexcept { return ys_; }

  friend ExtendedParams validate_extended(const ExtendedRawParams& raw);

 private:
  ExtendedParams(int p, int q, int pp, int qp, int N, std::vector<Complex> xs,
                 std::vector<Complex> ys)
      : p_(p), q_(q), pp_(pp), qp_(qp), N_(N), xs_(std::move(xs)), ys_(std::move(ys)) {}

  int p_, q_, pp_, qp_, N_;
  std::vector<Complex> xs_, ys_;
};

/// Domain: counts nonnegative, N >= 1, p' <= p + N, q' <= q + N, shapes
/// consistent, x's nonzero, y-moduli split at p'.
ExtendedParams validate_extended(const ExtendedRawParams& raw);

/// One coset of S_{p+q} / (S_p x S_q): the zero-based index sets J (the
/// p contracting slots) and L (the q expanding slots).  J and L are
/// sorted ascending and partition {0, ..., p+q-1}.
struct Coset {
  std::vector<int> J;
  std::vector<int> L;
};

/// All C(p+q, q) cosets, identity coset (J = {0..p-1}) first, then
/// descending lexicographic order of L (equivalently ascending
/// lexicographic order of J).  Throws CapacityError when the count
/// would exceed max_cosets.
std::vector<Coset> enumerate_cosets(int p, int q, std::uint64_t max_cosets = 1000000);

/// Binomial coefficient used for the capacity check (saturates at
/// uint64 max on overflow).
std::uint64_t coset_count(int p, int q);

/// prod_{l >= p} (x_l / y_l)^N — the highest-weight normalization that
/// separates the two statements of the average.
Complex highest_weight_multiplier(const SpectralParams& params);

/// Integer weight of an exponential character: exp(sum_k i*m_k*psi_k -
/// sum_k n_k*phi_k).  Admissible weights for dimension N satisfy
/// n_j <= 0 for j < p, 0 <= m_k <= N, and n_l >= N for l >= p.
struct Weight {
  std::vector<int> m;
  std::vector<int> n;

  bool admissible(int p, int q, int N) const;
};

/// x^e for integer e (negative allowed) by square-and-multiply.
Complex pow_int(Complex x, long long e);

}  // namespace ratiokit
