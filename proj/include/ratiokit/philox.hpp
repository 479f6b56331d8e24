#pragma once

// Philox-4x32-10 counter-based generator.  Every random quantity is a
// pure function of (key, counter), so independent streams are cheap:
// sampling stream i draws element j from counter (i, j) under key = seed.
// That makes parallel Monte Carlo reproducible bit-for-bit regardless of
// how samples are scheduled across threads.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace ratiokit {

namespace detail {

inline void philox_round(std::array<std::uint32_t, 4>& ctr, std::array<std::uint32_t, 2>& key) {
  constexpr std::uint32_t kMul0 = 0xD2511F53u;
  constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  const std::uint64_t prod0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
  const std::uint64_t prod1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
  const std::uint32_t hi0 = static_cast<std::uint32_t>(prod0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(prod0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(prod1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(prod1);
  ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  key[0] += 0x9E3779B9u;  // golden-ratio Weyl increments
  key[1] += 0xBB67AE85u;
}

}  // namespace detail

/// One 128-bit Philox block: four 32-bit words from (seed, ctr_hi, ctr_lo).
inline std::array<std::uint32_t, 4> philox4x32(std::uint64_t seed, std::uint64_t ctr_hi,
                                               std::uint64_t ctr_lo) {
  std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(ctr_lo), static_cast<std::uint32_t>(ctr_lo >> 32),
      static_cast<std::uint32_t>(ctr_hi), static_cast<std::uint32_t>(ctr_hi >> 32)};
  std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                      static_cast<std::uint32_t>(seed >> 32)};
  for (int round = 0; round < 10; ++round) detail::philox_round(ctr, key);
  return ctr;
}

/// Two uniform doubles in (0,1] and [0,1) from one block.
inline void philox_uniforms(std::uint64_t seed, std::uint64_t ctr_hi, std::uint64_t ctr_lo,
                            double& u1, double& u2) {
  const auto w = philox4x32(seed, ctr_hi, ctr_lo);
  const std::uint64_t a = (static_cast<std::uint64_t>(w[0]) << 32) | w[1];
  const std::uint64_t b = (static_cast<std::uint64_t>(w[2]) << 32) | w[3];
  u1 = static_cast<double>((a >> 11) + 1) * 0x1p-53;  // (0, 1]: safe under log
  u2 = static_cast<double>(b >> 11) * 0x1p-53;        // [0, 1)
}

/// Standard complex Gaussian (independent N(0,1) real and imaginary
/// parts) by Box-Muller on the stream (seed; ctr_hi, ctr_lo).
inline std::complex<double> philox_gaussian(std::uint64_t seed, std::uint64_t ctr_hi,
                                            std::uint64_t ctr_lo) {
  double u1 = 0.0, u2 = 0.0;
  philox_uniforms(seed, ctr_hi, ctr_lo, u1, u2);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 6.283185307179586476925286766559 * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

/// Uniform double in [0, 1) — convenience for non-Gaussian draws.
inline double philox_uniform(std::uint64_t seed, std::uint64_t ctr_hi, std::uint64_t ctr_lo) {
  double u1 = 0.0, u2 = 0.0;
  philox_uniforms(seed, ctr_hi, ctr_lo, u1, u2);
  return u2;
}

}  // namespace ratiokit
