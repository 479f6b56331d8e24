#include "ratiokit/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "ratiokit/errors.hpp"

namespace ratiokit {

namespace {

bool is_power_of_two(int g) { return g > 0 && (g & (g - 1)) == 0; }

int default_grid(int N) {
  int g = 16;
  while (g < 4 * N) g <<= 1;
  return g;
}

/// Checks that `perm` is a permutation of {lo, ..., hi-1} given as
/// global slot values.  Entries inside [0, n) but outside the block
/// cross the p/q split.
void check_block_permutation(const std::vector<int>& perm, int lo, int hi, int n,
                             const char* family) {
  if (perm.size() != static_cast<std::size_t>(hi - lo)) {
    throw ShapeError(std::string(family) + " permutation must have " + std::to_string(hi - lo) +
                     " entries, got " + std::to_string(perm.size()));
  }
  std::vector<bool> seen(static_cast<std::size_t>(hi - lo), false);
  for (int v : perm) {
    if (v < 0 || v >= n) {
      throw ValueError(std::string(family) + " permutation entry " + std::to_string(v) +
                       " is not a slot index");
    }
    if (v < lo || v >= hi) {
      throw BlockViolation(std::string(family) + " permutation entry " + std::to_string(v) +
                           " crosses the contracting/expanding split [" + std::to_string(lo) +
                           ", " + std::to_string(hi) + ")");
    }
    if (seen[static_cast<std::size_t>(v - lo)]) {
      throw ValueError(std::string(family) + " permutation repeats entry " + std::to_string(v));
    }
    seen[static_cast<std::size_t>(v - lo)] = true;
  }
}

}  // namespace

double FourierProfile::magnitude(int mode) const {
  const int idx = mode + grid / 2;
  if (idx < 0 || idx >= grid) {
    throw ValueError("mode " + std::to_string(mode) + " outside [-grid/2, grid/2)");
  }
  return magnitudes[static_cast<std::size_t>(idx)];
}

double FourierProfile::max_magnitude() const {
  double m = 0.0;
  for (double v : magnitudes) m = std::max(m, v);
  return m;
}

FourierProfile fourier_support(const SpectralParams& params, int k, int grid,
                               const EvalOptions& opts) {
  const int n = params.p() + params.q();
  if (k < 0 || k >= n) {
    throw ValueError("variable index " + std::to_string(k) + " outside [0, " +
                     std::to_string(n) + ")");
  }
  for (int j = 0; j < n; ++j) {
    if (std::abs(std::abs(params.xs()[static_cast<std::size_t>(j)]) - 1.0) > 1e-12) {
      throw DomainViolation("fourier_support needs unit-modulus x's; |x[" + std::to_string(j) +
                                "]| = " +
                                std::to_string(std::abs(params.xs()[static_cast<std::size_t>(j)])),
                            j);
    }
  }
  int g = grid;
  if (g == 0) {
    g = default_grid(params.N());
  } else {
    if (!is_power_of_two(g)) {
      throw ValueError("grid size must be a power of two, got " + std::to_string(g));
    }
    if (g < 4 * params.N()) {
      throw AliasWarning("grid size " + std::to_string(g) + " is below 4N = " +
                         std::to_string(4 * params.N()) + "; modes would alias");
    }
  }

  std::vector<Complex> values(static_cast<std::size_t>(g));
  RawParams raw = params.raw();
  for (int gidx = 0; gidx < g; ++gidx) {
    const double theta = 2.0 * std::numbers::pi * gidx / g;
    raw.xs[static_cast<std::size_t>(k)] = std::polar(1.0, theta);
    values[static_cast<std::size_t>(gidx)] = eval_thm1(validate(raw), opts).value;
  }

  FourierProfile profile;
  profile.k = k;
  profile.grid = g;
  profile.magnitudes.resize(static_cast<std::size_t>(g));
  for (int m = -g / 2; m < g / 2; ++m) {
    Complex acc(0.0, 0.0);
    for (int gidx = 0; gidx < g; ++gidx) {
      const double angle = -2.0 * std::numbers::pi * m * gidx / g;
      acc += values[static_cast<std::size_t>(gidx)] * std::polar(1.0, angle);
    }
    profile.magnitudes[static_cast<std::size_t>(m + g / 2)] = std::abs(acc) / g;
  }
  return profile;
}

double weyl_orbit_check(const SpectralParams& params, const std::vector<int>& perm_psi,
                        const std::vector<int>& perm_phi_p, const std::vector<int>& perm_phi_q) {
  const int p = params.p();
  const int q = params.q();
  const int n = p + q;
  if (perm_psi.size() != static_cast<std::size_t>(n)) {
    throw ShapeError("psi permutation must have p + q entries");
  }
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int v : perm_psi) {
    if (v < 0 || v >= n) throw ValueError("psi permutation entry out of range");
    if (seen[static_cast<std::size_t>(v)]) throw ValueError("psi permutation repeats an entry");
    seen[static_cast<std::size_t>(v)] = true;
  }
  check_block_permutation(perm_phi_p, 0, p, n, "contracting phi");
  check_block_permutation(perm_phi_q, p, n, n, "expanding phi");

  RawParams permuted = params.raw();
  for (int i = 0; i < n; ++i) {
    permuted.xs[static_cast<std::size_t>(i)] =
        params.xs()[static_cast<std::size_t>(perm_psi[static_cast<std::size_t>(i)])];
  }
  for (int i = 0; i < p; ++i) {
    permuted.ys[static_cast<std::size_t>(i)] =
        params.ys()[static_cast<std::size_t>(perm_phi_p[static_cast<std::size_t>(i)])];
  }
  for (int i = p; i < n; ++i) {
    permuted.ys[static_cast<std::size_t>(i)] =
        params.ys()[static_cast<std::size_t>(perm_phi_q[static_cast<std::size_t>(i - p)])];
  }

  const Complex base = eval_thm1(params).value;
  const Complex moved = eval_thm1(validate(permuted)).value;
  const double diff = std::abs(moved - base);
  const double denom = std::abs(base);
  return denom == 0.0 ? diff : diff / denom;
}

}  // namespace ratiokit
