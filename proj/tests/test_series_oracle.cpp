#include "ratiokit/series_oracle.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "ratiokit/formula.hpp"
#include "ratiokit/philox.hpp"

using namespace ratiokit;
using C = std::complex<double>;

namespace {

SpectralParams standard_point() {
  RawParams raw;
  raw.p = 1;
  raw.q = 1;
  raw.N = 1;
  raw.xs = {{2.0, 0.0}, {3.0, 0.0}};
  raw.ys = {{0.5, 0.0}, {4.0, 0.0}};
  return validate(raw);
}

// Random point with x-moduli on well-separated rings (no clustered
// pairs) and y-moduli in [0.2, 0.5] / [2, 4] so geometric tails decay
// at ratio <= 0.5 and order 60 certifies ~1e-10.
SpectralParams random_point(std::uint64_t stream, int p, int q, int N) {
  RawParams raw;
  raw.p = p;
  raw.q = q;
  raw.N = N;
  for (int k = 0; k < p + q; ++k) {
    const double a = philox_uniform(0x5E81E5, stream, 2 * static_cast<std::uint64_t>(k));
    raw.xs.push_back(std::polar(0.5 + 0.4 * k, 6.283185307179586 * a));
  }
  for (int k = 0; k < p + q; ++k) {
    const double a = philox_uniform(0x5E81E5, stream, 2 * static_cast<std::uint64_t>(k) + 1);
    const double modulus = (k < p) ? 0.2 + 0.3 * a : 2.0 + 2.0 * a;
    raw.ys.push_back(std::polar(modulus, 6.283185307179586 * a + 1.0));
  }
  return validate(raw);
}

// Independent N=1 path: the average over U(1) is a plain circle
// integral, evaluated here by the trapezoidal rule (spectrally accurate
// for smooth periodic integrands -- no series, no Vandermonde).
C quadrature_average_n1(const SpectralParams& params, int points) {
  C sum(0.0, 0.0);
  for (int g = 0; g < points; ++g) {
    const double theta = 6.283185307179586 * g / points;
    const C z = std::polar(1.0, theta);
    C f(1.0, 0.0);
    for (int l = params.p(); l < params.n(); ++l)
      f *= params.xs()[static_cast<std::size_t>(l)] / params.ys()[static_cast<std::size_t>(l)];
    for (int j = 0; j < params.p(); ++j)
      f *= (C(1.0, 0.0) - params.xs()[static_cast<std::size_t>(j)] * z) /
           (C(1.0, 0.0) - params.ys()[static_cast<std::size_t>(j)] * z);
    for (int l = params.p(); l < params.n(); ++l)
      f *= (C(1.0, 0.0) - std::conj(z) / params.xs()[static_cast<std::size_t>(l)]) /
           (C(1.0, 0.0) - std::conj(z) / params.ys()[static_cast<std::size_t>(l)]);
    sum += f;
  }
  return sum / static_cast<double>(points);
}

}  // namespace

TEST_CASE("golden value through the torus integral") {
  TruncationPolicy policy;
  policy.order = 60;
  const SeriesResult r = torus_average(standard_point(), policy);
  CHECK(std::abs(r.value - C(6.0 / 7.0, 0.0)) < 1e-10);
  CHECK(r.tail_bound < 1e-10);
}

TEST_CASE("pure numerator average is 1 by orthogonality") {
  ExtendedRawParams ext;
  ext.p = 1;
  ext.q = 0;
  ext.pprime = 0;
  ext.qprime = 0;
  ext.N = 2;
  ext.xs = {{0.4, 0.0}};
  const SeriesResult r = torus_average_extended(validate_extended(ext));
  CHECK(std::abs(r.value - C(1.0, 0.0)) < 1e-14);
  CHECK(r.tail_bound == 0.0);  // no denominator series, nothing dropped
}

TEST_CASE("y-degeneration reproduces the equal-x values") {
  RawParams raw;
  raw.p = 1;
  raw.q = 1;
  raw.N = 2;
  raw.xs = {{0.3, 0.0}, {0.7, 0.0}};
  raw.ys = {{1e-9, 0.0}, {1e9, 0.0}};
  TruncationPolicy policy;
  policy.order = 80;
  const SeriesResult r = torus_average(validate(raw), policy);
  const C rescaled = r.value * pow_int(raw.ys[1], raw.N);
  CHECK(std::abs(rescaled - C(0.79, 0.0)) < 1e-6);
}

TEST_CASE("agreement with the coset sum across the capacity grid") {
  const std::pair<int, int> shapes[] = {{1, 1}, {2, 1}, {1, 2}, {2, 2}};
  TruncationPolicy policy;
  policy.order = 60;
  policy.tolerance = 1e-6;
  for (const auto& [p, q] : shapes)
    for (int N = 1; N <= 3; ++N)
      for (std::uint64_t rep = 0; rep < 5; ++rep) {
        const SpectralParams params =
            random_point(1000 * static_cast<std::uint64_t>(p) + 100 * q + 10 * N + rep, p, q, N);
        const SeriesResult series = torus_average(params, policy);
        const C direct = eval_thm1(params).value;
        CHECK(std::abs(series.value - direct) <= std::max(1e-8, series.tail_bound));
      }
}

TEST_CASE("unequal-count integral confirms the pure-denominator value") {
  ExtendedRawParams ext;
  ext.p = 0;
  ext.q = 0;
  ext.pprime = 1;
  ext.qprime = 1;
  ext.N = 3;
  ext.ys = {{0.5, 0.0}, {2.0, 0.0}};
  TruncationPolicy policy;
  policy.order = 80;
  const SeriesResult r = torus_average_extended(validate_extended(ext), policy);
  CHECK(std::abs(r.value - C(4.0 / 3.0, 0.0)) <= std::max(1e-10, r.tail_bound));
}

TEST_CASE("unequal-count integral matches the equal-count one after rescaling") {
  const SpectralParams params = random_point(77, 2, 1, 2);
  ExtendedRawParams ext;
  ext.p = ext.pprime = 2;
  ext.q = ext.qprime = 1;
  ext.N = 2;
  ext.xs = params.xs();
  ext.ys = params.ys();
  TruncationPolicy policy;
  policy.order = 60;
  const SeriesResult lhs = torus_average_extended(validate_extended(ext), policy);
  const SeriesResult rhs = torus_average(params, policy);
  const C scaled = lhs.value * highest_weight_multiplier(params);
  CHECK(std::abs(scaled - rhs.value) <=
        std::abs(highest_weight_multiplier(params)) * lhs.tail_bound + rhs.tail_bound + 1e-10);
}

TEST_CASE("N = 1 specialization equals direct quadrature") {
  for (std::uint64_t rep = 0; rep < 3; ++rep) {
    const SpectralParams params = random_point(500 + rep, 1, 1, 1);
    const SeriesResult series = torus_average(params);
    const C quad = quadrature_average_n1(params, 4096);
    CHECK(std::abs(series.value - quad) < 1e-10);
  }
}

TEST_CASE("tail bound halves geometrically when the order doubles") {
  const SpectralParams params = random_point(9, 2, 2, 2);
  double rho = 0.0;
  for (int j = 0; j < params.p(); ++j)
    rho = std::max(rho, std::abs(params.ys()[static_cast<std::size_t>(j)]));
  for (int l = params.p(); l < params.n(); ++l)
    rho = std::max(rho, 1.0 / std::abs(params.ys()[static_cast<std::size_t>(l)]));

  TruncationPolicy coarse, fine;
  coarse.order = 20;
  coarse.tolerance = 1e30;
  fine.order = 40;
  fine.tolerance = 1e30;
  const double b20 = torus_average(params, coarse).tail_bound;
  const double b40 = torus_average(params, fine).tail_bound;
  CHECK(b40 > 0.0);
  CHECK(b40 <= b20 * std::pow(rho, 20) * (1.0 + 1e-12));
}

TEST_CASE("error paths: coarse truncation, bad order, capacity") {
  RawParams raw;
  raw.p = 1;
  raw.q = 1;
  raw.N = 1;
  raw.xs = {{2.0, 0.0}, {3.0, 0.0}};
  raw.ys = {{0.9, 0.0}, {1.25, 0.0}};
  TruncationPolicy coarse;
  coarse.order = 20;
  coarse.tolerance = 1e-8;
  CHECK_THROWS_AS(torus_average(validate(raw), coarse), TruncationTooCoarse);

  TruncationPolicy bad;
  bad.order = 1;
  RawParams ok;
  ok.p = 1;
  ok.q = 1;
  ok.N = 2;
  ok.xs = {{0.3, 0.0}, {0.7, 0.0}};
  ok.ys = {{0.4, 0.0}, {2.5, 0.0}};
  CHECK_THROWS_AS(torus_average(validate(ok), bad), ValueError);

  RawParams big;
  big.p = 3;
  big.q = 1;
  big.N = 1;
  big.xs = {{0.3, 0.0}, {0.5, 0.0}, {0.7, 0.0}, {1.1, 0.0}};
  big.ys = {{0.2, 0.0}, {0.3, 0.0}, {0.4, 0.0}, {2.0, 0.0}};
  CHECK_THROWS_AS(torus_average(validate(big)), CapacityError);

  RawParams bigN = ok;
  bigN.N = 4;
  CHECK_THROWS_AS(torus_average(validate(bigN)), CapacityError);
}
