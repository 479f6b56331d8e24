#include "ratiokit/haar_mc.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "ratiokit/formula.hpp"

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

UnitarySample fixed_sample(std::vector<C> lams) {
  UnitarySample s;
  s.eigenvalues = std::move(lams);
  return s;
}

}  // namespace

TEST_CASE("sampling: unit-modulus spectra, deterministic streams") {
  const UnitarySample s1 = sample_haar_unitary(1, 42, 0);
  REQUIRE(s1.eigenvalues.size() == 1);
  CHECK(std::abs(std::abs(s1.eigenvalues[0]) - 1.0) < 1e-10);

  const UnitarySample s4 = sample_haar_unitary(4, 42, 7);
  REQUIRE(s4.eigenvalues.size() == 4);
  for (const C& lam : s4.eigenvalues) CHECK(std::abs(std::abs(lam) - 1.0) < 1e-10);

  // same (seed, index) reproduces the spectrum bit for bit
  const UnitarySample again = sample_haar_unitary(4, 42, 7);
  for (std::size_t a = 0; a < 4; ++a) CHECK(s4.eigenvalues[a] == again.eigenvalues[a]);

  // different indexes give different draws
  const UnitarySample other = sample_haar_unitary(4, 42, 8);
  CHECK(s4.eigenvalues[0] != other.eigenvalues[0]);

  CHECK_THROWS_AS(sample_haar_unitary(0, 1, 0), ValueError);
}

TEST_CASE("integrand values at hand-checked spectra") {
  const SpectralParams params = standard_point();
  CHECK(std::abs(eval_Z(params, fixed_sample({{1.0, 0.0}})) - C(-4.0 / 3.0, 0.0)) < 1e-14);
  CHECK(std::abs(eval_Z(params, fixed_sample({{-1.0, 0.0}})) - C(8.0 / 5.0, 0.0)) < 1e-14);

  CHECK_THROWS_AS(eval_Z(params, fixed_sample({{1.0, 0.0}, {-1.0, 0.0}})), ShapeError);
}

TEST_CASE("integrand is exactly 1 when x = y pointwise") {
  RawParams raw;
  raw.p = 1;
  raw.q = 1;
  raw.N = 3;
  raw.xs = {{0.3, 0.4}, {1.5, -2.0}};
  raw.ys = raw.xs;
  const SpectralParams params = validate(raw);
  const UnitarySample s = sample_haar_unitary(3, 99, 5);
  CHECK(eval_Z(params, s) == C(1.0, 0.0));
}

TEST_CASE("integrand depends only on the eigenvalue multiset") {
  RawParams raw;
  raw.p = 1;
  raw.q = 1;
  raw.N = 3;
  raw.xs = {{0.3, 0.4}, {1.5, -2.0}};
  raw.ys = {{0.2, -0.1}, {2.5, 0.5}};
  const SpectralParams params = validate(raw);
  const UnitarySample s = sample_haar_unitary(3, 7, 11);
  std::vector<C> lams = s.eigenvalues;
  std::swap(lams[0], lams[2]);
  std::swap(lams[0], lams[1]);
  CHECK(eval_Z(params, s) == eval_Z(params, fixed_sample(lams)));
}

TEST_CASE("near-circle denominator parameters reject the degenerate sample") {
  RawParams raw;
  raw.p = 1;
  raw.q = 1;
  raw.N = 1;
  raw.xs = {{2.0, 0.0}, {3.0, 0.0}};
  raw.ys = {{0.5, 0.0}, {1.0 + 4e-15, 0.0}};
  const SpectralParams params = validate(raw);
  CHECK_THROWS_AS(eval_Z(params, fixed_sample({{1.0, 0.0}})), SingularSample);
}

TEST_CASE("unequal-count integrand reduces to the equal-count one") {
  RawParams raw;
  raw.p = 1;
  raw.q = 1;
  raw.N = 2;
  raw.xs = {{0.7, 0.2}, {2.2, -0.3}};
  raw.ys = {{0.3, 0.1}, {1.8, -0.9}};
  const SpectralParams params = validate(raw);
  ExtendedRawParams ext;
  ext.p = ext.pprime = 1;
  ext.q = ext.qprime = 1;
  ext.N = 2;
  ext.xs = raw.xs;
  ext.ys = raw.ys;
  const ExtendedParams eparams = validate_extended(ext);

  const UnitarySample s = sample_haar_unitary(2, 5, 3);
  const C lhs = eval_Z_extended(eparams, s) * highest_weight_multiplier(params);
  const C rhs = eval_Z(params, s);
  CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs));
}

TEST_CASE("Monte Carlo mean agrees with the exact value at the standard point") {
  const Estimate est = mc_estimate(standard_point(), 100000, 24397);
  CHECK(est.samples == 100000);
  CHECK(est.std_error > 0.0);
  CHECK(std::abs(est.mean - C(6.0 / 7.0, 0.0)) < 4.0 * est.std_error);
}

TEST_CASE("Monte Carlo collapses exactly for a constant integrand") {
  RawParams raw;
  raw.p = 1;
  raw.q = 1;
  raw.N = 2;
  raw.xs = {{0.3, 0.4}, {1.5, -2.0}};
  raw.ys = raw.xs;
  const Estimate est = mc_estimate(validate(raw), 100, 7);
  CHECK(est.mean == C(1.0, 0.0));
  CHECK(est.std_error == 0.0);
}

TEST_CASE("standard error follows the 1/sqrt(n) law") {
  const SpectralParams params = standard_point();
  const Estimate small = mc_estimate(params, 10000, 11);
  const Estimate large = mc_estimate(params, 1000000, 11);
  const double ratio = small.std_error / large.std_error;
  CHECK(ratio > 6.0);
  CHECK(ratio < 14.0);
}

TEST_CASE("estimates are bitwise invariant under the thread count") {
  RawParams raw;
  raw.p = 1;
  raw.q = 1;
  raw.N = 2;
  raw.xs = {{0.7, 0.2}, {2.2, -0.3}};
  raw.ys = {{0.3, 0.1}, {1.8, -0.9}};
  const SpectralParams params = validate(raw);

  McOptions t1, t2, t8;
  t1.threads = 1;
  t2.threads = 2;
  t8.threads = 8;
  const Estimate e1 = mc_estimate(params, 5000, 0x5EED, t1);
  const Estimate e2 = mc_estimate(params, 5000, 0x5EED, t2);
  const Estimate e8 = mc_estimate(params, 5000, 0x5EED, t8);
  CHECK(e1.mean == e2.mean);
  CHECK(e1.mean == e8.mean);
  CHECK(e1.std_error == e2.std_error);
  CHECK(e1.std_error == e8.std_error);
}

TEST_CASE("Haar invariance: the mean trace vanishes") {
  const int N = 3;
  const std::uint64_t samples = 100000;
  // Welford over the trace, componentwise.
  double mean_re = 0.0, mean_im = 0.0, m2_re = 0.0, m2_im = 0.0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const UnitarySample s = sample_haar_unitary(N, 31337, i);
    C tr(0.0, 0.0);
    for (const C& lam : s.eigenvalues) tr += lam;
    const double n = static_cast<double>(i + 1);
    const double dre = tr.real() - mean_re;
    mean_re += dre / n;
    m2_re += dre * (tr.real() - mean_re);
    const double dim = tr.imag() - mean_im;
    mean_im += dim / n;
    m2_im += dim * (tr.imag() - mean_im);
  }
  const double n = static_cast<double>(samples);
  const double se_re = std::sqrt(m2_re / (n - 1.0) / n);
  const double se_im = std::sqrt(m2_im / (n - 1.0) / n);
  CHECK(std::abs(mean_re) < 4.0 * se_re);
  CHECK(std::abs(mean_im) < 4.0 * se_im);
}

TEST_CASE("sample-count precondition") {
  CHECK_THROWS_AS(mc_estimate(standard_point(), 1, 0), ValueError);
}
