#include "ratiokit/grassmann.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "ratiokit/errors.hpp"
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

double coeff_distance(const GrassmannElement& a, const GrassmannElement& b) {
  return (a - b).max_abs();
}

// Small-integer random Grassmann element: every coefficient an integer
// in [-3, 3], restricted to the requested subset parity (or both).
// Integer coefficients keep products and sums exact in double
// arithmetic, so algebraic identities can be checked for exact zero.
GrassmannElement random_integer_element(int k, std::uint64_t stream, std::uint64_t salt,
                                        int parity /* 0 even, 1 odd, -1 any */) {
  GrassmannElement g(k);
  for (std::size_t mask = 0; mask < g.table_size(); ++mask) {
    if (parity >= 0 && (std::popcount(mask) & 1) != parity) continue;
    const double u = philox_uniform(0x6A55 + salt, stream, mask);
    const double v = philox_uniform(0x6A56 + salt, stream, mask);
    g.set_coeff(mask, C(std::floor(7.0 * u) - 3.0, std::floor(7.0 * v) - 3.0));
  }
  return g;
}

// Random even supermatrix with well-conditioned numerical diagonal
// blocks: bodies are diagonally dominated integers, nilpotent parts are
// small-integer graded elements.  The final dyadic rescale keeps the
// entries O(1) — the superdeterminant tolerances are absolute, so the
// draws must not push intermediates far above unit scale — without
// affecting exactness or invertibility.
Supermatrix random_even_supermatrix(int k, int n1, int n0, std::uint64_t stream) {
  Supermatrix x(k, n1, n0, 0);
  std::uint64_t salt = 1;
  // Diagonal boost +8 puts the diagonal body real part in [5, 11], so
  // |det| >= 25 - 18 > 0 for every integer draw: the numerical blocks
  // (and their products) can never be singular.
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n1; ++j) {
      GrassmannElement e = random_integer_element(k, stream, salt++, 0);
      if (i == j) e.set_coeff(0, e.body() + C(8.0, 0.0));
      x.A(i, j) = e;
    }
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n0; ++j) {
      GrassmannElement e = random_integer_element(k, stream, salt++, 0);
      if (i == j) e.set_coeff(0, e.body() + C(8.0, 0.0));
      x.D(i, j) = e;
    }
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n0; ++j) x.B(i, j) = random_integer_element(k, stream, salt++, 1);
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n1; ++j) x.C(i, j) = random_integer_element(k, stream, salt++, 1);
  return C(0.25, 0.0) * x;
}

Supermatrix random_homogeneous_supermatrix(int k, int n1, int n0, int parity,
                                           std::uint64_t stream) {
  Supermatrix x(k, n1, n0, parity);
  const int diag_parity = parity;       // A, D entries
  const int offdiag_parity = 1 - parity;  // B, C entries
  std::uint64_t salt = 101;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n1; ++j) x.A(i, j) = random_integer_element(k, stream, salt++, diag_parity);
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n0; ++j) x.D(i, j) = random_integer_element(k, stream, salt++, diag_parity);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n0; ++j)
      x.B(i, j) = random_integer_element(k, stream, salt++, offdiag_parity);
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n1; ++j)
      x.C(i, j) = random_integer_element(k, stream, salt++, offdiag_parity);
  return x;
}

}  // namespace

TEST_CASE("generator product identities hold exactly") {
  const int k = 3;
  const GrassmannElement one = GrassmannElement::scalar(k, C(1.0, 0.0));
  const GrassmannElement f0 = GrassmannElement::generator(k, 0);
  const GrassmannElement f1 = GrassmannElement::generator(k, 1);
  const GrassmannElement f2 = GrassmannElement::generator(k, 2);

  CHECK(gmul(f0, f0).max_abs() == 0.0);
  CHECK(coeff_distance(gmul(f0, f1), -gmul(f1, f0)) == 0.0);

  // (1 + f0 f1)(1 - f0 f1) = 1: the cross terms cancel and the square
  // of a degree-2 element with a single term vanishes.
  const GrassmannElement u = one + gmul(f0, f1);
  const GrassmannElement v = one - gmul(f0, f1);
  CHECK(coeff_distance(gmul(u, v), one) == 0.0);

  // Canonical ordering: f1 f2 f0 = + f0 f1 f2 (two transpositions).
  const GrassmannElement w = gmul(gmul(f1, f2), f0);
  CHECK(w.coeff(0b111) == C(1.0, 0.0));
  CHECK(coeff_distance(w, gmul(gmul(f0, f1), f2)) == 0.0);
}

TEST_CASE("product is associative and graded-commutative on homogeneous elements") {
  for (std::uint64_t trial = 0; trial < 1000; ++trial) {
    const int k = 2 + static_cast<int>(trial % 3);  // 2, 3, 4 generators
    const GrassmannElement a = random_integer_element(k, trial, 11, -1);
    const GrassmannElement b = random_integer_element(k, trial, 22, -1);
    const GrassmannElement c = random_integer_element(k, trial, 33, -1);
    CHECK(coeff_distance(gmul(gmul(a, b), c), gmul(a, gmul(b, c))) == 0.0);

    const int pa = static_cast<int>(trial % 2);
    const int pb = static_cast<int>((trial / 2) % 2);
    const GrassmannElement ha = random_integer_element(k, trial, 44, pa);
    const GrassmannElement hb = random_integer_element(k, trial, 55, pb);
    const C sign = (pa * pb) ? C(-1.0, 0.0) : C(1.0, 0.0);
    CHECK(coeff_distance(gmul(ha, hb), sign * gmul(hb, ha)) == 0.0);
  }
}

TEST_CASE("inverse and exponential terminate and invert") {
  for (std::uint64_t trial = 0; trial < 200; ++trial) {
    const int k = 2 + static_cast<int>(trial % 3);
    GrassmannElement g = random_integer_element(k, trial, 66, -1);
    g.set_coeff(0, g.body() + C(5.0, 0.0));  // keep the body away from zero
    const GrassmannElement one = GrassmannElement::scalar(k, C(1.0, 0.0));
    // Each product coefficient is a sum of <= 2^k coefficient products,
    // so the forward error scales with the product of the two norms.
    const GrassmannElement ginv = g.inverse();
    const double inv_tol = 1e-13 * (1.0 + g.max_abs()) * (1.0 + ginv.max_abs()) *
                           static_cast<double>(g.table_size());
    CHECK(coeff_distance(gmul(g, ginv), one) < inv_tol);
    CHECK(coeff_distance(gmul(ginv, g), one) < inv_tol);

    GrassmannElement nil = random_integer_element(k, trial, 77, -1);
    nil.set_coeff(0, C(0.3, -0.1));
    const GrassmannElement ep = gexp(nil);
    const GrassmannElement em = gexp(-nil);
    const double exp_tol = 1e-13 * (1.0 + ep.max_abs()) * (1.0 + em.max_abs()) *
                           static_cast<double>(g.table_size());
    CHECK(coeff_distance(gmul(ep, em), one) < exp_tol);
  }

  GrassmannElement zero_body(2);
  zero_body.set_coeff(1, C(1.0, 0.0));
  CHECK_THROWS_AS(zero_body.inverse(), SingularBlock);
}

TEST_CASE("mixing algebras raises GeneratorMismatch") {
  const GrassmannElement a = GrassmannElement::scalar(2, C(1.0, 0.0));
  const GrassmannElement b = GrassmannElement::scalar(3, C(1.0, 0.0));
  CHECK_THROWS_AS(gmul(a, b), GeneratorMismatch);
  CHECK_THROWS_AS(a + b, GeneratorMismatch);
}

TEST_CASE("supertrace is Tr D minus Tr A") {
  Supermatrix x(2, 1, 1, 0);
  x.A(0, 0) = GrassmannElement::scalar(2, C(1.0, 0.0));
  x.D(0, 0) = GrassmannElement::scalar(2, C(3.0, 0.0));
  CHECK(supertrace(x).body() == C(2.0, 0.0));
  CHECK(supertrace(x).max_abs() == 2.0);
}

TEST_CASE("supertrace kills brackets for all parity combinations") {
  for (std::uint64_t trial = 0; trial < 1000; ++trial) {
    const int k = 2 + static_cast<int>(trial % 3);
    const int px = static_cast<int>(trial % 2);
    const int py = static_cast<int>((trial / 2) % 2);
    const Supermatrix x = random_homogeneous_supermatrix(k, 2, 1, px, trial);
    const Supermatrix y = random_homogeneous_supermatrix(k, 2, 1, py, trial + 5000);
    // Integer coefficients make the cancellation exact in floating
    // point, so the check is for literal zero.
    CHECK(supertrace(bracket(x, y)).max_abs() == 0.0);
  }
}

TEST_CASE("products of odd supermatrices are anticyclic under the graded trace") {
  for (std::uint64_t trial = 0; trial < 200; ++trial) {
    const int k = 2 + static_cast<int>(trial % 3);
    const Supermatrix x = random_homogeneous_supermatrix(k, 2, 1, 1, trial + 17000);
    const Supermatrix y = random_homogeneous_supermatrix(k, 2, 1, 1, trial + 23000);
    CHECK(coeff_distance(supertrace(smul(x, y)), -supertrace(smul(y, x))) == 0.0);
  }
}

TEST_CASE("parity contract violations are rejected") {
  Supermatrix x(2, 1, 1, 0);
  x.A(0, 0) = GrassmannElement::scalar(2, C(1.0, 0.0));
  x.D(0, 0) = GrassmannElement::scalar(2, C(1.0, 0.0));
  x.B(0, 0) = GrassmannElement::scalar(2, C(0.5, 0.0));  // even entry in an odd slot
  CHECK_THROWS_AS(x.check_parity(), ParityError);
  CHECK_THROWS_AS(sdet(x), ParityError);

  Supermatrix odd(2, 1, 1, 1);
  odd.A(0, 0) = GrassmannElement::generator(2, 0);
  odd.D(0, 0) = GrassmannElement::generator(2, 1);
  CHECK_NOTHROW(odd.check_parity());
  CHECK_THROWS_AS(sdet(odd), ParityError);
}

TEST_CASE("superdeterminant golden values are exact") {
  // [[2, b], [g, 4]] with one odd row/column pair: 4 / (2 - b g / 4)
  // = 2 + b g / 4.
  Supermatrix x(2, 1, 1, 0);
  x.A(0, 0) = GrassmannElement::scalar(2, C(2.0, 0.0));
  x.B(0, 0) = GrassmannElement::generator(2, 0);
  x.C(0, 0) = GrassmannElement::generator(2, 1);
  x.D(0, 0) = GrassmannElement::scalar(2, C(4.0, 0.0));
  const GrassmannElement s = sdet(x);
  CHECK(std::abs(s.coeff(0) - C(2.0, 0.0)) <= 1e-14);
  CHECK(std::abs(s.coeff(0b11) - C(0.25, 0.0)) <= 1e-14);
  CHECK(std::abs(s.coeff(0b01)) <= 1e-14);
  CHECK(std::abs(s.coeff(0b10)) <= 1e-14);

  // Purely numerical block-diagonal case: Det(D)/Det(A) = 6/2.
  Supermatrix y(0, 1, 1, 0);
  y.A(0, 0) = GrassmannElement::scalar(0, C(2.0, 0.0));
  y.D(0, 0) = GrassmannElement::scalar(0, C(6.0, 0.0));
  CHECK(sdet(y).body() == C(3.0, 0.0));
}

TEST_CASE("superdeterminant is multiplicative") {
  for (std::uint64_t trial = 0; trial < 1000; ++trial) {
    const int k = 2 + static_cast<int>(trial % 3);
    const Supermatrix x = random_even_supermatrix(k, 2, 2, trial);
    const Supermatrix y = random_even_supermatrix(k, 2, 2, trial + 9000);
    const GrassmannElement lhs = sdet(smul(x, y));
    const GrassmannElement rhs = gmul(sdet(x), sdet(y));
    const double scale = std::max({1.0, lhs.max_abs(), rhs.max_abs()});
    CHECK(coeff_distance(lhs, rhs) < 1e-12 * scale);
  }
}

TEST_CASE("superdeterminant is invariant under numerical conjugation") {
  for (std::uint64_t trial = 0; trial < 200; ++trial) {
    const int k = 4;
    const Supermatrix x = random_even_supermatrix(k, 2, 2, trial + 31000);

    // Block-diagonal numerical conjugator with well-conditioned blocks.
    Supermatrix g(k, 2, 2, 0);
    Supermatrix ginv(k, 2, 2, 0);
    for (int block = 0; block < 2; ++block) {
      // 2x2 integer matrix [[a, b], [c, d]] with det 1: [[1, m], [0, 1]]
      // times [[1, 0], [r, 1]] = [[1 + m r, m], [r, 1]].  Shear factors
      // stay in {-1, 0, 1} so conjugation does not amplify the entries
      // far beyond unit scale (the comparison tolerance is absolute).
      const double m = std::floor(3.0 * philox_uniform(0xC0919, trial, 2 * block)) - 1.0;
      const double r = std::floor(3.0 * philox_uniform(0xC0919, trial, 2 * block + 1)) - 1.0;
      const C a(1.0 + m * r, 0.0), b(m, 0.0), c(r, 0.0), d(1.0, 0.0);
      auto put = [&](Supermatrix& target, C e00, C e01, C e10, C e11) {
        if (block == 0) {
          target.A(0, 0) = GrassmannElement::scalar(k, e00);
          target.A(0, 1) = GrassmannElement::scalar(k, e01);
          target.A(1, 0) = GrassmannElement::scalar(k, e10);
          target.A(1, 1) = GrassmannElement::scalar(k, e11);
        } else {
          target.D(0, 0) = GrassmannElement::scalar(k, e00);
          target.D(0, 1) = GrassmannElement::scalar(k, e01);
          target.D(1, 0) = GrassmannElement::scalar(k, e10);
          target.D(1, 1) = GrassmannElement::scalar(k, e11);
        }
      };
      put(g, a, b, c, d);
      // inverse of a det-1 2x2 matrix: [[d, -b], [-c, a]]
      put(ginv, d, -b, -c, a);
    }

    const GrassmannElement lhs = sdet(smul(smul(g, x), ginv));
    const GrassmannElement rhs = sdet(x);
    const double scale = std::max({1.0, lhs.max_abs(), rhs.max_abs()});
    CHECK(coeff_distance(lhs, rhs) < 1e-12 * scale);
  }
}

TEST_CASE("singular numerical blocks are reported") {
  Supermatrix x(2, 1, 1, 0);
  x.A(0, 0) = GrassmannElement::scalar(2, C(2.0, 0.0));
  x.B(0, 0) = GrassmannElement::generator(2, 0);
  x.C(0, 0) = GrassmannElement::generator(2, 1);
  x.D(0, 0) = gmul(GrassmannElement::generator(2, 0), GrassmannElement::generator(2, 1));
  CHECK_THROWS_AS(sdet(x), SingularBlock);
}

TEST_CASE("character evaluation reproduces the scalar integrand") {
  const SpectralParams params = standard_point();
  const UnitarySample sample{{C(1.0, 0.0)}};

  SUBCASE("diagonal matrix with zero nilpotent parts") {
    const Supermatrix x = standard_character_matrix(params, 0);
    const GrassmannElement value = sdet_inv_id_minus_kron(x, sample);
    CHECK(std::abs(value.body() - C(-4.0 / 3.0, 0.0)) < 1e-12);
  }

  SUBCASE("x = y pointwise gives exactly 1") {
    RawParams raw;
    raw.p = 1;
    raw.q = 1;
    raw.N = 1;
    raw.xs = {{0.5, 0.0}, {4.0, 0.0}};
    raw.ys = {{0.5, 0.0}, {4.0, 0.0}};
    const Supermatrix x = standard_character_matrix(validate(raw), 2);
    const GrassmannElement value = sdet_inv_id_minus_kron(x, sample);
    CHECK(std::abs(value.body() - C(1.0, 0.0)) < 1e-12);
    GrassmannElement nil = value;
    nil.set_coeff(0, C(0.0, 0.0));
    CHECK(nil.max_abs() < 1e-12);
  }

  SUBCASE("one odd pair expands by hand") {
    // X = [[2, f0], [f1, 0.5]] (one slot of each grading), lambda = 1:
    // SDet(1 - X)^{-1} = (1 - 2)/(1 - 0.5) - f0 f1 / (1 - 0.5)^2
    //                  = -2 - 4 f0 f1.
    Supermatrix x(2, 1, 1, 0);
    x.A(0, 0) = GrassmannElement::scalar(2, C(2.0, 0.0));
    x.B(0, 0) = GrassmannElement::generator(2, 0);
    x.C(0, 0) = GrassmannElement::generator(2, 1);
    x.D(0, 0) = GrassmannElement::scalar(2, C(0.5, 0.0));
    const GrassmannElement value = sdet_inv_id_minus_kron(x, sample);
    CHECK(std::abs(value.coeff(0) - C(-2.0, 0.0)) <= 1e-14);
    CHECK(std::abs(value.coeff(0b11) - C(-4.0, 0.0)) <= 1e-14);
    CHECK(std::abs(value.coeff(0b01)) <= 1e-14);
    CHECK(std::abs(value.coeff(0b10)) <= 1e-14);
  }

  SUBCASE("nilpotent parts do not shift the numerical coefficient") {
    Supermatrix x = standard_character_matrix(params, 2);
    x.B(0, 1) = GrassmannElement::generator(2, 0) * C(0.3, 0.1);
    x.C(1, 0) = GrassmannElement::generator(2, 1) * C(-0.2, 0.4);
    const GrassmannElement value = sdet_inv_id_minus_kron(x, sample);
    CHECK(std::abs(value.body() - C(-4.0 / 3.0, 0.0)) < 1e-12);
  }
}

TEST_CASE("numerical D spectrum near the unit circle is rejected") {
  Supermatrix x(0, 1, 1, 0);
  x.A(0, 0) = GrassmannElement::scalar(0, C(2.0, 0.0));
  x.D(0, 0) = GrassmannElement::scalar(0, C(1.0 + 1e-12, 0.0));
  const UnitarySample sample{{C(1.0, 0.0)}};
  CHECK_THROWS_AS(sdet_inv_id_minus_kron(x, sample), SpectrumOnCircle);
}

TEST_CASE("zero-generator Monte Carlo delegates bitwise to the scalar estimator") {
  const SpectralParams params = standard_point();
  const Supermatrix x = standard_character_matrix(params, 0);
  const std::uint64_t samples = 2000;
  const std::uint64_t seed = 0x5EED;

  const GrassmannEstimate g = grassmann_character_mc(x, params.N(), samples, seed);
  const Estimate e = mc_estimate(params, samples, seed);

  CHECK(g.mean.body().real() == e.mean.real());
  CHECK(g.mean.body().imag() == e.mean.imag());
  CHECK(g.std_error.size() == 1);
  CHECK(g.std_error[0] == e.std_error);
  CHECK(g.samples == e.samples);
  CHECK(g.seed == e.seed);
  CHECK(g.method == e.method);
}

TEST_CASE("Monte Carlo numerical part matches the closed form within 4 sigma") {
  const SpectralParams params = standard_point();
  Supermatrix x = standard_character_matrix(params, 2);
  x.B(0, 0) = GrassmannElement::generator(2, 0) * C(0.4, 0.0);
  x.C(0, 0) = GrassmannElement::generator(2, 1) * C(0.25, 0.0);

  const GrassmannEstimate g = grassmann_character_mc(x, params.N(), 20000, 0x5EED);
  const C exact = eval_thm1(params).value;
  CHECK(std::abs(g.mean.body() - exact) < 4.0 * std::max(g.std_error[0], 1e-12));
}

TEST_CASE("coefficientwise Monte Carlo is invariant under the thread count") {
  const SpectralParams params = standard_point();
  Supermatrix x = standard_character_matrix(params, 2);
  x.B(1, 0) = GrassmannElement::generator(2, 0) * C(0.3, -0.2);
  x.C(0, 1) = GrassmannElement::generator(2, 1) * C(0.1, 0.5);

  McOptions one, two, eight;
  one.threads = 1;
  two.threads = 2;
  eight.threads = 8;
  const GrassmannEstimate r1 = grassmann_character_mc(x, params.N(), 3000, 0x5EED, one);
  const GrassmannEstimate r2 = grassmann_character_mc(x, params.N(), 3000, 0x5EED, two);
  const GrassmannEstimate r8 = grassmann_character_mc(x, params.N(), 3000, 0x5EED, eight);

  for (std::size_t c = 0; c < r1.mean.table_size(); ++c) {
    CHECK(r1.mean.coeff(c).real() == r2.mean.coeff(c).real());
    CHECK(r1.mean.coeff(c).imag() == r2.mean.coeff(c).imag());
    CHECK(r1.mean.coeff(c).real() == r8.mean.coeff(c).real());
    CHECK(r1.mean.coeff(c).imag() == r8.mean.coeff(c).imag());
    CHECK(r1.std_error[c] == r2.std_error[c]);
    CHECK(r1.std_error[c] == r8.std_error[c]);
  }
}
