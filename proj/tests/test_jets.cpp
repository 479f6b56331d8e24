#include "ratiokit/jets.hpp"

#include <cmath>
#include <complex>

#include "doctest.h"
#include "ratiokit/philox.hpp"

using namespace ratiokit;
using C = std::complex<double>;

namespace {

Jet random_jet(int order, std::uint64_t stream, double body_floor = 0.0) {
  Jet j(order);
  for (int k = 0; k <= order; ++k) {
    const C g = philox_gaussian(0xA11CE, stream, static_cast<std::uint64_t>(k));
    j.at(k) = g;
  }
  if (body_floor > 0.0 && std::abs(j.value()) < body_floor) j.at(0) = C(1.0, 0.5);
  return j;
}

double jet_distance(const Jet& a, const Jet& b) {
  double d = 0.0;
  for (int k = 0; k <= a.order(); ++k) d = std::max(d, std::abs(a.coeff(k) - b.coeff(k)));
  return d;
}

double jet_norm(const Jet& a) {
  double m = 0.0;
  for (int k = 0; k <= a.order(); ++k) m = std::max(m, std::abs(a.coeff(k)));
  return m;
}

}  // namespace

TEST_CASE("exp of the coordinate jet gives the exponential series") {
  const Jet t = Jet::variable(3, C(0.0, 0.0));
  const Jet e = exp(t);
  CHECK(std::abs(e.coeff(0) - C(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(e.coeff(1) - C(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(e.coeff(2) - C(0.5, 0.0)) < 1e-15);
  CHECK(std::abs(e.coeff(3) - C(1.0 / 6.0, 0.0)) < 1e-15);
}

TEST_CASE("Cauchy product (1+t)(1-t) = 1 - t^2") {
  const Jet t = Jet::variable(2, C(0.0, 0.0));
  const Jet prod = (C(1.0, 0.0) + t) * (C(1.0, 0.0) - t);
  CHECK(std::abs(prod.coeff(0) - C(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(prod.coeff(1)) < 1e-15);
  CHECK(std::abs(prod.coeff(2) + C(1.0, 0.0)) < 1e-15);
}

TEST_CASE("inverse of 1 - t is the geometric series") {
  const Jet t = Jet::variable(3, C(0.0, 0.0));
  const Jet g = inv(C(1.0, 0.0) - t);
  for (int k = 0; k <= 3; ++k) CHECK(std::abs(g.coeff(k) - C(1.0, 0.0)) < 1e-15);
}

TEST_CASE("derivative extraction") {
  // sin(t) = Im-part trick: sin via exp of an imaginary jet
  const Jet t = Jet::variable(4, C(0.0, 0.0));
  const Jet eit = exp(C(0.0, 1.0) * t);
  const Jet emit = exp(C(0.0, -1.0) * t);
  const Jet sin_jet = (eit - emit) / C(0.0, 2.0);
  CHECK(std::abs(nth_derivative(sin_jet, 3) - C(-1.0, 0.0)) < 1e-14);  // sin'''(0) = -1

  const Jet e2t = exp(C(2.0, 0.0) * t);
  CHECK(std::abs(nth_derivative(e2t, 2) - C(4.0, 0.0)) < 1e-14);

  const Jet g = inv(C(1.0, 0.0) - t);
  CHECK(std::abs(nth_derivative(g, 4) - C(24.0, 0.0)) < 1e-13);

  CHECK_THROWS_AS(nth_derivative(g, 5), ValueError);
}

TEST_CASE("error paths: zero constant term, branch cut, order mismatch") {
  const Jet t = Jet::variable(3, C(0.0, 0.0));
  CHECK_THROWS_AS(inv(t), DivisionByZeroJet);
  CHECK_THROWS_AS(sqrt(Jet::variable(3, C(-1.0, 0.0))), BranchError);
  CHECK_THROWS_AS(sqrt(t), BranchError);
  CHECK_THROWS_AS(Jet(3) + Jet(2), ShapeError);
  CHECK_THROWS_AS(Jet(Jet::kMaxOrder + 1), ValueError);
}

TEST_CASE("algebra on random jets") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Jet a = random_jet(6, 3 * s);
    const Jet b = random_jet(6, 3 * s + 1);
    const Jet c = random_jet(6, 3 * s + 2);
    CHECK(jet_distance(a * (b * c), (a * b) * c) < 1e-12);
    CHECK(jet_distance(a * (b + c), a * b + a * c) < 1e-12);
    CHECK(jet_distance(exp(a) * exp(-a), Jet::constant(6, C(1.0, 0.0))) < 1e-12);
  }
}

TEST_CASE("inv, sqrt and powN invert as expected") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Jet a = random_jet(6, 100 + 3 * s, 0.1);
    // Round-trip error scales with ||a|| * ||inv(a)||: the inverse
    // coefficients grow like (||a|| / |a0|)^k, so a flat tolerance would
    // just test the draw, not the recurrence.
    const double cond = (1.0 + jet_norm(a)) * (1.0 + jet_norm(inv(a)));
    CHECK(jet_distance(a * inv(a), Jet::constant(6, C(1.0, 0.0))) < 1e-14 * cond);
    const Jet r = sqrt(a * a + C(3.0, 0.0));  // shift keeps the body off the cut
    CHECK(jet_distance(r * r, a * a + C(3.0, 0.0)) < 1e-13 * (1.0 + jet_norm(r)) * (1.0 + jet_norm(r)));
    CHECK(jet_distance(jet_pow(a, 3), a * a * a) < 1e-13 * (1.0 + jet_norm(a * a * a)));
    CHECK(jet_distance(jet_pow(a, -2) * a * a, Jet::constant(6, C(1.0, 0.0))) <
          1e-14 * (1.0 + jet_norm(a)) * (1.0 + jet_norm(a)) * (1.0 + jet_norm(jet_pow(a, -2))));
  }
}

TEST_CASE("jet derivatives agree with central finite differences") {
  // f(t) = exp(t) / (2 - t), derivatives at t0 = 0.3 up to order 3
  const double t0 = 0.3;
  auto f = [](C t) { return std::exp(t) / (C(2.0, 0.0) - t); };
  const Jet t = Jet::variable(3, C(t0, 0.0));
  const Jet jet_f = exp(t) / (C(2.0, 0.0) - t);

  const double h = 1e-3;
  auto fd1 = (f(t0 + h) - f(t0 - h)) / (2 * h);
  auto fd2 = (f(t0 + h) - 2.0 * f(C(t0, 0.0)) + f(t0 - h)) / (h * h);
  auto fd3 = (f(t0 + 2 * h) - 2.0 * f(t0 + h) + 2.0 * f(t0 - h) - f(t0 - 2 * h)) / (2 * h * h * h);
  CHECK(std::abs(nth_derivative(jet_f, 1) - fd1) / std::abs(fd1) < 1e-6);
  CHECK(std::abs(nth_derivative(jet_f, 2) - fd2) / std::abs(fd2) < 1e-6);
  CHECK(std::abs(nth_derivative(jet_f, 3) - fd3) / std::abs(fd3) < 1e-5);
}
