#include "ratiokit/params.hpp"

#include <complex>

#include "doctest.h"

using namespace ratiokit;

namespace {

RawParams standard_point() {
  RawParams raw;
  raw.p = 1;
  raw.q = 1;
  raw.N = 1;
  raw.xs = {{2.0, 0.0}, {3.0, 0.0}};
  raw.ys = {{0.5, 0.0}, {4.0, 0.0}};
  return raw;
}

}  // namespace

TEST_CASE("validate accepts in-domain records") {
  const SpectralParams params = validate(standard_point());
  CHECK(params.p() == 1);
  CHECK(params.q() == 1);
  CHECK(params.N() == 1);
  CHECK(params.xs()[1] == Complex(3.0, 0.0));

  RawParams angles;
  angles.p = 1;
  angles.q = 1;
  angles.N = 2;
  angles.xs = {std::exp(Complex(0.0, 0.3)), std::exp(Complex(0.0, 1.1))};
  angles.ys = {{0.8, 0.0}, {1.3, 0.0}};
  CHECK_NOTHROW(validate(angles));
}

TEST_CASE("validate rejects wrong y-modulus with the offending index") {
  RawParams raw = standard_point();
  raw.ys[0] = Complex(1.5, 0.0);  // contracting slot must have |y| < 1
  try {
    validate(raw);
    FAIL("expected DomainViolation");
  } catch (const DomainViolation& err) {
    CHECK(err.index() == 0);
  }

  raw = standard_point();
  raw.ys[1] = Complex(0.9, 0.0);  // expanding slot must have |y| > 1
  try {
    validate(raw);
    FAIL("expected DomainViolation");
  } catch (const DomainViolation& err) {
    CHECK(err.index() == 1);
  }
}

TEST_CASE("validate rejects shape and value errors") {
  RawParams raw = standard_point();
  raw.xs.push_back(Complex(1.0, 0.0));
  CHECK_THROWS_AS(validate(raw), ShapeError);

  raw = standard_point();
  raw.N = 0;
  CHECK_THROWS_AS(validate(raw), ValueError);

  raw = standard_point();
  raw.xs[0] = Complex(0.0, 0.0);
  CHECK_THROWS_AS(validate(raw), ValueError);

  raw = standard_point();
  raw.p = 0;
  raw.q = 0;
  raw.xs.clear();
  raw.ys.clear();
  CHECK_THROWS_AS(validate(raw), ValueError);
}

TEST_CASE("validate is idempotent") {
  const SpectralParams once = validate(standard_point());
  const SpectralParams twice = validate(once);
  CHECK(once.p() == twice.p());
  CHECK(once.q() == twice.q());
  CHECK(once.N() == twice.N());
  CHECK(once.xs() == twice.xs());
  CHECK(once.ys() == twice.ys());
}

TEST_CASE("mixed-count validation") {
  ExtendedRawParams raw;
  raw.p = 1;
  raw.q = 1;
  raw.pprime = 2;
  raw.qprime = 2;
  raw.N = 1;
  raw.xs = {{2.0, 0.0}, {3.0, 0.0}};
  raw.ys = {{0.3, 0.0}, {0.5, 0.0}, {2.0, 0.0}, {4.0, 0.0}};
  CHECK_NOTHROW(validate_extended(raw));

  raw.pprime = 3;  // p' > p + N
  raw.ys = {{0.3, 0.0}, {0.5, 0.0}, {0.7, 0.0}, {2.0, 0.0}};
  raw.qprime = 1;
  CHECK_THROWS_AS(validate_extended(raw), DomainViolation);

  raw.pprime = 2;
  raw.qprime = 2;
  raw.ys = {{0.3, 0.0}, {0.5, 0.0}, {2.0, 0.0}};
  CHECK_THROWS_AS(validate_extended(raw), ShapeError);
}

TEST_CASE("highest weight multiplier") {
  CHECK(highest_weight_multiplier(validate(standard_point())) == Complex(0.75, 0.0));

  RawParams raw = standard_point();
  raw.N = 2;
  CHECK(highest_weight_multiplier(validate(raw)) == Complex(9.0 / 16.0, 0.0));

  RawParams no_q;
  no_q.p = 1;
  no_q.q = 0;
  no_q.N = 2;
  no_q.xs = {{0.3, 0.0}};
  no_q.ys = {{0.5, 0.0}};
  CHECK(highest_weight_multiplier(validate(no_q)) == Complex(1.0, 0.0));

  // equals 1 whenever x_l = y_l for all expanding slots
  raw = standard_point();
  raw.xs[1] = raw.ys[1];
  CHECK(highest_weight_multiplier(validate(raw)) == Complex(1.0, 0.0));
}

TEST_CASE("coset enumeration: identity first, descending lex on L") {
  const auto c11 = enumerate_cosets(1, 1);
  REQUIRE(c11.size() == 2);
  CHECK(c11[0].J == std::vector<int>{0});
  CHECK(c11[0].L == std::vector<int>{1});
  CHECK(c11[1].J == std::vector<int>{1});
  CHECK(c11[1].L == std::vector<int>{0});

  CHECK(enumerate_cosets(2, 1).size() == 3);

  const auto c22 = enumerate_cosets(2, 2);
  REQUIRE(c22.size() == 6);
  CHECK(c22[0].J == std::vector<int>{0, 1});  // identity coset first
  CHECK(c22[0].L == std::vector<int>{2, 3});
  for (std::size_t i = 1; i < c22.size(); ++i) {
    // strictly decreasing lexicographic order of L
    CHECK(c22[i - 1].L > c22[i].L);
  }
  for (const Coset& c : c22) {
    REQUIRE(c.J.size() == 2);
    REQUIRE(c.L.size() == 2);
    std::vector<bool> seen(4, false);
    for (int v : c.J) seen[static_cast<std::size_t>(v)] = true;
    for (int v : c.L) seen[static_cast<std::size_t>(v)] = true;
    CHECK(seen == std::vector<bool>(4, true));  // J and L partition the index set
  }
}

TEST_CASE("coset enumeration is deterministic across calls") {
  const auto a = enumerate_cosets(2, 2);
  const auto b = enumerate_cosets(2, 2);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].J == b[i].J);
    CHECK(a[i].L == b[i].L);
  }
}

TEST_CASE("coset capacity") {
  CHECK(coset_count(2, 2) == 6);
  CHECK(coset_count(10, 10) == 184756);
  CHECK_THROWS_AS(enumerate_cosets(10, 10, 1000), CapacityError);
  CHECK_THROWS_AS(enumerate_cosets(15, 15), CapacityError);  // C(30,15) > 1e6 default cap
}

TEST_CASE("weight admissibility window") {
  Weight w;
  w.m = {0, 1};
  w.n = {0, 2};
  CHECK(w.admissible(1, 1, 2));
  w.n = {0, 1};  // expanding n must be >= N
  CHECK(!w.admissible(1, 1, 2));
  w.m = {0, 3};  // m above N
  w.n = {0, 2};
  CHECK(!w.admissible(1, 1, 2));
  w.m = {0, 1};
  w.n = {1, 2};  // contracting n must be <= 0
  CHECK(!w.admissible(1, 1, 2));
}

TEST_CASE("integer powers") {
  CHECK(pow_int(Complex(2.0, 0.0), 10) == Complex(1024.0, 0.0));
  CHECK(pow_int(Complex(2.0, 0.0), -2) == Complex(0.25, 0.0));
  CHECK(pow_int(Complex(0.75, 0.0), 2) == Complex(0.5625, 0.0));
  CHECK(pow_int(Complex(5.0, 0.0), 0) == Complex(1.0, 0.0));
}
