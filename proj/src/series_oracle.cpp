#include "ratiokit/series_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace ratiokit {

namespace {

/// Laurent polynomial with exact integer exponents: coefficient of
/// z^(lo + i) lives at c[i].
struct Laurent {
  int lo = 0;
  std::vector<Complex> c;

  Complex at(int e) const {
    const int i = e - lo;
    if (i < 0 || i >= static_cast<int>(c.size())) return {0.0, 0.0};
    return c[static_cast<std::size_t>(i)];
  }
};

Laurent lmul(const Laurent& a, const Laurent& b) {
  Laurent out;
  out.lo = a.lo + b.lo;
  out.c.assign(a.c.size() + b.c.size() - 1, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < a.c.size(); ++i)
    for (std::size_t j = 0; j < b.c.size(); ++j) out.c[i + j] += a.c[i] * b.c[j];
  return out;
}

Laurent constant(Complex v) { return Laurent{0, {v}}; }

/// 1 - x z
Laurent contracting_numerator(Complex x) { return Laurent{0, {Complex(1.0, 0.0), -x}}; }

/// 1 - z^{-1}/x
Laurent expanding_numerator(Complex x) {
  return Laurent{-1, {-Complex(1.0, 0.0) / x, Complex(1.0, 0.0)}};
}

/// sum_{m=0..order} y^m z^m  (truncation of 1/(1 - y z), |y| < 1)
Laurent contracting_denominator(Complex y, int order) {
  Laurent out;
  out.lo = 0;
  out.c.resize(static_cast<std::size_t>(order) + 1);
  Complex t(1.0, 0.0);
  for (int m = 0; m <= order; ++m) {
    out.c[static_cast<std::size_t>(m)] = t;
    t *= y;
  }
  return out;
}

/// sum_{m=0..order} y^{-m} z^{-m}  (truncation of 1/(1 - z^{-1}/y), |y| > 1)
Laurent expanding_denominator(Complex y, int order) {
  Laurent out;
  out.lo = -order;
  out.c.resize(static_cast<std::size_t>(order) + 1);
  Complex t(1.0, 0.0);
  for (int m = 0; m <= order; ++m) {
    out.c[static_cast<std::size_t>(order - m)] = t;
    t /= y;
  }
  return out;
}

/// One multiplicative factor of the per-variable integrand, with the
/// ingredients of the rigorous error budget: sup bound over |z| = 1 for
/// the factor (truncated or not) and the sup of the dropped tail.
struct Factor {
  Laurent poly;
  double sup = 0.0;
  double tail = 0.0;
};

Factor make_factor_contracting_num(Complex x) {
  return {contracting_numerator(x), 1.0 + std::abs(x), 0.0};
}

Factor make_factor_expanding_num(Complex x) {
  return {expanding_numerator(x), 1.0 + 1.0 / std::abs(x), 0.0};
}

Factor make_factor_contracting_den(Complex y, int order) {
  const double r = std::abs(y);
  return {contracting_denominator(y, order), 1.0 / (1.0 - r),
          std::pow(r, order + 1) / (1.0 - r)};
}

Factor make_factor_expanding_den(Complex y, int order) {
  const double r = 1.0 / std::abs(y);
  return {expanding_denominator(y, order), 1.0 / (1.0 - r),
          std::pow(r, order + 1) / (1.0 - r)};
}

struct Integrand {
  Laurent fhat;
  double sup = 0.0;   // sup over |z|=1 of both f and its truncation
  double error = 0.0; // sup over |z|=1 of |f - fhat|
};

Integrand assemble(Complex prefactor, const std::vector<Factor>& factors) {
  Integrand out;
  out.fhat = constant(prefactor);
  for (const Factor& f : factors) out.fhat = lmul(out.fhat, f.poly);

  const double pre = std::abs(prefactor);
  double sup_all = pre;
  for (const Factor& f : factors) sup_all *= f.sup;
  out.sup = sup_all;
  // |prod F_k - prod Fhat_k| <= sum_k tail_k * prod_{m != k} sup_m;
  // truncated geometric partial sums obey the same sup bound as the
  // full series, so sup_m serves both.
  double err = 0.0;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    if (factors[k].tail == 0.0) continue;
    double others = pre;
    for (std::size_t m = 0; m < factors.size(); ++m)
      if (m != k) others *= factors[m].sup;
    err += factors[k].tail * others;
  }
  out.error = err;
  return out;
}

std::vector<std::pair<std::vector<int>, int>> signed_permutations(int N) {
  std::vector<int> idx(static_cast<std::size_t>(N));
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<std::pair<std::vector<int>, int>> out;
  do {
    int inversions = 0;
    for (int a = 0; a < N; ++a)
      for (int b = a + 1; b < N; ++b)
        if (idx[static_cast<std::size_t>(a)] > idx[static_cast<std::size_t>(b)]) ++inversions;
    out.emplace_back(idx, (inversions % 2 == 0) ? 1 : -1);
  } while (std::next_permutation(idx.begin(), idx.end()));
  return out;
}

/// (1/N!) sum_{sigma,tau} sgn(sigma) sgn(tau) prod_a fhat[tau(a) - sigma(a)].
/// This is the constant term of prod_a f(z_a) * |Vandermonde|^2 / N!
/// with the two Vandermonde factors expanded as signed monomial sums.
Complex constant_term(const Laurent& fhat, int N) {
  const auto perms = signed_permutations(N);
  Complex total(0.0, 0.0);
  for (const auto& [sigma, ssgn] : perms)
    for (const auto& [tau, tsgn] : perms) {
      Complex prod(static_cast<double>(ssgn * tsgn), 0.0);
      for (int a = 0; a < N; ++a)
        prod *= fhat.at(tau[static_cast<std::size_t>(a)] - sigma[static_cast<std::size_t>(a)]);
      total += prod;
    }
  double fact = 1.0;
  for (int k = 2; k <= N; ++k) fact *= k;
  return total / fact;
}

SeriesResult finish(const Integrand& integrand, int N, const TruncationPolicy& policy) {
  SeriesResult result;
  result.value = constant_term(integrand.fhat, N);
  // The squared Vandermonde over N! integrates to 1 against normalized
  // torus measure, so a sup-norm error on the product of per-variable
  // factors bounds the integral error directly.
  result.tail_bound =
      static_cast<double>(N) * std::pow(integrand.sup, N - 1) * integrand.error;
  if (result.tail_bound > policy.tolerance) {
    std::ostringstream msg;
    msg << "truncation tail bound " << result.tail_bound << " exceeds requested tolerance "
        << policy.tolerance << " (raise the order)";
    throw TruncationTooCoarse(msg.str());
  }
  return result;
}

void check_policy(const TruncationPolicy& policy, int N) {
  if (policy.order < N) {
    std::ostringstream msg;
    msg << "truncation order " << policy.order << " cannot resolve numerator degrees at N = " << N;
    throw ValueError(msg.str());
  }
}

void check_capacity(int p, int q, int N) {
  if (p > 2 || q > 2 || N > 3) {
    std::ostringstream msg;
    msg << "torus oracle capacity is p, q <= 2 and N <= 3; got p = " << p << ", q = " << q
        << ", N = " << N;
    throw CapacityError(msg.str());
  }
}

}  // namespace

SeriesResult torus_average(const SpectralParams& params, const TruncationPolicy& policy) {
  check_capacity(params.p(), params.q(), params.N());
  check_policy(policy, params.N());

  Complex prefactor(1.0, 0.0);
  for (int l = params.p(); l < params.n(); ++l)
    prefactor *= params.xs()[static_cast<std::size_t>(l)] / params.ys()[static_cast<std::size_t>(l)];

  std::vector<Factor> factors;
  for (int j = 0; j < params.p(); ++j) {
    factors.push_back(make_factor_contracting_num(params.xs()[static_cast<std::size_t>(j)]));
    factors.push_back(
        make_factor_contracting_den(params.ys()[static_cast<std::size_t>(j)], policy.order));
  }
  for (int l = params.p(); l < params.n(); ++l) {
    factors.push_back(make_factor_expanding_num(params.xs()[static_cast<std::size_t>(l)]));
    factors.push_back(
        make_factor_expanding_den(params.ys()[static_cast<std::size_t>(l)], policy.order));
  }
  return finish(assemble(prefactor, factors), params.N(), policy);
}

SeriesResult torus_average_extended(const ExtendedParams& params, const TruncationPolicy& policy) {
  if (params.p() > 2 || params.q() > 2 || params.pprime() > 2 || params.qprime() > 2 ||
      params.N() > 3) {
    std::ostringstream msg;
    msg << "torus oracle capacity is all counts <= 2 and N <= 3";
    throw CapacityError(msg.str());
  }
  check_policy(policy, params.N());

  std::vector<Factor> factors;
  for (int j = 0; j < params.p(); ++j)
    factors.push_back(make_factor_contracting_num(params.xs()[static_cast<std::size_t>(j)]));
  for (int l = params.p(); l < params.p() + params.q(); ++l)
    factors.push_back(make_factor_expanding_num(params.xs()[static_cast<std::size_t>(l)]));
  for (int jp = 0; jp < params.pprime(); ++jp)
    factors.push_back(
        make_factor_contracting_den(params.ys()[static_cast<std::size_t>(jp)], policy.order));
  for (int lp = params.pprime(); lp < params.pprime() + params.qprime(); ++lp)
    factors.push_back(
        make_factor_expanding_den(params.ys()[static_cast<std::size_t>(lp)], policy.order));
  return finish(assemble(Complex(1.0, 0.0), factors), params.N(), policy);
}

}  // namespace ratiokit
