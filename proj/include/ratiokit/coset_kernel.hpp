#pragma once

// Scalar-generic evaluation of the coset sums.  The same kernels run on
// std::complex<double> (production), dd::Complex (cancellation fallback)
// and Jet (derivative lifts), so every consumer exercises identical
// term structure: ratio-form factors (1 - a/b), per-slot combination of
// the (x/y)^N prefactor, and a fixed summation order over the coset
// table.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "ratiokit/dd.hpp"
#include "ratiokit/errors.hpp"
#include "ratiokit/jets.hpp"
#include "ratiokit/params.hpp"

namespace ratiokit {

inline std::complex<double> to_body(const std::complex<double>& z) { return z; }
inline std::complex<double> to_body(const dd::Complex& z) { return dd::to_std(z); }
inline std::complex<double> to_body(const Jet& j) { return j.value(); }

template <class T>
T pow_uint_t(const T& x, int e, const T& one) {
  T acc = one;
  T base = x;
  int u = e;
  while (u > 0) {
    if (u & 1) acc = acc * base;
    base = base * base;
    u >>= 1;
  }
  return acc;
}

namespace detail {

template <class T>
void check_denominator(const T& den) {
  if (to_body(den) == std::complex<double>(0.0, 0.0))
    throw SingularInput("denominator factor vanishes exactly (coincident parameters)");
}

/// Neumaier-compensated accumulation for the production scalar; plain
/// summation for wider or structured scalars.
template <class T>
struct Accumulator {
  T sum;
  explicit Accumulator(const T& zero) : sum(zero) {}
  void add(const T& term) { sum = sum + term; }
  T total() const { return sum; }
};

template <>
struct Accumulator<std::complex<double>> {
  explicit Accumulator(const std::complex<double>&) {}
  void add(const std::complex<double>& term) {
    neumaier(sum_re_, comp_re_, term.real());
    neumaier(sum_im_, comp_im_, term.imag());
  }
  std::complex<double> total() const { return {sum_re_ + comp_re_, sum_im_ + comp_im_}; }

 private:
  static void neumaier(double& s, double& c, double v) {
    const double t = s + v;
    if (std::abs(s) >= std::abs(v))
      c += (s - t) + v;
    else
      c += (v - t) + s;
    s = t;
  }
  double sum_re_ = 0.0, comp_re_ = 0.0;
  double sum_im_ = 0.0, comp_im_ = 0.0;
};

}  // namespace detail

template <class T>
struct KernelSum {
  T value;
  double max_abs_term = 0.0;
};

/// One coset term of the full two-family average.
template <class T>
T coset_term_full(const std::vector<T>& xs, const std::vector<T>& ys, int p, int q, int N,
                  const Coset& c, const T& one) {
  T term = one;
  for (int u = 0; u < q; ++u)
    term = term * pow_uint_t(xs[static_cast<std::size_t>(c.L[u])] / ys[static_cast<std::size_t>(p + u)], N, one);
  for (int s = 0; s < p; ++s) {
    const T& xa = xs[static_cast<std::size_t>(c.J[s])];
    const T& yj = ys[static_cast<std::size_t>(s)];
    for (int u = 0; u < q; ++u) {
      const T& xb = xs[static_cast<std::size_t>(c.L[u])];
      const T& yl = ys[static_cast<std::size_t>(p + u)];
      T den1 = one - xa / xb;
      T den2 = one - yj / yl;
      detail::check_denominator(den1);
      detail::check_denominator(den2);
      term = term * ((one - yj / xb) * (one - xa / yl)) / (den1 * den2);
    }
  }
  return term;
}

/// One coset term of the equal-x compact-sector sum.
template <class T>
T coset_term_compact(const std::vector<T>& xs, int p, int q, int N, const Coset& c, const T& one) {
  T term = one;
  for (int u = 0; u < q; ++u) term = term * pow_uint_t(xs[static_cast<std::size_t>(c.L[u])], N, one);
  for (int s = 0; s < p; ++s) {
    const T& xa = xs[static_cast<std::size_t>(c.J[s])];
    for (int u = 0; u < q; ++u) {
      const T& xb = xs[static_cast<std::size_t>(c.L[u])];
      T den = one - xa / xb;
      detail::check_denominator(den);
      term = term / den;
    }
  }
  return term;
}

/// One coset term of the unequal-count generalization, normalized by the
/// original (unpermuted) x's rather than the y's.
template <class T>
T coset_term_unequal(const std::vector<T>& xs, const std::vector<T>& ys, int p, int q, int pp,
                     int qp, int N, const Coset& c, const T& one) {
  T term = one;
  for (int u = 0; u < q; ++u)
    term = term * pow_uint_t(xs[static_cast<std::size_t>(c.L[u])] / xs[static_cast<std::size_t>(p + u)], N, one);
  for (int jp = 0; jp < pp; ++jp)
    for (int u = 0; u < q; ++u)
      term = term * (one - ys[static_cast<std::size_t>(jp)] / xs[static_cast<std::size_t>(c.L[u])]);
  for (int s = 0; s < p; ++s)
    for (int lp = pp; lp < pp + qp; ++lp)
      term = term * (one - xs[static_cast<std::size_t>(c.J[s])] / ys[static_cast<std::size_t>(lp)]);
  for (int s = 0; s < p; ++s)
    for (int u = 0; u < q; ++u) {
      T den = one - xs[static_cast<std::size_t>(c.J[s])] / xs[static_cast<std::size_t>(c.L[u])];
      detail::check_denominator(den);
      term = term / den;
    }
  for (int jp = 0; jp < pp; ++jp)
    for (int lp = pp; lp < pp + qp; ++lp) {
      T den = one - ys[static_cast<std::size_t>(jp)] / ys[static_cast<std::size_t>(lp)];
      detail::check_denominator(den);
      term = term / den;
    }
  return term;
}

template <class T, class TermFn>
KernelSum<T> coset_sum(const std::vector<Coset>& cosets, const T& zero, TermFn&& term_fn,
                       std::vector<T>* terms) {
  detail::Accumulator<T> acc(zero);
  KernelSum<T> out{zero, 0.0};
  if (terms) {
    terms->clear();
    terms->reserve(cosets.size());
  }
  for (const Coset& c : cosets) {
    T term = term_fn(c);
    out.max_abs_term = std::max(out.max_abs_term, std::abs(to_body(term)));
    if (terms) terms->push_back(term);
    acc.add(term);
  }
  out.value = acc.total();
  return out;
}

}  // namespace ratiokit
