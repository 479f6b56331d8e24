#pragma once

// Minimal double-double ("compensated pair") arithmetic: an unevaluated
// sum hi + lo with |lo| <= ulp(hi)/2, giving ~32 significant digits.
// Classic error-free transforms (two_sum, two_prod via fma); division by
// one Newton refinement.  Only the handful of operations the cancellation
// fallback needs.

#include <cmath>
#include <complex>

namespace ratiokit::dd {

struct Real {
  double hi = 0.0;
  double lo = 0.0;

  Real() = default;
  Real(double h) : hi(h), lo(0.0) {}  // NOLINT: implicit by design
  Real(double h, double l) : hi(h), lo(l) {}
};

inline Real two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return Real(s, err);
}

inline Real quick_two_sum(double a, double b) {
  double s = a + b;
  return Real(s, b - (s - a));
}

inline Real two_prod(double a, double b) {
  double p = a * b;
  return Real(p, std::fma(a, b, -p));
}

inline Real operator+(Real a, Real b) {
  Real s = two_sum(a.hi, b.hi);
  double lo = s.lo + a.lo + b.lo;
  return quick_two_sum(s.hi, lo);
}

inline Real operator-(Real a) { return Real(-a.hi, -a.lo); }
inline Real operator-(Real a, Real b) { return a + (-b); }

inline Real operator*(Real a, Real b) {
  Real p = two_prod(a.hi, b.hi);
  double lo = p.lo + a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, lo);
}

inline Real operator/(Real a, Real b) {
  double q1 = a.hi / b.hi;
  Real r = a - b * Real(q1);
  double q2 = (r.hi + r.lo) / b.hi;
  return quick_two_sum(q1, q2);
}

inline double to_double(Real a) { return a.hi + a.lo; }

struct Complex {
  Real re;
  Real im;

  Complex() = default;
  Complex(Real r, Real i) : re(r), im(i) {}
  Complex(double r, double i = 0.0) : re(r), im(i) {}
  explicit Complex(std::complex<double> z) : re(z.real()), im(z.imag()) {}
};

inline Complex operator+(Complex a, Complex b) { return Complex(a.re + b.re, a.im + b.im); }
inline Complex operator-(Complex a, Complex b) { return Complex(a.re - b.re, a.im - b.im); }
inline Complex operator-(Complex a) { return Complex(-a.re, -a.im); }

inline Complex operator*(Complex a, Complex b) {
  return Complex(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
}

inline Complex operator/(Complex a, Complex b) {
  Real den = b.re * b.re + b.im * b.im;
  return Complex((a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den);
}

inline std::complex<double> to_std(Complex z) {
  return std::complex<double>(to_double(z.re), to_double(z.im));
}

}  // namespace ratiokit::dd
