#pragma once

#include <complex>
#include <vector>

#include "ratiokit/errors.hpp"

namespace ratiokit {

/// Truncated Taylor expansion of one complex-analytic function of a
/// single variable: coefficients c_0..c_L of f(t0 + h) = sum c_k h^k.
/// All arithmetic truncates at the common order L (degree cap 6 unless
/// a caller asks for less).  Mixed-order operands are a ShapeError.
class Jet {
 public:
  static constexpr int kMaxOrder = 6;

  Jet() : coeffs_(1) {}
  /// Zero jet of the given truncation order.
  explicit Jet(int order);
  /// Jet of the constant function c.
  static Jet constant(int order, std::complex<double> c);
  /// Jet of the identity coordinate h -> c + h (seed for derivatives).
  static Jet variable(int order, std::complex<double> c);

  int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  std::complex<double> coeff(int k) const { return coeffs_.at(static_cast<std::size_t>(k)); }
  std::complex<double>& at(int k) { return coeffs_.at(static_cast<std::size_t>(k)); }
  /// Value of the underlying function at the expansion point.
  std::complex<double> value() const { return coeffs_[0]; }

  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator*=(const Jet& rhs);
  Jet& operator/=(const Jet& rhs);
  Jet& operator+=(std::complex<double> c);
  Jet& operator-=(std::complex<double> c);
  Jet& operator*=(std::complex<double> c);
  Jet& operator/=(std::complex<double> c);
  Jet operator-() const;

 private:
  std::vector<std::complex<double>> coeffs_;
};

Jet operator+(Jet lhs, const Jet& rhs);
Jet operator-(Jet lhs, const Jet& rhs);
Jet operator*(const Jet& lhs, const Jet& rhs);
Jet operator/(const Jet& lhs, const Jet& rhs);
Jet operator+(Jet lhs, std::complex<double> c);
Jet operator-(Jet lhs, std::complex<double> c);
Jet operator*(Jet lhs, std::complex<double> c);
Jet operator/(Jet lhs, std::complex<double> c);
Jet operator+(std::complex<double> c, Jet rhs);
Jet operator-(std::complex<double> c, const Jet& rhs);
Jet operator*(std::complex<double> c, Jet rhs);
Jet operator/(std::complex<double> c, const Jet& rhs);

/// Reciprocal; DivisionByZeroJet when the constant term vanishes.
Jet inv(const Jet& a);
/// exp by the standard convolution recurrence.
Jet exp(const Jet& a);
/// Principal square root; BranchError when the constant term lies on
/// the cut (-inf, 0].
Jet sqrt(const Jet& a);
/// Integer power by square-and-multiply (negative exponents via inv).
Jet jet_pow(const Jet& a, long long e);

/// n-th derivative of the expanded function: n! * c_n.  ValueError if
/// n exceeds the truncation order.
std::complex<double> nth_derivative(const Jet& a, int n);

}  // namespace ratiokit
