#include "ratiokit/jets.hpp"

#include <cmath>
#include <sstream>

namespace ratiokit {

namespace {

using C = std::complex<double>;

void check_order(int order) {
  if (order < 0 || order > Jet::kMaxOrder) {
    std::ostringstream msg;
    msg << "jet order " << order << " outside [0, " << Jet::kMaxOrder << "]";
    throw ValueError(msg.str());
  }
}

void check_same_order(const Jet& a, const Jet& b) {
  if (a.order() != b.order()) {
    std::ostringstream msg;
    msg << "jet order mismatch: " << a.order() << " vs " << b.order();
    throw ShapeError(msg.str());
  }
}

}  // namespace

Jet::Jet(int order) {
  check_order(order);
  coeffs_.assign(static_cast<std::size_t>(order) + 1, C(0.0, 0.0));
}

Jet Jet::constant(int order, C c) {
  Jet j(order);
  j.coeffs_[0] = c;
  return j;
}

Jet Jet::variable(int order, C c) {
  Jet j(order);
  j.coeffs_[0] = c;
  if (order >= 1) j.coeffs_[1] = C(1.0, 0.0);
  return j;
}

Jet& Jet::operator+=(const Jet& rhs) {
  check_same_order(*this, rhs);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += rhs.coeffs_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  check_same_order(*this, rhs);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= rhs.coeffs_[k];
  return *this;
}

Jet& Jet::operator*=(const Jet& rhs) {
  check_same_order(*this, rhs);
  const std::size_t n = coeffs_.size();
  std::vector<C> out(n, C(0.0, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    if (coeffs_[i] == C(0.0, 0.0)) continue;
    for (std::size_t j = 0; i + j < n; ++j) out[i + j] += coeffs_[i] * rhs.coeffs_[j];
  }
  coeffs_ = std::move(out);
  return *this;
}

Jet& Jet::operator/=(const Jet& rhs) { return *this *= inv(rhs); }

Jet& Jet::operator+=(C c) {
  coeffs_[0] += c;
  return *this;
}

Jet& Jet::operator-=(C c) {
  coeffs_[0] -= c;
  return *this;
}

Jet& Jet::operator*=(C c) {
  for (auto& v : coeffs_) v *= c;
  return *this;
}

Jet& Jet::operator/=(C c) {
  for (auto& v : coeffs_) v /= c;
  return *this;
}

Jet Jet::operator-() const {
  Jet out = *this;
  for (int k = 0; k <= out.order(); ++k) out.at(k) = -out.coeff(k);
  return out;
}

Jet operator+(Jet lhs, const Jet& rhs) { return lhs += rhs; }
Jet operator-(Jet lhs, const Jet& rhs) { return lhs -= rhs; }
Jet operator*(const Jet& lhs, const Jet& rhs) {
  Jet out = lhs;
  return out *= rhs;
}
Jet operator/(const Jet& lhs, const Jet& rhs) { return lhs * inv(rhs); }
Jet operator+(Jet lhs, C c) { return lhs += c; }
Jet operator-(Jet lhs, C c) { return lhs -= c; }
Jet operator*(Jet lhs, C c) { return lhs *= c; }
Jet operator/(Jet lhs, C c) { return lhs /= c; }
Jet operator+(C c, Jet rhs) { return rhs += c; }
Jet operator-(C c, const Jet& rhs) {
  Jet out = -rhs;
  return out += c;
}
Jet operator*(C c, Jet rhs) { return rhs *= c; }
Jet operator/(C c, const Jet& rhs) {
  Jet out = inv(rhs);
  return out *= c;
}

Jet inv(const Jet& a) {
  if (a.coeff(0) == C(0.0, 0.0)) throw DivisionByZeroJet("jet inverse: constant term is zero");
  const int L = a.order();
  Jet b(L);
  const C inv0 = C(1.0, 0.0) / a.coeff(0);
  b.at(0) = inv0;
  for (int m = 1; m <= L; ++m) {
    C acc(0.0, 0.0);
    for (int r = 1; r <= m; ++r) acc += a.coeff(r) * b.coeff(m - r);
    b.at(m) = -inv0 * acc;
  }
  return b;
}

Jet exp(const Jet& a) {
  const int L = a.order();
  Jet e(L);
  e.at(0) = std::exp(a.coeff(0));
  for (int m = 1; m <= L; ++m) {
    C acc(0.0, 0.0);
    for (int r = 1; r <= m; ++r) acc += static_cast<double>(r) * a.coeff(r) * e.coeff(m - r);
    e.at(m) = acc / static_cast<double>(m);
  }
  return e;
}

Jet sqrt(const Jet& a) {
  const C c0 = a.coeff(0);
  if (c0.imag() == 0.0 && c0.real() <= 0.0)
    throw BranchError("jet sqrt: constant term on the branch cut (-inf, 0]");
  const int L = a.order();
  Jet s(L);
  s.at(0) = std::sqrt(c0);
  const C half_inv = C(0.5, 0.0) / s.coeff(0);
  for (int m = 1; m <= L; ++m) {
    C acc(0.0, 0.0);
    for (int r = 1; r < m; ++r) acc += s.coeff(r) * s.coeff(m - r);
    s.at(m) = (a.coeff(m) - acc) * half_inv;
  }
  return s;
}

Jet jet_pow(const Jet& a, long long e) {
  if (e < 0) return jet_pow(inv(a), -e);
  Jet acc = Jet::constant(a.order(), C(1.0, 0.0));
  Jet base = a;
  unsigned long long u = static_cast<unsigned long long>(e);
  while (u > 0) {
    if (u & 1ull) acc *= base;
    base *= base;
    u >>= 1;
  }
  return acc;
}

std::complex<double> nth_derivative(const Jet& a, int n) {
  if (n < 0 || n > a.order()) {
    std::ostringstream msg;
    msg << "derivative order " << n << " exceeds jet order " << a.order();
    throw ValueError(msg.str());
  }
  double fact = 1.0;
  for (int k = 2; k <= n; ++k) fact *= static_cast<double>(k);
  return fact * a.coeff(n);
}

}  // namespace ratiokit
