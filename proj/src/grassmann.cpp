#include "ratiokit/grassmann.hpp"

#include <Eigen/Dense>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <thread>
#include <utility>

#include "ratiokit/errors.hpp"

namespace ratiokit {

namespace {

void check_generator_count(int k) {
  if (k < 0 || k > GrassmannElement::kMaxGenerators)
    throw ValueError("generator count must be between 0 and 8");
}

/// Sign of reordering the concatenation of two ascending generator
/// lists (bitmask subsets) into ascending order: parity of the number
/// of pairs (s, t) with s in `a`, t in `b`, s > t.
double merge_sign(unsigned a, unsigned b) {
  int swaps = 0;
  while (b != 0) {
    const int j = std::countr_zero(b);
    swaps += std::popcount(a >> (j + 1));
    b &= b - 1;
  }
  return (swaps & 1) ? -1.0 : 1.0;
}

}  // namespace

GrassmannElement::GrassmannElement(int k) : k_(k) {
  check_generator_count(k);
  coeff_.assign(std::size_t{1} << k, Complex(0.0, 0.0));
}

GrassmannElement GrassmannElement::scalar(int k, Complex v) {
  GrassmannElement g(k);
  g.coeff_[0] = v;
  return g;
}

GrassmannElement GrassmannElement::generator(int k, int index) {
  check_generator_count(k);
  if (index < 0 || index >= k) throw ValueError("generator index out of range");
  GrassmannElement g(k);
  g.coeff_[std::size_t{1} << index] = Complex(1.0, 0.0);
  return g;
}

Complex GrassmannElement::coeff(std::size_t mask) const {
  if (mask >= coeff_.size()) throw ValueError("subset mask out of range");
  return coeff_[mask];
}

void GrassmannElement::set_coeff(std::size_t mask, Complex v) {
  if (mask >= coeff_.size()) throw ValueError("subset mask out of range");
  coeff_[mask] = v;
}

bool GrassmannElement::is_zero() const { return max_abs() == 0.0; }

double GrassmannElement::max_abs() const {
  double m = 0.0;
  for (const Complex& c : coeff_) m = std::max(m, std::abs(c));
  return m;
}

bool GrassmannElement::homogeneous_even() const {
  for (std::size_t mask = 0; mask < coeff_.size(); ++mask)
    if ((std::popcount(mask) & 1) && coeff_[mask] != Complex(0.0, 0.0)) return false;
  return true;
}

bool GrassmannElement::homogeneous_odd() const {
  for (std::size_t mask = 0; mask < coeff_.size(); ++mask)
    if (!(std::popcount(mask) & 1) && coeff_[mask] != Complex(0.0, 0.0)) return false;
  return true;
}

GrassmannElement& GrassmannElement::operator+=(const GrassmannElement& other) {
  if (k_ != other.k_) throw GeneratorMismatch("adding elements of different algebras");
  for (std::size_t m = 0; m < coeff_.size(); ++m) coeff_[m] += other.coeff_[m];
  return *this;
}

GrassmannElement& GrassmannElement::operator-=(const GrassmannElement& other) {
  if (k_ != other.k_) throw GeneratorMismatch("subtracting elements of different algebras");
  for (std::size_t m = 0; m < coeff_.size(); ++m) coeff_[m] -= other.coeff_[m];
  return *this;
}

GrassmannElement& GrassmannElement::operator*=(Complex s) {
  for (Complex& c : coeff_) c *= s;
  return *this;
}

GrassmannElement gmul(const GrassmannElement& a, const GrassmannElement& b) {
  if (a.generators() != b.generators())
    throw GeneratorMismatch("multiplying elements of different algebras");
  const int k = a.generators();
  GrassmannElement out(k);
  const std::size_t size = a.table_size();
  for (std::size_t s = 0; s < size; ++s) {
    const Complex as = a.coeff(s);
    if (as == Complex(0.0, 0.0)) continue;
    for (std::size_t t = 0; t < size; ++t) {
      if ((s & t) != 0) continue;
      const Complex bt = b.coeff(t);
      if (bt == Complex(0.0, 0.0)) continue;
      const std::size_t u = s | t;
      out.set_coeff(u, out.coeff(u) + merge_sign(static_cast<unsigned>(s),
                                                 static_cast<unsigned>(t)) *
                                          as * bt);
    }
  }
  return out;
}

GrassmannElement operator+(GrassmannElement a, const GrassmannElement& b) { return a += b; }
GrassmannElement operator-(GrassmannElement a, const GrassmannElement& b) { return a -= b; }
GrassmannElement operator-(GrassmannElement a) { return a *= Complex(-1.0, 0.0); }
GrassmannElement operator*(const GrassmannElement& a, const GrassmannElement& b) {
  return gmul(a, b);
}
GrassmannElement operator*(Complex s, GrassmannElement a) { return a *= s; }
GrassmannElement operator*(GrassmannElement a, Complex s) { return a *= s; }

GrassmannElement GrassmannElement::inverse() const {
  const Complex s = body();
  if (s == Complex(0.0, 0.0)) throw SingularBlock("inverse of an element with zero body");
  const Complex sinv = Complex(1.0, 0.0) / s;
  // 1/(s + n) = s^{-1} sum_m (-n/s)^m; the series terminates because n
  // is nilpotent.
  GrassmannElement step = *this;
  step.coeff_[0] = Complex(0.0, 0.0);
  step *= -sinv;
  GrassmannElement acc = GrassmannElement::scalar(k_, Complex(1.0, 0.0));
  GrassmannElement power = acc;
  for (int m = 1; m <= k_; ++m) {
    power = gmul(power, step);
    if (power.is_zero()) break;
    acc += power;
  }
  return acc *= sinv;
}

GrassmannElement gexp(const GrassmannElement& g) {
  const int k = g.generators();
  GrassmannElement nil = g;
  nil.set_coeff(0, Complex(0.0, 0.0));
  GrassmannElement acc = GrassmannElement::scalar(k, Complex(1.0, 0.0));
  GrassmannElement power = acc;
  double factorial = 1.0;
  for (int m = 1; m <= k; ++m) {
    power = gmul(power, nil);
    if (power.is_zero()) break;
    factorial *= static_cast<double>(m);
    acc += power * Complex(1.0 / factorial, 0.0);
  }
  return acc *= std::exp(g.body());
}

// ---------------------------------------------------------------------------
// Supermatrix
// ---------------------------------------------------------------------------

Supermatrix::Supermatrix(int k, int dim1, int dim0, int parity)
    : k_(k), dim1_(dim1), dim0_(dim0), parity_(parity) {
  check_generator_count(k);
  if (dim1 < 0 || dim0 < 0 || dim1 + dim0 == 0)
    throw ShapeError("supermatrix dimensions must be nonnegative and not both zero");
  if (parity != 0 && parity != 1) throw ValueError("parity must be 0 (even) or 1 (odd)");
  const GrassmannElement zero(k);
  a_.assign(static_cast<std::size_t>(dim1) * dim1, zero);
  b_.assign(static_cast<std::size_t>(dim1) * dim0, zero);
  c_.assign(static_cast<std::size_t>(dim0) * dim1, zero);
  d_.assign(static_cast<std::size_t>(dim0) * dim0, zero);
}

GrassmannElement& Supermatrix::A(int i, int j) { return a_[static_cast<std::size_t>(i) * dim1_ + j]; }
GrassmannElement& Supermatrix::B(int i, int j) { return b_[static_cast<std::size_t>(i) * dim0_ + j]; }
GrassmannElement& Supermatrix::C(int i, int j) { return c_[static_cast<std::size_t>(i) * dim1_ + j]; }
GrassmannElement& Supermatrix::D(int i, int j) { return d_[static_cast<std::size_t>(i) * dim0_ + j]; }
const GrassmannElement& Supermatrix::A(int i, int j) const {
  return a_[static_cast<std::size_t>(i) * dim1_ + j];
}
const GrassmannElement& Supermatrix::B(int i, int j) const {
  return b_[static_cast<std::size_t>(i) * dim0_ + j];
}
const GrassmannElement& Supermatrix::C(int i, int j) const {
  return c_[static_cast<std::size_t>(i) * dim1_ + j];
}
const GrassmannElement& Supermatrix::D(int i, int j) const {
  return d_[static_cast<std::size_t>(i) * dim0_ + j];
}

void Supermatrix::check_parity() const {
  const bool even_diag = (parity_ == 0);
  auto check = [&](const std::vector<GrassmannElement>& block, bool diagonal, const char* name) {
    const bool want_even = diagonal ? even_diag : !even_diag;
    for (const GrassmannElement& e : block) {
      const bool ok = want_even ? e.homogeneous_even() : e.homogeneous_odd();
      if (!ok)
        throw ParityError(std::string("block ") + name + " violates the grading contract");
    }
  };
  check(a_, true, "A");
  check(d_, true, "D");
  check(b_, false, "B");
  check(c_, false, "C");
}

namespace {

void check_same_shape(const Supermatrix& x, const Supermatrix& y) {
  if (x.generators() != y.generators())
    throw GeneratorMismatch("supermatrices over different algebras");
  if (x.dim1() != y.dim1() || x.dim0() != y.dim0())
    throw ShapeError("supermatrix dimensions do not match");
}

}  // namespace

Supermatrix smul(const Supermatrix& x, const Supermatrix& y) {
  check_same_shape(x, y);
  x.check_parity();
  y.check_parity();
  const int k = x.generators();
  const int n1 = x.dim1();
  const int n0 = x.dim0();
  Supermatrix z(k, n1, n0, (x.parity() + y.parity()) & 1);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n1; ++j) {
      GrassmannElement acc(k);
      for (int m = 0; m < n1; ++m) acc += gmul(x.A(i, m), y.A(m, j));
      for (int m = 0; m < n0; ++m) acc += gmul(x.B(i, m), y.C(m, j));
      z.A(i, j) = acc;
    }
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n0; ++j) {
      GrassmannElement acc(k);
      for (int m = 0; m < n1; ++m) acc += gmul(x.A(i, m), y.B(m, j));
      for (int m = 0; m < n0; ++m) acc += gmul(x.B(i, m), y.D(m, j));
      z.B(i, j) = acc;
    }
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n1; ++j) {
      GrassmannElement acc(k);
      for (int m = 0; m < n1; ++m) acc += gmul(x.C(i, m), y.A(m, j));
      for (int m = 0; m < n0; ++m) acc += gmul(x.D(i, m), y.C(m, j));
      z.C(i, j) = acc;
    }
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n0; ++j) {
      GrassmannElement acc(k);
      for (int m = 0; m < n1; ++m) acc += gmul(x.C(i, m), y.B(m, j));
      for (int m = 0; m < n0; ++m) acc += gmul(x.D(i, m), y.D(m, j));
      z.D(i, j) = acc;
    }
  return z;
}

Supermatrix operator-(Supermatrix x, const Supermatrix& y) {
  check_same_shape(x, y);
  for (int i = 0; i < x.dim1(); ++i)
    for (int j = 0; j < x.dim1(); ++j) x.A(i, j) -= y.A(i, j);
  for (int i = 0; i < x.dim1(); ++i)
    for (int j = 0; j < x.dim0(); ++j) x.B(i, j) -= y.B(i, j);
  for (int i = 0; i < x.dim0(); ++i)
    for (int j = 0; j < x.dim1(); ++j) x.C(i, j) -= y.C(i, j);
  for (int i = 0; i < x.dim0(); ++i)
    for (int j = 0; j < x.dim0(); ++j) x.D(i, j) -= y.D(i, j);
  return x;
}

Supermatrix operator*(Complex s, Supermatrix x) {
  for (int i = 0; i < x.dim1(); ++i)
    for (int j = 0; j < x.dim1(); ++j) x.A(i, j) *= s;
  for (int i = 0; i < x.dim1(); ++i)
    for (int j = 0; j < x.dim0(); ++j) x.B(i, j) *= s;
  for (int i = 0; i < x.dim0(); ++i)
    for (int j = 0; j < x.dim1(); ++j) x.C(i, j) *= s;
  for (int i = 0; i < x.dim0(); ++i)
    for (int j = 0; j < x.dim0(); ++j) x.D(i, j) *= s;
  return x;
}

GrassmannElement supertrace(const Supermatrix& x) {
  x.check_parity();
  GrassmannElement tr(x.generators());
  for (int i = 0; i < x.dim0(); ++i) tr += x.D(i, i);
  // The diagonal weight of the graded trace is (-1)^{|i|(1+|X|)}: the
  // even subspace always enters with +, the odd one with -(-1)^{|X|}.
  // Only this weighting makes the trace cyclic under plain block
  // multiplication -- str(XY) = (-1)^{|X||Y|} str(YX) for all parity
  // combinations -- and hence kills every graded commutator.
  for (int i = 0; i < x.dim1(); ++i) {
    if (x.parity() == 0)
      tr -= x.A(i, i);
    else
      tr += x.A(i, i);
  }
  return tr;
}

Supermatrix bracket(const Supermatrix& x, const Supermatrix& y) {
  const Complex sign = ((x.parity() * y.parity()) & 1) ? Complex(-1.0, 0.0) : Complex(1.0, 0.0);
  return smul(x, y) - sign * smul(y, x);
}

// ---------------------------------------------------------------------------
// Grassmann-valued square matrices (used for the two superdeterminant
// forms).  All entries are even-graded, so scalar bodies commute with
// everything and the nilpotent splitting M = M0 (1 + M0^{-1} M_nil)
// yields terminating inverse and determinant series.
// ---------------------------------------------------------------------------

namespace {

struct GMat {
  int n = 0;
  int k = 0;
  std::vector<GrassmannElement> e;

  GMat(int n_, int k_) : n(n_), k(k_), e(static_cast<std::size_t>(n_) * n_, GrassmannElement(k_)) {}

  GrassmannElement& at(int i, int j) { return e[static_cast<std::size_t>(i) * n + j]; }
  const GrassmannElement& at(int i, int j) const { return e[static_cast<std::size_t>(i) * n + j]; }

  bool is_zero() const {
    for (const GrassmannElement& g : e)
      if (!g.is_zero()) return false;
    return true;
  }
};

GMat gmat_identity(int n, int k) {
  GMat m(n, k);
  for (int i = 0; i < n; ++i) m.at(i, i) = GrassmannElement::scalar(k, Complex(1.0, 0.0));
  return m;
}

GMat gmat_mul(const GMat& a, const GMat& b) {
  GMat out(a.n, a.k);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) {
      GrassmannElement acc(a.k);
      for (int m = 0; m < a.n; ++m) acc += gmul(a.at(i, m), b.at(m, j));
      out.at(i, j) = acc;
    }
  return out;
}

GMat gmat_add(GMat a, const GMat& b) {
  for (std::size_t i = 0; i < a.e.size(); ++i) a.e[i] += b.e[i];
  return a;
}

GMat gmat_scale(GMat a, Complex s) {
  for (GrassmannElement& g : a.e) g *= s;
  return a;
}

Eigen::MatrixXcd gmat_body(const GMat& m) {
  Eigen::MatrixXcd out(m.n, m.n);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) out(i, j) = m.at(i, j).body();
  return out;
}

GMat gmat_nil(const GMat& m) {
  GMat out = m;
  for (GrassmannElement& g : out.e) g.set_coeff(0, Complex(0.0, 0.0));
  return out;
}

GMat numeric_times_gmat(const Eigen::MatrixXcd& a, const GMat& b) {
  GMat out(b.n, b.k);
  for (int i = 0; i < b.n; ++i)
    for (int j = 0; j < b.n; ++j) {
      GrassmannElement acc(b.k);
      for (int m = 0; m < b.n; ++m) acc += b.at(m, j) * a(i, m);
      out.at(i, j) = acc;
    }
  return out;
}

GMat gmat_times_numeric(const GMat& a, const Eigen::MatrixXcd& b) {
  GMat out(a.n, a.k);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) {
      GrassmannElement acc(a.k);
      for (int m = 0; m < a.n; ++m) acc += a.at(i, m) * b(m, j);
      out.at(i, j) = acc;
    }
  return out;
}

/// Determinant of a Grassmann matrix with invertible body:
/// Det(M) = Det(M0) exp(Tr log(1 + M0^{-1} M_nil)), with the log series
/// terminating by nilpotency.  Throws SingularBlock when the body is
/// numerically singular.
GrassmannElement gmat_det(const GMat& m, const char* what) {
  if (m.n == 0) return GrassmannElement::scalar(m.k, Complex(1.0, 0.0));
  const Eigen::MatrixXcd body = gmat_body(m);
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(body);
  if (!lu.isInvertible()) throw SingularBlock(std::string(what) + " has a singular numerical part");
  const Complex det0 = lu.determinant();
  const GMat r = numeric_times_gmat(lu.inverse(), gmat_nil(m));

  GrassmannElement trace_log(m.k);
  GMat power = gmat_identity(m.n, m.k);
  for (int deg = 1; deg <= m.k; ++deg) {
    power = gmat_mul(power, r);
    if (power.is_zero()) break;
    GrassmannElement tr(m.k);
    for (int i = 0; i < m.n; ++i) tr += power.at(i, i);
    const double sign = (deg % 2 == 1) ? 1.0 : -1.0;
    trace_log += tr * Complex(sign / static_cast<double>(deg), 0.0);
  }
  return gexp(trace_log) * det0;
}

/// Inverse of a Grassmann matrix with invertible body:
/// M^{-1} = [sum_m (-M0^{-1} M_nil)^m] M0^{-1}.
GMat gmat_inverse(const GMat& m, const char* what) {
  const Eigen::MatrixXcd body = gmat_body(m);
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(body);
  if (!lu.isInvertible()) throw SingularBlock(std::string(what) + " has a singular numerical part");
  const Eigen::MatrixXcd body_inv = lu.inverse();
  const GMat step = gmat_scale(numeric_times_gmat(body_inv, gmat_nil(m)), Complex(-1.0, 0.0));

  GMat series = gmat_identity(m.n, m.k);
  GMat power = series;
  for (int deg = 1; deg <= m.k; ++deg) {
    power = gmat_mul(power, step);
    if (power.is_zero()) break;
    series = gmat_add(std::move(series), power);
  }
  return gmat_times_numeric(series, body_inv);
}

GMat block_a(const Supermatrix& x) {
  GMat m(x.dim1(), x.generators());
  for (int i = 0; i < x.dim1(); ++i)
    for (int j = 0; j < x.dim1(); ++j) m.at(i, j) = x.A(i, j);
  return m;
}

GMat block_d(const Supermatrix& x) {
  GMat m(x.dim0(), x.generators());
  for (int i = 0; i < x.dim0(); ++i)
    for (int j = 0; j < x.dim0(); ++j) m.at(i, j) = x.D(i, j);
  return m;
}

/// Rectangular product helper for the Schur complements: out(i,j) =
/// sum over the inner dimensions of B D^{-1} C (or C A^{-1} B), shaped
/// back into a square GMat of the outer dimension.
GMat schur_correction(const Supermatrix& x, const GMat& inner_inverse, bool against_d) {
  const int k = x.generators();
  const int outer = against_d ? x.dim1() : x.dim0();
  const int inner = against_d ? x.dim0() : x.dim1();
  GMat out(outer, k);
  for (int i = 0; i < outer; ++i)
    for (int j = 0; j < outer; ++j) {
      GrassmannElement acc(k);
      for (int m = 0; m < inner; ++m)
        for (int l = 0; l < inner; ++l) {
          const GrassmannElement& left = against_d ? x.B(i, m) : x.C(i, m);
          const GrassmannElement& right = against_d ? x.C(l, j) : x.B(l, j);
          acc += gmul(gmul(left, inner_inverse.at(m, l)), right);
        }
      out.at(i, j) = acc;
    }
  return out;
}

GMat gmat_sub(GMat a, const GMat& b) {
  for (std::size_t i = 0; i < a.e.size(); ++i) a.e[i] -= b.e[i];
  return a;
}

}  // namespace

GrassmannElement sdet(const Supermatrix& x) {
  x.check_parity();
  if (x.parity() != 0) throw ParityError("superdeterminant requires an even supermatrix");
  const GMat a = block_a(x);
  const GMat d = block_d(x);

  // Det(D) / Det(A - B D^{-1} C)
  const GMat d_inv = gmat_inverse(d, "D block");
  const GMat schur_a = gmat_sub(a, schur_correction(x, d_inv, true));
  const GrassmannElement form1 =
      gmul(gmat_det(d, "D block"), gmat_det(schur_a, "Schur complement of D").inverse());

  // Det(D - C A^{-1} B) / Det(A)
  const GMat a_inv = gmat_inverse(a, "A block");
  const GMat schur_d = gmat_sub(d, schur_correction(x, a_inv, false));
  const GrassmannElement form2 =
      gmul(gmat_det(schur_d, "Schur complement of A"), gmat_det(a, "A block").inverse());

  const double scale = std::max({1.0, form1.max_abs(), form2.max_abs()});
  if ((form1 - form2).max_abs() > 1e-12 * scale)
    throw FormMismatch("the two superdeterminant forms disagree beyond 1e-12");
  return form1;
}

Supermatrix standard_character_matrix(const SpectralParams& params, int k) {
  const int n = params.n();
  Supermatrix x(k, n, n, 0);
  for (int i = 0; i < n; ++i) {
    x.A(i, i) = GrassmannElement::scalar(k, params.xs()[i]);
    x.D(i, i) = GrassmannElement::scalar(k, params.ys()[i]);
  }
  return x;
}

GrassmannElement sdet_inv_id_minus_kron(const Supermatrix& x, const UnitarySample& sample) {
  x.check_parity();
  if (x.parity() != 0) throw ParityError("character evaluation requires an even supermatrix");
  const int k = x.generators();
  const int n1 = x.dim1();
  const int n0 = x.dim0();

  if (n0 > 0) {
    Eigen::MatrixXcd d0(n0, n0);
    for (int i = 0; i < n0; ++i)
      for (int j = 0; j < n0; ++j) d0(i, j) = x.D(i, j).body();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(d0, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
      throw NumericalFailure("eigen decomposition of the D block failed");
    for (int i = 0; i < n0; ++i)
      if (std::abs(std::abs(solver.eigenvalues()[i]) - 1.0) < 1e-10)
        throw SpectrumOnCircle("numerical D spectrum within 1e-10 of the unit circle");
  }

  GrassmannElement result = GrassmannElement::scalar(k, Complex(1.0, 0.0));
  const Complex one(1.0, 0.0);
  for (const Complex& lambda : sample.eigenvalues) {
    Supermatrix m(k, n1, n0, 0);
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n1; ++j) {
        m.A(i, j) = x.A(i, j) * (-lambda);
        if (i == j) m.A(i, j) += GrassmannElement::scalar(k, one);
      }
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n0; ++j) m.B(i, j) = x.B(i, j) * (-lambda);
    for (int i = 0; i < n0; ++i)
      for (int j = 0; j < n1; ++j) m.C(i, j) = x.C(i, j) * (-lambda);
    for (int i = 0; i < n0; ++i)
      for (int j = 0; j < n0; ++j) {
        m.D(i, j) = x.D(i, j) * (-lambda);
        if (i == j) m.D(i, j) += GrassmannElement::scalar(k, one);
      }
    result = gmul(result, sdet(m).inverse());
  }
  return result;
}

// ---------------------------------------------------------------------------
// Coefficientwise Monte Carlo
// ---------------------------------------------------------------------------

namespace {

/// Same one-pass statistics and merge rule as the scalar Monte Carlo
/// driver, applied per coefficient of the Grassmann table.
struct CoeffStat {
  std::uint64_t n = 0;
  double mean_re = 0.0, mean_im = 0.0;
  double m2_re = 0.0, m2_im = 0.0;

  void add(const Complex& v) {
    ++n;
    const double inv = 1.0 / static_cast<double>(n);
    const double dre = v.real() - mean_re;
    mean_re += dre * inv;
    m2_re += dre * (v.real() - mean_re);
    const double dim = v.imag() - mean_im;
    mean_im += dim * inv;
    m2_im += dim * (v.imag() - mean_im);
  }
};

CoeffStat merge(const CoeffStat& a, const CoeffStat& b) {
  if (a.n == 0) return b;
  if (b.n == 0) return a;
  CoeffStat out;
  out.n = a.n + b.n;
  const double na = static_cast<double>(a.n);
  const double nb = static_cast<double>(b.n);
  const double nt = static_cast<double>(out.n);
  const double dre = b.mean_re - a.mean_re;
  const double dim = b.mean_im - a.mean_im;
  out.mean_re = a.mean_re + dre * (nb / nt);
  out.mean_im = a.mean_im + dim * (nb / nt);
  out.m2_re = a.m2_re + b.m2_re + dre * dre * (na * nb / nt);
  out.m2_im = a.m2_im + b.m2_im + dim * dim * (na * nb / nt);
  return out;
}

using BlockTable = std::vector<CoeffStat>;

BlockTable merge_tables(const BlockTable& a, const BlockTable& b) {
  BlockTable out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = merge(a[i], b[i]);
  return out;
}

/// Detects the zero-generator diagonal shape whose character integrand
/// coincides with the scalar one, so the scalar Monte Carlo path can be
/// reused verbatim (bitwise identical results).
bool delegation_params(const Supermatrix& x, int N, RawParams* out) {
  if (x.generators() != 0 || x.parity() != 0) return false;
  const int n = x.dim0();
  if (x.dim1() != n || n == 0) return false;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (x.B(i, j).max_abs() != 0.0 || x.C(i, j).max_abs() != 0.0) return false;
      if (i != j && (x.A(i, j).max_abs() != 0.0 || x.D(i, j).max_abs() != 0.0)) return false;
    }
  std::vector<Complex> xs(n), ys(n);
  for (int i = 0; i < n; ++i) {
    xs[static_cast<std::size_t>(i)] = x.A(i, i).body();
    ys[static_cast<std::size_t>(i)] = x.D(i, i).body();
  }
  int p = 0;
  while (p < n && std::abs(ys[static_cast<std::size_t>(p)]) < 1.0) ++p;
  for (int l = p; l < n; ++l)
    if (std::abs(ys[static_cast<std::size_t>(l)]) <= 1.0) return false;
  out->p = p;
  out->q = n - p;
  out->N = N;
  out->xs = std::move(xs);
  out->ys = std::move(ys);
  return true;
}

}  // namespace

GrassmannEstimate grassmann_character_mc(const Supermatrix& x, int N, std::uint64_t samples,
                                         std::uint64_t seed, const McOptions& opts) {
  x.check_parity();
  if (N < 1) throw ValueError("matrix dimension must be at least 1");

  RawParams raw;
  if (delegation_params(x, N, &raw)) {
    bool valid = true;
    Estimate est;
    try {
      est = mc_estimate(validate(raw), samples, seed, opts);
    } catch (const DomainViolation&) {
      valid = false;  // outside the scalar domain; use the generic path
    }
    if (valid) {
      GrassmannEstimate out{GrassmannElement::scalar(0, est.mean),
                            std::vector<double>{est.std_error}, est.samples, est.seed,
                            est.method};
      return out;
    }
  }

  if (samples < 2) throw ValueError("Monte Carlo needs at least 2 samples");
  const int k = x.generators();
  const std::size_t ncoeff = std::size_t{1} << k;
  const std::uint64_t block_size = std::max<std::uint64_t>(1, opts.block_size);
  const std::uint64_t nblocks = (samples + block_size - 1) / block_size;

  std::vector<BlockTable> tables(static_cast<std::size_t>(nblocks));
  std::atomic<std::uint64_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;

  auto worker = [&]() {
    try {
      while (true) {
        const std::uint64_t b = next.fetch_add(1);
        if (b >= nblocks) break;
        BlockTable table(ncoeff);
        const std::uint64_t begin = b * block_size;
        const std::uint64_t end = std::min(samples, begin + block_size);
        for (std::uint64_t i = begin; i < end; ++i) {
          const GrassmannElement value =
              sdet_inv_id_minus_kron(x, sample_haar_unitary(N, seed, i));
          for (std::size_t c = 0; c < ncoeff; ++c) table[c].add(value.coeff(c));
        }
        tables[static_cast<std::size_t>(b)] = std::move(table);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  };

  const int nthreads = std::max(1, opts.threads);
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  while (tables.size() > 1) {
    std::vector<BlockTable> half;
    half.reserve((tables.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < tables.size(); i += 2)
      half.push_back(merge_tables(tables[i], tables[i + 1]));
    if (tables.size() % 2 == 1) half.push_back(tables.back());
    tables = std::move(half);
  }
  const BlockTable& total = tables.front();

  GrassmannEstimate out{GrassmannElement(k), std::vector<double>(ncoeff, 0.0), samples, seed,
                        "grassmann-mc"};
  for (std::size_t c = 0; c < ncoeff; ++c) {
    out.mean.set_coeff(c, Complex(total[c].mean_re, total[c].mean_im));
    const double n = static_cast<double>(total[c].n);
    const double var_re = std::max(0.0, total[c].m2_re) / (n - 1.0);
    const double var_im = std::max(0.0, total[c].m2_im) / (n - 1.0);
    out.std_error[c] = std::sqrt(std::max(var_re, var_im) / n);
  }
  return out;
}

}  // namespace ratiokit
