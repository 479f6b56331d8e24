#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ratiokit/haar_mc.hpp"
#include "ratiokit/params.hpp"

namespace ratiokit {

/// Element of the exterior algebra on k anticommuting generators
/// (k <= 8), stored as a dense table of 2^k complex coefficients, one
/// per ascending-ordered generator subset (bitmask index).  The
/// empty-subset coefficient is the numerical part ("body"); all other
/// terms are nilpotent.
class GrassmannElement {
 public:
  static constexpr int kMaxGenerators = 8;

  explicit GrassmannElement(int k);
  static GrassmannElement scalar(int k, Complex v);
  static GrassmannElement generator(int k, int index);

  int generators() const noexcept { return k_; }
  std::size_t table_size() const noexcept { return coeff_.size(); }
  Complex coeff(std::size_t mask) const;
  void set_coeff(std::size_t mask, Complex v);
  Complex body() const { return coeff_[0]; }

  bool is_zero() const;
  /// Largest coefficient magnitude (useful for exact-zero and tolerance
  /// checks).
  double max_abs() const;
  /// True when every nonzero coefficient sits on an even-size
  /// (resp. odd-size) subset; the zero element is homogeneous of both
  /// parities.
  bool homogeneous_even() const;
  bool homogeneous_odd() const;

  GrassmannElement& operator+=(const GrassmannElement& other);
  GrassmannElement& operator-=(const GrassmannElement& other);
  GrassmannElement& operator*=(Complex s);

  /// Multiplicative inverse (body must be nonzero): 1/(s + n) =
  /// s^{-1} sum_m (-n/s)^m, terminating by nilpotency.  Throws
  /// SingularBlock on zero body.
  GrassmannElement inverse() const;

 private:
  int k_;
  std::vector<Complex> coeff_;
};

/// Graded (wedge) product with canonical sign normalization; throws
/// GeneratorMismatch when the algebras differ.
GrassmannElement gmul(const GrassmannElement& a, const GrassmannElement& b);

GrassmannElement operator+(GrassmannElement a, const GrassmannElement& b);
GrassmannElement operator-(GrassmannElement a, const GrassmannElement& b);
GrassmannElement operator-(GrassmannElement a);
GrassmannElement operator*(const GrassmannElement& a, const GrassmannElement& b);
GrassmannElement operator*(Complex s, GrassmannElement a);
GrassmannElement operator*(GrassmannElement a, Complex s);

/// exp of a Grassmann element: exp(body) times the terminating series
/// over the nilpotent part.
GrassmannElement gexp(const GrassmannElement& g);

/// Block supermatrix over the k-generator algebra.  A is dim1 x dim1
/// (the odd subspace V1), D is dim0 x dim0 (the even subspace V0), B is
/// dim1 x dim0 and C is dim0 x dim1.  An even supermatrix has
/// even-graded A, D entries and odd-graded B, C entries; an odd one is
/// reversed.  The first-kind envelope convention applies: composition
/// is plain block matrix multiplication.
class Supermatrix {
 public:
  Supermatrix(int k, int dim1, int dim0, int parity = 0);

  int generators() const noexcept { return k_; }
  int dim1() const noexcept { return dim1_; }
  int dim0() const noexcept { return dim0_; }
  int parity() const noexcept { return parity_; }

  GrassmannElement& A(int i, int j);
  GrassmannElement& B(int i, int j);
  GrassmannElement& C(int i, int j);
  GrassmannElement& D(int i, int j);
  const GrassmannElement& A(int i, int j) const;
  const GrassmannElement& B(int i, int j) const;
  const GrassmannElement& C(int i, int j) const;
  const GrassmannElement& D(int i, int j) const;

  /// Enforces the grading contract on all entries; throws ParityError.
  void check_parity() const;

 private:
  int k_, dim1_, dim0_, parity_;
  std::vector<GrassmannElement> a_, b_, c_, d_;
};

/// Block matrix product; result parity is the sum of the input
/// parities.  Inputs are parity-checked.
Supermatrix smul(const Supermatrix& x, const Supermatrix& y);

Supermatrix operator-(Supermatrix x, const Supermatrix& y);
Supermatrix operator*(Complex s, Supermatrix x);

/// Graded trace: Tr D - Tr A on even supermatrices, Tr D + Tr A on odd
/// ones (diagonal weight (-1)^{|i|(1+|X|)}).  The odd-case sign is the
/// unique extension under which plain block multiplication satisfies
/// str(XY) = (-1)^{|X||Y|} str(YX), so every graded commutator is
/// annihilated.
GrassmannElement supertrace(const Supermatrix& x);

/// Graded commutator X Y - (-1)^{|X||Y|} Y X.
Supermatrix bracket(const Supermatrix& x, const Supermatrix& y);

/// Superdeterminant Det(D) / Det(A - B D^{-1} C), with the equivalent
/// form Det(D - C A^{-1} B) / Det(A) computed as a cross-check;
/// disagreement beyond 1e-12 (relative to the larger coefficient scale)
/// raises FormMismatch.  Grassmann-valued matrix inverses and
/// determinants use the terminating nilpotent splitting M = M0 (1 +
/// M0^{-1} M_nil).  Throws SingularBlock when a numerical block is
/// singular and ParityError for odd supermatrices.
GrassmannElement sdet(const Supermatrix& x);

/// prod_a SDet(Id - lambda_a X)^{-1} over the sample spectrum; the
/// Kronecker structure block-diagonalizes over eigenvalues.  Throws
/// SpectrumOnCircle when a numerical D-eigenvalue has modulus within
/// 1e-10 of 1.
GrassmannElement sdet_inv_id_minus_kron(const Supermatrix& x, const UnitarySample& sample);

/// diag(x_1..x_n | y_1..y_n) with zero nilpotent parts in a k-generator
/// algebra — the supermatrix whose character integral reproduces the
/// two-family average.
Supermatrix standard_character_matrix(const SpectralParams& params, int k);

struct GrassmannEstimate {
  GrassmannElement mean;
  /// Per-coefficient componentwise-max standard errors, indexed like
  /// the coefficient table.
  std::vector<double> std_error;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::string method;
};

/// Monte Carlo average of sdet_inv_id_minus_kron over Haar samples,
/// coefficient by coefficient, with the same block/merge determinism
/// contract as mc_estimate.  When X is a zero-generator diagonal
/// supermatrix in the valid domain, the computation delegates to
/// mc_estimate so the numerical part is bitwise identical to it.
GrassmannEstimate grassmann_character_mc(const Supermatrix& x, int N, std::uint64_t samples,
                                         std::uint64_t seed, const McOptions& opts = {});

}  // namespace ratiokit
