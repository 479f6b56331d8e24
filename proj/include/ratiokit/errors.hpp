#pragma once

#include <stdexcept>
#include <string>

namespace ratiokit {

/// Coarse classification used by the CLI to pick an exit status.
enum class ErrorKind {
  Domain,     // bad inputs: shapes, values, domain walls        -> exit 1
  Numerical,  // evaluation could not meet its numeric contract  -> exit 3
  Capacity,   // request exceeds a configured capacity           -> exit 1
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// ---- input validation -------------------------------------------------

/// A y-parameter sits on the wrong side of the unit circle.
class DomainViolation : public Error {
 public:
  DomainViolation(const std::string& what, int index)
      : Error(ErrorKind::Domain, what), index_(index) {}
  /// Zero-based index of the offending entry.
  int index() const noexcept { return index_; }

 private:
  int index_;
};

/// A sequence has the wrong length for the declared (p, q).
class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

/// A scalar field is out of range (counts, zero x, ...).
class ValueError : public Error {
 public:
  explicit ValueError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

/// Work or storage would exceed a configured cap.
class CapacityError : public Error {
 public:
  explicit CapacityError(const std::string& what) : Error(ErrorKind::Capacity, what) {}
};

// ---- evaluation -------------------------------------------------------

/// A denominator factor vanishes exactly and degenerate handling is off.
class SingularInput : public Error {
 public:
  explicit SingularInput(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

/// The two perturbed evaluations disagree after extrapolation.
class ExtrapolationUnstable : public Error {
 public:
  explicit ExtrapolationUnstable(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

/// A numeric kernel (QR, eigensolver, ...) missed its residual target.
class NumericalFailure : public Error {
 public:
  explicit NumericalFailure(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

/// A sampled matrix makes the integrand denominator vanish.
class SingularSample : public Error {
 public:
  explicit SingularSample(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

/// Series truncation cannot meet the requested tolerance.
class TruncationTooCoarse : public Error {
 public:
  explicit TruncationTooCoarse(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

// ---- Grassmann algebra ------------------------------------------------

/// Operands live in algebras with different generator counts.
class GeneratorMismatch : public Error {
 public:
  explicit GeneratorMismatch(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

/// A block whose body must be invertible is numerically singular.
class SingularBlock : public Error {
 public:
  explicit SingularBlock(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

/// The two superdeterminant forms disagree beyond tolerance.
class FormMismatch : public Error {
 public:
  explicit FormMismatch(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

/// An expanding block has numerical spectrum on the unit circle.
class SpectrumOnCircle : public Error {
 public:
  explicit SpectrumOnCircle(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

/// Entries violate the even/odd block parity contract.
class ParityError : public Error {
 public:
  explicit ParityError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

// ---- jets / radial ----------------------------------------------------

/// sqrt of a jet whose constant term lies on the branch cut (-inf, 0].
class BranchError : public Error {
 public:
  explicit BranchError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

/// inverse of a jet whose constant term is zero.
class DivisionByZeroJet : public Error {
 public:
  explicit DivisionByZeroJet(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

/// A radial point sits on (or too close to) a chamber wall.
class SingularPoint : public Error {
 public:
  explicit SingularPoint(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

// ---- spectra ----------------------------------------------------------

/// The requested transform grid undersamples the band limit.
class AliasWarning : public Error {
 public:
  explicit AliasWarning(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

/// A permutation mixes the two y-blocks.
class BlockViolation : public Error {
 public:
  explicit BlockViolation(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

}  // namespace ratiokit
