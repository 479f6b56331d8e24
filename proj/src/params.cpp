#include "ratiokit/params.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace ratiokit {

namespace {

void check_counts(int p, int q, int N) {
  if (p < 0 || q < 0) throw ValueError("p and q must be nonnegative");
  if (p + q < 1) throw ValueError("need at least one ratio factor (p + q >= 1)");
  if (N < 1) throw ValueError("matrix dimension N must be >= 1");
}

void check_xs_nonzero(const std::vector<Complex>& xs) {
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (xs[k] == Complex(0.0, 0.0)) {
      std::ostringstream msg;
      msg << "xs[" << k << "] must be nonzero";
      throw ValueError(msg.str());
    }
  }
}

void check_y_split(const std::vector<Complex>& ys, int p) {
  for (std::size_t j = 0; j < ys.size(); ++j) {
    double r = std::abs(ys[j]);
    if (static_cast<int>(j) < p) {
      if (!(r < 1.0)) {
        std::ostringstream msg;
        msg << "ys[" << j << "] must satisfy |y| < 1 (contracting block), got |y| = " << r;
        throw DomainViolation(msg.str(), static_cast<int>(j));
      }
    } else {
      if (!(r > 1.0)) {
        std::ostringstream msg;
        msg << "ys[" << j << "] must satisfy |y| > 1 (expanding block), got |y| = " << r;
        throw DomainViolation(msg.str(), static_cast<int>(j));
      }
    }
  }
}

}  // namespace

SpectralParams validate(const RawParams& raw) {
  check_counts(raw.p, raw.q, raw.N);
  const std::size_t n = static_cast<std::size_t>(raw.p) + static_cast<std::size_t>(raw.q);
  if (raw.xs.size() != n) {
    std::ostringstream msg;
    msg << "xs has length " << raw.xs.size() << ", expected p + q = " << n;
    throw ShapeError(msg.str());
  }
  if (raw.ys.size() != n) {
    std::ostringstream msg;
    msg << "ys has length " << raw.ys.size() << ", expected p + q = " << n;
    throw ShapeError(msg.str());
  }
  check_xs_nonzero(raw.xs);
  check_y_split(raw.ys, raw.p);
  return SpectralParams(raw.p, raw.q, raw.N, raw.xs, raw.ys);
}

SpectralParams validate(const SpectralParams& params) { return validate(params.raw()); }

SpectralParams params_from_angles(int p, int q, int N, const std::vector<double>& psis,
                                  const std::vector<double>& phis) {
  RawParams raw;
  raw.p = p;
  raw.q = q;
  raw.N = N;
  raw.xs.reserve(psis.size());
  raw.ys.reserve(phis.size());
  for (double psi : psis) raw.xs.push_back(std::exp(Complex(0.0, psi)));
  for (double phi : phis) raw.ys.push_back(Complex(std::exp(phi), 0.0));
  return validate(raw);
}

ExtendedParams validate_extended(const ExtendedRawParams& raw) {
  if (raw.p < 0 || raw.q < 0 || raw.pprime < 0 || raw.qprime < 0)
    throw ValueError("all counts must be nonnegative");
  if (raw.N < 1) throw ValueError("matrix dimension N must be >= 1");
  if (raw.pprime > raw.p + raw.N) {
    std::ostringstream msg;
    msg << "p' = " << raw.pprime << " exceeds p + N = " << raw.p + raw.N;
    throw DomainViolation(msg.str(), -1);
  }
  if (raw.qprime > raw.q + raw.N) {
    std::ostringstream msg;
    msg << "q' = " << raw.qprime << " exceeds q + N = " << raw.q + raw.N;
    throw DomainViolation(msg.str(), -1);
  }
  const std::size_t n = static_cast<std::size_t>(raw.p) + static_cast<std::size_t>(raw.q);
  const std::size_t nprime =
      static_cast<std::size_t>(raw.pprime) + static_cast<std::size_t>(raw.qprime);
  if (raw.xs.size() != n) {
    std::ostringstream msg;
    msg << "xs has length " << raw.xs.size() << ", expected p + q = " << n;
    throw ShapeError(msg.str());
  }
  if (raw.ys.size() != nprime) {
    std::ostringstream msg;
    msg << "ys has length " << raw.ys.size() << ", expected p' + q' = " << nprime;
    throw ShapeError(msg.str());
  }
  check_xs_nonzero(raw.xs);
  check_y_split(raw.ys, raw.pprime);
  return ExtendedParams(raw.p, raw.q, raw.pprime, raw.qprime, raw.N, raw.xs, raw.ys);
}

std::uint64_t coset_count(int p, int q) {
  // C(p+q, q) with saturation; arguments are small in practice.
  const int n = p + q;
  const int k = std::min(p, q);
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    if (c > std::numeric_limits<std::uint64_t>::max() / num)
      return std::numeric_limits<std::uint64_t>::max();
    c = c * num / static_cast<std::uint64_t>(i);
  }
  return c;
}

std::vector<Coset> enumerate_cosets(int p, int q, std::uint64_t max_cosets) {
  if (p < 0 || q < 0 || p + q < 1) throw ValueError("enumerate_cosets needs p, q >= 0, p + q >= 1");
  const std::uint64_t count = coset_count(p, q);
  if (count > max_cosets) {
    std::ostringstream msg;
    msg << "coset count C(" << p + q << ", " << q << ") = " << count << " exceeds cap "
        << max_cosets;
    throw CapacityError(msg.str());
  }

  const int n = p + q;
  std::vector<Coset> cosets;
  cosets.reserve(static_cast<std::size_t>(count));

  // Ascending lexicographic enumeration of J (equivalently descending
  // lexicographic on L); the identity coset J = {0..p-1} comes first.
  std::vector<int> J(p);
  for (int i = 0; i < p; ++i) J[i] = i;
  while (true) {
    Coset c;
    c.J = J;
    c.L.reserve(q);
    std::size_t jpos = 0;
    for (int v = 0; v < n; ++v) {
      if (jpos < c.J.size() && c.J[jpos] == v)
        ++jpos;
      else
        c.L.push_back(v);
    }
    cosets.push_back(std::move(c));
    // next combination of size p out of {0..n-1}
    int i = p - 1;
    while (i >= 0 && J[i] == n - p + i) --i;
    if (i < 0) break;
    ++J[i];
    for (int t = i + 1; t < p; ++t) J[t] = J[t - 1] + 1;
  }
  return cosets;
}

Complex highest_weight_multiplier(const SpectralParams& params) {
  Complex mult(1.0, 0.0);
  for (int l = params.p(); l < params.n(); ++l)
    mult *= pow_int(params.xs()[l] / params.ys()[l], params.N());
  return mult;
}

bool Weight::admissible(int p, int q, int N) const {
  if (static_cast<int>(m.size()) != p + q || static_cast<int>(n.size()) != p + q) return false;
  for (int k = 0; k < p + q; ++k)
    if (m[k] < 0 || m[k] > N) return false;
  for (int j = 0; j < p; ++j)
    if (n[j] > 0) return false;
  for (int l = p; l < p + q; ++l)
    if (n[l] < N) return false;
  return true;
}

Complex pow_int(Complex x, long long e) {
  if (e < 0) return Complex(1.0, 0.0) / pow_int(x, -e);
  Complex acc(1.0, 0.0);
  Complex base = x;
  unsigned long long u = static_cast<unsigned long long>(e);
  while (u > 0) {
    if (u & 1ull) acc *= base;
    base *= base;
    u >>= 1;
  }
  return acc;
}

}  // namespace ratiokit
