#include "ratiokit/radial.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "ratiokit/coset_kernel.hpp"
#include "ratiokit/errors.hpp"

namespace ratiokit {

namespace {

constexpr double kRegularityFloor = 1e-6;

/// A positive root in coordinates.  The four shapes are
///   kPsiPsi: i(psi_a - psi_b),  kPhiPhi: phi_a - phi_b   (even, b < a)
///   kPsiPhi: i psi_a - phi_b (b < p),  kPhiPsi: phi_a - i psi_b (a >= p)
struct Root {
  enum Kind { kPsiPsi, kPhiPhi, kPsiPhi, kPhiPsi };
  Kind kind;
  int a;
  int b;
};

struct RootSystem {
  std::vector<Root> even;
  std::vector<Root> odd;
};

RootSystem positive_roots(int p, int q) {
  const int n = p + q;
  RootSystem rs;
  for (int k = 0; k < n; ++k) {
    for (int kp = 0; kp < k; ++kp) {
      rs.even.push_back({Root::kPsiPsi, k, kp});
      rs.even.push_back({Root::kPhiPhi, k, kp});
    }
  }
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < p; ++j) rs.odd.push_back({Root::kPsiPhi, k, j});
    for (int l = p; l < n; ++l) rs.odd.push_back({Root::kPhiPsi, l, k});
  }
  return rs;
}

template <class T>
T root_value(const Root& r, const std::vector<T>& psis, const std::vector<T>& phis) {
  const Complex I(0.0, 1.0);
  switch (r.kind) {
    case Root::kPsiPsi:
      return I * (psis[r.a] - psis[r.b]);
    case Root::kPhiPhi:
      return phis[r.a] - phis[r.b];
    case Root::kPsiPhi:
      return I * psis[r.a] - phis[r.b];
    case Root::kPhiPsi:
      return phis[r.a] - I * psis[r.b];
  }
  throw ValueError("root_value: unknown root kind");
}

/// Graded half-sum of the positive roots, in coordinates (1-based
/// coefficients k - p - 1/2 on i psi_k, j - 1/2 on phi_j for j <= p,
/// l - p - q - 1/2 on phi_l for l > p).
template <class T>
T delta_value(int p, int q, const std::vector<T>& psis, const std::vector<T>& phis) {
  const int n = p + q;
  T d = Complex(0.0, 0.0) * psis[0];
  for (int k = 0; k < n; ++k) d += Complex(0.0, k + 0.5 - p) * psis[k];
  for (int j = 0; j < p; ++j) d += Complex(j + 0.5, 0.0) * phis[j];
  for (int l = p; l < n; ++l) d += Complex(l + 0.5 - n, 0.0) * phis[l];
  return d;
}

template <class T>
T J_value(const RootSystem& rs, const std::vector<T>& psis, const std::vector<T>& phis) {
  using std::exp;
  const Complex half(0.5, 0.0);
  T num = Complex(1.0, 0.0) + Complex(0.0, 0.0) * psis[0];
  T den = num;
  for (const Root& r : rs.even) {
    T a = root_value(r, psis, phis);
    T sh = half * (exp(half * a) - exp(Complex(-0.5, 0.0) * a));
    num *= sh * sh;
  }
  for (const Root& r : rs.odd) {
    T b = root_value(r, psis, phis);
    T sh = half * (exp(half * b) - exp(Complex(-0.5, 0.0) * b));
    den *= sh * sh;
  }
  return num / den;
}

template <class T>
T sqrtJ_value(int p, int q, const RootSystem& rs, const std::vector<T>& psis,
              const std::vector<T>& phis) {
  using std::exp;
  const Complex one(1.0, 0.0);
  const Complex half(0.5, 0.0);
  T num = exp(delta_value(p, q, psis, phis));
  T den = one + Complex(0.0, 0.0) * psis[0];
  for (const Root& r : rs.even) num *= half * (one - exp(-root_value(r, psis, phis)));
  for (const Root& r : rs.odd) den *= half * (one - exp(-root_value(r, psis, phis)));
  return num / den;
}

std::pair<std::vector<Complex>, std::vector<Complex>> scalar_coords(const RadialPoint& pt) {
  const int n = pt.p + pt.q;
  std::vector<Complex> psis(n), phis(n);
  for (int k = 0; k < n; ++k) {
    psis[k] = Complex(pt.psis[k], 0.0);
    phis[k] = Complex(pt.phis[k], 0.0);
  }
  return {std::move(psis), std::move(phis)};
}

/// Coordinate vectors with a degree-`order` jet seed planted at
/// position `var` (vars 0..n-1 are the psis, n..2n-1 the phis).
std::pair<std::vector<Jet>, std::vector<Jet>> seeded_coords(const RadialPoint& pt, int var,
                                                            int order) {
  const int n = pt.p + pt.q;
  std::vector<Jet> psis(n, Jet(order)), phis(n, Jet(order));
  for (int k = 0; k < n; ++k) {
    psis[k] = (var == k) ? Jet::variable(order, Complex(pt.psis[k], 0.0))
                         : Jet::constant(order, Complex(pt.psis[k], 0.0));
    phis[k] = (var == n + k) ? Jet::variable(order, Complex(pt.phis[k], 0.0))
                             : Jet::constant(order, Complex(pt.phis[k], 0.0));
  }
  return {std::move(psis), std::move(phis)};
}

void check_order(int l) {
  if (l < 1 || l > Jet::kMaxOrder) {
    throw ValueError("radial operator order must lie in [1, " +
                     std::to_string(Jet::kMaxOrder) + "], got " + std::to_string(l));
  }
}

void check_regular(const RadialPoint& pt) {
  const double margin = regularity_margin(pt);
  if (margin <= kRegularityFloor) {
    throw SingularPoint("point is within " + std::to_string(margin) +
                        " of a chamber wall (floor 1e-6)");
  }
}

void check_branch(const RadialPoint& pt) {
  for (double psi : pt.psis) {
    if (!(std::abs(psi) < std::numbers::pi)) {
      throw BranchError("half-integer powers of e^{i psi} require |psi| < pi, got psi = " +
                        std::to_string(psi));
    }
  }
}

/// Sum over coordinates of the degree-l jet derivative with the
/// hyperbolic family weighted by -(-i)^l, divided by the largest value
/// or derivative magnitude encountered.
double graded_residual(
    const RadialPoint& pt, int l,
    const std::function<Jet(const std::vector<Jet>&, const std::vector<Jet>&)>& f) {
  const int n = pt.p + pt.q;
  const Complex weight = pow_int(Complex(0.0, -1.0), l);
  Complex total(0.0, 0.0);
  double scale = 0.0;
  for (int var = 0; var < 2 * n; ++var) {
    auto [psis, phis] = seeded_coords(pt, var, l);
    const Jet val = f(psis, phis);
    for (int m = 0; m <= l; ++m) scale = std::max(scale, std::abs(nth_derivative(val, m)));
    if (var < n) {
      total += nth_derivative(val, l);
    } else {
      total -= weight * nth_derivative(val, l);
    }
  }
  if (scale == 0.0) return 0.0;
  return std::abs(total) / scale;
}

}  // namespace

void check_point(const RadialPoint& pt) {
  if (pt.p < 0 || pt.q < 0 || pt.p + pt.q < 1) {
    throw ShapeError("RadialPoint requires p, q >= 0 and p + q >= 1");
  }
  const std::size_t n = static_cast<std::size_t>(pt.p + pt.q);
  if (pt.psis.size() != n || pt.phis.size() != n) {
    throw ShapeError("RadialPoint requires p + q entries in psis and phis");
  }
  for (int j = 0; j < pt.p; ++j) {
    if (!(pt.phis[j] < 0.0)) {
      throw DomainViolation("contracting coordinates phi_j must be negative, got phi[" +
                                std::to_string(j) + "] = " + std::to_string(pt.phis[j]),
                            j);
    }
  }
  for (int l = pt.p; l < pt.p + pt.q; ++l) {
    if (!(pt.phis[l] > 0.0)) {
      throw DomainViolation("expanding coordinates phi_l must be positive, got phi[" +
                                std::to_string(l) + "] = " + std::to_string(pt.phis[l]),
                            l);
    }
  }
}

double regularity_margin(const RadialPoint& pt) {
  check_point(pt);
  auto [psis, phis] = scalar_coords(pt);
  const RootSystem rs = positive_roots(pt.p, pt.q);
  double margin = std::numeric_limits<double>::infinity();
  for (const Root& r : rs.even) {
    margin = std::min(margin, std::abs(1.0 - std::exp(-root_value(r, psis, phis))));
  }
  for (const Root& r : rs.odd) {
    margin = std::min(margin, std::abs(1.0 - std::exp(-root_value(r, psis, phis))));
  }
  return margin;
}

Complex eval_J(const RadialPoint& pt) {
  check_regular(pt);
  auto [psis, phis] = scalar_coords(pt);
  return J_value(positive_roots(pt.p, pt.q), psis, phis);
}

Complex eval_sqrtJ(const RadialPoint& pt) {
  check_regular(pt);
  check_branch(pt);
  auto [psis, phis] = scalar_coords(pt);
  return sqrtJ_value(pt.p, pt.q, positive_roots(pt.p, pt.q), psis, phis);
}

Jet sqrtJ_on_jets(int p, int q, const std::vector<Jet>& psis, const std::vector<Jet>& phis) {
  if (p < 0 || q < 0 || p + q < 1) throw ShapeError("sqrtJ_on_jets requires p + q >= 1");
  const std::size_t n = static_cast<std::size_t>(p + q);
  if (psis.size() != n || phis.size() != n) {
    throw ShapeError("sqrtJ_on_jets requires p + q coordinates per family");
  }
  return sqrtJ_value(p, q, positive_roots(p, q), psis, phis);
}

Jet character_on_jets(int p, int q, int N, const std::vector<Jet>& psis,
                      const std::vector<Jet>& phis) {
  if (p < 0 || q < 0 || p + q < 1) throw ShapeError("character_on_jets requires p + q >= 1");
  if (N < 0) throw ValueError("character_on_jets requires N >= 0");
  const std::size_t n = static_cast<std::size_t>(p + q);
  if (psis.size() != n || phis.size() != n) {
    throw ShapeError("character_on_jets requires p + q coordinates per family");
  }
  const int order = psis[0].order();
  const Complex I(0.0, 1.0);
  std::vector<Jet> xs(n, Jet(order)), ys(n, Jet(order));
  for (std::size_t k = 0; k < n; ++k) {
    xs[k] = exp(I * psis[k]);
    ys[k] = exp(phis[k]);
  }
  const Jet one = Jet::constant(order, Complex(1.0, 0.0));
  Jet acc = Jet::constant(order, Complex(0.0, 0.0));
  for (const Coset& c : enumerate_cosets(p, q)) {
    acc += coset_term_full(xs, ys, p, q, N, c, one);
  }
  return acc;
}

Complex apply_Dl(
    const std::function<Jet(const std::vector<Jet>&, const std::vector<Jet>&)>& f,
    const RadialPoint& pt, int l) {
  check_point(pt);
  check_order(l);
  const int n = pt.p + pt.q;
  const Complex weight = pow_int(Complex(0.0, -1.0), l);
  Complex total(0.0, 0.0);
  for (int var = 0; var < 2 * n; ++var) {
    auto [psis, phis] = seeded_coords(pt, var, l);
    const Complex d = nth_derivative(f(psis, phis), l);
    total += (var < n) ? d : -weight * d;
  }
  return total;
}

double pde_residual(const RadialPoint& pt, int N, int l, Complex chi_perturbation) {
  check_regular(pt);
  check_branch(pt);
  check_order(l);
  if (N < 0) throw ValueError("pde_residual requires N >= 0");
  const RootSystem rs = positive_roots(pt.p, pt.q);
  const Complex I(0.0, 1.0);
  const bool perturb = chi_perturbation != Complex(0.0, 0.0);
  return graded_residual(
      pt, l, [&](const std::vector<Jet>& psis, const std::vector<Jet>& phis) {
        Jet chi = character_on_jets(pt.p, pt.q, N, psis, phis);
        if (perturb) chi += chi_perturbation * exp(I * psis[0]);
        return sqrtJ_value(pt.p, pt.q, rs, psis, phis) * chi;
      });
}

double sqrtJ_annihilation_residual(const RadialPoint& pt, int l) {
  check_regular(pt);
  check_branch(pt);
  check_order(l);
  const RootSystem rs = positive_roots(pt.p, pt.q);
  return graded_residual(
      pt, l, [&](const std::vector<Jet>& psis, const std::vector<Jet>& phis) {
        return sqrtJ_value(pt.p, pt.q, rs, psis, phis);
      });
}

double eval_J_compact(const std::vector<double>& psis, const std::vector<double>& phis) {
  if (psis.empty() && phis.empty()) throw ShapeError("eval_J_compact: empty point");
  const auto half_sin = [](double a, double b) {
    const double s = std::sin(0.5 * (a - b));
    if (std::abs(s) < 1e-12) {
      throw SingularPoint("eval_J_compact: coincident angles (mod 2 pi)");
    }
    return s;
  };
  double num = 1.0;
  for (std::size_t j = 0; j < psis.size(); ++j) {
    for (std::size_t jp = 0; jp < j; ++jp) {
      const double s = half_sin(psis[j], psis[jp]);
      num *= s * s;
    }
  }
  for (std::size_t l = 0; l < phis.size(); ++l) {
    for (std::size_t lp = 0; lp < l; ++lp) {
      const double s = half_sin(phis[l], phis[lp]);
      num *= s * s;
    }
  }
  double den = 1.0;
  for (double psi : psis) {
    for (double phi : phis) {
      const double s = half_sin(psi, phi);
      den *= s * s;
    }
  }
  return num / den;
}

Complex cauchy_determinant(const std::vector<double>& psis, const std::vector<double>& phis) {
  if (psis.size() != phis.size() || psis.empty()) {
    throw ShapeError("cauchy_determinant requires equal nonempty angle families");
  }
  const int n = static_cast<int>(psis.size());
  Eigen::MatrixXd a(n, n);
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) {
      const double s = std::sin(0.5 * (psis[j] - phis[l]));
      if (std::abs(s) < 1e-12) {
        throw SingularPoint("cauchy_determinant: coincident angles (mod 2 pi)");
      }
      a(j, l) = 1.0 / s;
    }
  }
  return Complex(a.determinant(), 0.0);
}

}  // namespace ratiokit
