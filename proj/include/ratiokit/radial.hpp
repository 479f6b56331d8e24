#pragma once

#include <functional>
#include <vector>

#include "ratiokit/jets.hpp"
#include "ratiokit/params.hpp"

namespace ratiokit {

/// Point of the parameter torus in coordinate form: n = p+q real
/// angles psi (the unitary family, x_k = e^{i psi_k}) and n real
/// values phi (the hyperbolic family, y_k = e^{phi_k}), with
/// phi_j < 0 for j < p and phi_l > 0 for l >= p.
struct RadialPoint {
  int p = 0;
  int q = 0;
  std::vector<double> psis;
  std::vector<double> phis;
};

/// Shape and sign-pattern validation; throws ShapeError or
/// DomainViolation.
void check_point(const RadialPoint& pt);

/// min over all positive roots alpha of |1 - e^{-alpha}| at the point.
/// Evaluators demand margin > 1e-6 (chamber walls excluded).
double regularity_margin(const RadialPoint& pt);

/// Torus Jacobian J = prod_{even roots} sinh^2(alpha/2) /
/// prod_{odd roots} sinh^2(beta/2), with the positive systems
///   even: i psi_k - i psi_k', phi_k - phi_k'   (k' < k)
///   odd:  i psi_k - phi_j (j < p),  phi_l - i psi_k (l >= p).
/// Throws SingularPoint below the regularity margin.
Complex eval_J(const RadialPoint& pt);

/// The square root J^{1/2} = e^delta prod 1/2 (1 - e^{-alpha}) /
/// prod 1/2 (1 - e^{-beta}) with delta the graded half-sum of positive
/// roots, delta = sum_k (k - p - 1/2) i psi_k + sum_{j<p} (j + 1/2)
/// phi_j + sum_{l>=p} (l - p - q + 1/2) phi_l (1-based coefficients
/// k - p - 1/2, j - 1/2, l - p - q - 1/2).  Working in coordinates
/// makes e^delta single-valued; the corresponding branch of the
/// half-integer powers of x_k = e^{i psi_k} is the principal one, cut
/// along the negative real axis, so angles must satisfy |psi_k| < pi
/// (BranchError otherwise).  Throws SingularPoint below the margin.
Complex eval_sqrtJ(const RadialPoint& pt);

/// J^{1/2} evaluated on jet coordinates (for derivative tests).
Jet sqrtJ_on_jets(int p, int q, const std::vector<Jet>& psis, const std::vector<Jet>& phis);

/// The character (coset-sum average) evaluated on jet coordinates:
/// x_k = exp(i psi_k), y_k = exp(phi_k) as jets.
Jet character_on_jets(int p, int q, int N, const std::vector<Jet>& psis,
                      const std::vector<Jet>& phis);

/// Radial operator D_l f = sum_k d^l f / d psi_k^l
///                        - (-i)^l sum_k d^l f / d phi_k^l
/// applied via jet arithmetic: f receives coordinate vectors in which
/// exactly one entry is a degree-l jet seed.
Complex apply_Dl(
    const std::function<Jet(const std::vector<Jet>&, const std::vector<Jet>&)>& f,
    const RadialPoint& pt, int l);

/// |D_l (J^{1/2} chi)| / scale at the point, where chi is the coset-sum
/// average for dimension N lifted to jets and scale is the largest
/// magnitude among the value and derivatives of J^{1/2} chi seen during
/// the evaluation.  chi_perturbation adds that multiple of e^{i psi_1}
/// to chi (negative control; the perturbation is not annihilated).
/// Throws SingularPoint below the regularity margin.
double pde_residual(const RadialPoint& pt, int N, int l, Complex chi_perturbation = {0.0, 0.0});

/// |D_l J^{1/2}| / scale — the square root alone lies in the joint
/// kernel of every D_l.
double sqrtJ_annihilation_residual(const RadialPoint& pt, int l);

/// Jacobian of the compact torus (both families angles):
/// prod_{j<j'} sin^2((psi_j - psi_j')/2) prod_{l<l'} sin^2((phi_l -
/// phi_l')/2) / prod_{j,l} sin^2((psi_j - phi_l)/2).  Throws
/// SingularPoint when a factor vanishes to working precision.
double eval_J_compact(const std::vector<double>& psis, const std::vector<double>& phis);

/// Det(1/sin((psi_j - phi_l)/2)) for equal-length angle families; the
/// compact Jacobian equals its square.
Complex cauchy_determinant(const std::vector<double>& psis, const std::vector<double>& phis);

}  // namespace ratiokit
