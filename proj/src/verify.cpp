#include "ratiokit/verify.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "ratiokit/errors.hpp"
#include "ratiokit/formula.hpp"
#include "ratiokit/grassmann.hpp"
#include "ratiokit/haar_mc.hpp"
#include "ratiokit/params.hpp"
#include "ratiokit/philox.hpp"
#include "ratiokit/radial.hpp"
#include "ratiokit/series_oracle.hpp"
#include "ratiokit/spectra.hpp"

namespace ratiokit {

namespace {

constexpr double kTwoPi = 6.283185307179586;

const std::array<std::array<int, 2>, 4> kShapes = {{{1, 1}, {2, 1}, {1, 2}, {2, 2}}};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

SpectralParams golden_params() {
  RawParams raw;
  raw.p = 1;
  raw.q = 1;
  raw.N = 1;
  raw.xs = {{2.0, 0.0}, {3.0, 0.0}};
  raw.ys = {{0.5, 0.0}, {4.0, 0.0}};
  return validate(raw);
}

/// x-moduli on separated rings, y-moduli in [0.2, 0.5] / [2, 4]: the
/// same draw hygiene the series oracle needs for its tail bounds.
SpectralParams random_params(std::uint64_t seed, std::uint64_t stream, int p, int q, int N) {
  RawParams raw;
  raw.p = p;
  raw.q = q;
  raw.N = N;
  for (int k = 0; k < p + q; ++k) {
    const double a = philox_uniform(seed, stream, 2 * static_cast<std::uint64_t>(k));
    raw.xs.push_back(std::polar(0.5 + 0.4 * k, kTwoPi * a));
  }
  for (int k = 0; k < p + q; ++k) {
    const double a = philox_uniform(seed, stream, 2 * static_cast<std::uint64_t>(k) + 1);
    const double modulus = (k < p) ? 0.2 + 0.3 * a : 2.0 + 2.0 * a;
    raw.ys.push_back(std::polar(modulus, kTwoPi * a + 1.0));
  }
  return validate(raw);
}

/// Angle coordinates on jittered lattices (separations >= 0.05), for
/// the unit-circle and radial suites.
std::pair<std::vector<double>, std::vector<double>> random_angles(std::uint64_t seed,
                                                                  std::uint64_t stream, int p,
                                                                  int q) {
  const int n = p + q;
  std::vector<double> psis(n), phis(n);
  const double span = 5.0 / n;
  for (int k = 0; k < n; ++k) {
    const double u = philox_uniform(seed, stream, static_cast<std::uint64_t>(2 * k));
    psis[static_cast<std::size_t>(k)] = -2.5 + (k + 0.05 + 0.9 * u) * span;
  }
  for (int j = 0; j < p; ++j) {
    const double u = philox_uniform(seed, stream, static_cast<std::uint64_t>(2 * (n + j) + 1));
    phis[static_cast<std::size_t>(j)] = -(0.25 + (j + 0.9 * u) * 0.5);
  }
  for (int l = p; l < n; ++l) {
    const double u = philox_uniform(seed, stream, static_cast<std::uint64_t>(2 * (n + l) + 1));
    phis[static_cast<std::size_t>(l)] = 0.25 + ((l - p) + 0.9 * u) * 0.5;
  }
  return {std::move(psis), std::move(phis)};
}

std::vector<int> random_permutation(int lo, int hi, std::uint64_t seed, std::uint64_t stream,
                                    std::uint64_t salt) {
  std::vector<int> perm(static_cast<std::size_t>(hi - lo));
  std::iota(perm.begin(), perm.end(), lo);
  for (int i = hi - lo - 1; i > 0; --i) {
    const double u = philox_uniform(seed, stream, salt + static_cast<std::uint64_t>(i));
    const int j = std::min(static_cast<int>(u * (i + 1)), i);
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  return perm;
}

/// Small-integer Grassmann element (coefficients in [-3, 3]); integer
/// draws keep algebraic identities exact in double arithmetic.
GrassmannElement random_integer_element(int k, std::uint64_t seed, std::uint64_t stream,
                                        std::uint64_t salt, int parity) {
  GrassmannElement g(k);
  for (std::size_t mask = 0; mask < g.table_size(); ++mask) {
    if (parity >= 0 && (std::popcount(mask) & 1) != parity) continue;
    const double u = philox_uniform(seed + 2 * salt, stream, mask);
    const double v = philox_uniform(seed + 2 * salt + 1, stream, mask);
    g.set_coeff(mask, Complex(std::floor(7.0 * u) - 3.0, std::floor(7.0 * v) - 3.0));
  }
  return g;
}

/// Even supermatrix with diagonally dominated integer bodies (never
/// singular) rescaled to unit scale for the absolute tolerances.
Supermatrix random_even_supermatrix(int k, int n1, int n0, std::uint64_t seed,
                                    std::uint64_t stream) {
  Supermatrix x(k, n1, n0, 0);
  std::uint64_t salt = 1;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n1; ++j) {
      GrassmannElement e = random_integer_element(k, seed, stream, salt++, 0);
      if (i == j) e.set_coeff(0, e.body() + Complex(8.0, 0.0));
      x.A(i, j) = e;
    }
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n0; ++j) {
      GrassmannElement e = random_integer_element(k, seed, stream, salt++, 0);
      if (i == j) e.set_coeff(0, e.body() + Complex(8.0, 0.0));
      x.D(i, j) = e;
    }
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n0; ++j) x.B(i, j) = random_integer_element(k, seed, stream, salt++, 1);
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n1; ++j) x.C(i, j) = random_integer_element(k, seed, stream, salt++, 1);
  return Complex(0.25, 0.0) * x;
}

Supermatrix random_homogeneous_supermatrix(int k, int n1, int n0, int parity, std::uint64_t seed,
                                           std::uint64_t stream) {
  Supermatrix x(k, n1, n0, parity);
  std::uint64_t salt = 101;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n1; ++j)
      x.A(i, j) = random_integer_element(k, seed, stream, salt++, parity);
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n0; ++j)
      x.D(i, j) = random_integer_element(k, seed, stream, salt++, parity);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n0; ++j)
      x.B(i, j) = random_integer_element(k, seed, stream, salt++, 1 - parity);
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n1; ++j)
      x.C(i, j) = random_integer_element(k, seed, stream, salt++, 1 - parity);
  return x;
}

RadialPoint random_regular_point(std::uint64_t seed, std::uint64_t stream, int p, int q) {
  auto [psis, phis] = random_angles(seed, stream, p, q);
  return RadialPoint{p, q, std::move(psis), std::move(phis)};
}

// ---- criteria ----------------------------------------------------------

CriterionResult golden_value(const VerifyOptions&) {
  CriterionResult r{1, "golden-value", false, ""};
  const Complex value = eval_thm1(golden_params()).value;
  const double dev = std::abs(value - Complex(6.0 / 7.0, 0.0));
  r.passed = dev <= 1e-12;
  r.detail = "dev=" + fmt(dev) + " tol=1.000e-12";
  return r;
}

CriterionResult trivial_identity(const VerifyOptions& opts) {
  CriterionResult r{2, "trivial-identity", false, ""};
  double worst = 0.0;
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const auto& shape = kShapes[trial % kShapes.size()];
    const int p = shape[0], q = shape[1];
    const int N = 1 + static_cast<int>(trial % 5);
    RawParams raw;
    raw.p = p;
    raw.q = q;
    raw.N = N;
    for (int j = 0; j < p; ++j) {
      const double u = philox_uniform(opts.seed, 0x2000 + trial, static_cast<std::uint64_t>(j));
      raw.ys.push_back(std::polar(0.2 + 0.25 * j + 0.2 * u, kTwoPi * u));
    }
    for (int l = p; l < p + q; ++l) {
      const double u = philox_uniform(opts.seed, 0x2000 + trial, static_cast<std::uint64_t>(l));
      raw.ys.push_back(std::polar(1.5 + 0.8 * (l - p) + 0.5 * u, kTwoPi * u + 1.0));
    }
    raw.xs = raw.ys;
    worst = std::max(worst, std::abs(eval_thm1(validate(raw)).value - Complex(1.0, 0.0)));
  }
  r.passed = worst <= 1e-12;
  r.detail = "max_dev=" + fmt(worst) + " tol=1.000e-12";
  return r;
}

CriterionResult oracle_triangle(const VerifyOptions& opts) {
  CriterionResult r{3, "oracle-triangle", false, ""};
  const McOptions mc_opts{opts.threads, 1024};
  double worst_series = 0.0;  // |thm1 - series| / allowance
  double worst_sigma = 0.0;   // |thm1 - mc mean| / std_error
  std::uint64_t stream = 0x3000;
  for (const auto& shape : kShapes) {
    for (int N = 1; N <= 3; ++N) {
      for (int draw = 0; draw < 5; ++draw) {
        const SpectralParams params =
            random_params(opts.seed, stream++, shape[0], shape[1], N);
        const Complex value = eval_thm1(params).value;
        const SeriesResult series = torus_average(params, TruncationPolicy{opts.series_order, 1e-8});
        const double allowance = std::max(1e-8, series.tail_bound);
        worst_series = std::max(worst_series, std::abs(value - series.value) / allowance);
        const Estimate est = mc_estimate(params, opts.mc_samples, opts.seed, mc_opts);
        worst_sigma = std::max(worst_sigma, std::abs(value - est.mean) / est.std_error);
      }
    }
  }
  r.passed = worst_series <= 1.0 && worst_sigma <= 4.0;
  r.detail = "series_dev/allowance=" + fmt(worst_series) + " mc_dev/sigma=" + fmt(worst_sigma);
  return r;
}

CriterionResult unequal_count_consistency(const VerifyOptions& opts) {
  CriterionResult r{4, "unequal-count-consistency", false, ""};
  double worst_rel = 0.0;
  std::uint64_t stream = 0x4000;
  for (const auto& shape : kShapes) {
    for (int N = 1; N <= 3; ++N) {
      for (int draw = 0; draw < 3; ++draw) {
        const SpectralParams params =
            random_params(opts.seed, stream++, shape[0], shape[1], N);
        ExtendedRawParams ext;
        ext.p = shape[0];
        ext.q = shape[1];
        ext.pprime = shape[0];
        ext.qprime = shape[1];
        ext.N = N;
        ext.xs = params.xs();
        ext.ys = params.ys();
        const Complex reduced = eval_cor12(validate_extended(ext)).value;
        const Complex expected = eval_thm1(params).value / highest_weight_multiplier(params);
        worst_rel = std::max(worst_rel, std::abs(reduced - expected) / std::abs(expected));
      }
    }
  }

  // boundary counts p' = p + N and q' = q + N against the sampling oracle
  const McOptions mc_opts{opts.threads, 1024};
  double worst_sigma = 0.0;
  std::vector<ExtendedRawParams> boundary;
  {
    ExtendedRawParams e;  // p' = p + N at (p, q, N) = (1, 1, 1)
    e.p = 1;
    e.q = 1;
    e.pprime = 2;
    e.qprime = 1;
    e.N = 1;
    e.xs = {std::polar(0.7, 0.4), std::polar(1.3, 2.1)};
    e.ys = {{0.3, 0.1}, {-0.5, 0.2}, {2.5, -0.4}};
    boundary.push_back(e);
  }
  {
    ExtendedRawParams e;  // q' = q + N at (p, q, N) = (1, 1, 1)
    e.p = 1;
    e.q = 1;
    e.pprime = 1;
    e.qprime = 2;
    e.N = 1;
    e.xs = {std::polar(0.6, -0.9), std::polar(1.1, 1.7)};
    e.ys = {{0.4, -0.1}, {1.8, 0.3}, {-3.2, 0.5}};
    boundary.push_back(e);
  }
  {
    ExtendedRawParams e;  // both boundaries from the empty shape
    e.p = 0;
    e.q = 1;
    e.pprime = 1;
    e.qprime = 2;
    e.N = 1;
    e.xs = {std::polar(1.2, 0.8)};
    e.ys = {{0.45, 0.15}, {2.2, -0.6}, {-1.9, 1.1}};
    boundary.push_back(e);
  }
  for (const ExtendedRawParams& e : boundary) {
    const ExtendedParams params = validate_extended(e);
    const Complex value = eval_cor12(params).value;
    const Estimate est = mc_estimate_extended(params, opts.mc_samples, opts.seed, mc_opts);
    worst_sigma = std::max(worst_sigma, std::abs(value - est.mean) / est.std_error);
  }

  r.passed = worst_rel <= 1e-12 && worst_sigma <= 4.0;
  r.detail = "reduction_rel=" + fmt(worst_rel) + " boundary_dev/sigma=" + fmt(worst_sigma);
  return r;
}

CriterionResult compact_sector(const VerifyOptions&) {
  CriterionResult r{5, "compact-sector", false, ""};
  const std::vector<Complex> xs = {{0.3, 0.0}, {0.7, 0.0}};
  const double dev_plain = std::abs(eval_compact(1, 1, 2, xs).value - Complex(0.79, 0.0));
  const std::vector<Complex> confluent = {{0.3, 0.0}, {0.3, 0.0}};
  const double dev_confluent =
      std::abs(eval_compact(1, 1, 2, confluent).value - Complex(0.27, 0.0));
  r.passed = dev_plain <= 1e-12 && dev_confluent <= 1e-6;
  r.detail = "plain_dev=" + fmt(dev_plain) + " confluent_dev=" + fmt(dev_confluent);
  return r;
}

CriterionResult stable_range(const VerifyOptions&) {
  CriterionResult r{6, "stable-range", false, ""};
  const std::vector<Complex> ys = {{0.5, 0.0}, {2.0, 0.0}};
  const double dev_value = std::abs(eval_stable(1, 1, 3, ys).value - Complex(1.0 / 6.0, 0.0));

  RawParams raw;  // x's at the stable extremes
  raw.p = 1;
  raw.q = 1;
  raw.N = 3;
  raw.xs = {{0.9e-8, 0.0}, {1.1e8, 0.0}};
  raw.ys = ys;
  // eval_stable keeps the y^-N normalization, so only the expanding
  // x-power is divided out.
  const Complex scaled = eval_thm1(validate(raw)).value / pow_int(raw.xs[1], raw.N);
  const Complex stable = eval_stable(1, 1, 3, ys).value;
  const double dev_limit = std::abs(scaled - stable) / std::abs(stable);

  r.passed = dev_value <= 1e-12 && dev_limit <= 1e-6;
  r.detail = "value_dev=" + fmt(dev_value) + " limit_rel=" + fmt(dev_limit);
  return r;
}

CriterionResult degeneration(const VerifyOptions& opts) {
  CriterionResult r{7, "degeneration", false, ""};
  double worst = 0.0;
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    const int N = 1 + static_cast<int>(trial % 2);
    RawParams raw;
    raw.p = 1;
    raw.q = 1;
    raw.N = N;
    for (int k = 0; k < 2; ++k) {
      const double u = philox_uniform(opts.seed, 0x7000 + trial, static_cast<std::uint64_t>(k));
      raw.xs.push_back(std::polar(0.5 + 0.4 * k + 0.3 * u, kTwoPi * u));
    }
    const double u = philox_uniform(opts.seed, 0x7000 + trial, 10);
    raw.ys = {{1e-8 * (0.5 + u), 0.0}, {1e8 * (1.0 + u), 0.0}};
    const Complex rescaled =
        eval_thm1(validate(raw)).value * pow_int(raw.ys[1], N);
    const Complex compact = eval_compact(1, 1, N, raw.xs).value;
    worst = std::max(worst, std::abs(rescaled - compact) / std::max(1.0, std::abs(compact)));
  }
  r.passed = worst <= 1e-6;
  r.detail = "max_dev=" + fmt(worst) + " tol=1.000e-06";
  return r;
}

CriterionResult weyl_invariance(const VerifyOptions& opts) {
  CriterionResult r{8, "weyl-invariance", false, ""};
  double worst = 0.0;
  for (const auto& shape : kShapes) {
    const int p = shape[0], q = shape[1], n = p + q;
    const SpectralParams params = random_params(
        opts.seed, 0x8000 + static_cast<std::uint64_t>(10 * p + q), p, q, 2);
    for (std::uint64_t trial = 0; trial < 50; ++trial) {
      const auto perm_psi =
          random_permutation(0, n, opts.seed, 0x8100 + trial, static_cast<std::uint64_t>(p));
      const auto perm_p =
          random_permutation(0, p, opts.seed, 0x8200 + trial, static_cast<std::uint64_t>(q));
      const auto perm_q =
          random_permutation(p, n, opts.seed, 0x8300 + trial, static_cast<std::uint64_t>(n));
      worst = std::max(worst, weyl_orbit_check(params, perm_psi, perm_p, perm_q));
    }
  }
  r.passed = worst <= 1e-10;
  r.detail = "max_rel=" + fmt(worst) + " tol=1.000e-10";
  return r;
}

CriterionResult fourier_support_suite(const VerifyOptions& opts) {
  CriterionResult r{9, "fourier-support", false, ""};
  double worst = 0.0;  // leakage relative to the top mode
  std::uint64_t stream = 0x9000;
  for (const auto& shape : kShapes) {
    for (int N = 1; N <= 3; ++N) {
      auto [psis, phis] = random_angles(opts.seed, stream++, shape[0], shape[1]);
      const SpectralParams params = params_from_angles(shape[0], shape[1], N, psis, phis);
      for (int k = 0; k < shape[0] + shape[1]; ++k) {
        const FourierProfile profile = fourier_support(params, k);
        const double top = profile.max_magnitude();
        for (int m = -profile.grid / 2; m < profile.grid / 2; ++m) {
          if (m < 0 || m > N) worst = std::max(worst, profile.magnitude(m) / top);
        }
      }
    }
  }
  r.passed = worst <= 1e-9;
  r.detail = "max_leakage=" + fmt(worst) + " tol=1.000e-09";
  return r;
}

CriterionResult radial_pde(const VerifyOptions& opts) {
  CriterionResult r{10, "radial-pde", false, ""};
  double worst_pde = 0.0;
  double worst_kernel = 0.0;
  std::uint64_t stream = 0xA000;
  for (const auto& shape : kShapes) {
    for (std::uint64_t point = 0; point < 20; ++point) {
      const RadialPoint pt = random_regular_point(opts.seed, stream++, shape[0], shape[1]);
      const int N = 1 + static_cast<int>(point % 3);
      for (int l = 1; l <= 3; ++l) {
        worst_pde = std::max(worst_pde, pde_residual(pt, N, l));
      }
      for (int k = 1; k <= 4; ++k) {
        worst_kernel = std::max(worst_kernel, sqrtJ_annihilation_residual(pt, k));
      }
    }
  }
  const RadialPoint control{1, 1, {0.3, 1.1}, {-0.4, 0.7}};
  double control_residual = 1.0;
  for (int l = 1; l <= 3; ++l) {
    control_residual = std::min(control_residual, pde_residual(control, 1, l, {1e-3, 0.0}));
  }
  r.passed = worst_pde < 1e-8 && worst_kernel < 1e-8 && control_residual > 1e-5;
  r.detail = "max_pde=" + fmt(worst_pde) + " max_kernel=" + fmt(worst_kernel) +
             " control=" + fmt(control_residual);
  return r;
}

CriterionResult cauchy_determinant_suite(const VerifyOptions& opts) {
  CriterionResult r{11, "cauchy-determinant", false, ""};
  double worst = 0.0;
  for (int n : {2, 3}) {
    for (std::uint64_t trial = 0; trial < 10; ++trial) {
      std::vector<double> psis(static_cast<std::size_t>(n)), phis(static_cast<std::size_t>(n));
      const double cell = 5.6 / (2 * n);
      for (int k = 0; k < 2 * n; ++k) {
        const double u = philox_uniform(opts.seed, 0xB000 + trial,
                                        static_cast<std::uint64_t>(10 * n + k));
        const double angle = -2.8 + (k + 0.7 * u) * cell;
        if (k % 2 == 0) {
          psis[static_cast<std::size_t>(k / 2)] = angle;
        } else {
          phis[static_cast<std::size_t>(k / 2)] = angle;
        }
      }
      const double j = eval_J_compact(psis, phis);
      const Complex det = cauchy_determinant(psis, phis);
      worst = std::max(worst, std::abs(Complex(j, 0.0) - det * det) / std::abs(j));
    }
  }
  r.passed = worst <= 1e-10;
  r.detail = "max_rel=" + fmt(worst) + " tol=1.000e-10";
  return r;
}

CriterionResult grassmann_kernel(const VerifyOptions& opts) {
  CriterionResult r{12, "grassmann-kernel", false, ""};
  double worst_mult = 0.0;
  double worst_bracket = 0.0;
  double worst_conj = 0.0;
  int form_failures = 0;

  for (std::uint64_t trial = 0; trial < 1000; ++trial) {
    const int k = static_cast<int>(trial % 5);  // 0..4 generators
    const int n1 = 1 + static_cast<int>(trial % 2);
    const int n0 = 1 + static_cast<int>((trial / 2) % 2);

    // two-form agreement (the evaluator cross-checks both Schur forms
    // internally and reports disagreement) plus multiplicativity
    const Supermatrix x = random_even_supermatrix(k, n1, n0, opts.seed, 0xC000 + trial);
    const Supermatrix y = random_even_supermatrix(k, n1, n0, opts.seed + 1, 0xC000 + trial);
    try {
      const GrassmannElement product_rule = sdet(smul(x, y)) - gmul(sdet(x), sdet(y));
      worst_mult = std::max(worst_mult, product_rule.max_abs());
    } catch (const FormMismatch&) {
      ++form_failures;
    }

    // supertrace kills graded commutators, all parity combinations
    const int px = static_cast<int>(trial % 2);
    const int py = static_cast<int>((trial / 2) % 2);
    const Supermatrix hx =
        random_homogeneous_supermatrix(k, n1, n0, px, opts.seed + 2, 0xC000 + trial);
    const Supermatrix hy =
        random_homogeneous_supermatrix(k, n1, n0, py, opts.seed + 3, 0xC000 + trial);
    worst_bracket = std::max(worst_bracket, supertrace(bracket(hx, hy)).max_abs());
  }

  for (std::uint64_t trial = 0; trial < 1000; ++trial) {
    const int k = static_cast<int>(trial % 5);
    const Supermatrix x = random_even_supermatrix(k, 2, 2, opts.seed + 4, 0xC800 + trial);
    Supermatrix g(k, 2, 2, 0);
    Supermatrix ginv(k, 2, 2, 0);
    for (int block = 0; block < 2; ++block) {
      const double m =
          std::floor(3.0 * philox_uniform(opts.seed + 5, 0xC800 + trial, 2 * block)) - 1.0;
      const double rr =
          std::floor(3.0 * philox_uniform(opts.seed + 5, 0xC800 + trial, 2 * block + 1)) - 1.0;
      const Complex a(1.0 + m * rr, 0.0), b(m, 0.0), c(rr, 0.0), d(1.0, 0.0);
      auto put = [&](Supermatrix& target, Complex e00, Complex e01, Complex e10, Complex e11) {
        if (block == 0) {
          target.A(0, 0) = GrassmannElement::scalar(k, e00);
          target.A(0, 1) = GrassmannElement::scalar(k, e01);
          target.A(1, 0) = GrassmannElement::scalar(k, e10);
          target.A(1, 1) = GrassmannElement::scalar(k, e11);
        } else {
          target.D(0, 0) = GrassmannElement::scalar(k, e00);
          target.D(0, 1) = GrassmannElement::scalar(k, e01);
          target.D(1, 0) = GrassmannElement::scalar(k, e10);
          target.D(1, 1) = GrassmannElement::scalar(k, e11);
        }
      };
      put(g, a, b, c, d);
      put(ginv, d, -b, -c, a);
    }
    const GrassmannElement diff = sdet(smul(smul(g, x), ginv)) - sdet(x);
    worst_conj = std::max(worst_conj, diff.max_abs());
  }

  // 1|1 golden value: sdet([[2, f0], [f1, 4]]) = 2 + f0 f1 / 4
  Supermatrix golden(2, 1, 1, 0);
  golden.A(0, 0) = GrassmannElement::scalar(2, Complex(2.0, 0.0));
  golden.B(0, 0) = GrassmannElement::generator(2, 0);
  golden.C(0, 0) = GrassmannElement::generator(2, 1);
  golden.D(0, 0) = GrassmannElement::scalar(2, Complex(4.0, 0.0));
  GrassmannElement expected = GrassmannElement::scalar(2, Complex(2.0, 0.0));
  expected.set_coeff(0b11, Complex(0.25, 0.0));
  const double golden_dev = (sdet(golden) - expected).max_abs();

  r.passed = form_failures == 0 && worst_mult <= 1e-12 && worst_bracket <= 1e-12 &&
             worst_conj <= 1e-12 && golden_dev <= 1e-14;
  r.detail = "form_failures=" + std::to_string(form_failures) + " mult=" + fmt(worst_mult) +
             " bracket=" + fmt(worst_bracket) + " conj=" + fmt(worst_conj) +
             " golden=" + fmt(golden_dev);
  return r;
}

CriterionResult grassmann_character(const VerifyOptions& opts) {
  CriterionResult r{13, "grassmann-character", false, ""};
  const SpectralParams params = golden_params();
  const McOptions mc_opts{opts.threads, 1024};
  const Supermatrix x = standard_character_matrix(params, 0);
  const GrassmannEstimate gest =
      grassmann_character_mc(x, params.N(), opts.mc_samples, opts.seed, mc_opts);
  const Estimate est = mc_estimate(params, opts.mc_samples, opts.seed, mc_opts);
  const Complex value = eval_thm1(params).value;
  const double sigma_dev = std::abs(gest.mean.body() - value) / est.std_error;
  const bool bitwise = gest.mean.body() == est.mean && gest.std_error.size() == 1 &&
                       gest.std_error[0] == est.std_error && gest.samples == est.samples &&
                       gest.seed == est.seed && gest.method == est.method;
  r.passed = sigma_dev <= 4.0 && bitwise;
  r.detail = "dev/sigma=" + fmt(sigma_dev) +
             std::string(bitwise ? " delegation=bitwise" : " delegation=MISMATCH");
  return r;
}

CriterionResult determinism(const VerifyOptions& opts) {
  CriterionResult r{14, "determinism", false, ""};
  const SpectralParams params = golden_params();
  const std::uint64_t samples = 20000;

  bool mc_bitwise = true;
  const Estimate base = mc_estimate(params, samples, opts.seed, McOptions{1, 1024});
  for (int threads : {2, 8}) {
    const Estimate est = mc_estimate(params, samples, opts.seed, McOptions{threads, 1024});
    mc_bitwise = mc_bitwise && est.mean == base.mean && est.std_error == base.std_error &&
                 est.samples == base.samples && est.seed == base.seed &&
                 est.method == base.method;
  }

  // threaded coefficientwise reduction (nonzero generator count)
  Supermatrix x(2, 1, 1, 0);
  x.A(0, 0) = GrassmannElement::scalar(2, Complex(2.0, 0.0));
  x.B(0, 0) = Complex(0.5, 0.0) * GrassmannElement::generator(2, 0);
  x.C(0, 0) = Complex(0.5, 0.0) * GrassmannElement::generator(2, 1);
  x.D(0, 0) = GrassmannElement::scalar(2, Complex(0.5, 0.0));
  bool grassmann_bitwise = true;
  const GrassmannEstimate gbase = grassmann_character_mc(x, 1, samples, opts.seed, {1, 1024});
  for (int threads : {2, 8}) {
    const GrassmannEstimate gest =
        grassmann_character_mc(x, 1, samples, opts.seed, {threads, 1024});
    bool same = gest.samples == gbase.samples && gest.seed == gbase.seed &&
                gest.method == gbase.method && gest.std_error == gbase.std_error;
    same = same && (gest.mean - gbase.mean).max_abs() == 0.0;
    grassmann_bitwise = grassmann_bitwise && same;
  }

  r.passed = mc_bitwise && grassmann_bitwise;
  r.detail = std::string("mc=") + (mc_bitwise ? "bitwise" : "MISMATCH") + " grassmann=" +
             (grassmann_bitwise ? "bitwise" : "MISMATCH") + " threads={1,2,8}";
  return r;
}

using CriterionFn = CriterionResult (*)(const VerifyOptions&);

struct SuiteEntry {
  const char* name;
  CriterionFn fn;
};

const std::array<SuiteEntry, 14> kSuites = {{
    {"golden-value", golden_value},
    {"trivial-identity", trivial_identity},
    {"oracle-triangle", oracle_triangle},
    {"unequal-count-consistency", unequal_count_consistency},
    {"compact-sector", compact_sector},
    {"stable-range", stable_range},
    {"degeneration", degeneration},
    {"weyl-invariance", weyl_invariance},
    {"fourier-support", fourier_support_suite},
    {"radial-pde", radial_pde},
    {"cauchy-determinant", cauchy_determinant_suite},
    {"grassmann-kernel", grassmann_kernel},
    {"grassmann-character", grassmann_character},
    {"determinism", determinism},
}};

}  // namespace

bool VerifyReport::all_passed() const {
  for (const CriterionResult& r : results) {
    if (!r.passed) return false;
  }
  return true;
}

std::string VerifyReport::to_text() const {
  std::string out;
  for (const CriterionResult& r : results) {
    char head[64];
    std::snprintf(head, sizeof(head), "criterion %02d %s ", r.number,
                  r.passed ? "PASS" : "FAIL");
    out += head;
    out += r.name;
    out += ": ";
    out += r.detail;
    out += "\n";
  }
  return out;
}

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const SuiteEntry& s : kSuites) v.emplace_back(s.name);
    return v;
  }();
  return names;
}

VerifyReport run_verification(const std::string& suite, const VerifyOptions& opts) {
  VerifyReport report;
  if (suite == "all") {
    for (const SuiteEntry& s : kSuites) report.results.push_back(s.fn(opts));
    return report;
  }
  for (std::size_t i = 0; i < kSuites.size(); ++i) {
    if (suite == kSuites[i].name || suite == std::to_string(i + 1)) {
      report.results.push_back(kSuites[i].fn(opts));
      return report;
    }
  }
  throw ValueError("unknown verification suite \"" + suite + "\"; expected \"all\", a name, " +
                   "or a number 1..14");
}

}  // namespace ratiokit
