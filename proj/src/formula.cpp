#include "ratiokit/formula.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "ratiokit/coset_kernel.hpp"

namespace ratiokit {

namespace {

double clamp_condition(double max_abs_term, Complex sum) {
  const double denom = std::abs(sum);
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  return std::max(1.0, max_abs_term / denom);
}

std::vector<dd::Complex> widen(const std::vector<Complex>& zs) {
  std::vector<dd::Complex> out;
  out.reserve(zs.size());
  for (const Complex& z : zs) out.emplace_back(z);
  return out;
}

/// Direct coset-sum evaluation with the cancellation diagnostic and the
/// optional double-double second pass.  term_fn(xs, cosets, terms*) must
/// run the scalar-generic kernel for either scalar type.
template <class EvalDouble, class EvalWide>
EvalResult direct_eval(const EvalOptions& opts, EvalDouble&& eval_double, EvalWide&& eval_wide) {
  EvalResult result;
  std::vector<Complex>* terms = opts.record_terms ? &result.terms : nullptr;
  KernelSum<Complex> sum = eval_double(terms);
  result.value = sum.value;
  result.condition = clamp_condition(sum.max_abs_term, sum.value);
  if (opts.extended_precision && result.condition > opts.extended_precision_threshold) {
    result.value = eval_wide();
    result.extended_precision_used = true;
  }
  return result;
}

}  // namespace

namespace {
std::size_t uf_find(std::vector<std::size_t>& parent, std::size_t a) {
  while (parent[a] != a) {
    parent[a] = parent[parent[a]];
    a = parent[a];
  }
  return a;
}
}  // namespace

std::vector<std::vector<int>> find_clusters(const std::vector<Complex>& xs, double tol) {
  const std::size_t n = xs.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      const double gap = std::abs(Complex(1.0, 0.0) - xs[a] / xs[b]);
      if (gap < tol) {
        const std::size_t ra = uf_find(parent, a);
        const std::size_t rb = uf_find(parent, b);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
      }
    }
  std::vector<std::vector<int>> groups(n);
  for (std::size_t a = 0; a < n; ++a) groups[uf_find(parent, a)].push_back(static_cast<int>(a));
  std::vector<std::vector<int>> clusters;
  for (auto& g : groups)
    if (g.size() >= 2) clusters.push_back(std::move(g));
  return clusters;
}

std::vector<Complex> perturb_clusters(const std::vector<Complex>& xs,
                                      const std::vector<std::vector<int>>& clusters, double eps) {
  std::vector<Complex> out = xs;
  for (const auto& cluster : clusters)
    for (std::size_t r = 0; r < cluster.size(); ++r) {
      const std::size_t idx = static_cast<std::size_t>(cluster[r]);
      out[idx] *= Complex(1.0, static_cast<double>(r) * eps);
    }
  return out;
}

Complex richardson_pair(Complex f_eps, Complex f_half, double tol, double* residual) {
  const Complex extrapolated = 2.0 * f_half - f_eps;
  const double res = std::abs(f_half - f_eps);
  if (residual) *residual = res;
  const double scale = std::max(1.0, std::abs(extrapolated));
  if (res > 1e3 * tol * scale) {
    std::ostringstream msg;
    msg << "perturbed evaluations disagree after extrapolation: residual " << res
        << " exceeds " << 1e3 * tol * scale;
    throw ExtrapolationUnstable(msg.str());
  }
  return extrapolated;
}

namespace {

/// Confluent handler shared by the three coset-sum entry points:
/// evaluate at eps and eps/2 on tangentially split clusters, then
/// Richardson-extrapolate the eps -> 0 limit.
template <class EvalAtXs>
EvalResult confluent_eval(const std::vector<Complex>& xs,
                          const std::vector<std::vector<int>>& clusters, const EvalOptions& opts,
                          EvalAtXs&& eval_at) {
  const double eps = opts.confluent_epsilon;
  EvalResult at_eps = eval_at(perturb_clusters(xs, clusters, eps));
  EvalResult at_half = eval_at(perturb_clusters(xs, clusters, 0.5 * eps));
  EvalResult result;
  result.method = EvalMethod::ConfluentExtrapolated;
  result.epsilon = eps;
  result.condition = std::max(at_eps.condition, at_half.condition);
  result.extended_precision_used = at_eps.extended_precision_used || at_half.extended_precision_used;
  result.value =
      richardson_pair(at_eps.value, at_half.value, opts.cluster_tol, &result.extrapolation_residual);
  return result;
}

EvalResult eval_thm1_at(const SpectralParams& params, const std::vector<Complex>& xs,
                        const EvalOptions& opts) {
  const std::vector<Coset> cosets = enumerate_cosets(params.p(), params.q(), opts.max_cosets);
  const Complex one(1.0, 0.0);
  auto run_double = [&](std::vector<Complex>* terms) {
    return coset_sum<Complex>(
        cosets, Complex(0.0, 0.0),
        [&](const Coset& c) {
          return coset_term_full(xs, params.ys(), params.p(), params.q(), params.N(), c, one);
        },
        terms);
  };
  auto run_wide = [&]() {
    const std::vector<dd::Complex> wxs = widen(xs);
    const std::vector<dd::Complex> wys = widen(params.ys());
    const dd::Complex wone(1.0, 0.0);
    KernelSum<dd::Complex> sum = coset_sum<dd::Complex>(
        cosets, dd::Complex(0.0, 0.0),
        [&](const Coset& c) {
          return coset_term_full(wxs, wys, params.p(), params.q(), params.N(), c, wone);
        },
        nullptr);
    return dd::to_std(sum.value);
  };
  return direct_eval(opts, run_double, run_wide);
}

EvalResult eval_compact_at(int p, int q, int N, const std::vector<Complex>& xs,
                           const EvalOptions& opts) {
  const std::vector<Coset> cosets = enumerate_cosets(p, q, opts.max_cosets);
  const Complex one(1.0, 0.0);
  auto run_double = [&](std::vector<Complex>* terms) {
    return coset_sum<Complex>(
        cosets, Complex(0.0, 0.0),
        [&](const Coset& c) { return coset_term_compact(xs, p, q, N, c, one); }, terms);
  };
  auto run_wide = [&]() {
    const std::vector<dd::Complex> wxs = widen(xs);
    const dd::Complex wone(1.0, 0.0);
    KernelSum<dd::Complex> sum = coset_sum<dd::Complex>(
        cosets, dd::Complex(0.0, 0.0),
        [&](const Coset& c) { return coset_term_compact(wxs, p, q, N, c, wone); }, nullptr);
    return dd::to_std(sum.value);
  };
  return direct_eval(opts, run_double, run_wide);
}

EvalResult eval_cor12_at(const ExtendedParams& params, const std::vector<Complex>& xs,
                         const EvalOptions& opts) {
  // S_0 has a single (empty) coset; enumerate_cosets requires p+q >= 1.
  std::vector<Coset> cosets;
  if (params.p() + params.q() == 0)
    cosets.push_back(Coset{});
  else
    cosets = enumerate_cosets(params.p(), params.q(), opts.max_cosets);
  const Complex one(1.0, 0.0);
  auto run_double = [&](std::vector<Complex>* terms) {
    return coset_sum<Complex>(
        cosets, Complex(0.0, 0.0),
        [&](const Coset& c) {
          return coset_term_unequal(xs, params.ys(), params.p(), params.q(), params.pprime(),
                                    params.qprime(), params.N(), c, one);
        },
        terms);
  };
  auto run_wide = [&]() {
    const std::vector<dd::Complex> wxs = widen(xs);
    const std::vector<dd::Complex> wys = widen(params.ys());
    const dd::Complex wone(1.0, 0.0);
    KernelSum<dd::Complex> sum = coset_sum<dd::Complex>(
        cosets, dd::Complex(0.0, 0.0),
        [&](const Coset& c) {
          return coset_term_unequal(wxs, wys, params.p(), params.q(), params.pprime(),
                                    params.qprime(), params.N(), c, wone);
        },
        nullptr);
    return dd::to_std(sum.value);
  };
  return direct_eval(opts, run_double, run_wide);
}

}  // namespace

EvalResult eval_thm1(const SpectralParams& params, const EvalOptions& opts) {
  const auto clusters = find_clusters(params.xs(), opts.cluster_tol);
  if (!clusters.empty() && opts.confluent)
    return confluent_eval(params.xs(), clusters, opts,
                          [&](const std::vector<Complex>& xs) { return eval_thm1_at(params, xs, opts); });
  return eval_thm1_at(params, params.xs(), opts);
}

EvalResult eval_cor12(const ExtendedParams& params, const EvalOptions& opts) {
  const auto clusters = find_clusters(params.xs(), opts.cluster_tol);
  if (!clusters.empty() && opts.confluent)
    return confluent_eval(params.xs(), clusters, opts,
                          [&](const std::vector<Complex>& xs) { return eval_cor12_at(params, xs, opts); });
  return eval_cor12_at(params, params.xs(), opts);
}

EvalResult eval_compact(int p, int q, int N, const std::vector<Complex>& xs,
                        const EvalOptions& opts) {
  if (p < 0 || q < 0 || p + q < 1) throw ValueError("eval_compact needs p, q >= 0, p + q >= 1");
  if (N < 1) throw ValueError("matrix dimension N must be >= 1");
  if (xs.size() != static_cast<std::size_t>(p + q)) {
    std::ostringstream msg;
    msg << "xs has length " << xs.size() << ", expected p + q = " << p + q;
    throw ShapeError(msg.str());
  }
  for (std::size_t k = 0; k < xs.size(); ++k)
    if (xs[k] == Complex(0.0, 0.0)) throw ValueError("xs entries must be nonzero");
  const auto clusters = find_clusters(xs, opts.cluster_tol);
  if (!clusters.empty() && opts.confluent)
    return confluent_eval(xs, clusters, opts, [&](const std::vector<Complex>& pxs) {
      return eval_compact_at(p, q, N, pxs, opts);
    });
  return eval_compact_at(p, q, N, xs, opts);
}

EvalResult eval_stable(int p, int q, int N, const std::vector<Complex>& ys) {
  if (p < 0 || q < 0 || p + q < 1) throw ValueError("eval_stable needs p, q >= 0, p + q >= 1");
  if (N < 1) throw ValueError("matrix dimension N must be >= 1");
  if (N < std::max(p, q))
    throw DomainViolation("stable-range formula requires N >= max(p, q)", -1);
  if (ys.size() != static_cast<std::size_t>(p + q)) {
    std::ostringstream msg;
    msg << "ys has length " << ys.size() << ", expected p + q = " << p + q;
    throw ShapeError(msg.str());
  }
  for (std::size_t j = 0; j < ys.size(); ++j) {
    const double r = std::abs(ys[j]);
    if (static_cast<int>(j) < p && !(r < 1.0))
      throw DomainViolation("contracting y must have |y| < 1", static_cast<int>(j));
    if (static_cast<int>(j) >= p && !(r > 1.0))
      throw DomainViolation("expanding y must have |y| > 1", static_cast<int>(j));
  }
  EvalResult result;
  Complex value(1.0, 0.0);
  for (int l = p; l < p + q; ++l) value *= pow_int(ys[static_cast<std::size_t>(l)], -N);
  for (int j = 0; j < p; ++j)
    for (int l = p; l < p + q; ++l)
      value /= Complex(1.0, 0.0) - ys[static_cast<std::size_t>(j)] / ys[static_cast<std::size_t>(l)];
  result.value = value;
  result.condition = 1.0;  // single product, no cancellation between terms
  return result;
}

EvalResult eval_confluent(const SpectralParams& params, double tol, EvalOptions opts) {
  opts.cluster_tol = tol;
  const auto clusters = find_clusters(params.xs(), tol);
  if (clusters.empty()) return eval_thm1_at(params, params.xs(), opts);
  return confluent_eval(params.xs(), clusters, opts,
                        [&](const std::vector<Complex>& xs) { return eval_thm1_at(params, xs, opts); });
}

}  // namespace ratiokit
