#include "ratiokit/haar_mc.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "ratiokit/philox.hpp"

namespace ratiokit {

UnitarySample sample_haar_unitary(int N, std::uint64_t seed, std::uint64_t index) {
  if (N < 1) throw ValueError("matrix dimension N must be >= 1");
  const auto n = static_cast<Eigen::Index>(N);

  Eigen::MatrixXcd G(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c)
      G(r, c) = philox_gaussian(seed, index,
                                static_cast<std::uint64_t>(r) * static_cast<std::uint64_t>(N) +
                                    static_cast<std::uint64_t>(c));

  // QR alone is not Haar: the map G -> Q is only well defined up to a
  // diagonal phase matrix.  Multiplying each column by the phase of the
  // matching R diagonal entry fixes the gauge so the density becomes
  // right-invariant.
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(G);
  Eigen::MatrixXcd U = qr.householderQ();
  const Eigen::MatrixXcd& qrmat = qr.matrixQR();
  for (Eigen::Index c = 0; c < n; ++c) {
    const Complex d = qrmat(c, c);
    const double m = std::abs(d);
    U.col(c) *= (m == 0.0) ? Complex(1.0, 0.0) : d / m;
  }

  const double unitarity =
      (U.adjoint() * U - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (!(unitarity < 1e-12)) {
    std::ostringstream msg;
    msg << "QR orthonormalization failed: ||U*U - I||_max = " << unitarity;
    throw NumericalFailure(msg.str());
  }

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(U, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) throw NumericalFailure("eigensolver did not converge");
  const Eigen::MatrixXcd& V = solver.eigenvectors();
  const Eigen::VectorXcd& lambda = solver.eigenvalues();
  const double residual = (U * V - V * lambda.asDiagonal()).cwiseAbs().maxCoeff();
  if (!(residual < 1e-8)) {
    std::ostringstream msg;
    msg << "eigensolver residual " << residual << " exceeds 1e-8";
    throw NumericalFailure(msg.str());
  }

  UnitarySample sample;
  sample.eigenvalues.reserve(static_cast<std::size_t>(N));
  for (Eigen::Index a = 0; a < n; ++a) {
    const Complex lam = lambda(a);
    if (!(std::abs(std::abs(lam) - 1.0) < 1e-10)) {
      std::ostringstream msg;
      msg << "eigenvalue modulus " << std::abs(lam) << " is off the unit circle";
      throw NumericalFailure(msg.str());
    }
    sample.eigenvalues.push_back(lam);
  }
  std::sort(sample.eigenvalues.begin(), sample.eigenvalues.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return sample;
}

namespace {

void check_sample_factor(const Complex& den) {
  if (std::abs(den) < 1e-14)
    throw SingularSample("integrand denominator factor closer than 1e-14 to zero");
}

/// Shared slot products.  Contracting slot (plain form):
/// prod_a (1 - x lam_a) / (1 - y lam_a).  Expanding slot (ratio form):
/// (x/y)^N prod_a (1 - conj(lam_a)/x) / (1 - conj(lam_a)/y), which is
/// the same factor multiplied out so large |x|, |y| never overflow.
Complex contracting_slot(const Complex& x, const Complex& y, const std::vector<Complex>& lams) {
  Complex f(1.0, 0.0);
  for (const Complex& lam : lams) {
    const Complex den = Complex(1.0, 0.0) - y * lam;
    check_sample_factor(den);
    f *= (Complex(1.0, 0.0) - x * lam) / den;
  }
  return f;
}

Complex expanding_slot(const Complex& x, const Complex& y, int N,
                       const std::vector<Complex>& lams) {
  Complex f = pow_int(x / y, N);
  for (const Complex& lam : lams) {
    const Complex lbar = std::conj(lam);
    const Complex den = Complex(1.0, 0.0) - lbar / y;
    check_sample_factor(den);
    f *= (Complex(1.0, 0.0) - lbar / x) / den;
  }
  return f;
}

std::vector<Complex> sorted_eigenvalues(const UnitarySample& sample) {
  std::vector<Complex> lams = sample.eigenvalues;
  std::sort(lams.begin(), lams.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return lams;
}

}  // namespace

Complex eval_Z(const SpectralParams& params, const UnitarySample& sample) {
  if (sample.eigenvalues.size() != static_cast<std::size_t>(params.N())) {
    std::ostringstream msg;
    msg << "sample has " << sample.eigenvalues.size() << " eigenvalues, params expect "
        << params.N();
    throw ShapeError(msg.str());
  }
  // Canonical eigenvalue order makes the value an exact function of the
  // spectrum as a multiset.
  const std::vector<Complex> lams = sorted_eigenvalues(sample);

  Complex z(1.0, 0.0);
  for (int j = 0; j < params.p(); ++j) {
    const Complex& x = params.xs()[static_cast<std::size_t>(j)];
    const Complex& y = params.ys()[static_cast<std::size_t>(j)];
    if (x == y) continue;  // slot factor is identically 1
    z *= contracting_slot(x, y, lams);
  }
  for (int l = params.p(); l < params.n(); ++l) {
    const Complex& x = params.xs()[static_cast<std::size_t>(l)];
    const Complex& y = params.ys()[static_cast<std::size_t>(l)];
    if (x == y) continue;
    z *= expanding_slot(x, y, params.N(), lams);
  }
  return z;
}

Complex eval_Z_extended(const ExtendedParams& params, const UnitarySample& sample) {
  if (sample.eigenvalues.size() != static_cast<std::size_t>(params.N())) {
    std::ostringstream msg;
    msg << "sample has " << sample.eigenvalues.size() << " eigenvalues, params expect "
        << params.N();
    throw ShapeError(msg.str());
  }
  const std::vector<Complex> lams = sorted_eigenvalues(sample);
  const Complex one(1.0, 0.0);

  Complex z = one;
  for (int j = 0; j < params.p(); ++j)
    for (const Complex& lam : lams) z *= one - params.xs()[static_cast<std::size_t>(j)] * lam;
  for (int l = params.p(); l < params.p() + params.q(); ++l)
    for (const Complex& lam : lams)
      z *= one - std::conj(lam) / params.xs()[static_cast<std::size_t>(l)];
  for (int jp = 0; jp < params.pprime(); ++jp)
    for (const Complex& lam : lams) {
      const Complex den = one - params.ys()[static_cast<std::size_t>(jp)] * lam;
      check_sample_factor(den);
      z /= den;
    }
  for (int lp = params.pprime(); lp < params.pprime() + params.qprime(); ++lp)
    for (const Complex& lam : lams) {
      const Complex den = one - std::conj(lam) / params.ys()[static_cast<std::size_t>(lp)];
      check_sample_factor(den);
      z /= den;
    }
  return z;
}

namespace {

/// One-pass mean/variance block, merged by Chan's combine rule along a
/// fixed pairwise tree.  Block boundaries depend only on (samples,
/// block_size), so the reduction is a pure function of the seed.
struct BlockStat {
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

BlockStat merge(const BlockStat& a, const BlockStat& b) {
  if (a.n == 0) return b;
  if (b.n == 0) return a;
  BlockStat out;
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

template <class Integrand>
Estimate mc_run(int N, std::uint64_t samples, std::uint64_t seed, const McOptions& opts,
                const char* method, Integrand&& integrand) {
  if (samples < 2) throw ValueError("Monte Carlo needs at least 2 samples");
  const std::uint64_t block_size = std::max<std::uint64_t>(1, opts.block_size);
  const std::uint64_t nblocks = (samples + block_size - 1) / block_size;

  std::vector<BlockStat> stats(static_cast<std::size_t>(nblocks));
  std::atomic<std::uint64_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;

  auto worker = [&]() {
    try {
      while (true) {
        const std::uint64_t b = next.fetch_add(1);
        if (b >= nblocks) break;
        BlockStat stat;
        const std::uint64_t begin = b * block_size;
        const std::uint64_t end = std::min(samples, begin + block_size);
        for (std::uint64_t i = begin; i < end; ++i)
          stat.add(integrand(sample_haar_unitary(N, seed, i)));
        stats[static_cast<std::size_t>(b)] = stat;
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

  // Deterministic pairwise tree over block indices.
  while (stats.size() > 1) {
    std::vector<BlockStat> half;
    half.reserve((stats.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < stats.size(); i += 2) half.push_back(merge(stats[i], stats[i + 1]));
    if (stats.size() % 2 == 1) half.push_back(stats.back());
    stats = std::move(half);
  }
  const BlockStat total = stats.front();

  Estimate est;
  est.mean = Complex(total.mean_re, total.mean_im);
  const double n = static_cast<double>(total.n);
  const double var_re = std::max(0.0, total.m2_re) / (n - 1.0);
  const double var_im = std::max(0.0, total.m2_im) / (n - 1.0);
  est.std_error = std::sqrt(std::max(var_re, var_im) / n);
  est.samples = samples;
  est.seed = seed;
  est.method = method;
  return est;
}

}  // namespace

Estimate mc_estimate(const SpectralParams& params, std::uint64_t samples, std::uint64_t seed,
                     const McOptions& opts) {
  return mc_run(params.N(), samples, seed, opts, "haar-mc",
                [&](const UnitarySample& s) { return eval_Z(params, s); });
}

Estimate mc_estimate_extended(const ExtendedParams& params, std::uint64_t samples,
                              std::uint64_t seed, const McOptions& opts) {
  return mc_run(params.N(), samples, seed, opts, "haar-mc-extended",
                [&](const UnitarySample& s) { return eval_Z_extended(params, s); });
}

}  // namespace ratiokit
