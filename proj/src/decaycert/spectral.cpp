#include "decaycert/spectral.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "decaycert/charpoly.hpp"
#include "decaycert/errors.hpp"
#include "decaycert/matrix.hpp"
#include "decaycert/mpreal.hpp"

namespace decaycert {

namespace {

// === Exact root finding at 320 bits ============================================

/** Horner evaluation of a monic polynomial given by ascending coefficients. */
BigComplex poly_eval(const std::vector<BigComplex>& c, const BigComplex& z) {
  BigComplex acc = c.back();
  for (auto it = std::next(c.rbegin()); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

/**
 * Durand-Kerner iteration on a monic polynomial, all roots at once, followed by
 * a few Newton steps per root against the exact coefficients.  Simple roots
 * converge quadratically; multiple roots only linearly, which the generous
 * iteration budget absorbs.  Starting points sit on a circle of half the
 * Cauchy bound with an angular offset that avoids real-axis symmetry traps.
 */
std::vector<BigComplex> find_roots(const std::vector<BigComplex>& c) {
  const int deg = static_cast<int>(c.size()) - 1;
  std::vector<BigComplex> z(static_cast<size_t>(deg));
  if (deg == 0) return z;

  BigFloat cauchy(1.0);
  for (int k = 0; k < deg; ++k) {
    const BigFloat m = BigFloat(1.0) + abs(c[static_cast<size_t>(k)]);
    if (cauchy < m) cauchy = m;
  }
  const double r0 = 0.5 * cauchy.to_double();
  for (int j = 0; j < deg; ++j) {
    const double theta = 2.0 * M_PI * (j + 0.25) / deg + 0.4;
    z[static_cast<size_t>(j)] =
        BigComplex::from_double(r0 * std::cos(theta), r0 * std::sin(theta));
  }

  const BigFloat tol = BigFloat::pow2(-270) * (BigFloat(1.0) + cauchy);
  for (int iter = 0; iter < 1000; ++iter) {
    BigFloat max_step(0.0);
    for (int j = 0; j < deg; ++j) {
      BigComplex denom = BigComplex(BigFloat(1.0), BigFloat(0.0));
      for (int k = 0; k < deg; ++k)
        if (k != j) denom = denom * (z[static_cast<size_t>(j)] - z[static_cast<size_t>(k)]);
      const BigComplex step = poly_eval(c, z[static_cast<size_t>(j)]) / denom;
      z[static_cast<size_t>(j)] = z[static_cast<size_t>(j)] - step;
      const BigFloat s = abs(step);
      if (max_step < s) max_step = s;
    }
    if (max_step <= tol) break;
  }

  // Newton polish: derivative coefficients once, then per-root refinement with
  // a step-size guard so near-multiple roots cannot be thrown off.
  std::vector<BigComplex> d(static_cast<size_t>(deg));
  for (int k = 1; k <= deg; ++k)
    d[static_cast<size_t>(k - 1)] =
        c[static_cast<size_t>(k)] * BigComplex(BigFloat(static_cast<long>(k)), BigFloat(0.0));
  for (auto& root : z) {
    BigFloat prev_step = cauchy;
    for (int iter = 0; iter < 60; ++iter) {
      const BigComplex dp = poly_eval(d, root);
      const BigFloat dnorm = abs(dp);
      if (dnorm.is_zero()) break;
      const BigComplex step = poly_eval(c, root) / dp;
      const BigFloat s = abs(step);
      if (prev_step < s) break;  // diverging: keep the Durand-Kerner result
      root = root - step;
      prev_step = s;
      if (s <= tol) break;
    }
  }
  return z;
}

std::vector<std::complex<double>> exact_spectrum(const SystemSpec& sys, double xi) {
  const Rational xi_exact(xi);  // bit-exact double -> rational conversion
  ConstMatrix e(sys.n, sys.n);
  for (int i = 0; i < sys.n; ++i)
    for (int j = 0; j < sys.n; ++j)
      e.at(i, j) = GaussianRational(sys.Ba.at(i, j) + sys.Bs.at(i, j),
                                    xi_exact * sys.A.at(i, j));
  const std::vector<GaussianRational> cp = charpoly(e);
  std::vector<BigComplex> c(cp.size());
  for (size_t k = 0; k < cp.size(); ++k) c[k] = BigComplex(cp[k]);
  const std::vector<BigComplex> roots = find_roots(c);
  std::vector<std::complex<double>> out;
  out.reserve(roots.size());
  for (const BigComplex& r : roots) out.emplace_back(r.re.to_double(), r.im.to_double());
  return out;
}

std::vector<std::complex<double>> dense_spectrum(const SystemSpec& sys, double xi) {
  Eigen::MatrixXcd e(sys.n, sys.n);
  for (int i = 0; i < sys.n; ++i)
    for (int j = 0; j < sys.n; ++j)
      e(i, j) = std::complex<double>(to_double(sys.Ba.at(i, j) + sys.Bs.at(i, j)),
                                     xi * to_double(sys.A.at(i, j)));
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(e, /*computeEigenvectors=*/false);
  std::vector<std::complex<double>> out(static_cast<size_t>(sys.n));
  for (int k = 0; k < sys.n; ++k) out[static_cast<size_t>(k)] = solver.eigenvalues()(k);
  return out;
}

}  // namespace

SpectralSample spectral_rate(const SystemSpec& sys, double xi) {
  if (xi == 0.0 || !std::isfinite(xi))
    throw CertError(ErrorCode::InvalidInput, "spectral_rate: xi must be finite and nonzero");
  if (sys.n < 1 || sys.n > 64)
    throw CertError(ErrorCode::InvalidInput, "spectral_rate: dimension must be in [1, 64]");

  SpectralSample sample;
  sample.xi = xi;
  sample.eigenvalues = (sys.n <= kExactSpectrumMaxDim) ? exact_spectrum(sys, xi)
                                                       : dense_spectrum(sys, xi);
  std::sort(sample.eigenvalues.begin(), sample.eigenvalues.end(),
            [](const std::complex<double>& a, const std::complex<double>& b) {
              if (a.real() != b.real()) return a.real() < b.real();
              return a.imag() < b.imag();
            });
  sample.rate = sample.eigenvalues.front().real();
  return sample;
}

}  // namespace decaycert
