/**
 * Kalman-stack construction, rank certification, and exponent fits.
 */
#include "decaycert/kalman.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "decaycert/charpoly.hpp"
#include "decaycert/errors.hpp"
#include "decaycert/fitline.hpp"
#include "decaycert/smin.hpp"

namespace decaycert {
namespace {

constexpr int kFitJMin = 6;        // first sampled dyadic exponent
constexpr int kFitJMax = 20;       // last sampled dyadic exponent
constexpr int kFitWindow = 8;      // fit uses the last 8 (most asymptotic) points
constexpr double kSlopeTol = 0.15; // max distance of the slope to an integer

/** 2^j as an exact rational, j possibly negative. */
Rational pow2(int j) {
  Rational r(1);
  for (int k = 0; k < std::abs(j); ++k) r *= 2;
  return j >= 0 ? r : Rational(1) / r;
}

/** Blocks B^s (i xi A + B^a)^k for k = 0..order, kept separate for weighting. */
std::vector<PolyMatrix> stack_blocks(const SystemSpec& sys, int order) {
  const PolyMatrix g = drift_symbol(sys);
  std::vector<PolyMatrix> blocks;
  blocks.reserve(static_cast<size_t>(order) + 1);
  PolyMatrix cur = embed_poly(sys.Bs);
  blocks.push_back(cur);
  for (int k = 1; k <= order; ++k) {
    cur = poly_mat_mul(cur, g);
    blocks.push_back(cur);
  }
  return blocks;
}

/** Round a fitted slope to the nearest integer, with the pinned tolerance. */
int round_slope(double slope, const char* what) {
  const double nearest = std::round(slope);
  if (std::fabs(slope - nearest) > kSlopeTol)
    throw CertError(ErrorCode::NonIntegerSlope, std::string(what) + " slope " +
                                                    std::to_string(slope) +
                                                    " is not within 0.15 of an integer");
  return static_cast<int>(nearest);
}

ExponentEstimate fit_stack_exponent(const SystemSpec& sys, int order, bool high_frequency) {
  const std::vector<PolyMatrix> blocks = stack_blocks(sys, order);
  std::vector<double> xs, ys;
  for (int j = kFitJMin; j <= kFitJMax; ++j) {
    const Rational xi = pow2(high_frequency ? j : -j);
    std::vector<ConstMatrix> rows;
    rows.reserve(blocks.size());
    for (size_t k = 0; k < blocks.size(); ++k) {
      ConstMatrix b = eval_at(blocks[k], xi);
      if (high_frequency && k > 0) {
        // |xi|^(-k) weight, exact while still rational.
        const GaussianRational w(pow2(-static_cast<int>(k) * j));
        b = w * b;
      }
      rows.push_back(std::move(b));
    }
    xs.push_back(high_frequency ? static_cast<double>(j) : static_cast<double>(-j));
    ys.push_back(smin_const(vstack(rows)).log2_smin);
  }
  // Pre-asymptotic transients die off along the grid; fit the last 8 points.
  xs.erase(xs.begin(), xs.end() - kFitWindow);
  ys.erase(ys.begin(), ys.end() - kFitWindow);
  const LineFit fit = fit_line(xs, ys);
  const int rounded = round_slope(fit.slope, high_frequency ? "high-frequency" : "low-frequency");
  const int value = high_frequency ? -rounded : rounded;
  if (value < 0)
    throw CertError(ErrorCode::Internal,
                    "stack smin fit produced a negative degeneracy exponent");
  return {value, {fit.slope, fit.max_residual}};
}

/**
 * Degree (at +infinity) or valuation (at 0) gap between the two lowest
 * characteristic coefficients of the exact Gram matrix of `stacked`.
 * For a positive semidefinite H(xi) with full generic rank, the smallest
 * eigenvalue lambda(xi) satisfies c0/c1 <= lambda <= n * c0/c1, so its power
 * behaviour is exactly deg(c0) - deg(c1) (resp. val - val).
 */
int gram_charpoly_gap(const PolyMatrix& stacked, bool at_infinity) {
  const PolyMatrix h = poly_mat_mul(conj_transpose(stacked), stacked);
  const std::vector<Poly> cp = charpoly(h);
  const Poly& c0 = cp[0];
  const Poly& c1 = cp[1];
  if (c0.is_zero() || c1.is_zero())
    throw CertError(ErrorCode::Internal, "Gram charpoly cross-check needs full generic rank");
  if (at_infinity) return c0.degree() - c1.degree();
  return strip_zero_root(c0).first - strip_zero_root(c1).first;
}

}  // namespace

PolyMatrix drift_symbol(const SystemSpec& sys) {
  PolyMatrix g(sys.n, sys.n);
  for (int i = 0; i < sys.n; ++i)
    for (int j = 0; j < sys.n; ++j)
      g.at(i, j) = Poly::monomial(GaussianRational(Rational(0), sys.A.at(i, j)), 1) +
                   Poly(GaussianRational(sys.Ba.at(i, j)));
  return g;
}

PolyMatrix build_kalman_stack(const SystemSpec& sys, int order) {
  if (order < 0) throw CertError(ErrorCode::InvalidInput, "stack order must be nonnegative");
  return vstack(stack_blocks(sys, order));
}

KalmanCertificate check_kalman(const SystemSpec& sys, int kmax) {
  if (kmax < 0) kmax = sys.n - 1;
  if (kmax < 1) throw CertError(ErrorCode::InvalidInput, "kmax must be at least 1");

  KalmanCertificate cert;
  for (int k = 0; k <= kmax; ++k) {
    const PolyMatrix stack = build_kalman_stack(sys, k);
    const int gr = generic_rank(stack);
    cert.generic_ranks.push_back(gr);
    if (gr < sys.n) continue;
    std::vector<AlgebraicInterval> pts = exceptional_real_points(stack);
    if (pts.empty()) {
      cert.holds = true;
      cert.K = k;
      cert.exceptional_points.clear();
      return cert;
    }
    // Full generic rank but real degenerate frequencies: keep searching, and
    // keep the points for diagnosis in case no later order clears them.
    cert.exceptional_points = std::move(pts);
  }
  return cert;
}

ExponentEstimate estimate_alpha(const SystemSpec& sys, int order) {
  return fit_stack_exponent(sys, order, /*high_frequency=*/true);
}

ExponentEstimate estimate_beta(const SystemSpec& sys, int order) {
  return fit_stack_exponent(sys, order, /*high_frequency=*/false);
}

int alpha_from_gram_degrees(const SystemSpec& sys, int order) {
  if (sys.n > 4)
    throw CertError(ErrorCode::InvalidInput, "symbolic exponent cross-check is limited to n <= 4");
  // Clear denominators: P = xi^order * W has polynomial blocks
  // xi^(order-k) B^s(i xi A + B^a)^k, and Gram(P) = xi^(2 order) Gram(W).
  const std::vector<PolyMatrix> blocks = stack_blocks(sys, order);
  std::vector<PolyMatrix> weighted;
  weighted.reserve(blocks.size());
  for (size_t k = 0; k < blocks.size(); ++k) {
    const Poly w = Poly::monomial(GaussianRational(rat(1)), order - static_cast<int>(k));
    weighted.push_back(w * blocks[k]);
  }
  const int gap = gram_charpoly_gap(vstack(weighted), /*at_infinity=*/true) - 2 * order;
  if (gap % 2 != 0)
    throw CertError(ErrorCode::Internal, "odd Gram degree gap in the alpha cross-check");
  return -gap / 2;
}

int beta_from_gram_valuations(const SystemSpec& sys, int order) {
  if (sys.n > 4)
    throw CertError(ErrorCode::InvalidInput, "symbolic exponent cross-check is limited to n <= 4");
  const int gap = gram_charpoly_gap(build_kalman_stack(sys, order), /*at_infinity=*/false);
  if (gap % 2 != 0)
    throw CertError(ErrorCode::Internal, "odd Gram valuation gap in the beta cross-check");
  return gap / 2;
}

KalmanCertificate full_kalman_certificate(const SystemSpec& sys, int kmax) {
  KalmanCertificate cert = check_kalman(sys, kmax);
  if (!cert.holds) return cert;
  const ExponentEstimate a = estimate_alpha(sys, cert.K);
  const ExponentEstimate b = estimate_beta(sys, cert.K);
  cert.alpha = a.value;
  cert.alpha_fit = {a.fit.slope, a.fit.max_residual};
  cert.beta = b.value;
  cert.beta_fit = {b.fit.slope, b.fit.max_residual};
  return cert;
}

}  // namespace decaycert
