/**
 * Hybrid double/exact smallest-singular-value oracle.
 *
 * The Gram matrix is always assembled exactly; only the eigensolve is done in
 * floating point, and only when its answer is trustworthy (smallest eigenvalue
 * well above the roundoff floor relative to the largest).
 */
#include "decaycert/smin.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <limits>

#include "decaycert/charpoly.hpp"
#include "decaycert/errors.hpp"
#include "decaycert/sturm.hpp"

namespace decaycert {
namespace {

constexpr double kTrustRatio = 1e-10;  // smallest/largest eigenvalue cutoff

Eigen::MatrixXcd to_eigen(const ConstMatrix& m) {
  Eigen::MatrixXcd out(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j)
      out(i, j) = std::complex<double>(to_double(m.at(i, j).re), to_double(m.at(i, j).im));
  return out;
}

SminResult exact_smin(const ConstMatrix& gram) {
  // Real characteristic polynomial of the Hermitian Gram matrix.
  const std::vector<GaussianRational> cp = charpoly(gram);
  std::vector<Rational> real_cp;
  real_cp.reserve(cp.size());
  for (const auto& c : cp) {
    if (!c.is_real())
      throw CertError(ErrorCode::Internal, "Hermitian Gram charpoly has a complex coefficient");
    real_cp.push_back(c.re);
  }
  const auto [zeros, stripped] = strip_zero_root(RPoly(std::move(real_cp)));
  if (zeros > 0) return {0.0, -std::numeric_limits<double>::infinity()};  // exactly singular

  const auto iv = smallest_positive_root(stripped, 30);
  if (!iv.has_value())
    throw CertError(ErrorCode::Internal, "PSD Gram matrix with no nonnegative eigenvalue");
  const double log2_lambda =
      iv->exact ? log2_of_rational(iv->lo)
                : 0.5 * (log2_of_rational(iv->lo) + log2_of_rational(iv->hi));
  return {std::exp2(0.5 * log2_lambda), 0.5 * log2_lambda};
}

}  // namespace

SminResult smin_const(const ConstMatrix& m) {
  const ConstMatrix gram = conj_transpose(m) * m;
  if (gram.is_zero()) return {0.0, -std::numeric_limits<double>::infinity()};

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(gram), Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues()(0);
  const double hi = es.eigenvalues()(gram.rows - 1);
  if (lo > kTrustRatio * hi) return {std::sqrt(lo), 0.5 * std::log2(lo)};

  if (gram.cols > 8)
    // No exact fallback at this size; return the floating-point answer.
    return {std::sqrt(std::max(lo, 0.0)), 0.5 * std::log2(std::max(lo, 1e-300))};
  return exact_smin(gram);
}

}  // namespace decaycert
