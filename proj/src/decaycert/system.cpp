/**
 * Exact structural validation of system data.
 *
 * Positive semidefiniteness is decided without floating point: a symmetric
 * rational matrix has only real eigenvalues, and they are all nonnegative
 * exactly when the characteristic polynomial's coefficients alternate in sign,
 * i.e. (-1)^(n-k) c_k >= 0 for every k (the c_k are signed elementary
 * symmetric functions of the spectrum).
 */
#include "decaycert/system.hpp"

#include <utility>

#include "decaycert/charpoly.hpp"
#include "decaycert/errors.hpp"
#include "decaycert/sturm.hpp"

namespace decaycert {
namespace {

void require_square(const RealMatrix& m, int n, const char* name) {
  if (m.rows != n || m.cols != n)
    throw CertError(ErrorCode::InvalidInput, std::string(name) + " must be " +
                                                 std::to_string(n) + "x" + std::to_string(n) +
                                                 ", got " + std::to_string(m.rows) + "x" +
                                                 std::to_string(m.cols));
}

std::string entry_ref(const char* name, int i, int j) {
  return std::string(name) + "[" + std::to_string(i) + "][" + std::to_string(j) + "]";
}

void require_symmetric(const RealMatrix& m, const char* name) {
  for (int i = 0; i < m.rows; ++i)
    for (int j = i + 1; j < m.cols; ++j)
      if (m.at(i, j) != m.at(j, i))
        throw CertError(ErrorCode::InvalidInput,
                        std::string(name) + " is not symmetric: " + entry_ref(name, i, j) + " = " +
                            rational_to_string(m.at(i, j)) + " but " + entry_ref(name, j, i) +
                            " = " + rational_to_string(m.at(j, i)));
}

void require_skew(const RealMatrix& m, const char* name) {
  for (int i = 0; i < m.rows; ++i)
    for (int j = i; j < m.cols; ++j)
      if (m.at(i, j) != -m.at(j, i))
        throw CertError(ErrorCode::InvalidInput,
                        std::string(name) + " is not skew-symmetric: " + entry_ref(name, i, j) +
                            " = " + rational_to_string(m.at(i, j)) + " but " +
                            entry_ref(name, j, i) + " = " + rational_to_string(m.at(j, i)));
}

}  // namespace

SystemSpec make_system(std::string label, RealMatrix a, RealMatrix ba, RealMatrix bs) {
  const int n = a.rows;
  if (n <= 0) throw CertError(ErrorCode::InvalidInput, "system dimension must be positive");
  require_square(a, n, "A");
  require_square(ba, n, "Ba");
  require_square(bs, n, "Bs");
  require_symmetric(a, "A");
  require_skew(ba, "Ba");
  require_symmetric(bs, "Bs");
  if (bs.is_zero())
    throw CertError(ErrorCode::InvalidInput, "Bs is zero: the system has no dissipation");

  // Exact PSD test on the characteristic polynomial sign pattern.
  const std::vector<Rational> cp = charpoly(bs);
  for (int k = 0; k <= n; ++k) {
    const int expected = ((n - k) % 2 == 0) ? 1 : -1;
    if (sgn(cp[static_cast<size_t>(k)]) * expected < 0)
      throw CertError(ErrorCode::InvalidInput,
                      "Bs is not positive semidefinite (characteristic coefficient at degree " +
                          std::to_string(k) + " has the wrong sign)");
  }

  // kappa: smallest positive eigenvalue of Bs. Strip the zero eigenvalues,
  // then isolate the smallest remaining root; PSD guarantees it is positive.
  const RPoly stripped = strip_zero_root(RPoly(cp)).second;
  if (stripped.degree() <= 0)
    throw CertError(ErrorCode::Internal, "nonzero PSD matrix with no positive eigenvalue");
  const auto iv = smallest_positive_root(stripped, 30);
  if (!iv.has_value())
    throw CertError(ErrorCode::Internal, "kappa isolation failed on a PSD spectrum");

  SystemSpec sys;
  sys.n = n;
  sys.A = std::move(a);
  sys.Ba = std::move(ba);
  sys.Bs = std::move(bs);
  sys.label = std::move(label);
  sys.kappa = iv->approx();
  return sys;
}

}  // namespace decaycert
