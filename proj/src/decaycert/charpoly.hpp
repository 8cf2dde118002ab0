/**
 * Exact characteristic polynomials via the Faddeev-LeVerrier recurrence.
 *
 *   M_1 = A,           c_{n-1} = -tr(M_1)
 *   M_{k+1} = A (M_k + c_{n-k} I),   c_{n-k-1} = -tr(M_{k+1}) / (k+1)
 *
 * yields det(lambda I - A) = lambda^n + c_{n-1} lambda^{n-1} + ... + c_0.
 * The trace divisions are exact over any ring containing the integers'
 * quotients actually produced (fields here; also polynomial rings over a
 * field), so the routine is shared by Rational, GaussianRational and Poly
 * entries alike.
 */
#pragma once

#include "decaycert/matrix.hpp"

namespace decaycert {

template <class T>
inline T mat_trace(const Mat<T>& m) {
  assert(m.rows == m.cols);
  T t = T(0);
  for (int i = 0; i < m.rows; ++i) t += m.at(i, i);
  return t;
}

/**
 * Input:  square matrix A over an exact ring.
 * Output: monic characteristic polynomial coefficients, ascending:
 *         out[k] multiplies lambda^k, out[n] == 1.
 */
template <class T>
inline std::vector<T> charpoly(const Mat<T>& a) {
  assert(a.rows == a.cols);
  const int n = a.rows;
  std::vector<T> c(static_cast<size_t>(n) + 1, T(0));
  c[static_cast<size_t>(n)] = T(1);
  Mat<T> mk = a;
  for (int k = 1; k <= n; ++k) {
    const T ck = ring_div_int(-mat_trace(mk), k);
    c[static_cast<size_t>(n - k)] = ck;
    if (k < n) {
      Mat<T> shifted = mk;
      for (int i = 0; i < n; ++i) shifted.at(i, i) += ck;
      mk = a * shifted;
    }
  }
  return c;
}

}  // namespace decaycert
