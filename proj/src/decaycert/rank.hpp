/**
 * Fraction-free (Bareiss) elimination over an exact integral domain.
 *
 * One routine serves every ring used by the engine:
 *  - Rational / GaussianRational entries: ranks of constant matrices,
 *  - Poly entries: symbolic rank over the fraction field Q(i)(xi).
 *
 * The one-step Bareiss update
 *     M[i][j] <- (M[r][piv]*M[i][j] - M[i][piv]*M[r][j]) / prev_pivot
 * keeps every intermediate entry equal to a minor of the input matrix, so the
 * division is exact in the coefficient ring (Sylvester's identity; column
 * skipping/pivoting does not break it, the entries are simply minors built
 * from the selected pivot columns).
 */
#pragma once

#include "decaycert/matrix.hpp"

namespace decaycert {

/** Row echelon rank, destructively on a copy. Works for any rows x cols. */
template <class T>
inline int bareiss_rank(Mat<T> m) {
  int r = 0;
  T prev = T(1);
  for (int col = 0; col < m.cols && r < m.rows; ++col) {
    int piv = -1;
    for (int i = r; i < m.rows; ++i)
      if (!ring_is_zero(m.at(i, col))) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(r, j));
    for (int i = r + 1; i < m.rows; ++i) {
      for (int j = col + 1; j < m.cols; ++j)
        m.at(i, j) = ring_divexact(m.at(r, col) * m.at(i, j) - m.at(i, col) * m.at(r, j), prev);
      m.at(i, col) = T(0);
    }
    prev = m.at(r, col);
    ++r;
  }
  return r;
}

/** Exact determinant of a square matrix (Bareiss; final pivot, swap-signed). */
template <class T>
inline T bareiss_det(Mat<T> m) {
  assert(m.rows == m.cols);
  const int n = m.rows;
  if (n == 0) return T(1);
  T prev = T(1);
  int sign = 1;
  for (int r = 0; r < n; ++r) {
    int piv = -1;
    for (int i = r; i < n; ++i)
      if (!ring_is_zero(m.at(i, r))) {
        piv = i;
        break;
      }
    if (piv < 0) return T(0);
    if (piv != r) {
      for (int j = 0; j < n; ++j) std::swap(m.at(piv, j), m.at(r, j));
      sign = -sign;
    }
    for (int i = r + 1; i < n; ++i) {
      for (int j = r + 1; j < n; ++j)
        m.at(i, j) = ring_divexact(m.at(r, r) * m.at(i, j) - m.at(i, r) * m.at(r, j), prev);
      m.at(i, r) = T(0);
    }
    prev = m.at(r, r);
  }
  return sign > 0 ? m.at(n - 1, n - 1) : -m.at(n - 1, n - 1);
}

/**
 * Input:  linear system  M x = rhs  over a field (Rational/GaussianRational).
 * Action: Gaussian elimination with exact arithmetic.
 * Output: one solution if consistent, std::nullopt otherwise.
 */
template <class T>
inline std::optional<std::vector<T>> solve_exact(Mat<T> m, std::vector<T> rhs) {
  assert(static_cast<int>(rhs.size()) == m.rows);
  const int n = m.rows, k = m.cols;
  std::vector<int> pivot_col;
  int r = 0;
  for (int col = 0; col < k && r < n; ++col) {
    int piv = -1;
    for (int i = r; i < n; ++i)
      if (!ring_is_zero(m.at(i, col))) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r) {
      for (int j = 0; j < k; ++j) std::swap(m.at(piv, j), m.at(r, j));
      std::swap(rhs[static_cast<size_t>(piv)], rhs[static_cast<size_t>(r)]);
    }
    for (int i = 0; i < n; ++i) {
      if (i == r || ring_is_zero(m.at(i, col))) continue;
      const T f = ring_divexact(m.at(i, col), m.at(r, col));
      for (int j = col; j < k; ++j) m.at(i, j) = m.at(i, j) - f * m.at(r, j);
      rhs[static_cast<size_t>(i)] = rhs[static_cast<size_t>(i)] - f * rhs[static_cast<size_t>(r)];
    }
    pivot_col.push_back(col);
    ++r;
  }
  for (int i = r; i < n; ++i)
    if (!ring_is_zero(rhs[static_cast<size_t>(i)])) return std::nullopt;
  std::vector<T> x(static_cast<size_t>(k), T(0));
  for (int i = 0; i < r; ++i)
    x[static_cast<size_t>(pivot_col[static_cast<size_t>(i)])] =
        ring_divexact(rhs[static_cast<size_t>(i)], m.at(i, pivot_col[static_cast<size_t>(i)]));
  return x;
}

}  // namespace decaycert
