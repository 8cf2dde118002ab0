/**
 * Dense matrices over exact scalar or polynomial rings.
 *
 *  - Mat<T> with row-major storage and schoolbook arithmetic.
 *  - RealMatrix  = Mat<Rational>          (system data A, B^a, B^s, tree nodes)
 *  - ConstMatrix = Mat<GaussianRational>  (symbol matrices evaluated at real xi)
 *  - PolyMatrix  = Mat<Poly>              (symbol matrices, entries in Q(i)[xi])
 *  - Embeddings, conjugate transpose, vertical stacking, evaluation.
 */
#pragma once

#include "decaycert/poly.hpp"

#include <initializer_list>
#include <vector>

namespace decaycert {

template <class T>
struct Mat {
  int rows = 0, cols = 0;
  std::vector<T> e;  // row-major, size rows*cols

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), e(static_cast<size_t>(r) * c, T(0)) {}
  Mat(int r, int c, std::initializer_list<T> entries) : rows(r), cols(c), e(entries) {
    assert(static_cast<int>(e.size()) == r * c);
  }

  static Mat zero(int r, int c) { return Mat(r, c); }
  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = T(1);
    return m;
  }

  T& at(int i, int j) { return e[static_cast<size_t>(i) * cols + j]; }
  const T& at(int i, int j) const { return e[static_cast<size_t>(i) * cols + j]; }

  bool is_zero() const {
    for (const T& x : e)
      if (!ring_is_zero(x)) return false;
    return true;
  }

  Mat transpose() const {
    Mat t(cols, rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  friend Mat operator+(const Mat& a, const Mat& b) {
    assert(a.rows == b.rows && a.cols == b.cols);
    Mat r = a;
    for (size_t k = 0; k < r.e.size(); ++k) r.e[k] += b.e[k];
    return r;
  }
  friend Mat operator-(const Mat& a, const Mat& b) {
    assert(a.rows == b.rows && a.cols == b.cols);
    Mat r = a;
    for (size_t k = 0; k < r.e.size(); ++k) r.e[k] = r.e[k] - b.e[k];
    return r;
  }
  friend Mat operator-(const Mat& a) {
    Mat r = a;
    for (auto& x : r.e) x = -x;
    return r;
  }
  friend Mat operator*(const Mat& a, const Mat& b) {
    assert(a.cols == b.rows);
    Mat r(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
      for (int k = 0; k < a.cols; ++k) {
        const T& aik = a.at(i, k);
        if (ring_is_zero(aik)) continue;
        for (int j = 0; j < b.cols; ++j) r.at(i, j) += aik * b.at(k, j);
      }
    return r;
  }
  friend Mat operator*(const T& s, const Mat& a) {
    Mat r = a;
    for (auto& x : r.e) x = s * x;
    return r;
  }
  friend bool operator==(const Mat& a, const Mat& b) {
    return a.rows == b.rows && a.cols == b.cols && a.e == b.e;
  }
  friend bool operator!=(const Mat& a, const Mat& b) { return !(a == b); }
};

using RealMatrix = Mat<Rational>;
using ConstMatrix = Mat<GaussianRational>;
using PolyMatrix = Mat<Poly>;

// ==============================================================================
// Conversions and structural helpers
// ==============================================================================

inline ConstMatrix embed_const(const RealMatrix& m) {
  ConstMatrix r(m.rows, m.cols);
  for (size_t k = 0; k < m.e.size(); ++k) r.e[k] = GaussianRational(m.e[k]);
  return r;
}

inline PolyMatrix embed_poly(const RealMatrix& m) {
  PolyMatrix r(m.rows, m.cols);
  for (size_t k = 0; k < m.e.size(); ++k) r.e[k] = Poly(GaussianRational(m.e[k]));
  return r;
}

/** Conjugate transpose; valid for symbol matrices on the real line xi in R. */
inline ConstMatrix conj_transpose(const ConstMatrix& m) {
  ConstMatrix t(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) t.at(j, i) = m.at(i, j).conj();
  return t;
}

inline PolyMatrix conj_transpose(const PolyMatrix& m) {
  PolyMatrix t(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) t.at(j, i) = poly_conj(m.at(i, j));
  return t;
}

template <class T>
inline Mat<T> vstack(const std::vector<Mat<T>>& blocks) {
  assert(!blocks.empty());
  int rows = 0;
  const int cols = blocks.front().cols;
  for (const auto& b : blocks) {
    assert(b.cols == cols);
    rows += b.rows;
  }
  Mat<T> r(rows, cols);
  int off = 0;
  for (const auto& b : blocks) {
    for (int i = 0; i < b.rows; ++i)
      for (int j = 0; j < cols; ++j) r.at(off + i, j) = b.at(i, j);
    off += b.rows;
  }
  return r;
}

template <class T>
inline bool is_symmetric(const Mat<T>& m) {
  if (m.rows != m.cols) return false;
  for (int i = 0; i < m.rows; ++i)
    for (int j = i + 1; j < m.cols; ++j)
      if (m.at(i, j) != m.at(j, i)) return false;
  return true;
}

/** M - M^T; the zero matrix iff M is symmetric. */
inline RealMatrix skew_part(const RealMatrix& m) {
  assert(m.rows == m.cols);
  return m - m.transpose();
}

}  // namespace decaycert
