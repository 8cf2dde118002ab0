/**
 * Dense univariate polynomials over an exact field.
 *
 *  - PolyT<F>: coefficients ascending by degree, always trimmed (no trailing
 *    zeros, empty vector == zero polynomial).
 *  - Poly  = PolyT<GaussianRational>: entries of symbol matrices in xi.
 *  - RPoly = PolyT<Rational>: characteristic/Gram determinants on the real line.
 *  - Exact division, gcd, squarefree part, derivative, Horner evaluation.
 *
 * Degrees in this project stay small (tens), so schoolbook algorithms are the
 * right tool; all growth is in the coefficient arithmetic, which GMP handles.
 */
#pragma once

#include "decaycert/rational.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace decaycert {

template <class F>
struct PolyT {
  std::vector<F> c;  // c[k] multiplies x^k; invariant: c.empty() || !ring_is_zero(c.back())

  PolyT() = default;
  PolyT(long v) {  // NOLINT(google-explicit-constructor)
    if (v != 0) c.push_back(F(v));
  }
  PolyT(const F& v) {  // NOLINT(google-explicit-constructor)
    if (!ring_is_zero(v)) c.push_back(v);
  }
  explicit PolyT(std::vector<F> coeffs) : c(std::move(coeffs)) { trim(); }

  /** x^k with coefficient a. */
  static PolyT monomial(const F& a, int k) {
    PolyT p;
    if (!ring_is_zero(a)) {
      p.c.assign(static_cast<size_t>(k) + 1, F(0));
      p.c.back() = a;
    }
    return p;
  }

  void trim() {
    while (!c.empty() && ring_is_zero(c.back())) c.pop_back();
  }

  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }  // zero poly -> -1
  const F& coeff(int k) const {
    static const F kZero = F(0);
    return (k >= 0 && k < static_cast<int>(c.size())) ? c[static_cast<size_t>(k)] : kZero;
  }

  friend PolyT operator+(const PolyT& a, const PolyT& b) {
    PolyT r;
    r.c.resize(std::max(a.c.size(), b.c.size()), F(0));
    for (size_t k = 0; k < r.c.size(); ++k) {
      if (k < a.c.size()) r.c[k] += a.c[k];
      if (k < b.c.size()) r.c[k] += b.c[k];
    }
    r.trim();
    return r;
  }
  friend PolyT operator-(const PolyT& a) {
    PolyT r = a;
    for (auto& x : r.c) x = -x;
    return r;
  }
  friend PolyT operator-(const PolyT& a, const PolyT& b) { return a + (-b); }
  friend PolyT operator*(const PolyT& a, const PolyT& b) {
    if (a.is_zero() || b.is_zero()) return {};
    PolyT r;
    r.c.assign(a.c.size() + b.c.size() - 1, F(0));
    for (size_t i = 0; i < a.c.size(); ++i)
      for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    r.trim();
    return r;
  }
  PolyT& operator+=(const PolyT& o) { return *this = *this + o; }
  PolyT& operator-=(const PolyT& o) { return *this = *this - o; }
  PolyT& operator*=(const PolyT& o) { return *this = *this * o; }

  friend bool operator==(const PolyT& a, const PolyT& b) { return a.c == b.c; }
  friend bool operator!=(const PolyT& a, const PolyT& b) { return !(a == b); }

  /** Horner evaluation at a point of any type closed under *,+ with F. */
  template <class X>
  X eval(const X& x) const {
    X acc = X(0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + X(*it);
    return acc;
  }

  PolyT derivative() const {
    PolyT d;
    for (size_t k = 1; k < c.size(); ++k) d.c.push_back(c[k] * F(static_cast<long>(k)));
    d.trim();
    return d;
  }

  /** Euclidean division: *this = q*b + r with deg r < deg b. Requires b != 0. */
  std::pair<PolyT, PolyT> divmod(const PolyT& b) const {
    assert(!b.is_zero());
    PolyT q, r = *this;
    const F& lead = b.c.back();
    while (!r.is_zero() && r.degree() >= b.degree()) {
      const int shift = r.degree() - b.degree();
      const F factor = ring_divexact(r.c.back(), lead);
      q += monomial(factor, shift);
      r -= monomial(factor, shift) * b;
    }
    return {q, r};
  }
};

using Poly = PolyT<GaussianRational>;
using RPoly = PolyT<Rational>;

template <class F>
inline bool ring_is_zero(const PolyT<F>& p) {
  return p.is_zero();
}

/** Exact polynomial division; asserts the remainder vanishes. */
template <class F>
inline PolyT<F> ring_divexact(const PolyT<F>& a, const PolyT<F>& b) {
  auto [q, r] = a.divmod(b);
  assert(r.is_zero() && "ring_divexact(Poly): inexact division");
  return q;
}

template <class F>
inline PolyT<F> ring_div_int(const PolyT<F>& a, long k) {
  PolyT<F> r = a;
  for (auto& x : r.c) x = ring_div_int(x, k);
  return r;
}

// ==============================================================================
// Field-coefficient utilities (gcd, squarefree part, conjugation)
// ==============================================================================

/** Monic gcd via the Euclidean algorithm (F a field). gcd(0,0) = 0. */
template <class F>
inline PolyT<F> poly_gcd(PolyT<F> a, PolyT<F> b) {
  while (!b.is_zero()) {
    auto [q, r] = a.divmod(b);
    (void)q;
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.is_zero()) {
    const F lead = a.c.back();
    for (auto& x : a.c) x = ring_divexact(x, lead);
  }
  return a;
}

/** p / gcd(p, p'): same real/complex roots, all simple. */
template <class F>
inline PolyT<F> squarefree_part(const PolyT<F>& p) {
  if (p.is_zero() || p.degree() == 0) return p;
  const PolyT<F> g = poly_gcd(p, p.derivative());
  return ring_divexact(p, g);
}

/** Coefficient-wise complex conjugation: conj(p)(xi) = conj(p(xi)) for real xi. */
inline Poly poly_conj(const Poly& p) {
  Poly r = p;
  for (auto& z : r.c) z = z.conj();
  return r;
}

/** Extract q with p(x) = x^v * q(x), q(0) != 0. Returns {v, q}; p must be nonzero. */
template <class F>
inline std::pair<int, PolyT<F>> strip_zero_root(const PolyT<F>& p) {
  assert(!p.is_zero());
  size_t v = 0;
  while (v < p.c.size() && ring_is_zero(p.c[v])) ++v;
  PolyT<F> q;
  q.c.assign(p.c.begin() + static_cast<long>(v), p.c.end());
  return {static_cast<int>(v), q};
}

}  // namespace decaycert
