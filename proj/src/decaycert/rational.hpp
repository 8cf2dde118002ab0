/**
 * Exact scalar arithmetic for the certification engine.
 *
 *  - Rational: arbitrary-precision rationals (GMP mpq_class).
 *  - GaussianRational: the field Q(i), used for matrices evaluated at
 *    i*xi with rational xi.
 *  - Parsing/printing of "p/q" strings used by the JSON system files.
 *  - log2_of_rational: exact-to-double-precision base-2 logarithm that
 *    cannot underflow (needed for singular values as small as 2^-160).
 */
#pragma once

#include <gmpxx.h>

#include <cassert>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>

namespace decaycert {

using Rational = mpq_class;

// ==============================================================================
// Construction helpers
// ==============================================================================

/** Canonicalized rational from a numerator/denominator pair. */
inline Rational rat(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rat: zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/** Parse "p", "-p", or "p/q" (optional surrounding spaces). Throws on junk. */
inline Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw std::invalid_argument("parse_rational: empty string");
  const auto slash = s.find('/');
  mpz_class num, den(1);
  const std::string num_part = (slash == std::string::npos) ? s : s.substr(0, slash);
  if (num_part.empty() || mpz_set_str(num.get_mpz_t(), num_part.c_str(), 10) != 0)
    throw std::invalid_argument("parse_rational: bad numerator in '" + text + "'");
  if (slash != std::string::npos) {
    const std::string den_part = s.substr(slash + 1);
    if (den_part.empty() || mpz_set_str(den.get_mpz_t(), den_part.c_str(), 10) != 0)
      throw std::invalid_argument("parse_rational: bad denominator in '" + text + "'");
    if (den == 0) throw std::invalid_argument("parse_rational: zero denominator in '" + text + "'");
  }
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/** Render as "p" or "p/q" (canonical form, denominator > 0). */
inline std::string rational_to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline double to_double(const Rational& r) { return r.get_d(); }

/**
 * Input:  nonzero rational r.
 * Output: log2(|r|) as a double, accurate to ~1e-15 relative, computed from
 *         the bit representation so that values like 2^-5000 do not underflow.
 */
inline double log2_of_rational(const Rational& r) {
  assert(sgn(r) != 0);
  signed long en = 0, ed = 0;
  const double dn = mpz_get_d_2exp(&en, r.get_num().get_mpz_t());
  const double dd = mpz_get_d_2exp(&ed, r.get_den().get_mpz_t());
  return (std::log2(std::fabs(dn)) + static_cast<double>(en)) -
         (std::log2(std::fabs(dd)) + static_cast<double>(ed));
}

// ==============================================================================
// GaussianRational: the field Q(i)
// ==============================================================================

struct GaussianRational {
  Rational re, im;

  GaussianRational() : re(0), im(0) {}
  GaussianRational(const Rational& r) : re(r), im(0) {}          // NOLINT(google-explicit-constructor)
  GaussianRational(long v) : re(v), im(0) {}                     // NOLINT(google-explicit-constructor)
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  static GaussianRational i() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_real() const { return sgn(im) == 0; }

  GaussianRational conj() const { return {re, -im}; }

  /** |z|^2 = re^2 + im^2, an exact nonnegative rational. */
  Rational norm2() const { return re * re + im * im; }

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
    const Rational n2 = b.norm2();
    assert(sgn(n2) != 0 && "GaussianRational: division by zero");
    const GaussianRational num = a * b.conj();
    return {num.re / n2, num.im / n2};
  }
  GaussianRational& operator+=(const GaussianRational& o) { return *this = *this + o; }
  GaussianRational& operator-=(const GaussianRational& o) { return *this = *this - o; }
  GaussianRational& operator*=(const GaussianRational& o) { return *this = *this * o; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }
};

inline std::string to_string(const GaussianRational& z) {
  if (z.is_real()) return rational_to_string(z.re);
  std::string s = rational_to_string(z.re);
  s += (sgn(z.im) < 0 ? " - " : " + ");
  Rational a = abs(z.im);
  s += rational_to_string(a) + "*i";
  return s;
}

// ==============================================================================
// Ring-operation overloads shared by the templated linear algebra
// ==============================================================================

inline bool ring_is_zero(const Rational& x) { return sgn(x) == 0; }
inline bool ring_is_zero(const GaussianRational& x) { return x.is_zero(); }

/** Exact division; the quotient must lie in the same ring (fields: always). */
inline Rational ring_divexact(const Rational& a, const Rational& b) { return a / b; }
inline GaussianRational ring_divexact(const GaussianRational& a, const GaussianRational& b) {
  return a / b;
}

inline Rational ring_div_int(const Rational& a, long k) { return a / Rational(k); }
inline GaussianRational ring_div_int(const GaussianRational& a, long k) {
  return {a.re / Rational(k), a.im / Rational(k)};
}

}  // namespace decaycert
