/**
 * Minimal arbitrary-precision real and complex arithmetic on MPFR.
 *
 * Spectral decay rates shrink like |xi|^(-2a) while the matrix entries grow
 * like |xi|, so at the top of the fitting window the interesting real parts
 * sit ~60 binary digits below the matrix norm — out of reach for double
 * eigensolvers.  Root-finding on the exact characteristic polynomial at a
 * fixed 320-bit working precision recovers them with a wide margin.
 *
 * Only the operations the root finder needs are wrapped: ring arithmetic,
 * comparisons, absolute value, and conversions from the exact types.  All
 * rounding is to nearest.
 */
#pragma once

#include <mpfr.h>

#include <utility>

#include "decaycert/rational.hpp"

namespace decaycert {

class BigFloat {
 public:
  static constexpr mpfr_prec_t kPrecision = 320;

  BigFloat() { mpfr_init2(v_, kPrecision); mpfr_set_zero(v_, 1); }
  explicit BigFloat(double d) {
    mpfr_init2(v_, kPrecision);
    mpfr_set_d(v_, d, MPFR_RNDN);
  }
  explicit BigFloat(long n) {
    mpfr_init2(v_, kPrecision);
    mpfr_set_si(v_, n, MPFR_RNDN);
  }
  explicit BigFloat(const Rational& q) {
    mpfr_init2(v_, kPrecision);
    mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
  }
  BigFloat(const BigFloat& o) {
    mpfr_init2(v_, kPrecision);
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  BigFloat(BigFloat&& o) noexcept {
    mpfr_init2(v_, kPrecision);
    mpfr_swap(v_, o.v_);
  }
  BigFloat& operator=(const BigFloat& o) {
    if (this != &o) mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator=(BigFloat&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(v_); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }

  friend BigFloat operator+(const BigFloat& a, const BigFloat& b) {
    BigFloat r;
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator-(const BigFloat& a, const BigFloat& b) {
    BigFloat r;
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator*(const BigFloat& a, const BigFloat& b) {
    BigFloat r;
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator/(const BigFloat& a, const BigFloat& b) {
    BigFloat r;
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator-(const BigFloat& a) {
    BigFloat r;
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  BigFloat& operator+=(const BigFloat& o) {
    mpfr_add(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }

  friend bool operator<(const BigFloat& a, const BigFloat& b) {
    return mpfr_cmp(a.v_, b.v_) < 0;
  }
  friend bool operator>(const BigFloat& a, const BigFloat& b) { return b < a; }
  friend bool operator<=(const BigFloat& a, const BigFloat& b) {
    return mpfr_cmp(a.v_, b.v_) <= 0;
  }

  friend BigFloat abs(const BigFloat& a) {
    BigFloat r;
    mpfr_abs(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat hypot(const BigFloat& a, const BigFloat& b) {
    BigFloat r;
    mpfr_hypot(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  /** 2^e as a BigFloat, exact. */
  static BigFloat pow2(long e) {
    BigFloat r(1L);
    mpfr_mul_2si(r.v_, r.v_, e, MPFR_RNDN);
    return r;
  }

 private:
  mpfr_t v_;
};

struct BigComplex {
  BigFloat re, im;

  BigComplex() = default;
  BigComplex(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {}
  explicit BigComplex(const GaussianRational& z) : re(z.re), im(z.im) {}
  static BigComplex from_double(double r, double i) {
    return BigComplex(BigFloat(r), BigFloat(i));
  }

  friend BigComplex operator+(const BigComplex& a, const BigComplex& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend BigComplex operator-(const BigComplex& a, const BigComplex& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend BigComplex operator*(const BigComplex& a, const BigComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend BigComplex operator/(const BigComplex& a, const BigComplex& b) {
    const BigFloat d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
  }

  friend BigFloat abs(const BigComplex& z) { return hypot(z.re, z.im); }
};

}  // namespace decaycert
