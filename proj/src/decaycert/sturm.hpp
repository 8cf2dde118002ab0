/**
 * Real-root machinery for exact rational polynomials.
 *
 *  - Sturm chains with positive rescaling to tame coefficient growth.
 *  - Exact root counting on half-open intervals (a, b].
 *  - Isolation of all real roots into disjoint intervals (exact rational
 *    roots are detected and reported as points).
 *  - Smallest positive root with geometric 2^k bracketing, able to resolve
 *    roots as small as 2^-200 without ever leaving exact arithmetic.
 */
#pragma once

#include "decaycert/poly.hpp"

#include <vector>

namespace decaycert {

struct SturmChain {
  std::vector<RPoly> seq;  // seq[0] = p, seq[1] = p', then negated remainders
};

/** Positive rescale: divide by |leading coefficient| (sign-preserving). */
inline RPoly normalize_positive(RPoly p) {
  if (p.is_zero()) return p;
  Rational lead = abs(p.c.back());
  for (auto& x : p.c) x /= lead;
  return p;
}

inline SturmChain make_sturm(const RPoly& p) {
  SturmChain chain;
  chain.seq.push_back(normalize_positive(p));
  if (p.degree() <= 0) return chain;
  chain.seq.push_back(normalize_positive(p.derivative()));
  while (!chain.seq.back().is_zero() && chain.seq.back().degree() > 0) {
    const auto& s0 = chain.seq[chain.seq.size() - 2];
    const auto& s1 = chain.seq.back();
    auto [q, r] = s0.divmod(s1);
    (void)q;
    if (r.is_zero()) break;
    chain.seq.push_back(normalize_positive(-r));
  }
  return chain;
}

/** Number of sign changes in the chain evaluated at x (zeros skipped). */
inline int sturm_variations(const SturmChain& chain, const Rational& x) {
  int count = 0, prev = 0;
  for (const auto& s : chain.seq) {
    const int sg = sgn(s.eval(x));
    if (sg == 0) continue;
    if (prev != 0 && sg != prev) ++count;
    prev = sg;
  }
  return count;
}

/**
 * Input:  squarefree p, a < b.
 * Output: exact number of real roots in the half-open interval (a, b]:
 *         variations at a point match the right-sided limit, so a root at a
 *         is excluded and a root at b is included.
 */
inline int count_roots(const SturmChain& chain, const Rational& a, const Rational& b) {
  assert(a < b);
  return sturm_variations(chain, a) - sturm_variations(chain, b);
}

/** 1 + max|c_k|/|c_n|: every (real or complex) root has modulus below this. */
inline Rational cauchy_root_bound(const RPoly& p) {
  assert(!p.is_zero());
  Rational lead = abs(p.c.back());
  Rational mx(0);
  for (size_t k = 0; k + 1 < p.c.size(); ++k) {
    Rational a = abs(p.c[k]) / lead;
    if (a > mx) mx = a;
  }
  return mx + 1;
}

/** Half-open isolating interval (lo, hi] for one real root; exact <=> lo==hi. */
struct AlgebraicInterval {
  Rational lo, hi;
  bool exact = false;

  double approx() const { return exact ? to_double(lo) : (to_double(lo) + to_double(hi)) / 2.0; }
};

namespace detail {

/** Recursive bisection; p squarefree, p(a) != 0, p(b) != 0. */
inline void isolate_in(const SturmChain& chain, const RPoly& p, const Rational& a,
                       const Rational& b, std::vector<AlgebraicInterval>& out) {
  const int n = count_roots(chain, a, b);
  if (n == 0) return;
  if (n == 1) {
    out.push_back({a, b, false});
    return;
  }
  Rational mid = (a + b) / 2;
  if (sgn(p.eval(mid)) == 0) {
    out.push_back({mid, mid, true});
    // With variations evaluated at a root, (x, mid] counts include mid itself,
    // so back off to lft < mid whose bracket holds only the exact root, then
    // recurse strictly to its left.
    Rational eps = (mid - a) / 2;
    Rational lft = mid - eps;
    while (sgn(p.eval(lft)) == 0 || count_roots(chain, lft, mid) > 1) {
      eps /= 2;
      lft = mid - eps;
    }
    isolate_in(chain, p, a, lft, out);
    // A root used as a left endpoint is safe: variations at the root match the
    // right-sided limit, so (mid, b] is counted without it.
    isolate_in(chain, p, mid, b, out);
    return;
  }
  isolate_in(chain, p, a, mid, out);
  isolate_in(chain, p, mid, b, out);
}

}  // namespace detail

/**
 * Input:  squarefree nonzero p.
 * Output: disjoint isolating intervals for every real root of p, sorted by
 *         position; rational roots hit by a bisection midpoint come back exact.
 */
inline std::vector<AlgebraicInterval> isolate_real_roots(const RPoly& p) {
  std::vector<AlgebraicInterval> out;
  if (p.degree() <= 0) return out;
  const Rational bound = cauchy_root_bound(p);
  Rational a = -bound, b = bound;
  // The Cauchy bound is strict, so p(a), p(b) != 0.
  const SturmChain chain = make_sturm(p);
  detail::isolate_in(chain, p, a, b, out);
  std::sort(out.begin(), out.end(),
            [](const AlgebraicInterval& x, const AlgebraicInterval& y) { return x.lo < y.lo; });
  return out;
}

/** Shrink an isolating interval until its width is below 2^-precision_bits. */
inline AlgebraicInterval refine_interval(const RPoly& p, AlgebraicInterval iv, int precision_bits) {
  if (iv.exact) return iv;
  const SturmChain chain = make_sturm(p);
  Rational width = iv.hi - iv.lo;
  Rational target = rat(1);
  for (int i = 0; i < precision_bits; ++i) target /= 2;
  while (width > target) {
    Rational mid = (iv.lo + iv.hi) / 2;
    if (sgn(p.eval(mid)) == 0) return {mid, mid, true};
    if (count_roots(chain, iv.lo, mid) == 1)
      iv.hi = mid;
    else
      iv.lo = mid;
    width = iv.hi - iv.lo;
  }
  return iv;
}

/**
 * Input:  nonzero p with p(0) != 0 and at least one positive real root.
 * Action: geometric descent over brackets (2^{e-1}, 2^e] followed by bisection.
 * Output: isolating interval of the smallest positive root, refined until
 *         its log2-width is below log2_tolerance_bits.
 *
 * Never converts to floating point, so roots of order 2^-200 are exact.
 */
inline std::optional<AlgebraicInterval> smallest_positive_root(const RPoly& p,
                                                               int log2_tolerance_bits = 20) {
  assert(!p.is_zero() && sgn(p.coeff(0)) != 0);
  const RPoly sf = squarefree_part(p);
  const SturmChain chain = make_sturm(sf);
  const Rational bound = cauchy_root_bound(sf);
  if (sturm_variations(chain, rat(0)) - sturm_variations(chain, bound) <= 0) return std::nullopt;

  // Find e with: no roots in (0, 2^{e-1}], at least one in (0, 2^e].
  // Variations at a root match the right-sided limit, so V(0) - V(x) counts
  // roots in (0, x] even when x is itself a root.
  const int total_at_zero = sturm_variations(chain, rat(0));
  Rational hi(1);
  while (hi < bound) hi *= 2;
  Rational lo = hi / 2;
  while (true) {
    const int in_and_below = total_at_zero - sturm_variations(chain, lo);
    if (sgn(sf.eval(lo)) == 0 && in_and_below == 1) return AlgebraicInterval{lo, lo, true};
    if (in_and_below == 0) break;
    hi = lo;
    lo /= 2;
  }
  // Smallest positive root sits in (lo, hi]; bisect a fixed number of times.
  // A root hit by a midpoint is only taken when nothing lies left of it.
  AlgebraicInterval iv{lo, hi, false};
  for (int i = 0; i < log2_tolerance_bits; ++i) {
    Rational mid = (iv.lo + iv.hi) / 2;
    const int in_left = sturm_variations(chain, iv.lo) - sturm_variations(chain, mid);
    if (sgn(sf.eval(mid)) == 0 && in_left == 1) return AlgebraicInterval{mid, mid, true};
    if (in_left > 0)
      iv.hi = mid;
    else
      iv.lo = mid;
  }
  return iv;
}

}  // namespace decaycert
