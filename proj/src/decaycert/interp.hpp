/**
 * Exact polynomial interpolation (Newton divided differences).
 *
 * Used to reconstruct Gram determinants D(xi) = det(M(xi)^H M(xi)) from
 * evaluations at integer sample points: D has known degree bound, so enough
 * samples pin it down exactly over the rationals.
 */
#pragma once

#include "decaycert/poly.hpp"

namespace decaycert {

/**
 * Input:  distinct nodes xs and values ys (|xs| == |ys| >= 1).
 * Output: the unique polynomial of degree < |xs| through all points.
 */
inline RPoly interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys) {
  assert(!xs.empty() && xs.size() == ys.size());
  const size_t n = xs.size();
  // Divided-difference coefficients, in place.
  std::vector<Rational> dd = ys;
  for (size_t level = 1; level < n; ++level)
    for (size_t i = n - 1; i >= level; --i) {
      dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level]);
      if (i == level) break;
    }
  // Horner assembly of the Newton form.
  RPoly p;
  for (size_t i = n; i-- > 0;) {
    RPoly shifted({-xs[i], rat(1)});
    p = p * shifted + RPoly(dd[i]);
  }
  return p;
}

}  // namespace decaycert
