/**
 * Polynomial-matrix operations over Q(i)[xi].
 *
 * Public surface of the exact symbol-matrix layer:
 *  - poly_mat_mul / eval_at: ring operations on symbol matrices.
 *  - rank_const: exact rank of a constant complex-rational matrix.
 *  - generic_rank: rank over the fraction field Q(i)(xi), decided by random
 *    rational evaluations with a fully symbolic fallback.
 *  - exceptional_real_points: the finitely many real xi where the rank drops
 *    below the generic one, isolated exactly (Gram determinant + Sturm).
 */
#pragma once

#include "decaycert/charpoly.hpp"
#include "decaycert/interp.hpp"
#include "decaycert/matrix.hpp"
#include "decaycert/rank.hpp"
#include "decaycert/sturm.hpp"

namespace decaycert {

/** Entrywise product of polynomial matrices (inner dimensions must agree). */
inline PolyMatrix poly_mat_mul(const PolyMatrix& a, const PolyMatrix& b) { return a * b; }

/** Evaluate every entry at the real rational point xi. */
inline ConstMatrix eval_at(const PolyMatrix& m, const Rational& xi) {
  ConstMatrix r(m.rows, m.cols);
  const GaussianRational x(xi);
  for (size_t k = 0; k < m.e.size(); ++k) r.e[k] = m.e[k].eval(x);
  return r;
}

/** Exact rank of a constant matrix over Q(i). */
inline int rank_const(const ConstMatrix& m) { return bareiss_rank(m); }

/** Exact rank of a constant matrix over Q. */
inline int rank_real(const RealMatrix& m) { return bareiss_rank(m); }

/**
 * Rank of M(xi) over the fraction field Q(i)(xi).
 *
 * Evaluates at three fixed pseudo-random rational points (numerators and
 * denominators bounded by 1e4) and takes the maximum; specializing xi never
 * increases rank, so the maximum is a lower bound that generically equals the
 * answer. If the three samples disagree, falls back to fraction-free
 * elimination directly over the polynomial ring, which is exact but slower.
 */
int generic_rank(const PolyMatrix& m);

/**
 * Input:  M(xi) with generic_rank(M) == M.cols (precondition).
 * Action: interpolate D(xi) = det(M^H M)(xi) exactly from integer samples,
 *         take the squarefree part, isolate its real roots, and discard
 *         xi = 0 (the symbol is only considered on R \ {0}).
 *         Cross-check: every root interval must also kill the determinants of
 *         two independent square row selections (any rank drop kills every
 *         maximal minor).
 * Output: isolating intervals for all real exceptional points, sorted.
 */
std::vector<AlgebraicInterval> exceptional_real_points(const PolyMatrix& m);

}  // namespace decaycert
