/**
 * Generic rank and exceptional real points of symbol matrices.
 *
 * Both operations stay in exact arithmetic end to end: rank sampling uses
 * rational points with a fraction-free symbolic fallback, and exceptional
 * points come out as exact isolating intervals of a real polynomial.
 */
#include "decaycert/polymat.hpp"

#include <algorithm>
#include <random>
#include <vector>

#include "decaycert/errors.hpp"

namespace decaycert {
namespace {

// === Sampling helpers ======================================================

/**
 * Three fixed pseudo-random nonzero rationals with numerator and denominator
 * bounded by 1e4. The seed is a constant so rank decisions are reproducible.
 */
const std::vector<Rational>& sample_points() {
  static const std::vector<Rational> pts = [] {
    std::mt19937_64 rng(0x8d2f1c3a5e7b9041ULL);
    std::uniform_int_distribution<long> mag(1, 10000);
    std::uniform_int_distribution<int> coin(0, 1);
    std::vector<Rational> out;
    while (out.size() < 3) {
      const long num = coin(rng) ? mag(rng) : -mag(rng);
      const Rational x = rat(num, mag(rng));
      if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
    }
    return out;
  }();
  return pts;
}

int max_entry_degree(const PolyMatrix& m) {
  int d = 0;
  for (const Poly& p : m.e) d = std::max(d, p.degree());
  return d;
}

/** Integer evaluation grid 0, 1, -1, 2, -2, ... of the requested size. */
std::vector<Rational> integer_grid(int count) {
  std::vector<Rational> ts;
  ts.reserve(static_cast<size_t>(count));
  for (int k = 0; static_cast<int>(ts.size()) < count; ++k) {
    if (k == 0)
      ts.push_back(rat(0));
    else {
      ts.push_back(rat(k));
      if (static_cast<int>(ts.size()) < count) ts.push_back(rat(-k));
    }
  }
  return ts;
}

/**
 * Input:  M(xi) with full generic column rank.
 * Action: evaluate det(M(t)^H M(t)) on an integer grid large enough for the
 *         degree bound 2*deg(M)*cols, then interpolate.
 * Output: the real polynomial D(xi) = det(M^H M)(xi), which vanishes exactly
 *         at the real points where the columns of M become dependent.
 */
RPoly gram_det_poly(const PolyMatrix& m) {
  const int bound = 2 * max_entry_degree(m) * m.cols;
  const std::vector<Rational> ts = integer_grid(bound + 1);
  std::vector<Rational> ys;
  ys.reserve(ts.size());
  for (const Rational& t : ts) {
    const ConstMatrix mt = eval_at(m, t);
    const GaussianRational d = bareiss_det(conj_transpose(mt) * mt);
    if (sgn(d.im) != 0)
      throw CertError(ErrorCode::Internal, "Gram determinant evaluated to a non-real value");
    ys.push_back(d.re);
  }
  return interpolate(ts, ys);
}

/**
 * A rational point where M attains its full generic column rank. Tries the
 * fixed random points first, then consecutive integers; more candidates than
 * the possible number of rank-drop points are available, so this terminates.
 */
Rational pick_regular_point(const PolyMatrix& m) {
  std::vector<Rational> candidates = sample_points();
  const int extra = 2 * max_entry_degree(m) * m.cols + 2;
  for (int k = 1; k <= extra; ++k) candidates.push_back(rat(k));
  for (const Rational& t : candidates)
    if (rank_const(eval_at(m, t)) == m.cols) return t;
  throw CertError(ErrorCode::Internal, "no regular sample point found for full-rank matrix");
}

/**
 * Greedy basis-row selection on an evaluated matrix of full column rank:
 * scan rows (forward or backward) and keep each row that raises the rank of
 * the selection, stopping once cols rows are chosen.
 */
std::vector<int> greedy_basis_rows(const ConstMatrix& mt, bool reverse) {
  std::vector<int> chosen;
  ConstMatrix sel(0, mt.cols);
  for (int s = 0; s < mt.rows && static_cast<int>(chosen.size()) < mt.cols; ++s) {
    const int i = reverse ? mt.rows - 1 - s : s;
    ConstMatrix trial(sel.rows + 1, mt.cols);
    trial.e = sel.e;
    for (int j = 0; j < mt.cols; ++j) trial.e.push_back(mt.at(i, j));
    if (bareiss_rank(trial) == trial.rows) {
      sel = trial;
      chosen.push_back(i);
    }
  }
  if (static_cast<int>(chosen.size()) != mt.cols)
    throw CertError(ErrorCode::Internal, "row selection failed on a full-rank evaluation");
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

PolyMatrix take_rows(const PolyMatrix& m, const std::vector<int>& rows) {
  PolyMatrix out(static_cast<int>(rows.size()), m.cols);
  for (size_t r = 0; r < rows.size(); ++r)
    for (int j = 0; j < m.cols; ++j) out.at(static_cast<int>(r), j) = m.at(rows[r], j);
  return out;
}

/** Whether the half-open interval (lo, hi] contains zero. */
bool contains_zero(const AlgebraicInterval& iv) {
  if (iv.exact) return sgn(iv.lo) == 0;
  return sgn(iv.lo) < 0 && sgn(iv.hi) >= 0;
}

}  // namespace

// === Generic rank ==========================================================

int generic_rank(const PolyMatrix& m) {
  if (m.rows == 0 || m.cols == 0) return 0;
  const std::vector<Rational>& pts = sample_points();
  const int r0 = rank_const(eval_at(m, pts[0]));
  const int r1 = rank_const(eval_at(m, pts[1]));
  const int r2 = rank_const(eval_at(m, pts[2]));
  if (r0 == r1 && r1 == r2) return r0;
  // Sampling hit a rank-drop point; settle it by fraction-free elimination
  // directly over the polynomial ring.
  return bareiss_rank(m);
}

// === Exceptional real points ===============================================

std::vector<AlgebraicInterval> exceptional_real_points(const PolyMatrix& m) {
  const int n = m.cols;
  if (generic_rank(m) != n)
    throw CertError(ErrorCode::Internal,
                    "exceptional_real_points requires full generic column rank");

  // Rank-drop locus: real roots of D = det(M^H M). Strip the root at zero
  // (the symbol is only considered at xi != 0) before isolating.
  const RPoly full = gram_det_poly(m);
  if (full.is_zero())
    throw CertError(ErrorCode::Internal, "Gram determinant vanished identically");
  const RPoly stripped = strip_zero_root(full).second;
  const RPoly sf = squarefree_part(stripped);
  std::vector<AlgebraicInterval> roots = isolate_real_roots(sf);

  // sf(0) != 0, so every interval can be shrunk away from zero.
  for (AlgebraicInterval& iv : roots) {
    int bits = 8;
    while (contains_zero(iv)) {
      iv = refine_interval(sf, iv, bits);
      bits *= 2;
    }
  }

  // Cross-check: a rank drop kills every maximal minor, so each root interval
  // must also contain a root of |det S|^2 for two independent row selections.
  const Rational t0 = pick_regular_point(m);
  const ConstMatrix mt0 = eval_at(m, t0);
  const std::vector<std::vector<int>> selections = {greedy_basis_rows(mt0, false),
                                                    greedy_basis_rows(mt0, true)};
  for (const std::vector<int>& rows : selections) {
    const RPoly h = squarefree_part(gram_det_poly(take_rows(m, rows)));
    const SturmChain chain = make_sturm(h);
    for (const AlgebraicInterval& iv : roots) {
      const bool hit = iv.exact ? sgn(h.eval(iv.lo)) == 0 : count_roots(chain, iv.lo, iv.hi) >= 1;
      if (!hit)
        throw CertError(ErrorCode::Internal,
                        "row-selection cross-check missed a candidate exceptional point");
    }
  }
  return roots;
}

}  // namespace decaycert
