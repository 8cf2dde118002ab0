/**
 * Smallest singular value of an exact complex matrix, with a log2 channel
 * that stays accurate far below double-precision underflow.
 */
#pragma once

#include "decaycert/matrix.hpp"

namespace decaycert {

struct SminResult {
  double smin = 0.0;
  double log2_smin = 0.0;  // -infinity when smin == 0 exactly
};

/**
 * Input:  complex rational matrix M (any shape; singular values taken on the
 *         column side, so sigma_min is the smallest root of M^H M).
 * Action: double-precision Hermitian eigensolve of the exact Gram matrix.
 *         When the smallest eigenvalue falls below 1e-10 of the largest the
 *         double result is dominated by roundoff, so it is recomputed exactly:
 *         characteristic polynomial of the rational Gram matrix, zero roots
 *         stripped, smallest positive root isolated by Sturm bisection.
 *         The exact path is available for cols <= 8.
 * Output: sigma_min and log2(sigma_min).
 */
SminResult smin_const(const ConstMatrix& m);

}  // namespace decaycert
