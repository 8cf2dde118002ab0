/**
 * System data for one-dimensional partially dissipative hyperbolic systems
 *
 *     d_t U + A d_x U + (B^a + B^s) U = 0,   U(t,x) in R^n,
 *
 * with A symmetric (advection), B^a skew-symmetric (conservative coupling),
 * and B^s symmetric positive semidefinite and nonzero (partial dissipation).
 * All structure is validated in exact arithmetic at construction time.
 */
#pragma once

#include <string>

#include "decaycert/matrix.hpp"

namespace decaycert {

struct SystemSpec {
  int n = 0;
  RealMatrix A;       // symmetric n x n
  RealMatrix Ba;      // skew-symmetric n x n
  RealMatrix Bs;      // symmetric positive semidefinite n x n, nonzero
  std::string label;  // free text, used in reports
  double kappa = 0.0; // smallest positive eigenvalue of B^s, cached at validation
};

/**
 * Input:  label and the three matrices.
 * Action: check shapes, A = A^T, B^a = -(B^a)^T, B^s = (B^s)^T, B^s != 0, and
 *         positive semidefiniteness of B^s via the sign pattern of its exact
 *         characteristic polynomial; cache kappa (smallest positive eigenvalue
 *         of B^s, isolated by Sturm bisection).
 * Output: validated SystemSpec.
 * Errors: InvalidInput naming the first offending entry or failed check.
 */
SystemSpec make_system(std::string label, RealMatrix a, RealMatrix ba, RealMatrix bs);

}  // namespace decaycert
