/**
 * Frequency-dependent Kalman rank condition and exponent estimation.
 *
 *  - build_kalman_stack: the (K+1)n x n symbol stack with block k equal to
 *    B^s (i xi A + B^a)^k.
 *  - check_kalman: smallest order K at which the stack has full generic rank
 *    AND no nonzero real frequency where the rank drops.
 *  - estimate_alpha / estimate_beta: high/low-frequency degeneracy exponents
 *    from log-log fits of the stack's smallest singular value.
 *  - *_from_gram_*: symbolic cross-checks of the exponents via the
 *    characteristic polynomial of the exact Gram matrix (n <= 4).
 */
#pragma once

#include <vector>

#include "decaycert/polymat.hpp"
#include "decaycert/system.hpp"

namespace decaycert {

struct FitDiagnostics {
  double slope = 0.0;         // raw least-squares slope before rounding
  double max_residual = 0.0;  // max deviation from the fitted line
};

struct ExponentEstimate {
  int value = 0;
  FitDiagnostics fit;
};

struct KalmanCertificate {
  bool holds = false;
  int K = -1;                    // smallest certifying order (when holds)
  std::vector<int> generic_ranks;  // generic rank at each order 0, 1, ...
  std::vector<AlgebraicInterval> exceptional_points;  // nonzero real rank drops
  int alpha = -1;
  int beta = -1;
  FitDiagnostics alpha_fit, beta_fit;
};

/** The (order+1)*n x n stack of blocks B^s (i xi A + B^a)^k, k = 0..order. */
PolyMatrix build_kalman_stack(const SystemSpec& sys, int order);

/** The drift symbol i xi A + B^a as a polynomial matrix. */
PolyMatrix drift_symbol(const SystemSpec& sys);

/**
 * Input:  system and a maximal order (kmax < 0 selects the default n-1).
 * Action: scan orders 0..kmax; at each order record the generic rank; once it
 *         reaches n, isolate the real exceptional points and accept the first
 *         order whose exceptional set is empty.
 * Output: certificate with rank fields filled (exponents left to the
 *         estimate_* functions); on failure, holds=false with the achieved
 *         rank profile and the last nonempty exceptional set for diagnosis.
 */
KalmanCertificate check_kalman(const SystemSpec& sys, int kmax = -1);

/**
 * High-frequency exponent alpha: minus the rounded slope of
 * log2 smin(W(xi)) vs log2 xi over xi = 2^j, j = 6..20 (last 8 points),
 * where W stacks |xi|^(-k) B^s(i xi A + B^a)^k. Requires the Kalman condition
 * to hold at this order. Throws NonIntegerSlope when the slope is more than
 * 0.15 from an integer.
 */
ExponentEstimate estimate_alpha(const SystemSpec& sys, int order);

/**
 * Low-frequency exponent beta: the rounded slope of log2 smin(M(xi)) vs
 * log2 xi over xi = 2^-j, j = 6..20 (last 8 points), unweighted stack.
 */
ExponentEstimate estimate_beta(const SystemSpec& sys, int order);

/**
 * Symbolic cross-check of alpha for n <= 4: degree counting on the two lowest
 * coefficients of the characteristic polynomial of the exact Gram matrix of
 * the weighted stack (the smallest eigenvalue is pinched between c0/c1 and
 * n*c0/c1, so the asymptotic exponent is their degree difference).
 */
int alpha_from_gram_degrees(const SystemSpec& sys, int order);

/** Symbolic cross-check of beta for n <= 4: valuation counting at xi = 0. */
int beta_from_gram_valuations(const SystemSpec& sys, int order);

/** check_kalman plus both exponent fits (the full certificate used by the CLI). */
KalmanCertificate full_kalman_certificate(const SystemSpec& sys, int kmax = -1);

}  // namespace decaycert
