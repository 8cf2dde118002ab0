/**
 * Frequency-pointwise Lyapunov functionals.
 *
 * Every functional has the shape
 *
 *     L(xi, U) = 1/2 |U|^2 + sum_t  eps^{p_t} * |xi|^{w_t} * pair_t(U),
 *
 * where each pair is either Re< P U, Q U > or xi * Im< P U, Q U > for real
 * constant matrices P, Q ( <x, y> = sum_i x_i conj(y_i) ).  Two syntheses
 * produce such functionals:
 *
 *  - synthesize_kalman_functional: the generic construction available as soon
 *    as the Kalman rank condition holds at order K.  Term k pairs
 *    B^s D^{k-1} U with B^s D^k U for the drift symbol D = (i xi A + B^a),
 *    weighted |xi|^{-2k} in the high-frequency regime and unweighted in the
 *    low-frequency one.  The i xi powers are expanded so that every stored
 *    term carries real matrices and an integer |xi| exponent.
 *  - synthesize_improved_functional: the tree-guided construction.  Every
 *    path node contributes the pair dictated by its case: left children give
 *    an Im pair against the transport letter, right children a Re pair
 *    against B^a, and mixed splits a three-pair group whose coupling
 *    coefficient m was solved during the walk.  Cancellations make the
 *    affected pairs unweighted and defer their epsilon exponent one step
 *    along the admissible sequence, exactly as recorded by the node's
 *    eps_shift bookkeeping.
 *
 * The value of epsilon is chosen by a deterministic sweep over
 * {2^-2, ..., 2^-12}: the largest value is kept whose equivalence constants
 * satisfy c1 >= 1/4 and whose time derivative passes a random-state
 * dissipativity spot check against the certified decay exponent.
 *
 * Evaluation is pure and thread-safe; synthesis is single-threaded and
 * deterministic.
 */
#pragma once

#include <Eigen/Dense>

#include <string>
#include <utility>
#include <vector>

#include "decaycert/matrix.hpp"
#include "decaycert/rational.hpp"
#include "decaycert/system.hpp"
#include "decaycert/tree.hpp"

namespace decaycert {

// ==============================================================================
// Admissible weight sequences
// ==============================================================================

/** Exponent schedule p_k (epsilon powers) and gaps q_k used by the improved
 *  functional; stored 0-based, so p[k-1] is the k-th exponent. */
struct AdmissibleSequence {
  int K = 0;
  std::vector<Rational> p;  // p[0] = 1
  std::vector<Rational> q;  // q[0] = 1/2
};

/**
 * Input:  length K >= 1.
 * Action: build p_1 = 1, q_1 = 1/2 and, for k >= 2, p_k = p_{k-1} +
 *         (3/4) q_{k-1}, q_k = q_{k-1}/2; verify the defining strict
 *         inequalities q_k < p_k - p_{k-1} < q_{k-1} exactly.
 * Output: the sequence of length K.
 * Errors: InvalidInput for K < 1; Internal if verification fails.
 */
AdmissibleSequence admissible_sequence(int K);

// ==============================================================================
// Functional representation
// ==============================================================================

enum class TermKind {
  RePair,    // Re< P U, Q U >
  ImXiPair,  // xi * Im< P U, Q U >  (one transport derivative in the pair)
};

struct Term {
  Rational eps_power;                // exponent of epsilon
  int xi_power = 0;                  // integer exponent of |xi| (negative in HF)
  RealMatrix left;                   // P, scalar coefficients folded in
  RealMatrix right;                  // Q
  TermKind kind = TermKind::RePair;

  // Display metadata; evaluation never reads these.  `left` equals `coeff`
  // times the matrix named by `left_label` when a label is present.
  Rational coeff = Rational(1);
  std::string left_label, right_label;
};

struct LyapunovFunctional {
  Regime regime = Regime::HF;
  int n = 0;                    // state dimension
  std::vector<Term> terms;
  bool includes_energy = true;  // leading 1/2 |U|^2; always present
  Rational epsilon;             // chosen by the sweep; 0 means plain energy

  // Sweep diagnostics for the stored epsilon.
  double c1 = 0.5;              // certified  c1 |U|^2 <= L
  double c2 = 0.5;              // certified  L <= c2 |U|^2
  double rate_constant = 0.0;   // empirical c in d/dt L <= -c * weight(xi) * L
  int decay_exponent = 0;       // exponent in weight(xi) = |xi|^{-2a} (HF) / |xi|^{2a} (LF)

  // Rendered display, one entry per line (see render_text / render_latex).
  std::vector<std::string> display_text, display_latex;
  std::string footnote_text, footnote_latex;  // e.g. the drift-symbol shorthand
};

/** The plain energy 1/2 |U|^2 as a functional (no terms, epsilon = 0). */
LyapunovFunctional energy_functional(Regime regime, int n);

// ==============================================================================
// Synthesis
// ==============================================================================

/**
 * Input:  validated system, order K >= 1, regime.
 * Action: check the Kalman condition at order K, expand the K pair terms of
 *         the generic functional into canonical real-matrix terms, pick the
 *         epsilon exponents m_k = k - k^2/(4K^2) (increasing and strictly
 *         concave so that consecutive gaps strictly shrink), and run the
 *         epsilon sweep with the fitted decay exponent of the regime.
 * Output: certified functional with sweep diagnostics and display lines.
 * Errors: InvalidInput (K < 1); KalmanViolated when the rank condition fails
 *         at K; NotEquivalent if no sweep value certifies the functional.
 */
LyapunovFunctional synthesize_kalman_functional(const SystemSpec& sys, int K, Regime regime);

/**
 * Input:  complete path report and an admissible sequence covering every
 *         node's epsilon index (level + eps_shift).
 * Action: emit the per-node pairs: Left -> Im< X U, xi X A U >, Right ->
 *         Re< X U, X B^a U >, mixed split -> the Im pair, the Re pair and the
 *         m-coupled pair Re< X A U, X B^a A U > (primary variant; the
 *         alternate variant couples Re< X A B^a U, X B^a U >).  Without a
 *         cancellation both mixed children share one epsilon index and the
 *         m pair appears once with coefficient 2m; with one, the B^a-child
 *         group becomes unweighted at the next epsilon index.  HF terms are
 *         weighted |xi|^{-2-2*loss} (|xi|^{-2*loss} when unweighted by a
 *         cancellation), LF terms |xi|^{+2*loss}.  Ends with the epsilon
 *         sweep against the tree certificate's exponent.
 * Output: certified functional with sweep diagnostics and display lines.
 * Errors: InvalidInput (incomplete report, sequence too short);
 *         NotEquivalent if no sweep value certifies the functional.
 */
LyapunovFunctional synthesize_improved_functional(const PathReport& report,
                                                  const AdmissibleSequence& seq);

// ==============================================================================
// Evaluation
// ==============================================================================

/**
 * Input:  functional, frequency xi in the functional's regime (HF: |xi| >= 1,
 *         LF: 0 < |xi| <= 1), state U of dimension n.
 * Action: evaluate 1/2|U|^2 plus every term at the stored epsilon.
 * Output: the (real) value.
 * Errors: RegimeMismatch when xi is outside the regime or zero; InvalidInput
 *         on dimension mismatch.
 */
double evaluate(const LyapunovFunctional& L, double xi, const Eigen::VectorXcd& U);

/**
 * Input:  functional, the system that transports the state, xi, U.
 * Action: differentiate L exactly along U' = -(i xi A + B^a + B^s) U by the
 *         product rule: with H(xi) the Hermitian matrix of L, the derivative
 *         is U^* (G^* H + H G) U.  No finite differencing.
 * Output: d/dt L at (xi, U).
 * Errors: RegimeMismatch as in evaluate; InvalidInput on dimension mismatch.
 */
double ddt_evaluate(const LyapunovFunctional& L, const SystemSpec& sys, double xi,
                    const Eigen::VectorXcd& U);

/** Hermitian matrix H(xi) with L(xi, U) = U^* H(xi) U (regime not checked). */
Eigen::MatrixXcd functional_matrix(const LyapunovFunctional& L, double xi);

/** Drift generator G(xi) = -(i xi A + B^a + B^s) as a complex matrix. */
Eigen::MatrixXcd drift_matrix(const SystemSpec& sys, double xi);

/**
 * Input:  functional with a fixed epsilon and nonempty frequency samples
 *         inside its regime.
 * Action: assemble H(xi) at every sample and take the extreme eigenvalues.
 * Output: (c1, c2) with c1 |U|^2 <= L(xi, U) <= c2 |U|^2 on the samples.
 * Errors: RegimeMismatch for samples outside the regime; InvalidInput when
 *         empty; NotEquivalent when c1 <= 0 (epsilon too large).
 */
std::pair<double, double> equivalence_constants(const LyapunovFunctional& L,
                                                const std::vector<double>& xi_samples);

/** The dyadic frequency samples used by the sweep: +/- 2^j, j = 0..6 (HF) or
 *  +/- 2^-j (LF). */
std::vector<double> regime_xi_samples(Regime regime);

// ==============================================================================
// Pretty-printing
// ==============================================================================

/** Multi-line plain-text rendering: energy line, one "+ ..." line per display
 *  group, optional footnote.  Ends with a newline. */
std::string render_text(const LyapunovFunctional& L);

/** Same layout in LaTeX. */
std::string render_latex(const LyapunovFunctional& L);

}  // namespace decaycert
