/**
 * Binary-tree synthesis of improved decay exponents.
 *
 * Starting from the root matrix B^s, the path construction walks a binary
 * tree whose left edges right-multiply by A and whose right edges
 * right-multiply by B^a.  Each chosen node widens the row space in which
 * dissipation is visible; exact rank comparisons decide the branching,
 * identically-vanishing-pairing tests decide whether a frequency-weight
 * discrepancy can be avoided (a "cancellation"), and the discrepancy
 * bookkeeping along the path yields the decay certificate.
 *
 *  - classify_node:            five-way rank-based branching decision
 *  - span_coefficients:        exact membership in the span of chosen nodes
 *  - solve_mixing_coefficient: scalar m coupling the two mixed-node terms
 *  - check_cancellation:       identically-vanishing-pairing tests
 *  - run_tree:                 full deterministic path construction
 *  - certificate_from_path:    discrepancy bookkeeping -> decay exponent
 *  - rank_one_fast_path:       kernel shortcuts when B^s has rank one
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "decaycert/matrix.hpp"
#include "decaycert/system.hpp"

namespace decaycert {

// ==============================================================================
// Domain types
// ==============================================================================

/** Frequency regime targeted by an analysis. */
enum class Regime { HF, LF };

/** Branching decision at a node: which children grow the stacked rank. */
enum class NodeCase { Left, Right, Both, Either, Stop };

/** How a node entered the path. */
enum class CaseTag { Root, Left, Right, MixedLeft, MixedRight, EitherLeft, EitherRight };

/**
 * The two correctors available at a mixed (two-child) node.  Primary couples
 * <XA d_x U, (m XB^aA^2 - XB^a) U>; Alternate couples
 * <(XA - m XAB^aA) d_x U, XB^a U>.  Primary is preferred when both sets of
 * span prerequisites hold.
 */
enum class MixedVariant { Primary, Alternate };

/** The identically-vanishing pairings the engine can test. */
enum class CancellationKind {
  RightPath,             // the two derivative pairings of a right step cancel in sum
  MixingPrimary,         // primary mixed-node corrector pairing at a given m
  MixingAlternate,       // alternate mixed-node corrector pairing at a given m
  DiscrepancyPrimary,    // <(X - m XA^2) U, XB^aA d_x U> = 0
  DiscrepancyAlternate,  // <(X - m XAB^a) U, XB^aA d_x U> = 0
};

/** Why the improved analysis fell back to the generic certificate. */
enum class FallbackReason {
  None,
  MixedNodeLowFrequency,   // a mixed node appeared in the low-frequency walk
  MixedAssumptionsFailed,  // neither corrector's prerequisites held at a mixed node
};

/** Origin of a decay exponent. */
enum class Provenance { KalmanGeneric, TreeImproved };

/**
 * One chosen node of the path.  The root is the node with the empty word.
 *
 * Bookkeeping invariants:
 *  - matrix equals B^s right-multiplied by the word letters in order;
 *  - accumulated_loss = parent's accumulated_loss + parent's discrepancy,
 *    i.e. the sum of discrepancies along the proper ancestry;
 *  - the functional attached to the node uses the admissible epsilon power
 *    with index level + eps_shift.
 */
struct Node {
  std::string word;           // letters over {'A','B'} applied to B^s, in order
  ConstMatrix matrix;         // B^s times the word letters
  int level = 0;              // == word length
  int parent = -1;            // index into PathReport::nodes, -1 for the root
  CaseTag case_tag = CaseTag::Root;
  int discrepancy = 0;        // delta in {0,1}, fixed when the node is created
  bool cancellation = false;  // a vanishing pairing removed the usual discrepancy
  int accumulated_loss = 0;   // sum of ancestors' discrepancies
  int extra_weight = 0;       // 1 when the recovered norm carries the extra xi-weight
  int eps_shift = 0;          // cancellation at a mixed split defers epsilon one step
};

/** How a mixed (two-child) split was resolved. */
struct MixedData {
  int parent = -1;  // index of the split node in PathReport::nodes
  Rational m;       // mixing coefficient coupling the two child functionals
  MixedVariant variant = MixedVariant::Primary;
  bool cancellation = false;     // discrepancy pairing vanished at this m
  bool m_unconstrained = false;  // mixing pairing vanished for every m; m = 0 chosen
};

/** The chosen path with its bookkeeping. */
struct PathReport {
  SystemSpec sys;
  Regime regime = Regime::HF;
  std::vector<Node> nodes;  // creation order; nodes[0] is the root B^s
  int final_rank = 0;       // rank of the stacked chosen matrices
  bool complete = false;    // final_rank == sys.n
  std::vector<MixedData> mixed_data;
  FallbackReason fallback = FallbackReason::None;
};

/** Decay exponent with its origin and the per-node weights behind it. */
struct DecayCertificate {
  Regime regime = Regime::HF;
  int exponent = 0;  // alpha-tilde (HF) or beta-tilde (LF)
  Provenance provenance = Provenance::TreeImproved;
  std::vector<int> exponent_per_node;  // gamma per node, aligned with PathReport::nodes
};

/** Outcome of one two-kernel sufficient-condition test. */
struct KernelMembership {
  bool in_first = false;
  bool in_second = false;
  bool satisfied() const { return in_first || in_second; }
};

/** Kernel shortcuts available when B^s = scale * p p^T has rank one. */
struct RankOneReport {
  RealMatrix p;    // n x 1 column with B^s = scale * p p^T, not normalized
  Rational scale;  // 1 / (p^T B^s-diagonal pivot); positive for semidefinite B^s
  KernelMembership mixing_primary;
  KernelMembership mixing_alternate;
  KernelMembership discrepancy_primary;
  KernelMembership discrepancy_alternate;
};

// ==============================================================================
// Operations
// ==============================================================================

/**
 * Input:  the chosen node matrices so far (X last) and the node X to branch
 *         from.
 * Action: compare the exact ranks of the stack extended by X*A, by X*B^a,
 *         and by both.
 * Output: the branching decision.  The regime matters only in the corner
 *         where both children grow the rank by different amounts yet the
 *         joint stack adds nothing beyond the larger: the scan preference
 *         (left in high frequencies, right in low) picks the child.
 * Errors: InvalidInput when X is not the last element of the stack.
 */
NodeCase classify_node(const std::vector<ConstMatrix>& stack, const ConstMatrix& X,
                       const SystemSpec& sys, Regime regime);

/**
 * Input:  target matrix X and basis matrices of equal shape.
 * Action: vectorize and solve the exact linear system expressing X as a
 *         linear combination of the basis matrices.
 * Output: the coefficients, or nullopt when X lies outside the span.
 * Errors: InvalidInput on shape mismatch.
 */
std::optional<std::vector<GaussianRational>> span_coefficients(
    const ConstMatrix& X, const std::vector<ConstMatrix>& basis);

/**
 * Input:  node matrix X and the corrector variant.
 * Action: find the scalar m for which the variant's coupling pairing
 *         vanishes identically in U.  Vanishing for every U is equivalent to
 *         symmetry of the corresponding product matrix, which is linear in m
 *         and solved entrywise in exact arithmetic.
 * Output: the unique m; nullopt when the pairing vanishes for every m (the
 *         caller conventionally proceeds with m = 0).
 * Errors: NoSolution when no real m makes the pairing vanish.
 */
std::optional<Rational> solve_mixing_coefficient(const ConstMatrix& X, const SystemSpec& sys,
                                                 MixedVariant variant);

/**
 * Input:  node matrix X, coefficient m (ignored for RightPath), pairing kind.
 * Action: test whether the pairing vanishes identically in U via the
 *         integration-by-parts criterion: <P d_x U, Q U> = 0 for every U
 *         if and only if P^T Q is symmetric.
 * Output: true iff the pairing vanishes identically.  Span side conditions
 *         that accompany a cancellation are the caller's responsibility.
 */
bool check_cancellation(const ConstMatrix& X, const Rational& m, const SystemSpec& sys,
                        CancellationKind kind);

/**
 * Input:  validated system and target regime.
 * Action: walk the tree from the root B^s, leftmost node first: classify
 *         each queued node, append the children dictated by the case with
 *         their discrepancy / cancellation / extra-weight bookkeeping, and
 *         stop when the stacked rank reaches n or a fallback is forced.
 * Output: the chosen path.  Deterministic in (sys, regime).
 * Errors: KalmanViolated when the queue drains with rank < n (the system
 *         fails the rank condition the walk presupposes).
 */
PathReport run_tree(const SystemSpec& sys, Regime regime);

/**
 * Input:  a finished path report.
 * Action: recompute the path's bookkeeping with every cancellation flag
 *         forced off (discrepancies, losses, extra weights, epsilon shifts).
 * Output: the pessimistic path; cancellations may only lower the exponent.
 */
PathReport path_without_cancellations(const PathReport& report);

/**
 * Input:  a finished path report (complete, or fallback forced).
 * Action: per node compute gamma = accumulated_loss, plus 1 when the
 *         recovered norm carries the extra frequency weight; the certificate
 *         exponent is the maximum gamma over the chosen nodes.  On fallback
 *         the exponent is refit from the generic rank-condition stack.
 * Output: decay certificate (alpha-tilde for HF, beta-tilde for LF).
 * Errors: KalmanViolated when a fallback certificate is requested for a
 *         system that fails the rank condition; NonIntegerSlope propagated
 *         from the generic exponent fit.
 */
DecayCertificate certificate_from_path(const PathReport& report);

/**
 * Input:  system whose B^s has rank one, node matrix X = B^s W, coefficient m.
 * Action: factor B^s = scale * p p^T exactly, transport q = X^T p, and test
 *         membership of q in the two kernels that make each cancellation
 *         pairing vanish for structural reasons.
 * Output: kernel membership report; a satisfied membership is sufficient for
 *         the matching check_cancellation to hold.
 * Errors: NotRankOne when B^s has rank other than one.
 */
RankOneReport rank_one_fast_path(const SystemSpec& sys, const ConstMatrix& X, const Rational& m);

// ==============================================================================
// Display helpers (stable identifiers, also used in JSON output)
// ==============================================================================

/** Node name in product form, e.g. "Bs", "Bs*A", "Bs*A*Ba". */
std::string node_label(const Node& node);

const char* regime_name(Regime r);
const char* case_tag_name(CaseTag t);
const char* mixed_variant_name(MixedVariant v);
const char* fallback_reason_name(FallbackReason f);
const char* provenance_name(Provenance p);

}  // namespace decaycert
