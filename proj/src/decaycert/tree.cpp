#include "decaycert/tree.hpp"

#include <algorithm>
#include <deque>
#include <utility>

#include "decaycert/errors.hpp"
#include "decaycert/kalman.hpp"
#include "decaycert/rank.hpp"

namespace decaycert {
namespace {

/** <P d_x U, Q U> vanishes for every U iff P^T Q is symmetric. */
bool pairing_vanishes(const ConstMatrix& P, const ConstMatrix& Q) {
  return is_symmetric(conj_transpose(P) * Q);
}

int stacked_rank(const std::vector<ConstMatrix>& stack) { return bareiss_rank(vstack(stack)); }

}  // namespace

// ==============================================================================
// Branching decision
// ==============================================================================

NodeCase classify_node(const std::vector<ConstMatrix>& stack, const ConstMatrix& X,
                       const SystemSpec& sys, Regime regime) {
  if (stack.empty() || !(stack.back() == X))
    throw CertError(ErrorCode::InvalidInput,
                    "classify_node expects X as the last element of the chosen stack");
  const ConstMatrix A = embed_const(sys.A);
  const ConstMatrix Ba = embed_const(sys.Ba);

  const int r = stacked_rank(stack);
  std::vector<ConstMatrix> with_a = stack;
  with_a.push_back(X * A);
  std::vector<ConstMatrix> with_b = stack;
  with_b.push_back(X * Ba);
  std::vector<ConstMatrix> with_both = with_a;
  with_both.push_back(X * Ba);
  const int rank_a = stacked_rank(with_a);
  const int rank_b = stacked_rank(with_b);
  const int joint = stacked_rank(with_both);

  if (rank_a == r && rank_b == r) return NodeCase::Stop;
  if (rank_a > r && rank_b == rank_a && joint == rank_a) return NodeCase::Either;
  if (rank_a > r && joint > rank_a) return NodeCase::Both;
  if (rank_a > r && rank_b == r) return NodeCase::Left;
  if (rank_b > r && rank_a == r) return NodeCase::Right;
  // Both children grow the rank by different amounts and the joint stack adds
  // nothing beyond the larger; fall back to the scan preference.
  return regime == Regime::HF ? NodeCase::Left : NodeCase::Right;
}

// ==============================================================================
// Exact span membership
// ==============================================================================

std::optional<std::vector<GaussianRational>> span_coefficients(
    const ConstMatrix& X, const std::vector<ConstMatrix>& basis) {
  for (const ConstMatrix& b : basis)
    if (b.rows != X.rows || b.cols != X.cols)
      throw CertError(ErrorCode::InvalidInput, "span basis entry has mismatched shape");
  const int entries = X.rows * X.cols;
  const int nb = static_cast<int>(basis.size());
  Mat<GaussianRational> m(entries, nb);
  std::vector<GaussianRational> rhs(static_cast<size_t>(entries));
  for (int i = 0; i < X.rows; ++i)
    for (int j = 0; j < X.cols; ++j) {
      const int row = i * X.cols + j;
      rhs[static_cast<size_t>(row)] = X.at(i, j);
      for (int b = 0; b < nb; ++b) m.at(row, b) = basis[static_cast<size_t>(b)].at(i, j);
    }
  return solve_exact(m, rhs);
}

// ==============================================================================
// Mixing coefficient and cancellation pairings
// ==============================================================================

std::optional<Rational> solve_mixing_coefficient(const ConstMatrix& X, const SystemSpec& sys,
                                                 MixedVariant variant) {
  const ConstMatrix A = embed_const(sys.A);
  const ConstMatrix Ba = embed_const(sys.Ba);
  // Symmetry of M0 + m*M1 encodes the vanishing of the corrector pairing.
  ConstMatrix m0, m1;
  if (variant == MixedVariant::Primary) {
    // <XA d_x U, (m XB^aA^2 - XB^a) U>: (XA)^T (m XB^aA^2 - XB^a) symmetric.
    m0 = -(conj_transpose(X * A) * (X * Ba));
    m1 = conj_transpose(X * A) * (X * Ba * A * A);
  } else {
    // <(XA - m XAB^aA) d_x U, XB^a U>: (XA - m XAB^aA)^T XB^a symmetric.
    m0 = conj_transpose(X * A) * (X * Ba);
    m1 = -(conj_transpose(X * A * Ba * A) * (X * Ba));
  }
  const ConstMatrix s0 = m0 - m0.transpose();
  const ConstMatrix s1 = m1 - m1.transpose();
  if (s1.is_zero()) {
    if (s0.is_zero()) return std::nullopt;  // every m makes the pairing vanish
    throw CertError(ErrorCode::NoSolution, "mixing pairing cannot vanish for any coefficient");
  }
  GaussianRational m;
  for (size_t k = 0; k < s1.e.size(); ++k)
    if (!ring_is_zero(s1.e[k])) {
      m = -s0.e[k] / s1.e[k];
      break;
    }
  if (!(s0 + m * s1).is_zero())
    throw CertError(ErrorCode::NoSolution,
                    "mixing pairing is overdetermined; no single coefficient works");
  if (!m.is_real())
    throw CertError(ErrorCode::NoSolution, "mixing coefficient came out non-real");
  return m.re;
}

bool check_cancellation(const ConstMatrix& X, const Rational& m, const SystemSpec& sys,
                        CancellationKind kind) {
  const ConstMatrix A = embed_const(sys.A);
  const ConstMatrix Ba = embed_const(sys.Ba);
  const GaussianRational mg{m};
  switch (kind) {
    case CancellationKind::RightPath: {
      // The two derivative pairings produced by differentiating the right-step
      // functional cancel in sum: (XA)^T(XB^a) + (XB^aA)^T X symmetric.
      const ConstMatrix s = conj_transpose(X * A) * (X * Ba) + conj_transpose(X * Ba * A) * X;
      return is_symmetric(s);
    }
    case CancellationKind::MixingPrimary:
      return pairing_vanishes(X * A, mg * (X * Ba * A * A) - X * Ba);
    case CancellationKind::MixingAlternate:
      return pairing_vanishes(X * A - mg * (X * A * Ba * A), X * Ba);
    case CancellationKind::DiscrepancyPrimary:
      return pairing_vanishes(X * Ba * A, X - mg * (X * A * A));
    case CancellationKind::DiscrepancyAlternate:
      return pairing_vanishes(X * Ba * A, X - mg * (X * A * Ba));
  }
  throw CertError(ErrorCode::Internal, "unhandled cancellation kind");
}

// ==============================================================================
// Path construction
// ==============================================================================

PathReport run_tree(const SystemSpec& sys, Regime regime) {
  const ConstMatrix A = embed_const(sys.A);
  const ConstMatrix Ba = embed_const(sys.Ba);

  PathReport rep;
  rep.sys = sys;
  rep.regime = regime;

  Node root;
  root.matrix = embed_const(sys.Bs);
  rep.nodes.push_back(root);

  std::vector<ConstMatrix> stack{rep.nodes.front().matrix};
  int rank = stacked_rank(stack);

  // FIFO over nodes still to branch from; appending the left child before the
  // right one makes the scan leftmost-first level by level.
  std::deque<int> queue{0};

  const auto add_child = [&](int parent, char letter, CaseTag tag, int delta, int extra,
                             bool canc, int eps_shift) {
    Node child;
    child.word = rep.nodes[static_cast<size_t>(parent)].word + letter;
    child.matrix = rep.nodes[static_cast<size_t>(parent)].matrix * (letter == 'A' ? A : Ba);
    child.level = rep.nodes[static_cast<size_t>(parent)].level + 1;
    child.parent = parent;
    child.case_tag = tag;
    child.discrepancy = delta;
    child.cancellation = canc;
    child.accumulated_loss = rep.nodes[static_cast<size_t>(parent)].accumulated_loss +
                             rep.nodes[static_cast<size_t>(parent)].discrepancy;
    child.extra_weight = extra;
    child.eps_shift = eps_shift;

    const int before = rank;
    stack.push_back(child.matrix);
    rank = stacked_rank(stack);
    if (rank <= before)
      throw CertError(ErrorCode::Internal, "chosen node failed to grow the stacked rank");
    rep.nodes.push_back(std::move(child));
    queue.push_back(static_cast<int>(rep.nodes.size()) - 1);
  };

  // X (B^a)^2 in span of the chosen nodes plus XB^a; side condition required
  // for a discrepancy cancellation on a right step or at a primary mixed node.
  const auto discrepancy_side_condition = [&](const ConstMatrix& X) {
    std::vector<ConstMatrix> basis = stack;
    basis.push_back(X * Ba);
    return span_coefficients(X * Ba * Ba, basis).has_value();
  };

  // Prerequisites and corrector for one mixed variant; nullopt when they fail.
  const auto try_variant = [&](int cur, const ConstMatrix& X,
                               MixedVariant variant) -> std::optional<MixedData> {
    if (variant == MixedVariant::Primary) {
      if (!span_coefficients(X * A * A, stack)) return std::nullopt;
      if (!span_coefficients(X * A * Ba, stack)) return std::nullopt;
    } else {
      if (!span_coefficients(X * Ba * Ba, stack)) return std::nullopt;
      if (!span_coefficients(X * Ba * A, stack)) return std::nullopt;
    }
    std::optional<Rational> m;
    try {
      m = solve_mixing_coefficient(X, sys, variant);
    } catch (const CertError& e) {
      if (e.code() == ErrorCode::NoSolution) return std::nullopt;
      throw;
    }
    if (variant == MixedVariant::Primary) {
      std::vector<ConstMatrix> basis = stack;
      basis.push_back(X * Ba);
      basis.push_back(X * Ba * A);
      if (!span_coefficients(X * Ba * A * Ba, basis)) return std::nullopt;
    } else {
      std::vector<ConstMatrix> basis = stack;
      basis.push_back(X * A);
      if (!span_coefficients(X * A * Ba * Ba, basis)) return std::nullopt;
    }
    MixedData data;
    data.parent = cur;
    data.m = m.value_or(Rational(0));
    data.m_unconstrained = !m.has_value();
    data.variant = variant;
    if (variant == MixedVariant::Primary)
      data.cancellation = check_cancellation(X, data.m, sys, CancellationKind::DiscrepancyPrimary) &&
                          discrepancy_side_condition(X);
    else
      data.cancellation = check_cancellation(X, data.m, sys, CancellationKind::DiscrepancyAlternate);
    return data;
  };

  int visits = 0;
  while (rank < sys.n && !queue.empty() && rep.fallback == FallbackReason::None) {
    if (++visits > sys.n * sys.n)
      throw CertError(ErrorCode::Internal, "path construction failed to terminate");
    const int cur = queue.front();
    queue.pop_front();
    const ConstMatrix X = rep.nodes[static_cast<size_t>(cur)].matrix;
    const int shift = rep.nodes[static_cast<size_t>(cur)].eps_shift;

    // classify_node wants X last in the stack; the rank comparisons do not
    // depend on the order, so rotate its entry to the back.
    std::vector<ConstMatrix> ordered = stack;
    const auto it = std::find(ordered.begin(), ordered.end(), X);
    if (it == ordered.end())
      throw CertError(ErrorCode::Internal, "queued node is missing from the chosen stack");
    std::rotate(it, it + 1, ordered.end());

    switch (classify_node(ordered, X, sys, regime)) {
      case NodeCase::Stop:
        break;  // lateral move: continue with the next queued node
      case NodeCase::Left:
        if (regime == Regime::HF)
          add_child(cur, 'A', CaseTag::Left, 0, 0, false, shift);
        else
          add_child(cur, 'A', CaseTag::Left, 1, 1, false, shift);
        break;
      case NodeCase::Right:
        if (regime == Regime::HF) {
          const bool canc = check_cancellation(X, Rational(0), sys, CancellationKind::RightPath) &&
                            discrepancy_side_condition(X);
          add_child(cur, 'B', CaseTag::Right, canc ? 0 : 1, canc ? 0 : 1, canc, shift);
        } else {
          add_child(cur, 'B', CaseTag::Right, 0, 0, false, shift);
        }
        break;
      case NodeCase::Either:
        // Both children are interchangeable for the rank; take the child the
        // regime's scan prefers, with no discrepancy either way.
        if (regime == Regime::HF)
          add_child(cur, 'A', CaseTag::EitherLeft, 0, 0, false, shift);
        else
          add_child(cur, 'B', CaseTag::EitherRight, 0, 0, false, shift);
        break;
      case NodeCase::Both: {
        if (regime == Regime::LF) {
          // No low-frequency construction exists for a mixed node; certify
          // through the generic rank-condition functional instead.
          rep.fallback = FallbackReason::MixedNodeLowFrequency;
          break;
        }
        std::optional<MixedData> data = try_variant(cur, X, MixedVariant::Primary);
        if (!data) data = try_variant(cur, X, MixedVariant::Alternate);
        if (!data) {
          rep.fallback = FallbackReason::MixedAssumptionsFailed;
          break;
        }
        const bool canc = data->cancellation;
        // Primary charges both children one discrepancy unless the pairing
        // cancels; Alternate never charges one.  Without a cancellation the
        // right child's recovered norm keeps the extra frequency weight; with
        // one, its functional instead defers to the next epsilon power.
        const int delta = (data->variant == MixedVariant::Primary && !canc) ? 1 : 0;
        rep.mixed_data.push_back(*data);
        add_child(cur, 'A', CaseTag::MixedLeft, delta, 0, canc, shift);
        add_child(cur, 'B', CaseTag::MixedRight, delta, canc ? 0 : 1, canc, shift + (canc ? 1 : 0));
        break;
      }
    }
  }

  rep.final_rank = rank;
  rep.complete = (rank == sys.n);
  if (!rep.complete && rep.fallback == FallbackReason::None)
    throw CertError(ErrorCode::KalmanViolated,
                    "path construction stalled at rank " + std::to_string(rank) + " of " +
                        std::to_string(sys.n) + "; the rank condition fails");
  return rep;
}

PathReport path_without_cancellations(const PathReport& report) {
  PathReport out = report;
  const auto variant_of = [&](int parent) {
    for (const MixedData& d : out.mixed_data)
      if (d.parent == parent) return d.variant;
    throw CertError(ErrorCode::Internal, "mixed child without a matching split record");
  };
  // Nodes are stored parents-first, so one ascending pass settles the losses.
  for (size_t i = 0; i < out.nodes.size(); ++i) {
    Node& node = out.nodes[i];
    if (node.parent >= 0) {
      const Node& parent = out.nodes[static_cast<size_t>(node.parent)];
      node.accumulated_loss = parent.accumulated_loss + parent.discrepancy;
      node.eps_shift = parent.eps_shift;
    }
    if (!node.cancellation) continue;
    node.cancellation = false;
    switch (node.case_tag) {
      case CaseTag::Right:
        node.discrepancy = 1;
        node.extra_weight = 1;
        break;
      case CaseTag::MixedLeft:
        if (variant_of(node.parent) == MixedVariant::Primary) node.discrepancy = 1;
        break;
      case CaseTag::MixedRight:
        if (variant_of(node.parent) == MixedVariant::Primary) node.discrepancy = 1;
        node.extra_weight = 1;
        break;
      default:
        throw CertError(ErrorCode::Internal, "cancellation flag on a node that cannot carry one");
    }
  }
  for (MixedData& d : out.mixed_data) d.cancellation = false;
  return out;
}

// ==============================================================================
// Certificates
// ==============================================================================

DecayCertificate certificate_from_path(const PathReport& report) {
  DecayCertificate cert;
  cert.regime = report.regime;
  if (report.fallback != FallbackReason::None || !report.complete) {
    cert.provenance = Provenance::KalmanGeneric;
    const KalmanCertificate kalman = check_kalman(report.sys);
    if (!kalman.holds)
      throw CertError(ErrorCode::KalmanViolated,
                      "generic fallback certificate requested for a system that fails the rank "
                      "condition");
    const ExponentEstimate estimate = report.regime == Regime::HF
                                          ? estimate_alpha(report.sys, kalman.K)
                                          : estimate_beta(report.sys, kalman.K);
    cert.exponent = estimate.value;
    return cert;
  }
  cert.provenance = Provenance::TreeImproved;
  cert.exponent = 0;
  for (const Node& node : report.nodes) {
    const int gamma = node.accumulated_loss + node.extra_weight;
    cert.exponent_per_node.push_back(gamma);
    cert.exponent = std::max(cert.exponent, gamma);
  }
  return cert;
}

// ==============================================================================
// Rank-one fast path
// ==============================================================================

RankOneReport rank_one_fast_path(const SystemSpec& sys, const ConstMatrix& X, const Rational& m) {
  const int n = sys.n;
  // A nonzero semidefinite matrix has a nonzero diagonal entry; its column
  // provides the rank-one factor when there is one.
  int pivot = -1;
  for (int i = 0; i < n; ++i)
    if (sgn(sys.Bs.at(i, i)) != 0) {
      pivot = i;
      break;
    }
  if (pivot < 0)
    throw CertError(ErrorCode::NotRankOne, "dissipation matrix has an all-zero diagonal");

  RealMatrix p(n, 1);
  for (int i = 0; i < n; ++i) p.at(i, 0) = sys.Bs.at(i, pivot);
  const Rational scale = Rational(1) / sys.Bs.at(pivot, pivot);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (sys.Bs.at(i, j) != scale * p.at(i, 0) * p.at(j, 0))
        throw CertError(ErrorCode::NotRankOne, "dissipation matrix has rank greater than one");

  const ConstMatrix A = embed_const(sys.A);
  const ConstMatrix Ba = embed_const(sys.Ba);
  const ConstMatrix identity = ConstMatrix::identity(n);
  const GaussianRational mg{m};
  // Transported direction: every pairing factors through q = X^T p.
  const ConstMatrix q = conj_transpose(X) * embed_const(p);
  const ConstMatrix a_q = A * q;
  const ConstMatrix ba_q = Ba * q;
  const ConstMatrix shifted = identity - mg * (A * A);  // I - m A^2

  RankOneReport rep;
  rep.p = p;
  rep.scale = scale;
  rep.mixing_primary = {a_q.is_zero(), (shifted * ba_q).is_zero()};
  rep.mixing_alternate = {ba_q.is_zero(), ((identity + mg * (A * Ba)) * a_q).is_zero()};
  rep.discrepancy_primary = {(A * ba_q).is_zero(), (shifted * q).is_zero()};
  rep.discrepancy_alternate = {(A * ba_q).is_zero(), ((identity + mg * (Ba * A)) * q).is_zero()};
  return rep;
}

// ==============================================================================
// Display helpers
// ==============================================================================

std::string node_label(const Node& node) {
  std::string label = "Bs";
  for (const char c : node.word) label += (c == 'A') ? "*A" : "*Ba";
  return label;
}

const char* regime_name(Regime r) { return r == Regime::HF ? "HF" : "LF"; }

const char* case_tag_name(CaseTag t) {
  switch (t) {
    case CaseTag::Root: return "root";
    case CaseTag::Left: return "left";
    case CaseTag::Right: return "right";
    case CaseTag::MixedLeft: return "mixed-left";
    case CaseTag::MixedRight: return "mixed-right";
    case CaseTag::EitherLeft: return "either-left";
    case CaseTag::EitherRight: return "either-right";
  }
  return "unknown";
}

const char* mixed_variant_name(MixedVariant v) {
  return v == MixedVariant::Primary ? "primary" : "alternate";
}

const char* fallback_reason_name(FallbackReason f) {
  switch (f) {
    case FallbackReason::None: return "none";
    case FallbackReason::MixedNodeLowFrequency: return "mixed-node-low-frequency";
    case FallbackReason::MixedAssumptionsFailed: return "mixed-assumptions-failed";
  }
  return "unknown";
}

const char* provenance_name(Provenance p) {
  return p == Provenance::KalmanGeneric ? "kalman-generic" : "tree-improved";
}

}  // namespace decaycert
