#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "dynamo/graph.hpp"
#include "dynamo/louvain.hpp"
#include "dynamo/partition.hpp"

namespace dynamo {

/// The six kinds of incremental change, relative to (G^(t), C^(t)).
enum class ChangeKind {
  IntraEdgeIncrease,  ///< ICEA/WI: edge added or weight increased inside one community.
  CrossEdgeIncrease,  ///< CCEA/WI: edge added or weight increased between two communities.
  IntraEdgeDecrease,  ///< ICED/WD
  CrossEdgeDecrease,  ///< CCED/WD
  VertexAddition,
  VertexDeletion,
};

std::string_view to_string(ChangeKind kind);

/// Classifies one edge record of `d`. Records touching an added or removed
/// vertex take the vertex kind; otherwise the sign of delta_w and the
/// communities of the endpoints in `p_t` decide. Throws UnknownVertex.
ChangeKind classify(const WeightedGraph& g_t, const Partition& p_t, const GraphDelta& d,
                    const EdgeChange& change);

/// Initialisation plan for one update: communities of C^(t) to explode into
/// singletons, and two-vertex communities to seed afterwards.
struct InitPlan {
  /// Ascending.
  std::vector<CommunityId> dissolve;
  /// Each vertex occurs in at most one pair; order of creation.
  std::vector<std::pair<VertexId, VertexId>> pair_seeds;

  bool empty() const { return dissolve.empty() && pair_seeds.empty(); }
};

/// Smallest weight increase on a cross edge (i, j) above which merging c_i and
/// c_j beats keeping both. Uses the pre-change aggregates of `p_t` and m of
/// `g_t`. Returns -infinity when the merge wins for every positive increase.
/// Throws SameCommunity when c_i == c_j, EmptyGraph when m == 0.
double ccea_merge_threshold(const WeightedGraph& g_t, const Partition& p_t, VertexId i, VertexId j);

/// Weight increase on an edge inside `subset` (a proper, non-empty subset of
/// community `c`) above which splitting c into subset / c \ subset beats
/// keeping c whole. Throws DegenerateDenominator when 2*beta_q == alpha_1.
double bisplit_threshold(const WeightedGraph& g, const Partition& p, CommunityId c,
                         std::span<const VertexId> subset);

/// Builds the initialisation plan for G^(t) -> G^(t+1).
/// Throws InconsistentSnapshots when g_t1 is not g_t with `d` applied.
InitPlan init(const WeightedGraph& g_t1, const WeightedGraph& g_t, const Partition& p_t, const GraphDelta& d);

/// Intermediate community labels on g_t1 (aligned with g_t1.vertices()):
/// C^(t) with dissolved communities exploded, pair seeds applied, new
/// vertices as singletons and deleted vertices dropped.
std::vector<CommunityId> intermediate_labels(const WeightedGraph& g_t1, const Partition& p_t, const InitPlan& plan);

/// C^(t) carried onto g_t1 with no change other than dropping deleted
/// vertices and adding new ones as singletons.
Partition carry_forward(const WeightedGraph& g_t1, const Partition& p_t);

/// Incremental update C^(t) -> C^(t+1): init plan, intermediate partition,
/// then Louvain from the intermediate partition. Errors from init() and
/// louvain() propagate (EmptyGraph when g_t1 has m == 0).
Partition dynamo_update(const WeightedGraph& g_t1, const WeightedGraph& g_t, const Partition& p_t,
                        const GraphDelta& d, const LouvainOptions& options = {});

/// Refinement policy: true when the caller should rerun full static Louvain.
inline bool refine_check(double q_current, double q_threshold) { return q_current < q_threshold; }

inline constexpr double kRefineDisabled = -1.0;

}  // namespace dynamo
