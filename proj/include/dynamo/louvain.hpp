#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "dynamo/graph.hpp"
#include "dynamo/partition.hpp"

namespace dynamo {

inline constexpr double kDefaultEpsilon = 1e-7;

/// Graph whose vertices are the communities of a source partition. Internal
/// community weight is carried on a per-vertex self weight using the alpha
/// convention (each internal edge counted twice), so that
/// strength(s) = self_weight(s) + sum of super-edge weights at s.
class CompressedGraph {
 public:
  CompressedGraph() = default;

  std::size_t size() const { return self_weight_.size(); }
  std::span<const Neighbor> neighbors(std::uint32_t s) const {
    return {adjacency_.data() + offsets_[s], adjacency_.data() + offsets_[s + 1]};
  }
  double self_weight(std::uint32_t s) const { return self_weight_[s]; }
  double strength(std::uint32_t s) const { return strength_[s]; }
  /// m of the source graph: half the self weights plus each super-edge once.
  double total_weight() const { return total_weight_; }

  /// Source community of super vertex s (only set by compress()).
  CommunityId community_at(std::uint32_t s) const { return communities_[s]; }
  /// Super vertex of each source vertex, aligned with the source graph.
  std::span<const std::uint32_t> super_vertex_of() const { return super_of_; }
  std::uint32_t super_vertex(const WeightedGraph& source, VertexId v) const {
    return super_of_[source.require_index(v)];
  }

  double weight(std::uint32_t a, std::uint32_t b) const;

  /// Modularity of the identity partition (every super vertex on its own).
  double identity_modularity() const;

 private:
  friend class CompressedGraphBuilder;

  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> adjacency_;
  std::vector<double> self_weight_;
  std::vector<double> strength_;
  std::vector<CommunityId> communities_;
  std::vector<std::uint32_t> super_of_;
  double total_weight_ = 0.0;
};

/// Aggregates the communities of `p` into super vertices. Super vertices are
/// numbered in ascending community-id order.
CompressedGraph compress(const WeightedGraph& g, const Partition& p);
/// Aggregates labels (aligned with the vertices of g) one level further.
CompressedGraph compress(const CompressedGraph& g, std::span<const std::uint32_t> labels);

struct PassRecord {
  int level = 0;
  int sweeps = 0;
  std::size_t moves = 0;
  double modularity_before = 0.0;
  double modularity_after = 0.0;
};

struct LouvainOptions {
  /// Minimum modularity gain for a move to be accepted.
  double epsilon = kDefaultEpsilon;
  /// When set, each level sweeps vertices in an order shuffled with this seed
  /// instead of ascending index order.
  std::optional<std::uint64_t> shuffle_seed;
  /// Invoked after every local moving pass (one per level).
  std::function<void(const PassRecord&)> on_pass;
};

struct LocalMoveResult {
  Partition partition;
  bool improved = false;
};

struct LabelMoveResult {
  std::vector<std::uint32_t> labels;
  bool improved = false;
};

/// One local modularity optimisation phase: sweeps all vertices in ascending
/// order, moving each to the neighbouring community with the largest gain
/// above epsilon, until a full sweep makes no move.
LocalMoveResult local_moving_pass(const WeightedGraph& g, const Partition& p,
                                  double epsilon = kDefaultEpsilon);
LabelMoveResult local_moving_pass(const CompressedGraph& g, std::span<const std::uint32_t> labels,
                                  double epsilon = kDefaultEpsilon);

/// Static Louvain from all singletons. Throws EmptyGraph when m == 0.
/// Community ids of the result are 0..k-1 in order of first appearance along
/// ascending vertex ids.
Partition louvain(const WeightedGraph& g, const LouvainOptions& options = {});
/// Louvain started from an intermediate partition (must cover g's vertices).
Partition louvain(const WeightedGraph& g, const Partition& initial, const LouvainOptions& options = {});
/// Same, with labels aligned with g.vertices().
Partition louvain(const WeightedGraph& g, std::span<const CommunityId> initial_labels,
                  const LouvainOptions& options = {});

}  // namespace dynamo
