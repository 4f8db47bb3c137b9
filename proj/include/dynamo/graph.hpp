#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace dynamo {

using VertexId = std::uint64_t;

struct WeightedEdge {
  VertexId u;
  VertexId v;
  double weight;

  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

/// Adjacency entry addressed by dense vertex index (position in vertices()).
struct Neighbor {
  std::uint32_t index;
  double weight;
};

/// Undirected weighted simple graph, immutable once built.
///
/// Vertices are kept in ascending id order and addressed internally by their
/// dense index, so algorithms can run directly on the compressed adjacency.
/// Parallel edges are collapsed by summing their weights; self-loops and
/// non-positive weights are rejected.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  /// Builds a graph from a vertex list (duplicates ignored) and an edge list.
  /// Edge endpoints are added to the vertex set implicitly.
  static WeightedGraph from_edges(std::span<const VertexId> vertices,
                                  std::span<const WeightedEdge> edges);
  static WeightedGraph from_edges(std::span<const WeightedEdge> edges) {
    return from_edges({}, edges);
  }

  std::size_t num_vertices() const { return ids_.size(); }
  std::size_t num_edges() const { return adjacency_.size() / 2; }
  /// m: each undirected edge counted once.
  double total_weight() const { return total_weight_; }
  bool empty() const { return ids_.empty(); }

  std::span<const VertexId> vertices() const { return ids_; }
  bool contains(VertexId v) const { return index_of(v).has_value(); }
  std::optional<std::uint32_t> index_of(VertexId v) const;
  /// Throws UnknownVertex.
  std::uint32_t require_index(VertexId v) const;
  VertexId id_at(std::uint32_t index) const { return ids_[index]; }

  /// Neighbors sorted by index.
  std::span<const Neighbor> neighbors_at(std::uint32_t index) const {
    return {adjacency_.data() + offsets_[index], adjacency_.data() + offsets_[index + 1]};
  }
  std::size_t degree_at(std::uint32_t index) const { return offsets_[index + 1] - offsets_[index]; }
  double strength_at(std::uint32_t index) const { return strength_[index]; }

  double strength(VertexId v) const { return strength_[require_index(v)]; }
  std::size_t degree(VertexId v) const { return degree_at(require_index(v)); }
  /// Zero when the edge (or either endpoint) is absent.
  double weight(VertexId u, VertexId v) const;

  /// All edges with u < v, ascending.
  std::vector<WeightedEdge> edges() const;

  friend bool operator==(const WeightedGraph& a, const WeightedGraph& b);

 private:
  std::vector<VertexId> ids_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> adjacency_;
  std::vector<double> strength_;
  double total_weight_ = 0.0;
};

struct EdgeChange {
  VertexId u;
  VertexId v;
  /// Positive: addition / weight increase. Negative: deletion / decrease.
  double delta_w;

  friend bool operator==(const EdgeChange&, const EdgeChange&) = default;
};

/// One snapshot's batch of changes. Vertex sets are kept sorted and unique;
/// edge changes keep their record order.
struct GraphDelta {
  std::vector<VertexId> added_vertices;
  std::vector<VertexId> removed_vertices;
  std::vector<EdgeChange> edge_changes;

  bool empty() const {
    return added_vertices.empty() && removed_vertices.empty() && edge_changes.empty();
  }
  bool is_added(VertexId v) const;
  bool is_removed(VertexId v) const;
  /// Sorts and deduplicates the vertex sets; throws ConflictingDelta when a
  /// vertex is both added and removed.
  void normalize();

  friend bool operator==(const GraphDelta&, const GraphDelta&) = default;
};

/// Produces the next snapshot; `g` is left untouched.
///
/// Order of application: vertex additions, edge changes in record order, then
/// vertex removals together with every remaining incident edge. A weight that
/// reaches zero (within rounding) removes the edge.
WeightedGraph apply_delta(const WeightedGraph& g, const GraphDelta& d);

/// Delta such that apply_delta(g_old, diff(g_old, g_new)) == g_new. Edges
/// incident to removed vertices are listed explicitly as deletions.
GraphDelta diff(const WeightedGraph& g_old, const WeightedGraph& g_new);

}  // namespace dynamo
