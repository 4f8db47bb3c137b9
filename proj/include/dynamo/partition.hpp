#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "dynamo/graph.hpp"

namespace dynamo {

using CommunityId = std::uint64_t;

/// Bare vertex -> community labelling, without graph-derived aggregates.
using Assignment = std::map<VertexId, CommunityId>;

struct CommunityStats {
  /// Sum of A_ij over ordered member pairs: every internal edge counts twice.
  double alpha = 0.0;
  /// Sum of member strengths.
  double beta = 0.0;
  /// Ascending.
  std::vector<VertexId> members;
};

/// Non-overlapping community assignment of one graph snapshot together with
/// the per-community aggregates used for modularity bookkeeping.
///
/// The vertex list mirrors the graph's ascending order, so labels()[i] is the
/// community of graph.id_at(i). Aggregates are relative to the snapshot the
/// partition was built for.
class Partition {
 public:
  Partition() = default;

  /// Every vertex in its own community; community ids equal vertex ids.
  static Partition singletons(const WeightedGraph& g);

  std::size_t size() const { return vertices_.size(); }
  std::size_t num_communities() const { return communities_.size(); }

  std::span<const VertexId> vertices() const { return vertices_; }
  std::span<const CommunityId> labels() const { return labels_; }
  bool contains(VertexId v) const;
  /// Throws UnknownVertex.
  CommunityId community_of(VertexId v) const;

  const std::map<CommunityId, CommunityStats>& communities() const { return communities_; }
  /// Throws UnknownVertex (no such community).
  const CommunityStats& community(CommunityId c) const;

  Assignment assignment() const;

  /// Modularity from the stored aggregates; m is the graph's total weight.
  double modularity_from_aggregates(double m) const;

  /// Same labelling up to a renaming of community ids.
  bool same_clustering(const Partition& other) const;

  /// Low-level factory used by the detectors: callers guarantee that
  /// `vertices` is ascending, `labels` is aligned with it and `stats` holds
  /// alpha/beta for every label. Members are filled in here.
  static Partition from_parts(std::vector<VertexId> vertices, std::vector<CommunityId> labels,
                              std::map<CommunityId, CommunityStats> stats);

 private:
  std::vector<VertexId> vertices_;
  std::vector<CommunityId> labels_;
  std::map<CommunityId, CommunityStats> communities_;
};

/// Ground-truth recomputation of alpha/beta directly from the graph.
/// Throws UnknownVertex when the assignment names a vertex outside `g`, and
/// VertexSetMismatch when it misses one of g's vertices.
Partition partition_rebuild_aggregates(const WeightedGraph& g, const Assignment& assignment);
/// Same, for labels aligned with g.vertices().
Partition partition_rebuild_aggregates(const WeightedGraph& g, std::span<const CommunityId> labels);

/// Q = (1/2m) * sum_c (alpha_c - beta_c^2 / 2m), recomputed from `g` and the
/// labels of `p` (stored aggregates are not trusted).
/// Throws EmptyGraph when m == 0 and VertexSetMismatch when p does not cover
/// exactly g's vertices.
double modularity(const WeightedGraph& g, const Partition& p);
/// Same, for labels aligned with g.vertices().
double modularity(const WeightedGraph& g, std::span<const CommunityId> labels);

}  // namespace dynamo
