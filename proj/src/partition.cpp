#include "dynamo/partition.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "dynamo/error.hpp"

namespace dynamo {

namespace {

void require_same_vertices(const WeightedGraph& g, std::span<const VertexId> vertices) {
  if (!std::equal(g.vertices().begin(), g.vertices().end(), vertices.begin(), vertices.end())) {
    throw Error(ErrorCode::VertexSetMismatch, "partition does not cover exactly the graph's vertices");
  }
}

}  // namespace

Partition Partition::singletons(const WeightedGraph& g) {
  std::vector<VertexId> vertices(g.vertices().begin(), g.vertices().end());
  std::vector<CommunityId> labels(vertices.begin(), vertices.end());
  std::map<CommunityId, CommunityStats> stats;
  for (std::uint32_t i = 0; i < vertices.size(); ++i) {
    stats[vertices[i]] = CommunityStats{0.0, g.strength_at(i), {}};
  }
  return from_parts(std::move(vertices), std::move(labels), std::move(stats));
}

Partition Partition::from_parts(std::vector<VertexId> vertices, std::vector<CommunityId> labels,
                                std::map<CommunityId, CommunityStats> stats) {
  Partition p;
  p.vertices_ = std::move(vertices);
  p.labels_ = std::move(labels);
  p.communities_ = std::move(stats);
  for (auto& [id, c] : p.communities_) c.members.clear();
  for (std::size_t i = 0; i < p.vertices_.size(); ++i) {
    p.communities_[p.labels_[i]].members.push_back(p.vertices_[i]);
  }
  return p;
}

bool Partition::contains(VertexId v) const {
  return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

CommunityId Partition::community_of(VertexId v) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
  if (it == vertices_.end() || *it != v) {
    throw Error(ErrorCode::UnknownVertex, "vertex " + std::to_string(v) + " not in partition");
  }
  return labels_[static_cast<std::size_t>(it - vertices_.begin())];
}

const CommunityStats& Partition::community(CommunityId c) const {
  auto it = communities_.find(c);
  if (it == communities_.end()) {
    throw Error(ErrorCode::UnknownVertex, "community " + std::to_string(c) + " not in partition");
  }
  return it->second;
}

Assignment Partition::assignment() const {
  Assignment out;
  for (std::size_t i = 0; i < vertices_.size(); ++i) out.emplace_hint(out.end(), vertices_[i], labels_[i]);
  return out;
}

double Partition::modularity_from_aggregates(double m) const {
  if (!(m > 0.0)) throw Error(ErrorCode::EmptyGraph, "modularity undefined for m = 0");
  double q = 0.0;
  for (const auto& [id, c] : communities_) q += c.alpha - c.beta * c.beta / (2.0 * m);
  return q / (2.0 * m);
}

bool Partition::same_clustering(const Partition& other) const {
  if (vertices_ != other.vertices_) return false;
  std::unordered_map<CommunityId, CommunityId> forward;
  std::unordered_map<CommunityId, CommunityId> backward;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    auto [f, f_new] = forward.emplace(labels_[i], other.labels_[i]);
    auto [b, b_new] = backward.emplace(other.labels_[i], labels_[i]);
    if (f->second != other.labels_[i] || b->second != labels_[i]) return false;
  }
  return true;
}

Partition partition_rebuild_aggregates(const WeightedGraph& g, std::span<const CommunityId> labels) {
  if (labels.size() != g.num_vertices()) {
    throw Error(ErrorCode::VertexSetMismatch, "label count differs from vertex count");
  }
  std::map<CommunityId, CommunityStats> stats;
  for (std::uint32_t i = 0; i < labels.size(); ++i) {
    auto& c = stats[labels[i]];
    c.beta += g.strength_at(i);
    for (const auto& nb : g.neighbors_at(i)) {
      if (labels[nb.index] == labels[i]) c.alpha += nb.weight;
    }
  }
  return Partition::from_parts({g.vertices().begin(), g.vertices().end()},
                               {labels.begin(), labels.end()}, std::move(stats));
}

Partition partition_rebuild_aggregates(const WeightedGraph& g, const Assignment& assignment) {
  for (const auto& [v, c] : assignment) {
    if (!g.contains(v)) {
      throw Error(ErrorCode::UnknownVertex, "vertex " + std::to_string(v) + " not in graph");
    }
  }
  if (assignment.size() != g.num_vertices()) {
    throw Error(ErrorCode::VertexSetMismatch, "assignment does not cover every graph vertex");
  }
  std::vector<CommunityId> labels;
  labels.reserve(assignment.size());
  for (const auto& [v, c] : assignment) labels.push_back(c);
  return partition_rebuild_aggregates(g, labels);
}

double modularity(const WeightedGraph& g, std::span<const CommunityId> labels) {
  const double m = g.total_weight();
  if (!(m > 0.0)) throw Error(ErrorCode::EmptyGraph, "modularity undefined for m = 0");
  if (labels.size() != g.num_vertices()) throw Error(ErrorCode::VertexSetMismatch, "labels do not cover the graph");
  std::unordered_map<CommunityId, std::pair<double, double>> agg;
  for (std::uint32_t i = 0; i < labels.size(); ++i) {
    auto& [alpha, beta] = agg[labels[i]];
    beta += g.strength_at(i);
    for (const auto& nb : g.neighbors_at(i)) {
      if (labels[nb.index] == labels[i]) alpha += nb.weight;
    }
  }
  // Sum in community-id order so the result does not depend on hash layout.
  std::vector<std::pair<CommunityId, std::pair<double, double>>> ordered(agg.begin(), agg.end());
  std::sort(ordered.begin(), ordered.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  double q = 0.0;
  for (const auto& [id, ab] : ordered) q += ab.first - ab.second * ab.second / (2.0 * m);
  return q / (2.0 * m);
}

double modularity(const WeightedGraph& g, const Partition& p) {
  if (!(g.total_weight() > 0.0)) throw Error(ErrorCode::EmptyGraph, "modularity undefined for m = 0");
  require_same_vertices(g, p.vertices());
  return modularity(g, p.labels());
}

}  // namespace dynamo
