#include "dynamo/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "dynamo/error.hpp"

namespace dynamo {

namespace {

// Relative slack used when a decrease is supposed to hit zero exactly.
constexpr double kZeroSlack = 1e-12;

std::string edge_name(VertexId u, VertexId v) {
  return "(" + std::to_string(u) + "," + std::to_string(v) + ")";
}

std::pair<VertexId, VertexId> ordered(VertexId u, VertexId v) {
  return u < v ? std::pair{u, v} : std::pair{v, u};
}

bool sorted_contains(const std::vector<VertexId>& sorted, VertexId v) {
  return std::binary_search(sorted.begin(), sorted.end(), v);
}

}  // namespace

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::DuplicateVertex: return "DuplicateVertex";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::VertexSetMismatch: return "VertexSetMismatch";
    case ErrorCode::SameCommunity: return "SameCommunity";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::InconsistentSnapshots: return "InconsistentSnapshots";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ConflictingDelta: return "ConflictingDelta";
    case ErrorCode::EmptyStream: return "EmptyStream";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InfeasibleChurn: return "InfeasibleChurn";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

WeightedGraph WeightedGraph::from_edges(std::span<const VertexId> vertices,
                                        std::span<const WeightedEdge> edges) {
  WeightedGraph g;
  g.ids_.assign(vertices.begin(), vertices.end());

  std::vector<WeightedEdge> canon;
  canon.reserve(edges.size());
  for (const auto& e : edges) {
    if (e.u == e.v) throw Error(ErrorCode::SelfLoop, "self-loop on vertex " + std::to_string(e.u));
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw Error(ErrorCode::NegativeWeight, "non-positive weight on edge " + edge_name(e.u, e.v));
    }
    auto [a, b] = ordered(e.u, e.v);
    canon.push_back({a, b, e.weight});
    g.ids_.push_back(a);
    g.ids_.push_back(b);
  }
  std::sort(g.ids_.begin(), g.ids_.end());
  g.ids_.erase(std::unique(g.ids_.begin(), g.ids_.end()), g.ids_.end());

  // Stable so that parallel edges are summed in input order.
  std::stable_sort(canon.begin(), canon.end(), [](const WeightedEdge& x, const WeightedEdge& y) {
    return std::tie(x.u, x.v) < std::tie(y.u, y.v);
  });
  std::vector<WeightedEdge> merged;
  merged.reserve(canon.size());
  for (const auto& e : canon) {
    if (!merged.empty() && merged.back().u == e.u && merged.back().v == e.v) {
      merged.back().weight += e.weight;
    } else {
      merged.push_back(e);
    }
  }

  const std::size_t n = g.ids_.size();
  std::vector<std::size_t> degree(n, 0);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> idx(merged.size());
  for (std::size_t k = 0; k < merged.size(); ++k) {
    auto iu = static_cast<std::uint32_t>(
        std::lower_bound(g.ids_.begin(), g.ids_.end(), merged[k].u) - g.ids_.begin());
    auto iv = static_cast<std::uint32_t>(
        std::lower_bound(g.ids_.begin(), g.ids_.end(), merged[k].v) - g.ids_.begin());
    idx[k] = {iu, iv};
    ++degree[iu];
    ++degree[iv];
  }
  g.offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] = g.offsets_[i] + degree[i];
  g.adjacency_.resize(g.offsets_[n]);
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (std::size_t k = 0; k < merged.size(); ++k) {
    auto [iu, iv] = idx[k];
    g.adjacency_[fill[iu]++] = {iv, merged[k].weight};
    g.adjacency_[fill[iv]++] = {iu, merged[k].weight};
  }
  g.strength_.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto first = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]);
    auto last = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]);
    std::sort(first, last, [](const Neighbor& a, const Neighbor& b) { return a.index < b.index; });
    double s = 0.0;
    for (auto it = first; it != last; ++it) s += it->weight;
    g.strength_[i] = s;
  }
  double m = 0.0;
  for (const auto& e : merged) m += e.weight;
  g.total_weight_ = m;
  return g;
}

std::optional<std::uint32_t> WeightedGraph::index_of(VertexId v) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
  if (it == ids_.end() || *it != v) return std::nullopt;
  return static_cast<std::uint32_t>(it - ids_.begin());
}

std::uint32_t WeightedGraph::require_index(VertexId v) const {
  auto i = index_of(v);
  if (!i) throw Error(ErrorCode::UnknownVertex, "vertex " + std::to_string(v) + " not in graph");
  return *i;
}

double WeightedGraph::weight(VertexId u, VertexId v) const {
  auto iu = index_of(u);
  auto iv = index_of(v);
  if (!iu || !iv) return 0.0;
  auto nbrs = neighbors_at(*iu);
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), *iv,
                             [](const Neighbor& n, std::uint32_t x) { return n.index < x; });
  return (it != nbrs.end() && it->index == *iv) ? it->weight : 0.0;
}

std::vector<WeightedEdge> WeightedGraph::edges() const {
  std::vector<WeightedEdge> out;
  out.reserve(num_edges());
  for (std::uint32_t i = 0; i < ids_.size(); ++i) {
    for (const auto& nb : neighbors_at(i)) {
      if (nb.index > i) out.push_back({ids_[i], ids_[nb.index], nb.weight});
    }
  }
  return out;
}

bool operator==(const WeightedGraph& a, const WeightedGraph& b) {
  return a.ids_ == b.ids_ && a.edges() == b.edges();
}

bool GraphDelta::is_added(VertexId v) const { return sorted_contains(added_vertices, v); }
bool GraphDelta::is_removed(VertexId v) const { return sorted_contains(removed_vertices, v); }

void GraphDelta::normalize() {
  for (auto* set : {&added_vertices, &removed_vertices}) {
    std::sort(set->begin(), set->end());
    set->erase(std::unique(set->begin(), set->end()), set->end());
  }
  for (VertexId v : added_vertices) {
    if (is_removed(v)) {
      throw Error(ErrorCode::ConflictingDelta,
                  "vertex " + std::to_string(v) + " is both added and removed");
    }
  }
}

WeightedGraph apply_delta(const WeightedGraph& g, const GraphDelta& input) {
  GraphDelta d = input;
  d.normalize();

  std::vector<VertexId> vertices(g.vertices().begin(), g.vertices().end());
  for (VertexId v : d.added_vertices) {
    if (g.contains(v)) {
      throw Error(ErrorCode::DuplicateVertex, "vertex " + std::to_string(v) + " already exists");
    }
  }
  for (VertexId v : d.removed_vertices) {
    if (!g.contains(v)) {
      throw Error(ErrorCode::UnknownVertex, "cannot remove absent vertex " + std::to_string(v));
    }
  }
  vertices.insert(vertices.end(), d.added_vertices.begin(), d.added_vertices.end());
  std::sort(vertices.begin(), vertices.end());

  std::map<std::pair<VertexId, VertexId>, double> weights;
  for (const auto& e : g.edges()) weights.emplace(std::pair{e.u, e.v}, e.weight);

  for (const auto& c : d.edge_changes) {
    if (c.u == c.v) throw Error(ErrorCode::SelfLoop, "self-loop on vertex " + std::to_string(c.u));
    for (VertexId x : {c.u, c.v}) {
      if (!sorted_contains(vertices, x)) {
        throw Error(ErrorCode::UnknownVertex,
                    "edge " + edge_name(c.u, c.v) + " references absent vertex " + std::to_string(x));
      }
    }
    if (c.delta_w == 0.0 || !std::isfinite(c.delta_w)) {
      throw Error(ErrorCode::NegativeWeight, "zero or non-finite change on edge " + edge_name(c.u, c.v));
    }
    auto key = ordered(c.u, c.v);
    auto it = weights.find(key);
    const double current = it == weights.end() ? 0.0 : it->second;
    const double next = current + c.delta_w;
    const double slack = kZeroSlack * std::max(1.0, current);
    if (next < -slack) {
      throw Error(ErrorCode::NegativeWeight,
                  "decrease on edge " + edge_name(c.u, c.v) + " exceeds current weight");
    }
    if (next <= slack) {
      if (it != weights.end()) weights.erase(it);
    } else if (it == weights.end()) {
      weights.emplace(key, next);
    } else {
      it->second = next;
    }
  }

  std::vector<VertexId> kept;
  kept.reserve(vertices.size());
  for (VertexId v : vertices) {
    if (!d.is_removed(v)) kept.push_back(v);
  }
  std::vector<WeightedEdge> edges;
  edges.reserve(weights.size());
  for (const auto& [key, w] : weights) {
    if (d.is_removed(key.first) || d.is_removed(key.second)) continue;
    edges.push_back({key.first, key.second, w});
  }
  return WeightedGraph::from_edges(kept, edges);
}

GraphDelta diff(const WeightedGraph& g_old, const WeightedGraph& g_new) {
  GraphDelta d;
  std::set_difference(g_new.vertices().begin(), g_new.vertices().end(), g_old.vertices().begin(),
                      g_old.vertices().end(), std::back_inserter(d.added_vertices));
  std::set_difference(g_old.vertices().begin(), g_old.vertices().end(), g_new.vertices().begin(),
                      g_new.vertices().end(), std::back_inserter(d.removed_vertices));

  // Merge-walk the two sorted edge lists.
  const auto old_edges = g_old.edges();
  const auto new_edges = g_new.edges();
  auto key = [](const WeightedEdge& e) { return std::pair{e.u, e.v}; };
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < old_edges.size() || j < new_edges.size()) {
    if (j == new_edges.size() || (i < old_edges.size() && key(old_edges[i]) < key(new_edges[j]))) {
      d.edge_changes.push_back({old_edges[i].u, old_edges[i].v, -old_edges[i].weight});
      ++i;
    } else if (i == old_edges.size() || key(new_edges[j]) < key(old_edges[i])) {
      d.edge_changes.push_back({new_edges[j].u, new_edges[j].v, new_edges[j].weight});
      ++j;
    } else {
      const double dw = new_edges[j].weight - old_edges[i].weight;
      if (dw != 0.0) d.edge_changes.push_back({new_edges[j].u, new_edges[j].v, dw});
      ++i;
      ++j;
    }
  }
  return d;
}

}  // namespace dynamo
