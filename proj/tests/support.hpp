#pragma once

// Independent oracles for the test suites. Nothing here calls into the
// modularity code under test.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "dynamo/graph.hpp"
#include "dynamo/partition.hpp"

namespace support {

using dynamo::Assignment;
using dynamo::CommunityId;
using dynamo::VertexId;
using dynamo::WeightedEdge;
using dynamo::WeightedGraph;

/// Q = 1/(2m) * sum over ordered pairs (i, j), i == j included, of
/// (A_ij - k_i k_j / 2m) * [c_i == c_j], with A and k rebuilt from the edges.
inline double pairwise_modularity(const WeightedGraph& g, const Assignment& a) {
  std::map<VertexId, std::map<VertexId, double>> adj;
  std::map<VertexId, double> k;
  double m = 0.0;
  for (const auto& e : g.edges()) {
    adj[e.u][e.v] += e.weight;
    adj[e.v][e.u] += e.weight;
    k[e.u] += e.weight;
    k[e.v] += e.weight;
    m += e.weight;
  }
  double q = 0.0;
  for (const auto& [i, ci] : a) {
    for (const auto& [j, cj] : a) {
      if (ci != cj) continue;
      const double a_ij = adj.count(i) && adj[i].count(j) ? adj[i][j] : 0.0;
      q += a_ij - k[i] * k[j] / (2.0 * m);
    }
  }
  return q / (2.0 * m);
}

inline double pairwise_modularity(const WeightedGraph& g, const dynamo::Partition& p) {
  return pairwise_modularity(g, p.assignment());
}

/// Calls visit(labels) for every set partition of n items, labels in
/// restricted-growth form.
inline void for_each_set_partition(std::size_t n, const std::function<void(const std::vector<CommunityId>&)>& visit) {
  std::vector<CommunityId> labels(n, 0);
  std::function<void(std::size_t, CommunityId)> rec = [&](std::size_t i, CommunityId used) {
    if (i == n) {
      visit(labels);
      return;
    }
    for (CommunityId c = 0; c <= used; ++c) {
      labels[i] = c;
      rec(i + 1, c == used ? used + 1 : used);
    }
  };
  if (n == 0) {
    visit(labels);
    return;
  }
  rec(0, 0);
}

inline Assignment to_assignment(const WeightedGraph& g, const std::vector<CommunityId>& labels) {
  Assignment a;
  for (std::size_t i = 0; i < labels.size(); ++i) a[g.id_at(static_cast<std::uint32_t>(i))] = labels[i];
  return a;
}

/// Best pairwise modularity over all set partitions, optionally restricted by
/// a predicate on the labels (aligned with g.vertices()).
inline double brute_force_best(const WeightedGraph& g,
                               const std::function<bool(const std::vector<CommunityId>&)>& keep = {}) {
  double best = -INFINITY;
  for_each_set_partition(g.num_vertices(), [&](const std::vector<CommunityId>& labels) {
    if (keep && !keep(labels)) return;
    best = std::max(best, pairwise_modularity(g, to_assignment(g, labels)));
  });
  return best;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t below(std::mt19937_64& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

/// Erdos-Renyi style graph on ids 0..n-1 with weights in [wlo, whi]. When
/// `connected` is set, a random spanning tree is added first.
inline WeightedGraph random_graph(std::mt19937_64& rng, std::size_t n, double p, double wlo = 1.0,
                                  double whi = 1.0, bool connected = false) {
  std::map<std::pair<VertexId, VertexId>, double> w;
  if (connected) {
    for (VertexId v = 1; v < n; ++v) {
      const VertexId u = below(rng, v);
      w[{u, v}] = uniform(rng, wlo, whi);
    }
  }
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v = u + 1; v < n; ++v) {
      if (!w.count({u, v}) && uniform(rng, 0.0, 1.0) < p) w[{u, v}] = uniform(rng, wlo, whi);
    }
  }
  std::vector<VertexId> ids(n);
  for (VertexId v = 0; v < n; ++v) ids[v] = v;
  std::vector<WeightedEdge> edges;
  for (const auto& [key, weight] : w) edges.push_back({key.first, key.second, weight});
  return WeightedGraph::from_edges(ids, edges);
}

/// Two unit triangles {0,1,2} and {3,4,5}, joined by (2,3) when bridge > 0.
inline WeightedGraph two_triangles(double bridge = 0.0) {
  std::vector<WeightedEdge> edges{{0, 1, 1}, {0, 2, 1}, {1, 2, 1}, {3, 4, 1}, {3, 5, 1}, {4, 5, 1}};
  if (bridge > 0.0) edges.push_back({2, 3, bridge});
  return WeightedGraph::from_edges(edges);
}

inline Assignment triangle_split() { return {{0, 0}, {1, 0}, {2, 0}, {3, 1}, {4, 1}, {5, 1}}; }

/// alpha (ordered-pair convention) and beta of one vertex set, rebuilt from the edge list.
struct Aggregate {
  double alpha = 0.0;
  double beta = 0.0;
};

inline std::map<CommunityId, Aggregate> direct_aggregates(const WeightedGraph& g, const Assignment& a) {
  std::map<CommunityId, Aggregate> out;
  for (const auto& [v, c] : a) out[c];
  for (const auto& e : g.edges()) {
    const auto cu = a.at(e.u);
    const auto cv = a.at(e.v);
    out[cu].beta += e.weight;
    out[cv].beta += e.weight;
    if (cu == cv) out[cu].alpha += 2.0 * e.weight;
  }
  return out;
}

}  // namespace support
