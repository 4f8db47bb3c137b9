#include "dynamo/synthgen.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <string>

#include "dynamo/error.hpp"

namespace dynamo {

void GenConfig::validate() const {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::InvalidConfig, why); };
  if (num_communities < 2) fail("num_communities must be at least 2");
  if (community_size < 3) fail("community_size must be at least 3");
  if (!(p_out >= 0.0 && p_in <= 1.0 && p_in > p_out)) fail("need 0 <= p_out < p_in <= 1");
  if (!(weight_lo > 0.0 && weight_hi >= weight_lo)) fail("need 0 < weight_lo <= weight_hi");
  if (num_snapshots < 1) fail("num_snapshots must be at least 1");
  const double s = static_cast<double>(community_size);
  const double k = static_cast<double>(num_communities);
  if (!(p_in * (s - 1.0) > p_out * s * (k - 1.0))) {
    fail("expected intra-degree must exceed expected inter-degree");
  }
}

namespace {

// Portable draws: the standard distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }

  std::size_t below(std::size_t n) {
    const std::uint64_t bound = n;
    const std::uint64_t threshold = (0 - bound) % bound;
    while (true) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return static_cast<std::size_t>(r % bound);
    }
  }

  /// k distinct indices of [0, n) in draw order.
  std::vector<std::size_t> sample(std::size_t n, std::size_t k) {
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + below(n - i)]);
    pool.resize(k);
    return pool;
  }

 private:
  std::mt19937_64 engine_;
};

using Pair = std::pair<VertexId, VertexId>;

Pair ordered(VertexId a, VertexId b) { return a < b ? Pair{a, b} : Pair{b, a}; }

[[noreturn]] void infeasible(const std::string& why) { throw Error(ErrorCode::InfeasibleChurn, why); }

std::vector<bool> articulation_points(const WeightedGraph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<bool> cut(n, false);
  std::vector<std::uint32_t> disc(n, 0), low(n, 0), parent(n, UINT32_MAX), children(n, 0);
  std::vector<std::size_t> next(n, 0);
  std::uint32_t time = 0;
  std::vector<std::uint32_t> stack;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (disc[root]) continue;
    disc[root] = low[root] = ++time;
    stack.push_back(root);
    while (!stack.empty()) {
      const std::uint32_t v = stack.back();
      const auto nbrs = g.neighbors_at(v);
      if (next[v] < nbrs.size()) {
        const std::uint32_t w = nbrs[next[v]++].index;
        if (!disc[w]) {
          parent[w] = v;
          ++children[v];
          disc[w] = low[w] = ++time;
          stack.push_back(w);
        } else if (w != parent[v]) {
          low[v] = std::min(low[v], disc[w]);
        }
        continue;
      }
      stack.pop_back();
      if (parent[v] != UINT32_MAX) {
        const std::uint32_t p = parent[v];
        low[p] = std::min(low[p], low[v]);
        if (parent[p] != UINT32_MAX && low[v] >= disc[p]) cut[p] = true;
      }
    }
    cut[root] = children[root] > 1;
  }
  return cut;
}

class Generator {
 public:
  explicit Generator(const GenConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {}

  Generated run() {
    std::vector<GraphDelta> deltas;
    deltas.push_back(base_delta());
    graph_ = apply_delta(WeightedGraph{}, deltas.back());
    record_snapshot();
    out_.edge_kinds.emplace_back();
    for (std::size_t k = 1; k < cfg_.num_snapshots; ++k) {
      std::vector<ChangeKind> kinds;
      deltas.push_back(next_delta(kinds));
      graph_ = apply_delta(graph_, deltas.back());
      record_snapshot();
      out_.edge_kinds.push_back(std::move(kinds));
    }
    if (cfg_.churn.additive_only()) {
      for (std::size_t k = 0; k < deltas.size(); ++k) {
        for (const auto& c : deltas[k].edge_changes) {
          out_.events.push_back({c.u, c.v, c.delta_w, static_cast<std::int64_t>(k)});
        }
      }
    }
    out_.series.deltas = std::move(deltas);
    return std::move(out_);
  }

 private:
  double draw_weight() { return cfg_.weight_lo + (cfg_.weight_hi - cfg_.weight_lo) * rng_.uniform(); }

  GraphDelta base_delta() {
    const std::size_t n = cfg_.num_communities * cfg_.community_size;
    GraphDelta d;
    std::vector<std::size_t> degree(n, 0);
    std::map<Pair, double> edges;
    for (VertexId i = 0; i < n; ++i) {
      d.added_vertices.push_back(i);
      block_[i] = i / cfg_.community_size;
    }
    for (VertexId i = 0; i < n; ++i) {
      for (VertexId j = i + 1; j < n; ++j) {
        if (rng_.bernoulli(block_[i] == block_[j] ? cfg_.p_in : cfg_.p_out)) {
          edges[{i, j}] = draw_weight();
          ++degree[i];
          ++degree[j];
        }
      }
    }
    // Isolated vertices would be invisible to an edge stream.
    for (VertexId i = 0; i < n; ++i) {
      if (degree[i]) continue;
      const VertexId first = block_[i] * cfg_.community_size;
      VertexId j = first + rng_.below(cfg_.community_size - 1);
      if (j >= i) ++j;
      edges[ordered(i, j)] = draw_weight();
      ++degree[i];
      ++degree[j];
    }
    for (const auto& [key, w] : edges) d.edge_changes.push_back({key.first, key.second, w});
    next_id_ = n;
    return d;
  }

  void record_snapshot() {
    std::vector<CommunityId> labels;
    labels.reserve(graph_.num_vertices());
    for (VertexId v : graph_.vertices()) labels.push_back(block_.at(v));
    out_.ground_truth.push_back(partition_rebuild_aggregates(graph_, labels));
    out_.series.snapshots.push_back(graph_);
  }

  bool same_block(VertexId a, VertexId b) const { return block_.at(a) == block_.at(b); }

  void pick_decreases(bool intra, std::size_t count, GraphDelta& d, std::vector<ChangeKind>& kinds) {
    if (count == 0) return;
    std::vector<WeightedEdge> candidates;
    for (const auto& e : graph_.edges()) {
      if (same_block(e.u, e.v) == intra) candidates.push_back(e);
    }
    if (count > candidates.size()) {
      infeasible("requested " + std::to_string(count) + (intra ? " intra" : " cross") + "-community decreases but only " +
                 std::to_string(candidates.size()) + " such edges exist");
    }
    for (std::size_t idx : rng_.sample(candidates.size(), count)) {
      const auto& e = candidates[idx];
      // Half the picks delete the edge outright, the rest keep a fraction of it.
      const double dw = rng_.bernoulli(0.5) ? -e.weight : -e.weight * (0.25 + 0.5 * rng_.uniform());
      d.edge_changes.push_back({e.u, e.v, dw});
      kinds.push_back(intra ? ChangeKind::IntraEdgeDecrease : ChangeKind::CrossEdgeDecrease);
      used_.insert({e.u, e.v});
      touched_.insert(e.u);
      touched_.insert(e.v);
    }
  }

  void pick_increases(bool intra, std::size_t count, GraphDelta& d, std::vector<ChangeKind>& kinds) {
    if (count == 0) return;
    const auto& vertices = graph_.vertices();
    std::size_t total = 0;
    std::map<std::size_t, std::size_t> block_sizes;
    for (VertexId v : vertices) ++block_sizes[block_.at(v)];
    const std::size_t n = vertices.size();
    std::size_t intra_pairs = 0;
    for (const auto& [b, s] : block_sizes) intra_pairs += s * (s - (s > 0)) / 2;
    total = intra ? intra_pairs : n * (n - (n > 0)) / 2 - intra_pairs;
    std::size_t blocked = 0;
    for (const auto& p : used_) blocked += same_block(p.first, p.second) == intra;
    const std::size_t available = total - blocked;
    if (count > available) {
      infeasible("requested " + std::to_string(count) + (intra ? " intra" : " cross") +
                 "-community increases but only " + std::to_string(available) + " vertex pairs qualify");
    }
    auto accept = [&](const Pair& p) {
      d.edge_changes.push_back({p.first, p.second, draw_weight()});
      kinds.push_back(intra ? ChangeKind::IntraEdgeIncrease : ChangeKind::CrossEdgeIncrease);
      used_.insert(p);
      touched_.insert(p.first);
      touched_.insert(p.second);
    };
    if (2 * count <= available) {
      // Uniform over ordered pairs, hence over unordered ones.
      for (std::size_t picked = 0; picked < count;) {
        const VertexId a = vertices[rng_.below(n)];
        const VertexId b = vertices[rng_.below(n)];
        if (a == b || same_block(a, b) != intra) continue;
        const Pair p = ordered(a, b);
        if (used_.count(p)) continue;
        accept(p);
        ++picked;
      }
      return;
    }
    std::vector<Pair> candidates;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const Pair p{vertices[i], vertices[j]};
        if (same_block(p.first, p.second) == intra && !used_.count(p)) candidates.push_back(p);
      }
    }
    for (std::size_t idx : rng_.sample(candidates.size(), count)) accept(candidates[idx]);
  }

  void pick_deletions(std::size_t count, GraphDelta& d) {
    if (count == 0) return;
    const auto cut = articulation_points(graph_);
    std::vector<VertexId> preferred, fallback;
    for (std::uint32_t i = 0; i < graph_.num_vertices(); ++i) {
      const VertexId v = graph_.id_at(i);
      if (touched_.count(v)) continue;
      (cut[i] ? fallback : preferred).push_back(v);
    }
    if (count > preferred.size() + fallback.size()) {
      infeasible("requested " + std::to_string(count) + " vertex deletions but only " +
                 std::to_string(preferred.size() + fallback.size()) + " vertices are free");
    }
    const std::size_t from_preferred = std::min(count, preferred.size());
    for (std::size_t idx : rng_.sample(preferred.size(), from_preferred)) d.removed_vertices.push_back(preferred[idx]);
    for (std::size_t idx : rng_.sample(fallback.size(), count - from_preferred)) {
      d.removed_vertices.push_back(fallback[idx]);
    }
  }

  void pick_additions(std::size_t count, GraphDelta& d, std::vector<ChangeKind>& kinds) {
    if (count == 0) return;
    std::set<VertexId> removed(d.removed_vertices.begin(), d.removed_vertices.end());
    std::vector<VertexId> survivors;
    for (VertexId v : graph_.vertices()) {
      if (!removed.count(v)) survivors.push_back(v);
    }
    if (survivors.empty()) infeasible("vertex additions need at least one surviving vertex to attach to");
    for (std::size_t a = 0; a < count; ++a) {
      const VertexId k = next_id_++;
      const std::size_t b = rng_.below(cfg_.num_communities);
      block_[k] = b;
      d.added_vertices.push_back(k);
      std::vector<VertexId> neighbors;
      std::vector<VertexId> same;
      for (VertexId v : survivors) {
        const bool inside = block_.at(v) == b;
        if (inside) same.push_back(v);
        if (rng_.bernoulli(inside ? cfg_.p_in : cfg_.p_out)) neighbors.push_back(v);
      }
      if (neighbors.empty()) {
        const auto& pool = same.empty() ? survivors : same;
        neighbors.push_back(pool[rng_.below(pool.size())]);
      }
      for (VertexId l : neighbors) {
        d.edge_changes.push_back({l, k, draw_weight()});
        kinds.push_back(ChangeKind::VertexAddition);
      }
    }
  }

  GraphDelta next_delta(std::vector<ChangeKind>& kinds) {
    GraphDelta d;
    used_.clear();
    touched_.clear();
    const auto& churn = cfg_.churn;
    pick_decreases(true, churn.intra_decrease, d, kinds);
    pick_decreases(false, churn.cross_decrease, d, kinds);
    pick_increases(true, churn.intra_increase, d, kinds);
    pick_increases(false, churn.cross_increase, d, kinds);
    pick_deletions(churn.vertex_delete, d);
    pick_additions(churn.vertex_add, d, kinds);
    for (VertexId v : d.removed_vertices) block_.erase(v);
    d.normalize();
    return d;
  }

  const GenConfig& cfg_;
  Rng rng_;
  WeightedGraph graph_;
  std::map<VertexId, std::size_t> block_;
  VertexId next_id_ = 0;
  std::set<Pair> used_;
  std::set<VertexId> touched_;
  Generated out_;
};

}  // namespace

Generated generate(const GenConfig& cfg) {
  cfg.validate();
  return Generator(cfg).run();
}

void write_generated(const Generated& gen, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  if (!gen.events.empty()) write_edge_events(gen.events, dir / "events.tsv");
  write_delta_directory(gen.series, dir / "deltas");
  for (std::size_t k = 0; k < gen.ground_truth.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "truth_%04zu.tsv", k);
    write_partition_file(gen.ground_truth[k].assignment(), dir / "truth" / name);
  }
}

}  // namespace dynamo
