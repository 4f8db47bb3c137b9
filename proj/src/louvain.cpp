#include "dynamo/louvain.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "dynamo/error.hpp"

namespace dynamo {

namespace {

/// Level-0 adapter giving a WeightedGraph the CompressedGraph interface.
struct OriginalView {
  const WeightedGraph& g;

  std::size_t size() const { return g.num_vertices(); }
  std::span<const Neighbor> neighbors(std::uint32_t i) const { return g.neighbors_at(i); }
  double self_weight(std::uint32_t) const { return 0.0; }
  double strength(std::uint32_t i) const { return g.strength_at(i); }
  double total_weight() const { return g.total_weight(); }
};

/// Community bookkeeping for one level. Community indices live in [0, n).
struct LevelState {
  std::vector<std::uint32_t> labels;
  std::vector<double> tot;  // beta_c
  std::vector<double> in;   // alpha_c
};

template <class G>
LevelState make_state(const G& g, std::vector<std::uint32_t> labels) {
  const std::size_t n = g.size();
  LevelState s{std::move(labels), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto c = s.labels[i];
    s.tot[c] += g.strength(i);
    s.in[c] += g.self_weight(i);
    for (const auto& nb : g.neighbors(i)) {
      if (s.labels[nb.index] == c) s.in[c] += nb.weight;
    }
  }
  return s;
}

double state_modularity(const LevelState& s, double m) {
  double q = 0.0;
  for (std::size_t c = 0; c < s.tot.size(); ++c) q += s.in[c] - s.tot[c] * s.tot[c] / (2.0 * m);
  return q / (2.0 * m);
}

/// Repeats full sweeps until one makes no move. Returns (sweeps, moves).
template <class G>
std::pair<int, std::size_t> move_nodes(const G& g, LevelState& s, double epsilon,
                                       std::span<const std::uint32_t> order) {
  const double m = g.total_weight();
  const double two_m = 2.0 * m;
  std::vector<double> acc(g.size(), 0.0);
  std::vector<std::uint32_t> touched;
  int sweeps = 0;
  std::size_t total_moves = 0;
  std::size_t moves = 0;
  do {
    moves = 0;
    ++sweeps;
    for (const std::uint32_t i : order) {
      const std::uint32_t own = s.labels[i];
      const double k_i = g.strength(i);
      const double self = g.self_weight(i);

      touched.clear();
      for (const auto& nb : g.neighbors(i)) {
        const auto c = s.labels[nb.index];
        if (acc[c] == 0.0) touched.push_back(c);
        acc[c] += nb.weight;
      }

      const double k_own = acc[own];
      s.tot[own] -= k_i;
      s.in[own] -= 2.0 * k_own + self;

      const double stay_gain = k_own - k_i * s.tot[own] / two_m;
      std::uint32_t best = own;
      double best_gain = 0.0;
      bool found = false;
      for (const auto c : touched) {
        if (c == own) continue;
        const double gain = acc[c] - k_i * s.tot[c] / two_m;
        if (!found || gain > best_gain || (gain == best_gain && c < best)) {
          best = c;
          best_gain = gain;
          found = true;
        }
      }
      std::uint32_t target = own;
      if (found && (best_gain - stay_gain) / m > epsilon) target = best;

      s.tot[target] += k_i;
      s.in[target] += 2.0 * acc[target] + self;
      for (const auto c : touched) acc[c] = 0.0;

      if (target != own) {
        s.labels[i] = target;
        ++moves;
      }
    }
    total_moves += moves;
  } while (moves > 0);
  return {sweeps, total_moves};
}

std::vector<std::uint32_t> sweep_order(std::size_t n, const std::optional<std::uint64_t>& seed, int level) {
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  if (seed) {
    std::mt19937_64 rng(*seed + static_cast<std::uint64_t>(level));
    std::shuffle(order.begin(), order.end(), rng);
  }
  return order;
}

/// Maps arbitrary community ids onto [0, k) in ascending id order.
std::vector<std::uint32_t> densify(std::span<const CommunityId> labels, std::vector<CommunityId>* ids_out) {
  std::vector<CommunityId> ids(labels.begin(), labels.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<std::uint32_t> dense(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    dense[i] = static_cast<std::uint32_t>(std::lower_bound(ids.begin(), ids.end(), labels[i]) - ids.begin());
  }
  if (ids_out) *ids_out = std::move(ids);
  return dense;
}

}  // namespace

class CompressedGraphBuilder {
 public:
  static void set_communities(CompressedGraph& g, std::vector<CommunityId> ids) { g.communities_ = std::move(ids); }

  /// Super vertices are numbered in ascending label order.
  template <class G>
  static CompressedGraph build(const G& g, std::span<const std::uint32_t> labels) {
    const std::size_t n = g.size();
    std::vector<std::uint32_t> renumber(n, UINT32_MAX);
    for (std::uint32_t i = 0; i < n; ++i) renumber[labels[i]] = 0;
    std::uint32_t k = 0;
    for (auto& r : renumber) {
      if (r == 0) r = k++;
    }

    CompressedGraph out;
    out.super_of_.resize(n);
    std::vector<std::uint32_t> count(k + 1, 0);
    for (std::uint32_t i = 0; i < n; ++i) {
      out.super_of_[i] = renumber[labels[i]];
      ++count[out.super_of_[i] + 1];
    }
    std::partial_sum(count.begin(), count.end(), count.begin());
    std::vector<std::uint32_t> members(n);
    {
      std::vector<std::uint32_t> fill(count.begin(), count.end() - 1);
      for (std::uint32_t i = 0; i < n; ++i) members[fill[out.super_of_[i]]++] = i;
    }

    out.self_weight_.assign(k, 0.0);
    out.strength_.assign(k, 0.0);
    out.offsets_.assign(1, 0);
    out.offsets_.reserve(k + 1);
    std::vector<double> acc(k, 0.0);
    std::vector<std::uint32_t> touched;
    for (std::uint32_t s = 0; s < k; ++s) {
      touched.clear();
      for (std::uint32_t p = count[s]; p < count[s + 1]; ++p) {
        const std::uint32_t i = members[p];
        out.self_weight_[s] += g.self_weight(i);
        out.strength_[s] += g.strength(i);
        for (const auto& nb : g.neighbors(i)) {
          const auto t = out.super_of_[nb.index];
          if (t == s) {
            out.self_weight_[s] += nb.weight;
          } else {
            if (acc[t] == 0.0) touched.push_back(t);
            acc[t] += nb.weight;
          }
        }
      }
      std::sort(touched.begin(), touched.end());
      for (const auto t : touched) {
        out.adjacency_.push_back({t, acc[t]});
        acc[t] = 0.0;
      }
      out.offsets_.push_back(out.adjacency_.size());
    }
    out.total_weight_ = g.total_weight();
    return out;
  }
};

double CompressedGraph::weight(std::uint32_t a, std::uint32_t b) const {
  if (a == b) return self_weight_[a];
  for (const auto& nb : neighbors(a)) {
    if (nb.index == b) return nb.weight;
  }
  return 0.0;
}

double CompressedGraph::identity_modularity() const {
  const double m = total_weight_;
  if (!(m > 0.0)) throw Error(ErrorCode::EmptyGraph, "modularity undefined for m = 0");
  double q = 0.0;
  for (std::size_t s = 0; s < size(); ++s) q += self_weight_[s] - strength_[s] * strength_[s] / (2.0 * m);
  return q / (2.0 * m);
}

CompressedGraph compress(const WeightedGraph& g, const Partition& p) {
  if (!std::equal(g.vertices().begin(), g.vertices().end(), p.vertices().begin(), p.vertices().end())) {
    throw Error(ErrorCode::VertexSetMismatch, "partition does not cover exactly the graph's vertices");
  }
  std::vector<CommunityId> ids;
  const auto dense = densify(p.labels(), &ids);
  auto out = CompressedGraphBuilder::build(OriginalView{g}, dense);
  CompressedGraphBuilder::set_communities(out, std::move(ids));
  return out;
}

CompressedGraph compress(const CompressedGraph& g, std::span<const std::uint32_t> labels) {
  if (labels.size() != g.size()) throw Error(ErrorCode::VertexSetMismatch, "label count differs from size");
  std::vector<CommunityId> ids(labels.begin(), labels.end());
  const auto dense = densify(ids, &ids);
  auto out = CompressedGraphBuilder::build(g, dense);
  CompressedGraphBuilder::set_communities(out, std::move(ids));
  return out;
}

LocalMoveResult local_moving_pass(const WeightedGraph& g, const Partition& p, double epsilon) {
  if (!std::equal(g.vertices().begin(), g.vertices().end(), p.vertices().begin(), p.vertices().end())) {
    throw Error(ErrorCode::VertexSetMismatch, "partition does not cover exactly the graph's vertices");
  }
  if (!(g.total_weight() > 0.0)) {
    return {p, false};
  }
  std::vector<CommunityId> ids;
  const OriginalView view{g};
  LevelState s = make_state(view, densify(p.labels(), &ids));
  const auto order = sweep_order(g.num_vertices(), std::nullopt, 0);
  const auto [sweeps, moves] = move_nodes(view, s, epsilon, order);

  std::vector<CommunityId> labels(g.num_vertices());
  std::map<CommunityId, CommunityStats> stats;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto c = s.labels[i];
    labels[i] = ids[c];
    stats.try_emplace(ids[c], CommunityStats{s.in[c], s.tot[c], {}});
  }
  return {Partition::from_parts({g.vertices().begin(), g.vertices().end()}, std::move(labels), std::move(stats)),
          moves > 0};
}

LabelMoveResult local_moving_pass(const CompressedGraph& g, std::span<const std::uint32_t> labels, double epsilon) {
  if (labels.size() != g.size()) throw Error(ErrorCode::VertexSetMismatch, "label count differs from size");
  if (!(g.total_weight() > 0.0)) return {{labels.begin(), labels.end()}, false};
  std::vector<CommunityId> ids(labels.begin(), labels.end());
  LevelState s = make_state(g, densify(ids, &ids));
  const auto order = sweep_order(g.size(), std::nullopt, 0);
  const auto [sweeps, moves] = move_nodes(g, s, epsilon, order);
  std::vector<std::uint32_t> out(labels.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<std::uint32_t>(ids[s.labels[i]]);
  return {std::move(out), moves > 0};
}

namespace {

template <class G>
bool run_level(const G& g, LevelState& s, int level, const LouvainOptions& options) {
  const auto order = sweep_order(g.size(), options.shuffle_seed, level);
  PassRecord record;
  record.level = level;
  if (options.on_pass) record.modularity_before = state_modularity(s, g.total_weight());
  const auto [sweeps, moves] = move_nodes(g, s, options.epsilon, order);
  if (options.on_pass) {
    record.sweeps = sweeps;
    record.moves = moves;
    record.modularity_after = state_modularity(s, g.total_weight());
    options.on_pass(record);
  }
  return moves > 0;
}

Partition run_louvain(const WeightedGraph& g, std::vector<std::uint32_t> labels, const LouvainOptions& options) {
  if (!(g.total_weight() > 0.0)) throw Error(ErrorCode::EmptyGraph, "Louvain needs a graph with m > 0");
  const std::size_t n0 = g.num_vertices();
  const OriginalView view{g};

  std::vector<std::uint32_t> node_of(n0);
  std::iota(node_of.begin(), node_of.end(), 0u);

  LevelState s = make_state(view, std::move(labels));
  run_level(view, s, 0, options);

  CompressedGraph current;
  int level = 0;
  while (true) {
    CompressedGraph next = level == 0 ? CompressedGraphBuilder::build(view, s.labels)
                                      : CompressedGraphBuilder::build(current, s.labels);
    const auto super_of = next.super_vertex_of();
    for (auto& node : node_of) node = super_of[node];
    current = std::move(next);
    ++level;

    std::vector<std::uint32_t> identity(current.size());
    std::iota(identity.begin(), identity.end(), 0u);
    s = make_state(current, std::move(identity));
    if (current.size() <= 1) break;
    if (!run_level(current, s, level, options)) break;
  }

  // Unfold onto original vertices; ids follow first appearance.
  std::vector<CommunityId> final_labels(n0);
  std::vector<CommunityId> fresh(s.tot.size(), UINT64_MAX);
  std::map<CommunityId, CommunityStats> stats;
  CommunityId next_id = 0;
  for (std::size_t v = 0; v < n0; ++v) {
    const auto c = s.labels[node_of[v]];
    if (fresh[c] == UINT64_MAX) {
      fresh[c] = next_id++;
      stats.emplace(fresh[c], CommunityStats{s.in[c], s.tot[c], {}});
    }
    final_labels[v] = fresh[c];
  }
  return Partition::from_parts({g.vertices().begin(), g.vertices().end()}, std::move(final_labels),
                               std::move(stats));
}

}  // namespace

Partition louvain(const WeightedGraph& g, const LouvainOptions& options) {
  std::vector<std::uint32_t> labels(g.num_vertices());
  std::iota(labels.begin(), labels.end(), 0u);
  return run_louvain(g, std::move(labels), options);
}

Partition louvain(const WeightedGraph& g, std::span<const CommunityId> initial_labels,
                  const LouvainOptions& options) {
  if (initial_labels.size() != g.num_vertices()) {
    throw Error(ErrorCode::VertexSetMismatch, "initial labels do not cover the graph's vertices");
  }
  return run_louvain(g, densify(initial_labels, nullptr), options);
}

Partition louvain(const WeightedGraph& g, const Partition& initial, const LouvainOptions& options) {
  if (!std::equal(g.vertices().begin(), g.vertices().end(), initial.vertices().begin(), initial.vertices().end())) {
    throw Error(ErrorCode::VertexSetMismatch, "initial partition does not cover exactly the graph's vertices");
  }
  return louvain(g, initial.labels(), options);
}

}  // namespace dynamo
