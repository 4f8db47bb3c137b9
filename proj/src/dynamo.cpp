#include "dynamo/dynamo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "dynamo/error.hpp"

namespace dynamo {

std::string_view to_string(ChangeKind kind) {
  switch (kind) {
    case ChangeKind::IntraEdgeIncrease: return "ICEA_WI";
    case ChangeKind::CrossEdgeIncrease: return "CCEA_WI";
    case ChangeKind::IntraEdgeDecrease: return "ICED_WD";
    case ChangeKind::CrossEdgeDecrease: return "CCED_WD";
    case ChangeKind::VertexAddition: return "VERTEX_ADD";
    case ChangeKind::VertexDeletion: return "VERTEX_DEL";
  }
  return "UNKNOWN";
}

namespace {

struct PairHash {
  std::size_t operator()(const std::pair<VertexId, VertexId>& p) const noexcept {
    return std::hash<VertexId>{}(p.first * 0x9E3779B97F4A7C15ULL ^ p.second);
  }
};

std::pair<VertexId, VertexId> ordered(VertexId u, VertexId v) {
  return u < v ? std::pair{u, v} : std::pair{v, u};
}

/// Positive root of dw^2 + (2m - a2 - b2) dw - (m a2 + bi bj) = 0, where
/// a2 = -2 * cross_weight. The discriminant equals
/// (2m - b2 - 2X)^2 + 4 (bi - X)(bj - X) >= 0, so clamping only absorbs rounding.
double merge_threshold(double m, double cross_weight, double beta_i, double beta_j) {
  const double alpha2 = -2.0 * cross_weight;
  const double beta2 = beta_i + beta_j;
  const double delta1 = 2.0 * m - alpha2 - beta2;
  const double delta2 = m * alpha2 + beta_i * beta_j;
  const double disc = std::max(0.0, delta1 * delta1 + 4.0 * delta2);
  return 0.5 * (-delta1 + std::sqrt(disc));
}

/// Sum of edge weights between two communities of p (aligned with g).
double cross_weight(const WeightedGraph& g, const Partition& p, CommunityId a, CommunityId b) {
  const auto& ca = p.community(a);
  const auto& cb = p.community(b);
  const auto& small = ca.members.size() <= cb.members.size() ? ca : cb;
  const CommunityId other = &small == &ca ? b : a;
  const auto labels = p.labels();
  double x = 0.0;
  for (const VertexId u : small.members) {
    for (const auto& nb : g.neighbors_at(g.require_index(u))) {
      if (labels[nb.index] == other) x += nb.weight;
    }
  }
  return x;
}

void require_aligned(const WeightedGraph& g, const Partition& p) {
  if (!std::equal(g.vertices().begin(), g.vertices().end(), p.vertices().begin(), p.vertices().end())) {
    throw Error(ErrorCode::VertexSetMismatch, "partition does not cover exactly the previous snapshot");
  }
}

/// Cheap structural check that g_t1 is g_t with d applied: vertex sets,
/// every changed pair, and the edge count.
void check_consistent(const WeightedGraph& g_t1, const WeightedGraph& g_t, const GraphDelta& d) {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::InconsistentSnapshots, why); };
  for (VertexId v : d.added_vertices) {
    if (g_t.contains(v) || !g_t1.contains(v)) fail("added vertex " + std::to_string(v));
  }
  for (VertexId v : d.removed_vertices) {
    if (!g_t.contains(v) || g_t1.contains(v)) fail("removed vertex " + std::to_string(v));
  }
  if (g_t1.num_vertices() + d.removed_vertices.size() != g_t.num_vertices() + d.added_vertices.size()) {
    fail("vertex count");
  }

  std::unordered_map<std::pair<VertexId, VertexId>, double, PairHash> net;
  for (const auto& c : d.edge_changes) net[ordered(c.u, c.v)] += c.delta_w;

  long long edge_balance = 0;
  for (const auto& [key, dw] : net) {
    const double before = g_t.weight(key.first, key.second);
    const double after = g_t1.weight(key.first, key.second);
    const bool dropped = d.is_removed(key.first) || d.is_removed(key.second);
    const double expected = dropped ? 0.0 : std::max(0.0, before + dw);
    const double tol = 1e-9 * std::max({1.0, std::abs(before), std::abs(after)});
    if (std::abs(expected - after) > tol) {
      fail("edge (" + std::to_string(key.first) + "," + std::to_string(key.second) + ")");
    }
    edge_balance += (after > 0.0 ? 1 : 0) - (before > 0.0 ? 1 : 0);
  }
  std::unordered_set<std::pair<VertexId, VertexId>, PairHash> implicit;
  for (VertexId v : d.removed_vertices) {
    const auto iv = g_t.require_index(v);
    for (const auto& nb : g_t.neighbors_at(iv)) {
      auto key = ordered(v, g_t.id_at(nb.index));
      if (!net.contains(key)) implicit.insert(key);
    }
  }
  edge_balance -= static_cast<long long>(implicit.size());
  if (static_cast<long long>(g_t1.num_edges()) != static_cast<long long>(g_t.num_edges()) + edge_balance) {
    fail("edge count");
  }
}

/// Accumulates the plan: dissolve set plus last-writer-wins pair seeds.
class PlanBuilder {
 public:
  void dissolve(CommunityId c) { dissolve_.push_back(c); }

  void seed(VertexId i, VertexId j) {
    for (VertexId x : {i, j}) {
      auto it = partner_.find(x);
      if (it == partner_.end()) continue;
      const auto [y, slot] = it->second;
      alive_[slot] = false;
      partner_.erase(x);
      partner_.erase(y);
    }
    partner_[i] = {j, pairs_.size()};
    partner_[j] = {i, pairs_.size()};
    pairs_.push_back(ordered(i, j));
    alive_.push_back(true);
  }

  InitPlan finish() && {
    InitPlan plan;
    std::sort(dissolve_.begin(), dissolve_.end());
    dissolve_.erase(std::unique(dissolve_.begin(), dissolve_.end()), dissolve_.end());
    plan.dissolve = std::move(dissolve_);
    for (std::size_t k = 0; k < pairs_.size(); ++k) {
      if (alive_[k]) plan.pair_seeds.push_back(pairs_[k]);
    }
    return plan;
  }

 private:
  std::vector<CommunityId> dissolve_;
  std::unordered_map<VertexId, std::pair<VertexId, std::size_t>> partner_;
  std::vector<std::pair<VertexId, VertexId>> pairs_;
  std::vector<bool> alive_;
};

}  // namespace

ChangeKind classify(const WeightedGraph& g_t, const Partition& p_t, const GraphDelta& d, const EdgeChange& change) {
  for (VertexId k : {change.u, change.v}) {
    if (d.is_removed(k)) return ChangeKind::VertexDeletion;
  }
  for (VertexId k : {change.u, change.v}) {
    if (d.is_added(k)) return ChangeKind::VertexAddition;
  }
  for (VertexId k : {change.u, change.v}) g_t.require_index(k);
  const bool same = p_t.community_of(change.u) == p_t.community_of(change.v);
  if (change.delta_w > 0.0) return same ? ChangeKind::IntraEdgeIncrease : ChangeKind::CrossEdgeIncrease;
  return same ? ChangeKind::IntraEdgeDecrease : ChangeKind::CrossEdgeDecrease;
}

double ccea_merge_threshold(const WeightedGraph& g_t, const Partition& p_t, VertexId i, VertexId j) {
  const double m = g_t.total_weight();
  if (!(m > 0.0)) throw Error(ErrorCode::EmptyGraph, "threshold undefined for m = 0");
  g_t.require_index(i);
  g_t.require_index(j);
  const CommunityId ci = p_t.community_of(i);
  const CommunityId cj = p_t.community_of(j);
  if (ci == cj) throw Error(ErrorCode::SameCommunity, "endpoints share a community");
  return merge_threshold(m, cross_weight(g_t, p_t, ci, cj), p_t.community(ci).beta, p_t.community(cj).beta);
}

double bisplit_threshold(const WeightedGraph& g, const Partition& p, CommunityId c,
                         std::span<const VertexId> subset) {
  const auto& members = p.community(c).members;
  std::vector<VertexId> side(subset.begin(), subset.end());
  std::sort(side.begin(), side.end());
  side.erase(std::unique(side.begin(), side.end()), side.end());
  if (side.empty() || side.size() >= members.size() ||
      !std::includes(members.begin(), members.end(), side.begin(), side.end())) {
    throw Error(ErrorCode::InvalidConfig, "subset must be a non-empty proper subset of the community");
  }
  const double m = g.total_weight();
  double beta_p = 0.0;
  double beta_q = 0.0;
  double cut = 0.0;
  for (const VertexId u : members) {
    const auto iu = g.require_index(u);
    const bool in_p = std::binary_search(side.begin(), side.end(), u);
    (in_p ? beta_p : beta_q) += g.strength_at(iu);
    if (!in_p) continue;
    for (const auto& nb : g.neighbors_at(iu)) {
      const VertexId v = g.id_at(nb.index);
      if (p.labels()[nb.index] == c && !std::binary_search(side.begin(), side.end(), v)) cut += nb.weight;
    }
  }
  const double alpha1 = 2.0 * cut;
  const double denominator = 2.0 * beta_q - alpha1;
  if (std::abs(denominator) <= 1e-12 * std::max(1.0, beta_q)) {
    throw Error(ErrorCode::DegenerateDenominator, "2*beta_q equals alpha_1");
  }
  return (m * alpha1 - beta_p * beta_q) / denominator;
}

InitPlan init(const WeightedGraph& g_t1, const WeightedGraph& g_t, const Partition& p_t, const GraphDelta& input) {
  require_aligned(g_t, p_t);
  GraphDelta d = input;
  d.normalize();
  check_consistent(g_t1, g_t, d);

  const auto labels_t = p_t.labels();
  const double m = g_t.total_weight();
  auto community = [&](VertexId v) { return labels_t[g_t.require_index(v)]; };

  PlanBuilder plan;
  std::unordered_set<VertexId> deletions_done;
  std::unordered_map<VertexId, std::optional<VertexId>> addition_partner;
  std::map<std::pair<CommunityId, CommunityId>, double> cross_cache;

  auto dissolve_neighbourhood = [&](VertexId k) {
    for (const auto& nb : g_t.neighbors_at(g_t.require_index(k))) plan.dissolve(labels_t[nb.index]);
  };

  auto handle_deletion = [&](VertexId k) {
    if (!deletions_done.insert(k).second) return;
    const auto ik = g_t.require_index(k);
    if (g_t.degree_at(ik) == 0) return;
    plan.dissolve(labels_t[ik]);
    dissolve_neighbourhood(k);
  };

  auto handle_addition = [&](VertexId k) {
    auto [it, fresh] = addition_partner.try_emplace(k);
    if (fresh) {
      const auto ik = g_t1.require_index(k);
      double w_max = 0.0;
      for (const auto& nb : g_t1.neighbors_at(ik)) {
        const VertexId l = g_t1.id_at(nb.index);
        // Neighbours that are new themselves have no community yet.
        if (auto il = g_t.index_of(l)) plan.dissolve(labels_t[*il]);
        if (nb.weight > w_max) {
          w_max = nb.weight;
          it->second = l;
        }
      }
    }
    if (it->second) plan.seed(k, *it->second);
  };

  std::unordered_set<std::pair<VertexId, VertexId>, PairHash> seen;
  for (const auto& change : d.edge_changes) {
    const auto key = ordered(change.u, change.v);
    if (!seen.insert(key).second) continue;
    const auto [i, j] = key;
    const double w_before = g_t.weight(i, j);
    const double w_after = g_t1.weight(i, j);
    if (w_before == w_after) continue;

    bool vertex_event = false;
    for (VertexId k : {i, j}) {
      if (d.is_removed(k)) {
        handle_deletion(k);
        vertex_event = true;
      }
      if (d.is_added(k)) {
        handle_addition(k);
        vertex_event = true;
      }
    }
    if (vertex_event) continue;

    const CommunityId ci = community(i);
    const CommunityId cj = community(j);
    if (w_after < w_before) {
      if (ci == cj) {
        plan.dissolve(ci);
        dissolve_neighbourhood(i);
        dissolve_neighbourhood(j);
      }
      continue;
    }
    if (ci == cj) {
      plan.dissolve(ci);
      plan.seed(i, j);
      continue;
    }
    const auto pair_key = ordered(ci, cj);
    auto cached = cross_cache.find(pair_key);
    if (cached == cross_cache.end()) {
      cached = cross_cache.emplace(pair_key, cross_weight(g_t, p_t, ci, cj)).first;
    }
    const double threshold = merge_threshold(m, cached->second, p_t.community(ci).beta, p_t.community(cj).beta);
    if (w_after - w_before > threshold) {
      plan.dissolve(ci);
      plan.dissolve(cj);
      plan.seed(i, j);
    }
  }
  // Removed vertices whose incident edges were left implicit.
  for (VertexId k : d.removed_vertices) handle_deletion(k);

  return std::move(plan).finish();
}

std::vector<CommunityId> intermediate_labels(const WeightedGraph& g_t1, const Partition& p_t, const InitPlan& plan) {
  const auto old_vertices = p_t.vertices();
  const auto old_labels = p_t.labels();
  CommunityId next_id = p_t.communities().empty() ? 0 : p_t.communities().rbegin()->first + 1;

  std::vector<CommunityId> labels(g_t1.num_vertices());
  std::size_t k = 0;
  for (std::uint32_t i = 0; i < labels.size(); ++i) {
    const VertexId v = g_t1.id_at(i);
    while (k < old_vertices.size() && old_vertices[k] < v) ++k;
    if (k < old_vertices.size() && old_vertices[k] == v &&
        !std::binary_search(plan.dissolve.begin(), plan.dissolve.end(), old_labels[k])) {
      labels[i] = old_labels[k];
    } else {
      labels[i] = next_id++;
    }
  }
  for (const auto& [a, b] : plan.pair_seeds) {
    const CommunityId id = next_id++;
    labels[g_t1.require_index(a)] = id;
    labels[g_t1.require_index(b)] = id;
  }
  return labels;
}

Partition carry_forward(const WeightedGraph& g_t1, const Partition& p_t) {
  return partition_rebuild_aggregates(g_t1, intermediate_labels(g_t1, p_t, InitPlan{}));
}

Partition dynamo_update(const WeightedGraph& g_t1, const WeightedGraph& g_t, const Partition& p_t,
                        const GraphDelta& d, const LouvainOptions& options) {
  const InitPlan plan = init(g_t1, g_t, p_t, d);
  const auto labels = intermediate_labels(g_t1, p_t, plan);
  return louvain(g_t1, labels, options);
}

}  // namespace dynamo
