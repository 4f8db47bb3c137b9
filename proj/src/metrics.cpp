#include "dynamo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dynamo/error.hpp"

namespace dynamo {

ConfusionTable confusion_table(std::span<const VertexId> vertices_a, std::span<const CommunityId> labels_a,
                               std::span<const VertexId> vertices_b, std::span<const CommunityId> labels_b) {
  if (!std::equal(vertices_a.begin(), vertices_a.end(), vertices_b.begin(), vertices_b.end())) {
    throw Error(ErrorCode::VertexSetMismatch, "clusterings cover different vertex sets");
  }
  ConfusionTable t;
  t.n = vertices_a.size();
  for (std::size_t i = 0; i < vertices_a.size(); ++i) {
    ++t.counts[{labels_a[i], labels_b[i]}];
    ++t.row_sums[labels_a[i]];
    ++t.column_sums[labels_b[i]];
  }
  return t;
}

ConfusionTable confusion_table(const Partition& truth, const Partition& result) {
  return confusion_table(truth.vertices(), truth.labels(), result.vertices(), result.labels());
}

ConfusionTable confusion_table(const Assignment& truth, const Assignment& result) {
  std::vector<VertexId> va, vb;
  std::vector<CommunityId> la, lb;
  for (const auto& [v, c] : truth) {
    va.push_back(v);
    la.push_back(c);
  }
  for (const auto& [v, c] : result) {
    vb.push_back(v);
    lb.push_back(c);
  }
  return confusion_table(va, la, vb, lb);
}

namespace {

double entropy(const std::map<CommunityId, std::uint64_t>& sums, double n) {
  double h = 0.0;
  for (const auto& [c, count] : sums) {
    const double p = static_cast<double>(count) / n;
    h -= p * std::log(p);
  }
  return h;
}

}  // namespace

double nmi(const ConfusionTable& t) {
  if (t.n == 0) throw Error(ErrorCode::VertexSetMismatch, "NMI needs at least one vertex");
  const double n = static_cast<double>(t.n);
  const double h_truth = entropy(t.row_sums, n);
  const double h_result = entropy(t.column_sums, n);
  if (h_truth + h_result == 0.0) return 1.0;
  double mi = 0.0;
  for (const auto& [key, count] : t.counts) {
    const double nxy = static_cast<double>(count);
    const double nx = static_cast<double>(t.row_sums.at(key.first));
    const double ny = static_cast<double>(t.column_sums.at(key.second));
    mi += (nxy / n) * std::log(nxy * n / (nx * ny));
  }
  return std::clamp(2.0 * mi / (h_truth + h_result), 0.0, 1.0);
}

double nmi(const Partition& truth, const Partition& result) { return nmi(confusion_table(truth, result)); }
double nmi(const Assignment& truth, const Assignment& result) { return nmi(confusion_table(truth, result)); }

PairCounts pair_counts(const ConfusionTable& t) {
  auto choose2 = [](std::uint64_t x) { return static_cast<double>(x) * static_cast<double>(x - (x > 0)) / 2.0; };
  double together_both = 0.0;
  for (const auto& [key, count] : t.counts) together_both += choose2(count);
  double together_truth = 0.0;
  for (const auto& [c, count] : t.row_sums) together_truth += choose2(count);
  double together_result = 0.0;
  for (const auto& [c, count] : t.column_sums) together_result += choose2(count);
  PairCounts p;
  p.a = together_both;
  p.b = together_truth - together_both;
  p.c = together_result - together_both;
  p.d = choose2(t.n) - p.a - p.b - p.c;
  return p;
}

double ari(const ConfusionTable& t) {
  if (t.n < 2) throw Error(ErrorCode::VertexSetMismatch, "ARI needs at least two vertices");
  const auto [a, b, c, d] = pair_counts(t);
  const double denominator = b * b + c * c + 2.0 * a * d + (a + d) * (b + c);
  // b = c = 0 and ad = 0: both clusterings agree on every pair.
  if (denominator == 0.0) return 1.0;
  return 2.0 * (a * d - b * c) / denominator;
}

double ari(const Partition& truth, const Partition& result) { return ari(confusion_table(truth, result)); }
double ari(const Assignment& truth, const Assignment& result) { return ari(confusion_table(truth, result)); }

namespace {

class PartitionEnumerator {
 public:
  explicit PartitionEnumerator(const WeightedGraph& g)
      : n_(g.num_vertices()), two_m_(2.0 * g.total_weight()), adjacency_(n_ * n_, 0.0), strength_(n_) {
    for (std::uint32_t i = 0; i < n_; ++i) {
      strength_[i] = g.strength_at(i);
      for (const auto& nb : g.neighbors_at(i)) adjacency_[i * n_ + nb.index] = nb.weight;
    }
    block_.assign(n_, 0);
    alpha_.assign(n_, 0.0);
    beta_.assign(n_, 0.0);
  }

  void run() { recurse(0, 0); }

  const std::vector<std::uint32_t>& best() const { return best_; }
  double best_modularity() const { return best_q_; }

 private:
  void recurse(std::size_t k, std::uint32_t blocks) {
    if (k == n_) {
      double q = 0.0;
      for (std::uint32_t b = 0; b < blocks; ++b) q += alpha_[b] - beta_[b] * beta_[b] / two_m_;
      q /= two_m_;
      if (best_.empty() || q > best_q_ + 1e-12) {
        best_q_ = q;
        best_ = block_;
      }
      return;
    }
    for (std::uint32_t b = 0; b <= blocks && b < n_; ++b) {
      double inner = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        if (block_[j] == b) inner += adjacency_[k * n_ + j];
      }
      block_[k] = b;
      alpha_[b] += 2.0 * inner;
      beta_[b] += strength_[k];
      recurse(k + 1, b == blocks ? blocks + 1 : blocks);
      alpha_[b] -= 2.0 * inner;
      beta_[b] -= strength_[k];
    }
  }

  std::size_t n_;
  double two_m_;
  std::vector<double> adjacency_;
  std::vector<double> strength_;
  std::vector<std::uint32_t> block_;
  std::vector<double> alpha_;
  std::vector<double> beta_;
  std::vector<std::uint32_t> best_;
  double best_q_ = 0.0;
};

}  // namespace

ExhaustiveResult exhaustive_best_partition(const WeightedGraph& g) {
  if (g.num_vertices() > kExhaustiveLimit) {
    throw Error(ErrorCode::TooLarge, std::to_string(g.num_vertices()) + " vertices exceed the exhaustive limit");
  }
  if (!(g.total_weight() > 0.0)) throw Error(ErrorCode::EmptyGraph, "modularity undefined for m = 0");
  PartitionEnumerator e(g);
  e.run();
  std::vector<CommunityId> labels(e.best().begin(), e.best().end());
  return {partition_rebuild_aggregates(g, labels), e.best_modularity()};
}

}  // namespace dynamo
