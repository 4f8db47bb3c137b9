#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "dynamo/dynamo.hpp"
#include "dynamo/graph.hpp"
#include "dynamo/ingest.hpp"
#include "dynamo/partition.hpp"

namespace dynamo {

/// Number of changes of each kind drawn per snapshot after the first. The
/// defaults touch about 3% of the edges of the default 4 x 50 graph.
struct ChurnCounts {
  std::size_t intra_increase = 8;
  std::size_t cross_increase = 4;
  std::size_t intra_decrease = 4;
  std::size_t cross_decrease = 2;
  std::size_t vertex_add = 1;
  std::size_t vertex_delete = 1;

  static ChurnCounts none() { return {0, 0, 0, 0, 0, 0}; }

  bool additive_only() const { return intra_decrease == 0 && cross_decrease == 0 && vertex_delete == 0; }
  std::size_t total() const {
    return intra_increase + cross_increase + intra_decrease + cross_decrease + vertex_add + vertex_delete;
  }
};

struct GenConfig {
  std::uint64_t seed = 1;
  std::size_t num_communities = 4;
  std::size_t community_size = 50;
  double p_in = 0.3;
  double p_out = 0.01;
  std::size_t num_snapshots = 24;
  ChurnCounts churn;
  double weight_lo = 1.0;
  double weight_hi = 1.0;

  /// Throws InvalidConfig unless num_communities >= 2, community_size >= 3,
  /// 0 <= p_out < p_in <= 1, 0 < weight_lo <= weight_hi, num_snapshots >= 1,
  /// and the expected intra-degree exceeds the expected inter-degree.
  void validate() const;
};

struct Generated {
  SnapshotSeries series;
  /// Planted blocks restricted to each snapshot's vertices.
  std::vector<Partition> ground_truth;
  /// edge_kinds[k][r] is the kind of deltas[k].edge_changes[r] relative to
  /// (snapshots[k-1], ground_truth[k-1]). Empty for k = 0.
  std::vector<std::vector<ChangeKind>> edge_kinds;
  /// Stream reproducing the series through slice_snapshots(events, 1, 0);
  /// empty unless the churn is additive-only.
  std::vector<EdgeEvent> events;
};

/// Planted-partition base graph (ids 0..n-1, block = id / community_size)
/// followed by num_snapshots - 1 randomized deltas. Every base vertex gets at
/// least one edge, so the event stream covers the whole vertex set.
/// Throws InvalidConfig, InfeasibleChurn.
Generated generate(const GenConfig& cfg);

/// Writes events.tsv (additive-only churn), deltas/delta_NNNN.txt and
/// truth/truth_NNNN.tsv under `dir`.
void write_generated(const Generated& gen, const std::filesystem::path& dir);

}  // namespace dynamo
