#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dynamo/dynamo.hpp"
#include "dynamo/ingest.hpp"
#include "dynamo/louvain.hpp"
#include "dynamo/partition.hpp"

namespace dynamo {

struct PipelineOptions {
  bool run_louvain = true;
  bool run_dynamo = true;
  /// Compute same-snapshot Louvain partitions as the NMI/ARI reference even
  /// when no louvain rows are requested.
  bool with_baseline = false;
  double epsilon = kDefaultEpsilon;
  /// Shuffled Louvain sweep order; ascending vertex order when unset.
  std::optional<std::uint64_t> shuffle_seed;
  /// Rerun Louvain from singletons whenever the dynamo result scores below
  /// this. kRefineDisabled turns refinement off.
  double refine_threshold = kRefineDisabled;
  /// Each detection is timed this many times and the mean reported.
  int repeat = 1;
  /// When the incremental result scores below C^(t) carried onto G^(t+1)
  /// unchanged, rerun Louvain from the carried partition instead. Keeps the
  /// dynamo row at or above the carry-forward modularity.
  bool carry_forward_floor = true;
};

/// Everything the pipeline knows after finishing one snapshot. Pointers are
/// null for algorithms that did not run.
struct SnapshotState {
  std::size_t index = 0;
  const WeightedGraph* graph = nullptr;
  const WeightedGraph* previous_graph = nullptr;
  const GraphDelta* delta = nullptr;
  const Partition* louvain = nullptr;
  const Partition* dynamo = nullptr;
  const Partition* previous_dynamo = nullptr;
  bool refined = false;
  /// The carry-forward floor replaced the dynamo_update result.
  bool floored = false;
};

using SnapshotObserver = std::function<void(const SnapshotState&)>;

/// Runs the selected detectors over the series. Snapshot 0 is handled by
/// Louvain for every algorithm; later snapshots use dynamo_update or a full
/// Louvain rerun. Reports are ordered by snapshot, louvain before dynamo.
/// Timing covers detection only. Snapshots with m == 0 get all-singleton
/// partitions and no modularity. Throws InvalidConfig when no algorithm is
/// selected or repeat < 1.
std::vector<SnapshotReport> run_pipeline(const SnapshotSeries& series, const PipelineOptions& options,
                                         const SnapshotObserver& observer = {});

/// Independent sequences on up to `jobs` threads; each sequence stays
/// sequential. Results are in input order.
std::vector<std::vector<SnapshotReport>> run_pipelines(const std::vector<SnapshotSeries>& sequences,
                                                       const PipelineOptions& options, unsigned jobs);

/// Sum of elapsed_ns over the reports of one algorithm.
std::int64_t cumulative_elapsed(const std::vector<SnapshotReport>& reports, std::string_view algorithm);

}  // namespace dynamo
