#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dynamo/graph.hpp"
#include "dynamo/partition.hpp"

namespace dynamo {

/// One line of a timestamped edge stream: `u<TAB>v[<TAB>w]<TAB>t`.
struct EdgeEvent {
  VertexId u = 0;
  VertexId v = 0;
  double weight = 1.0;
  std::int64_t timestamp = 0;

  friend bool operator==(const EdgeEvent&, const EdgeEvent&) = default;
};

/// snapshots[k] is G^(k); deltas[k] turns G^(k-1) into G^(k), with deltas[0]
/// building G^(0) from the empty graph.
struct SnapshotSeries {
  std::vector<WeightedGraph> snapshots;
  std::vector<GraphDelta> deltas;

  std::size_t size() const { return snapshots.size(); }
};

/// Builds the series by folding deltas over the empty graph.
SnapshotSeries series_from_deltas(std::vector<GraphDelta> deltas);

/// Reads an event file; '#' lines and blank lines are skipped, fields may be
/// separated by tabs or spaces. Throws ParseError (with line number),
/// NegativeWeight, SelfLoop, IoError.
std::vector<EdgeEvent> parse_edge_events(const std::filesystem::path& path);
std::vector<EdgeEvent> parse_edge_events(std::istream& in);
void write_edge_events(const std::vector<EdgeEvent>& events, const std::filesystem::path& path);

/// Cumulative slicing into half-open windows [t0 + k*interval, t0 + (k+1)*interval).
/// t0 defaults to the earliest timestamp; events before t0 land in snapshot 0.
/// Throws EmptyStream, InvalidConfig (interval <= 0).
SnapshotSeries slice_snapshots(const std::vector<EdgeEvent>& events, std::int64_t interval,
                               std::optional<std::int64_t> t0 = std::nullopt);

/// Delta records: `AV id`, `DV id`, `EW u v signed_dw`. Throws ParseError,
/// ConflictingDelta, IoError.
GraphDelta parse_delta_file(const std::filesystem::path& path);
GraphDelta parse_delta(std::istream& in);
void write_delta_file(const GraphDelta& d, const std::filesystem::path& path);
void write_delta(const GraphDelta& d, std::ostream& out);

/// Writes delta_0000.txt, delta_0001.txt, ... into `dir` (created if needed).
void write_delta_directory(const SnapshotSeries& series, const std::filesystem::path& dir);
/// Reads every delta_*.txt in `dir` in name order.
std::vector<GraphDelta> read_delta_directory(const std::filesystem::path& dir);

/// Plain weighted edge list `u v [w]`; parallel edges are summed.
WeightedGraph read_graph_file(const std::filesystem::path& path);

/// `vertex<TAB>community` per line.
Assignment read_partition_file(const std::filesystem::path& path);
void write_partition_file(const Assignment& assignment, const std::filesystem::path& path);

struct SnapshotReport {
  std::int64_t snapshot_index = 0;
  std::string algorithm;
  std::optional<double> modularity;
  std::optional<double> nmi;
  std::optional<double> ari;
  std::int64_t elapsed_ns = 0;
  std::int64_t cumulative_elapsed_ns = 0;
  std::int64_t num_vertices = 0;
  std::int64_t num_edges = 0;
  std::int64_t num_communities = 0;

  friend bool operator==(const SnapshotReport&, const SnapshotReport&) = default;
};

enum class ReportFormat { Csv, Json };

inline constexpr const char* kReportCsvHeader =
    "snapshot,algorithm,modularity,nmi,ari,elapsed_ns,cumulative_elapsed_ns,vertices,edges,communities";

void write_reports(const std::vector<SnapshotReport>& reports, std::ostream& out, ReportFormat format);
void write_reports(const std::vector<SnapshotReport>& reports, const std::filesystem::path& path,
                   ReportFormat format);
std::vector<SnapshotReport> read_reports_json(std::istream& in);
std::vector<SnapshotReport> read_reports_csv(std::istream& in);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

}  // namespace dynamo
