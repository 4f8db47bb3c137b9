#include "dynamo/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string_view>
#include <unordered_map>

#include <json.hpp>

#include "dynamo/error.hpp"

namespace dynamo {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == '\t' || line[pos] == ' ' || line[pos] == '\r')) ++pos;
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && line[end] != '\t' && line[end] != ' ' && line[end] != '\r') ++end;
    fields.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return fields;
}

bool skippable(std::string_view line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string_view::npos || line[first] == '#';
}

[[noreturn]] void parse_error(std::size_t line_no, const std::string& why) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + why);
}

template <class T>
T parse_number(std::string_view field, std::size_t line_no, const char* what) {
  T value{};
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    parse_error(line_no, std::string("bad ") + what + " '" + std::string(field) + "'");
  }
  return value;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

std::string optional_field(const std::optional<double>& x) { return x ? format_double(*x) : std::string(); }

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

SnapshotSeries series_from_deltas(std::vector<GraphDelta> deltas) {
  SnapshotSeries series;
  series.snapshots.reserve(deltas.size());
  WeightedGraph current;
  for (const auto& d : deltas) {
    current = apply_delta(current, d);
    series.snapshots.push_back(current);
  }
  series.deltas = std::move(deltas);
  return series;
}

std::vector<EdgeEvent> parse_edge_events(std::istream& in) {
  std::vector<EdgeEvent> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    const auto f = split_fields(line);
    if (f.size() != 3 && f.size() != 4) parse_error(line_no, "expected u v [w] t");
    EdgeEvent e;
    e.u = parse_number<VertexId>(f[0], line_no, "vertex");
    e.v = parse_number<VertexId>(f[1], line_no, "vertex");
    if (f.size() == 4) e.weight = parse_number<double>(f[2], line_no, "weight");
    e.timestamp = parse_number<std::int64_t>(f.back(), line_no, "timestamp");
    if (e.u == e.v) {
      throw Error(ErrorCode::SelfLoop, "line " + std::to_string(line_no) + ": self-loop on " + std::to_string(e.u));
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw Error(ErrorCode::NegativeWeight, "line " + std::to_string(line_no) + ": non-positive weight");
    }
    events.push_back(e);
  }
  return events;
}

std::vector<EdgeEvent> parse_edge_events(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_edge_events(in);
}

void write_edge_events(const std::vector<EdgeEvent>& events, const std::filesystem::path& path) {
  auto out = open_output(path);
  for (const auto& e : events) {
    out << e.u << '\t' << e.v << '\t' << format_double(e.weight) << '\t' << e.timestamp << '\n';
  }
  finish_output(out, path);
}

SnapshotSeries slice_snapshots(const std::vector<EdgeEvent>& events, std::int64_t interval,
                               std::optional<std::int64_t> t0) {
  if (events.empty()) throw Error(ErrorCode::EmptyStream, "no edge events to slice");
  if (interval <= 0) throw Error(ErrorCode::InvalidConfig, "interval must be positive");

  std::vector<EdgeEvent> sorted = events;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const EdgeEvent& a, const EdgeEvent& b) { return a.timestamp < b.timestamp; });
  const std::int64_t start = t0.value_or(sorted.front().timestamp);
  auto bucket = [&](std::int64_t ts) -> std::size_t {
    return ts < start ? 0 : static_cast<std::size_t>((ts - start) / interval);
  };
  const std::size_t count = bucket(sorted.back().timestamp) + 1;

  std::vector<GraphDelta> deltas(count);
  std::vector<VertexId> seen;  // sorted
  std::size_t e = 0;
  for (std::size_t k = 0; k < count; ++k) {
    GraphDelta& d = deltas[k];
    std::map<std::pair<VertexId, VertexId>, std::size_t> slot;
    for (; e < sorted.size() && bucket(sorted[e].timestamp) == k; ++e) {
      const auto& ev = sorted[e];
      for (VertexId x : {ev.u, ev.v}) {
        auto it = std::lower_bound(seen.begin(), seen.end(), x);
        if (it == seen.end() || *it != x) {
          seen.insert(it, x);
          d.added_vertices.push_back(x);
        }
      }
      const auto key = ev.u < ev.v ? std::pair{ev.u, ev.v} : std::pair{ev.v, ev.u};
      auto [it, fresh] = slot.try_emplace(key, d.edge_changes.size());
      if (fresh) {
        d.edge_changes.push_back({key.first, key.second, ev.weight});
      } else {
        d.edge_changes[it->second].delta_w += ev.weight;
      }
    }
    d.normalize();
  }
  return series_from_deltas(std::move(deltas));
}

GraphDelta parse_delta(std::istream& in) {
  GraphDelta d;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    const auto f = split_fields(line);
    if (f[0] == "AV" || f[0] == "DV") {
      if (f.size() != 2) parse_error(line_no, "expected '" + std::string(f[0]) + " id'");
      const auto v = parse_number<VertexId>(f[1], line_no, "vertex");
      (f[0] == "AV" ? d.added_vertices : d.removed_vertices).push_back(v);
    } else if (f[0] == "EW") {
      if (f.size() != 4) parse_error(line_no, "expected 'EW u v dw'");
      EdgeChange c{parse_number<VertexId>(f[1], line_no, "vertex"), parse_number<VertexId>(f[2], line_no, "vertex"),
                   parse_number<double>(f[3], line_no, "weight change")};
      if (c.delta_w == 0.0 || !std::isfinite(c.delta_w)) parse_error(line_no, "weight change must be non-zero");
      d.edge_changes.push_back(c);
    } else {
      parse_error(line_no, "unknown record '" + std::string(f[0]) + "'");
    }
  }
  d.normalize();
  return d;
}

GraphDelta parse_delta_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_delta(in);
}

void write_delta(const GraphDelta& d, std::ostream& out) {
  for (VertexId v : d.added_vertices) out << "AV " << v << '\n';
  for (VertexId v : d.removed_vertices) out << "DV " << v << '\n';
  for (const auto& c : d.edge_changes) out << "EW " << c.u << ' ' << c.v << ' ' << format_double(c.delta_w) << '\n';
}

void write_delta_file(const GraphDelta& d, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_delta(d, out);
  finish_output(out, path);
}

void write_delta_directory(const SnapshotSeries& series, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (std::size_t k = 0; k < series.deltas.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "delta_%04zu.txt", k);
    write_delta_file(series.deltas[k], dir / name);
  }
}

std::vector<GraphDelta> read_delta_directory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error(ErrorCode::IoError, dir.string() + " is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.starts_with("delta_") && name.ends_with(".txt")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<GraphDelta> deltas;
  deltas.reserve(files.size());
  for (const auto& f : files) deltas.push_back(parse_delta_file(f));
  return deltas;
}

WeightedGraph read_graph_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<WeightedEdge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    const auto f = split_fields(line);
    if (f.size() != 2 && f.size() != 3) parse_error(line_no, "expected u v [w]");
    WeightedEdge e{parse_number<VertexId>(f[0], line_no, "vertex"), parse_number<VertexId>(f[1], line_no, "vertex"),
                   f.size() == 3 ? parse_number<double>(f[2], line_no, "weight") : 1.0};
    edges.push_back(e);
  }
  return WeightedGraph::from_edges(edges);
}

Assignment read_partition_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  Assignment a;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    const auto f = split_fields(line);
    if (f.size() != 2) parse_error(line_no, "expected vertex community");
    const auto v = parse_number<VertexId>(f[0], line_no, "vertex");
    if (!a.emplace(v, parse_number<CommunityId>(f[1], line_no, "community")).second) {
      parse_error(line_no, "vertex " + std::to_string(v) + " listed twice");
    }
  }
  return a;
}

void write_partition_file(const Assignment& assignment, const std::filesystem::path& path) {
  auto out = open_output(path);
  for (const auto& [v, c] : assignment) out << v << '\t' << c << '\n';
  finish_output(out, path);
}

void write_reports(const std::vector<SnapshotReport>& reports, std::ostream& out, ReportFormat format) {
  if (format == ReportFormat::Csv) {
    out << kReportCsvHeader << '\n';
    for (const auto& r : reports) {
      out << r.snapshot_index << ',' << r.algorithm << ',' << optional_field(r.modularity) << ','
          << optional_field(r.nmi) << ',' << optional_field(r.ari) << ',' << r.elapsed_ns << ','
          << r.cumulative_elapsed_ns << ',' << r.num_vertices << ',' << r.num_edges << ',' << r.num_communities
          << '\n';
    }
    return;
  }
  auto json = nlohmann::ordered_json::array();
  auto optional_json = [](const std::optional<double>& x) {
    return x ? nlohmann::ordered_json(*x) : nlohmann::ordered_json(nullptr);
  };
  for (const auto& r : reports) {
    json.push_back({{"snapshot", r.snapshot_index},
                    {"algorithm", r.algorithm},
                    {"modularity", optional_json(r.modularity)},
                    {"nmi", optional_json(r.nmi)},
                    {"ari", optional_json(r.ari)},
                    {"elapsed_ns", r.elapsed_ns},
                    {"cumulative_elapsed_ns", r.cumulative_elapsed_ns},
                    {"vertices", r.num_vertices},
                    {"edges", r.num_edges},
                    {"communities", r.num_communities}});
  }
  out << json.dump(2) << '\n';
}

void write_reports(const std::vector<SnapshotReport>& reports, const std::filesystem::path& path,
                   ReportFormat format) {
  auto out = open_output(path);
  write_reports(reports, out, format);
  finish_output(out, path);
}

std::vector<SnapshotReport> read_reports_json(std::istream& in) {
  nlohmann::json json;
  try {
    json = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  auto optional_value = [](const nlohmann::json& x) -> std::optional<double> {
    if (x.is_null()) return std::nullopt;
    return x.get<double>();
  };
  std::vector<SnapshotReport> reports;
  try {
    for (const auto& j : json) {
      SnapshotReport r;
      r.snapshot_index = j.at("snapshot").get<std::int64_t>();
      r.algorithm = j.at("algorithm").get<std::string>();
      r.modularity = optional_value(j.at("modularity"));
      r.nmi = optional_value(j.at("nmi"));
      r.ari = optional_value(j.at("ari"));
      r.elapsed_ns = j.at("elapsed_ns").get<std::int64_t>();
      r.cumulative_elapsed_ns = j.at("cumulative_elapsed_ns").get<std::int64_t>();
      r.num_vertices = j.at("vertices").get<std::int64_t>();
      r.num_edges = j.at("edges").get<std::int64_t>();
      r.num_communities = j.at("communities").get<std::int64_t>();
      reports.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  return reports;
}

std::vector<SnapshotReport> read_reports_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || line != kReportCsvHeader) parse_error(line_no, "missing report header");
  std::vector<SnapshotReport> reports;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      f.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (f.size() != 10) parse_error(line_no, "expected 10 fields");
    auto opt = [&](std::string_view x) -> std::optional<double> {
      if (x.empty()) return std::nullopt;
      return parse_number<double>(x, line_no, "metric");
    };
    SnapshotReport r;
    r.snapshot_index = parse_number<std::int64_t>(f[0], line_no, "snapshot");
    r.algorithm = std::string(f[1]);
    r.modularity = opt(f[2]);
    r.nmi = opt(f[3]);
    r.ari = opt(f[4]);
    r.elapsed_ns = parse_number<std::int64_t>(f[5], line_no, "elapsed");
    r.cumulative_elapsed_ns = parse_number<std::int64_t>(f[6], line_no, "elapsed");
    r.num_vertices = parse_number<std::int64_t>(f[7], line_no, "count");
    r.num_edges = parse_number<std::int64_t>(f[8], line_no, "count");
    r.num_communities = parse_number<std::int64_t>(f[9], line_no, "count");
    reports.push_back(std::move(r));
  }
  return reports;
}

}  // namespace dynamo
