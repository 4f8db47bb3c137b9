// Command-line front end: run, detect, metrics, generate, slice.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dynamo/error.hpp"
#include "dynamo/harness.hpp"
#include "dynamo/ingest.hpp"
#include "dynamo/louvain.hpp"
#include "dynamo/metrics.hpp"
#include "dynamo/synthgen.hpp"

namespace fs = std::filesystem;
using namespace dynamo;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct RunArgs {
  std::vector<std::string> inputs;
  std::vector<std::string> delta_dirs;
  std::optional<std::int64_t> interval;
  std::optional<std::int64_t> t0;
  std::vector<std::string> algorithms{"louvain", "dynamo"};
  double epsilon = kDefaultEpsilon;
  double refine_threshold = kRefineDisabled;
  std::optional<std::uint64_t> seed;
  std::string output = "-";
  std::string format = "csv";
  unsigned jobs = 1;
  bool with_baseline = false;
  int repeat = 1;
};

ReportFormat parse_format(const std::string& f) { return f == "json" ? ReportFormat::Json : ReportFormat::Csv; }

int cmd_run(const RunArgs& a) {
  if (a.inputs.empty() == a.delta_dirs.empty()) {
    throw Error(ErrorCode::InvalidConfig, "give either --input event files or --deltas-dir directories");
  }
  if (!a.inputs.empty() && !a.interval) throw Error(ErrorCode::InvalidConfig, "--interval is required with --input");
  if (a.inputs.empty() && a.interval) throw Error(ErrorCode::InvalidConfig, "--interval only applies to --input");

  PipelineOptions opts;
  opts.run_louvain = opts.run_dynamo = false;
  for (const auto& name : a.algorithms) {
    if (name == "louvain") {
      opts.run_louvain = true;
    } else if (name == "dynamo") {
      opts.run_dynamo = true;
    } else {
      throw Error(ErrorCode::InvalidConfig, "unknown algorithm '" + name + "'");
    }
  }
  opts.with_baseline = a.with_baseline;
  opts.epsilon = a.epsilon;
  opts.refine_threshold = a.refine_threshold;
  opts.shuffle_seed = a.seed;
  opts.repeat = a.repeat;

  std::vector<std::string> sources;
  std::vector<SnapshotSeries> sequences;
  for (const auto& path : a.inputs) {
    sources.push_back(path);
    sequences.push_back(slice_snapshots(parse_edge_events(fs::path(path)), *a.interval, a.t0));
  }
  for (const auto& dir : a.delta_dirs) {
    sources.push_back(dir);
    sequences.push_back(series_from_deltas(read_delta_directory(dir)));
  }

  const auto results = run_pipelines(sequences, opts, a.jobs);
  const auto format = parse_format(a.format);
  if (results.size() == 1) {
    if (a.output == "-") {
      write_reports(results[0], std::cout, format);
    } else {
      write_reports(results[0], fs::path(a.output), format);
    }
    return 0;
  }
  // Several sequences: --output names a directory holding one report each.
  if (a.output == "-") throw Error(ErrorCode::InvalidConfig, "--output must be a directory for several inputs");
  const std::string ext = format == ReportFormat::Json ? ".json" : ".csv";
  for (std::size_t i = 0; i < results.size(); ++i) {
    char prefix[32];
    std::snprintf(prefix, sizeof prefix, "%03zu_", i);
    const auto name = std::string(prefix) + fs::path(sources[i]).filename().stem().string() + ext;
    write_reports(results[i], fs::path(a.output) / name, format);
  }
  return 0;
}

int cmd_detect(const std::string& input, const std::string& output, double epsilon,
               std::optional<std::uint64_t> seed) {
  const auto g = read_graph_file(input);
  LouvainOptions opts;
  opts.epsilon = epsilon;
  opts.shuffle_seed = seed;
  const auto p = louvain(g, opts);
  write_partition_file(p.assignment(), output);
  std::cerr << "communities=" << p.num_communities() << " modularity=" << format_double(modularity(g, p)) << '\n';
  return 0;
}

int cmd_metrics(const std::string& a, const std::string& b) {
  const auto pa = read_partition_file(a);
  const auto pb = read_partition_file(b);
  const auto table = confusion_table(pa, pb);
  std::printf("nmi=%.6f ari=%.6f\n", nmi(table), ari(table));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Incremental community detection on evolving graphs"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run detectors over a snapshot sequence and report per snapshot");
  run_cmd->add_option("--input", run.inputs, "Timestamped edge-event file(s)");
  run_cmd->add_option("--deltas-dir", run.delta_dirs, "Directory (or directories) of delta_NNNN.txt files");
  run_cmd->add_option("--interval", run.interval, "Snapshot interval for event input");
  run_cmd->add_option("--t0", run.t0, "Start of the first window (default: earliest timestamp)");
  run_cmd->add_option("--algorithms", run.algorithms, "louvain,dynamo")->delimiter(',')->capture_default_str();
  run_cmd->add_option("--epsilon", run.epsilon, "Minimum modularity gain per move")->capture_default_str();
  run_cmd->add_option("--refine-threshold", run.refine_threshold, "Rerun Louvain when dynamo drops below this Q")
      ->capture_default_str();
  run_cmd->add_option("--seed", run.seed, "Shuffle Louvain sweep order with this seed");
  run_cmd->add_option("--output", run.output, "Report file, '-' for stdout")->capture_default_str();
  run_cmd->add_option("--format", run.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  run_cmd->add_option("--jobs", run.jobs, "Threads across independent sequences")->capture_default_str();
  run_cmd->add_flag("--with-baseline", run.with_baseline, "Compute Louvain reference for NMI/ARI");
  run_cmd->add_option("--repeat", run.repeat, "Average timing over this many runs")->capture_default_str();

  std::string detect_input, detect_output;
  double detect_epsilon = kDefaultEpsilon;
  std::optional<std::uint64_t> detect_seed;
  auto* detect_cmd = app.add_subcommand("detect", "Static Louvain on one weighted edge list");
  detect_cmd->add_option("--input", detect_input, "Edge list `u v [w]`")->required();
  detect_cmd->add_option("--output", detect_output, "Partition file")->required();
  detect_cmd->add_option("--epsilon", detect_epsilon, "Minimum modularity gain per move")->capture_default_str();
  detect_cmd->add_option("--seed", detect_seed, "Shuffle sweep order with this seed");

  std::string metrics_a, metrics_b;
  auto* metrics_cmd = app.add_subcommand("metrics", "NMI and ARI between two partition files");
  metrics_cmd->add_option("truth", metrics_a, "Reference partition")->required();
  metrics_cmd->add_option("result", metrics_b, "Compared partition")->required();

  GenConfig gen;
  std::string gen_output;
  auto* gen_cmd = app.add_subcommand("generate", "Synthetic evolving planted-partition graph");
  gen_cmd->add_option("--output", gen_output, "Output directory")->required();
  gen_cmd->add_option("--seed", gen.seed)->capture_default_str();
  gen_cmd->add_option("--communities", gen.num_communities)->capture_default_str();
  gen_cmd->add_option("--community-size", gen.community_size)->capture_default_str();
  gen_cmd->add_option("--p-in", gen.p_in)->capture_default_str();
  gen_cmd->add_option("--p-out", gen.p_out)->capture_default_str();
  gen_cmd->add_option("--snapshots", gen.num_snapshots)->capture_default_str();
  gen_cmd->add_option("--weight-lo", gen.weight_lo)->capture_default_str();
  gen_cmd->add_option("--weight-hi", gen.weight_hi)->capture_default_str();
  gen_cmd->add_option("--intra-add", gen.churn.intra_increase, "ICEA/WI changes per snapshot")->capture_default_str();
  gen_cmd->add_option("--cross-add", gen.churn.cross_increase, "CCEA/WI changes per snapshot")->capture_default_str();
  gen_cmd->add_option("--intra-remove", gen.churn.intra_decrease, "ICED/WD changes per snapshot")
      ->capture_default_str();
  gen_cmd->add_option("--cross-remove", gen.churn.cross_decrease, "CCED/WD changes per snapshot")
      ->capture_default_str();
  gen_cmd->add_option("--vertex-add", gen.churn.vertex_add)->capture_default_str();
  gen_cmd->add_option("--vertex-remove", gen.churn.vertex_delete)->capture_default_str();

  std::string slice_input, slice_output;
  std::int64_t slice_interval = 0;
  std::optional<std::int64_t> slice_t0;
  auto* slice_cmd = app.add_subcommand("slice", "Cut an edge-event file into snapshot deltas");
  slice_cmd->add_option("--input", slice_input, "Timestamped edge-event file")->required();
  slice_cmd->add_option("--interval", slice_interval, "Window length")->required();
  slice_cmd->add_option("--t0", slice_t0, "Start of the first window (default: earliest timestamp)");
  slice_cmd->add_option("--output", slice_output, "Delta directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*detect_cmd) return cmd_detect(detect_input, detect_output, detect_epsilon, detect_seed);
    if (*metrics_cmd) return cmd_metrics(metrics_a, metrics_b);
    if (*gen_cmd) {
      write_generated(generate(gen), gen_output);
      return 0;
    }
    if (*slice_cmd) {
      write_delta_directory(slice_snapshots(parse_edge_events(fs::path(slice_input)), slice_interval, slice_t0),
                            slice_output);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    const bool config = e.code() == ErrorCode::InvalidConfig || e.code() == ErrorCode::InfeasibleChurn;
    return config ? kExitUsage : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
