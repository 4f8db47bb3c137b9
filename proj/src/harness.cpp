#include "dynamo/harness.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <thread>

#include "dynamo/error.hpp"
#include "dynamo/metrics.hpp"

namespace dynamo {

namespace {

template <class F>
std::pair<Partition, std::int64_t> timed(int repeat, F&& detect) {
  Partition result;
  std::int64_t total = 0;
  for (int r = 0; r < repeat; ++r) {
    const auto start = std::chrono::steady_clock::now();
    result = detect();
    const auto stop = std::chrono::steady_clock::now();
    total += std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count();
  }
  return {std::move(result), total / repeat};
}

SnapshotReport make_report(std::size_t k, const char* algorithm, const WeightedGraph& g, const Partition& p,
                           std::int64_t elapsed, std::int64_t& cumulative) {
  cumulative += elapsed;
  SnapshotReport r;
  r.snapshot_index = static_cast<std::int64_t>(k);
  r.algorithm = algorithm;
  if (g.total_weight() > 0.0) r.modularity = modularity(g, p);
  r.elapsed_ns = elapsed;
  r.cumulative_elapsed_ns = cumulative;
  r.num_vertices = static_cast<std::int64_t>(g.num_vertices());
  r.num_edges = static_cast<std::int64_t>(g.num_edges());
  r.num_communities = static_cast<std::int64_t>(p.num_communities());
  return r;
}

}  // namespace

std::vector<SnapshotReport> run_pipeline(const SnapshotSeries& series, const PipelineOptions& options,
                                         const SnapshotObserver& observer) {
  if (!options.run_louvain && !options.run_dynamo) {
    throw Error(ErrorCode::InvalidConfig, "select at least one algorithm");
  }
  if (options.repeat < 1) throw Error(ErrorCode::InvalidConfig, "repeat must be at least 1");

  const bool need_reference = options.run_louvain || options.with_baseline;
  LouvainOptions lopts;
  lopts.epsilon = options.epsilon;
  lopts.shuffle_seed = options.shuffle_seed;
  auto static_detect = [&](const WeightedGraph& g) {
    return g.total_weight() > 0.0 ? louvain(g, lopts) : Partition::singletons(g);
  };

  std::vector<SnapshotReport> reports;
  std::int64_t louvain_total = 0;
  std::int64_t dynamo_total = 0;
  Partition previous_dynamo;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const WeightedGraph& g = series.snapshots[k];
    const WeightedGraph* g_prev = k ? &series.snapshots[k - 1] : nullptr;

    std::optional<Partition> reference;
    if (need_reference) {
      auto [p, ns] = timed(options.repeat, [&] { return static_detect(g); });
      reference = std::move(p);
      if (options.run_louvain) reports.push_back(make_report(k, "louvain", g, *reference, ns, louvain_total));
    }

    std::optional<Partition> current;
    bool refined = false;
    bool floored = false;
    if (options.run_dynamo) {
      auto [p, ns] = timed(options.repeat, [&]() -> Partition {
        refined = floored = false;
        if (k == 0 || !(g.total_weight() > 0.0)) return static_detect(g);
        Partition next = dynamo_update(g, *g_prev, previous_dynamo, series.deltas[k], lopts);
        if (options.carry_forward_floor) {
          const auto carried = intermediate_labels(g, previous_dynamo, InitPlan{});
          if (next.modularity_from_aggregates(g.total_weight()) < modularity(g, carried)) {
            floored = true;
            next = louvain(g, carried, lopts);
          }
        }
        if (options.refine_threshold != kRefineDisabled && refine_check(modularity(g, next), options.refine_threshold)) {
          refined = true;
          return louvain(g, lopts);
        }
        return next;
      });
      current = std::move(p);
      SnapshotReport r = make_report(k, "dynamo", g, *current, ns, dynamo_total);
      if (reference && g.num_vertices() >= 1) r.nmi = nmi(*reference, *current);
      if (reference && g.num_vertices() >= 2) r.ari = ari(*reference, *current);
      reports.push_back(std::move(r));
    }

    if (observer) {
      SnapshotState state;
      state.index = k;
      state.graph = &g;
      state.previous_graph = g_prev;
      state.delta = &series.deltas[k];
      state.louvain = reference ? &*reference : nullptr;
      state.dynamo = current ? &*current : nullptr;
      state.previous_dynamo = k && current ? &previous_dynamo : nullptr;
      state.refined = refined;
      state.floored = floored;
      observer(state);
    }
    if (current) previous_dynamo = std::move(*current);
  }
  return reports;
}

std::vector<std::vector<SnapshotReport>> run_pipelines(const std::vector<SnapshotSeries>& sequences,
                                                       const PipelineOptions& options, unsigned jobs) {
  std::vector<std::vector<SnapshotReport>> results(sequences.size());
  std::vector<std::exception_ptr> errors(sequences.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < sequences.size(); i = next++) {
      try {
        results[i] = run_pipeline(sequences[i], options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(sequences.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

std::int64_t cumulative_elapsed(const std::vector<SnapshotReport>& reports, std::string_view algorithm) {
  std::int64_t total = 0;
  for (const auto& r : reports) {
    if (r.algorithm == algorithm) total += r.elapsed_ns;
  }
  return total;
}

}  // namespace dynamo
