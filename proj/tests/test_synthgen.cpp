#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <unistd.h>

#include "dynamo/error.hpp"
#include "dynamo/louvain.hpp"
#include "dynamo/metrics.hpp"
#include "dynamo/synthgen.hpp"

using namespace dynamo;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::EmptyGraph;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("validate rejects bad configurations") {
  auto bad = [](auto mutate) {
    GenConfig c;
    mutate(c);
    return code_of([&] { c.validate(); });
  };
  CHECK_NOTHROW(GenConfig{}.validate());
  CHECK(bad([](GenConfig& c) { c.num_communities = 1; }) == ErrorCode::InvalidConfig);
  CHECK(bad([](GenConfig& c) { c.community_size = 2; }) == ErrorCode::InvalidConfig);
  CHECK(bad([](GenConfig& c) { c.p_out = c.p_in; }) == ErrorCode::InvalidConfig);
  CHECK(bad([](GenConfig& c) { c.p_in = 1.5; }) == ErrorCode::InvalidConfig);
  CHECK(bad([](GenConfig& c) { c.p_out = -0.1; }) == ErrorCode::InvalidConfig);
  CHECK(bad([](GenConfig& c) { c.weight_lo = 0; }) == ErrorCode::InvalidConfig);
  CHECK(bad([](GenConfig& c) { c.weight_hi = 0.5; }) == ErrorCode::InvalidConfig);
  CHECK(bad([](GenConfig& c) { c.num_snapshots = 0; }) == ErrorCode::InvalidConfig);
  // 10 communities of 10: 0.3 * 9 intra vs 0.05 * 10 * 9 inter.
  CHECK(bad([](GenConfig& c) {
          c.num_communities = 10;
          c.community_size = 10;
          c.p_out = 0.05;
        }) == ErrorCode::InvalidConfig);
  CHECK(code_of([] {
          GenConfig c;
          c.num_communities = 1;
          generate(c);
        }) == ErrorCode::InvalidConfig);
}

TEST_CASE("impossible churn is reported") {
  GenConfig c;
  c.num_communities = 2;
  c.community_size = 4;
  c.p_out = 0.0;  // no cross edges to decrease
  c.num_snapshots = 3;
  CHECK(code_of([&] { generate(c); }) == ErrorCode::InfeasibleChurn);
}

TEST_CASE("base graph: every vertex has an edge, ground truth is the planted blocks") {
  GenConfig c;
  c.num_snapshots = 1;
  auto gen = generate(c);
  REQUIRE(gen.series.size() == 1);
  const auto& g = gen.series.snapshots[0];
  CHECK(g.num_vertices() == 200);
  for (auto v : g.vertices()) {
    CHECK(g.degree(v) >= 1);
    CHECK(gen.ground_truth[0].community_of(v) == v / 50);
  }
  CHECK(gen.edge_kinds[0].empty());
}

TEST_CASE("zero churn repeats the base snapshot") {
  GenConfig c;
  c.churn = ChurnCounts::none();
  c.num_snapshots = 5;
  auto gen = generate(c);
  REQUIRE(gen.series.size() == 5);
  for (std::size_t k = 1; k < 5; ++k) {
    CHECK(gen.series.deltas[k].empty());
    CHECK(gen.series.snapshots[k] == gen.series.snapshots[0]);
  }
}

TEST_CASE("deltas are consistent with the snapshots and carry the requested counts") {
  GenConfig c;
  c.seed = 3;
  auto gen = generate(c);
  const auto& s = gen.series;
  REQUIRE(s.size() == c.num_snapshots);
  REQUIRE(gen.edge_kinds.size() == s.size());
  for (std::size_t k = 1; k < s.size(); ++k) {
    CHECK(apply_delta(s.snapshots[k - 1], s.deltas[k]) == s.snapshots[k]);
    CHECK(s.deltas[k].added_vertices.size() == c.churn.vertex_add);
    CHECK(s.deltas[k].removed_vertices.size() == c.churn.vertex_delete);

    std::map<ChangeKind, std::size_t> counted;
    REQUIRE(gen.edge_kinds[k].size() == s.deltas[k].edge_changes.size());
    for (std::size_t r = 0; r < gen.edge_kinds[k].size(); ++r) {
      const auto kind = gen.edge_kinds[k][r];
      CHECK(classify(s.snapshots[k - 1], gen.ground_truth[k - 1], s.deltas[k], s.deltas[k].edge_changes[r]) == kind);
      ++counted[kind];
    }
    CHECK(counted[ChangeKind::IntraEdgeIncrease] == c.churn.intra_increase);
    CHECK(counted[ChangeKind::CrossEdgeIncrease] == c.churn.cross_increase);
    CHECK(counted[ChangeKind::IntraEdgeDecrease] == c.churn.intra_decrease);
    CHECK(counted[ChangeKind::CrossEdgeDecrease] == c.churn.cross_decrease);
    CHECK(counted[ChangeKind::VertexAddition] >= c.churn.vertex_add);

    // Ground truth follows the vertex set.
    CHECK(gen.ground_truth[k].vertices().size() == s.snapshots[k].num_vertices());
  }
}

TEST_CASE("generation is deterministic per seed") {
  GenConfig c;
  c.seed = 21;
  c.num_snapshots = 6;
  auto a = generate(c);
  auto b = generate(c);
  CHECK(a.series.deltas == b.series.deltas);
  CHECK(a.edge_kinds == b.edge_kinds);
  c.seed = 22;
  CHECK(generate(c).series.deltas != a.series.deltas);
}

TEST_CASE("weights stay in the configured range") {
  GenConfig c;
  c.weight_lo = 0.5;
  c.weight_hi = 2.0;
  c.num_snapshots = 4;
  c.churn.intra_decrease = c.churn.cross_decrease = 0;
  auto gen = generate(c);
  for (const auto& e : gen.series.snapshots[0].edges()) {
    CHECK(e.weight >= 0.5);
    CHECK(e.weight <= 2.0);
  }
}

TEST_CASE("planted structure is recoverable") {
  GenConfig c;
  c.community_size = 30;
  c.num_snapshots = 1;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    c.seed = seed;
    auto gen = generate(c);
    const auto& g = gen.series.snapshots[0];
    auto found = louvain(g);
    CHECK(nmi(gen.ground_truth[0], found) >= 0.9);
  }
}

TEST_CASE("additive churn yields an event stream that slices back to the series") {
  GenConfig c;
  c.seed = 4;
  c.num_snapshots = 8;
  c.churn.intra_decrease = c.churn.cross_decrease = c.churn.vertex_delete = 0;
  auto gen = generate(c);
  REQUIRE_FALSE(gen.events.empty());
  auto sliced = slice_snapshots(gen.events, 1, 0);
  CHECK(sliced.deltas == gen.series.deltas);
  CHECK(sliced.snapshots == gen.series.snapshots);

  GenConfig full;
  full.num_snapshots = 3;
  CHECK(generate(full).events.empty());
}

TEST_CASE("write_generated lays out deltas, truth and events") {
  const fs::path dir = fs::temp_directory_path() / ("dynamo_synth_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  GenConfig c;
  c.num_snapshots = 3;
  auto gen = generate(c);
  write_generated(gen, dir / "full");
  CHECK(fs::exists(dir / "full" / "deltas" / "delta_0002.txt"));
  CHECK(fs::exists(dir / "full" / "truth" / "truth_0002.tsv"));
  CHECK_FALSE(fs::exists(dir / "full" / "events.tsv"));
  CHECK(read_partition_file(dir / "full" / "truth" / "truth_0001.tsv") == gen.ground_truth[1].assignment());
  CHECK(series_from_deltas(read_delta_directory(dir / "full" / "deltas")).snapshots == gen.series.snapshots);

  c.churn = ChurnCounts::none();
  c.churn.intra_increase = 3;
  auto additive = generate(c);
  write_generated(additive, dir / "add");
  CHECK(parse_edge_events(dir / "add" / "events.tsv") == additive.events);
  write_generated(additive, dir / "add2");
  CHECK(slurp(dir / "add" / "events.tsv") == slurp(dir / "add2" / "events.tsv"));
  fs::remove_all(dir);
}
