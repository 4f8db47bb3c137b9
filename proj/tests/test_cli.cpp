#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "dynamo/ingest.hpp"

using namespace dynamo;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

const fs::path& scratch() {
  static const fs::path dir = [] {
    auto p = fs::temp_directory_path() / ("dynamo_cli_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Result run(const std::string& args) {
  const auto out = scratch() / "stdout.txt";
  const auto err = scratch() / "stderr.txt";
  const std::string cmd = std::string("'") + DYNAMO_CLI_PATH + "' " + args + " >'" + out.string() + "' 2>'" +
                          err.string() + "'";
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string path(const std::string& name) { return "'" + (scratch() / name).string() + "'"; }

void write(const std::string& name, const std::string& text) { std::ofstream(scratch() / name) << text; }

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("detect --input").code == 2);
  CHECK(run("run --algorithms louvain,bogus --deltas-dir " + path("nowhere")).code == 2);
  CHECK(run("--help").code == 0);
}

TEST_CASE("metrics prints nmi and ari") {
  write("truth.tsv", "0\t0\n1\t0\n2\t1\n3\t1\n");
  write("found.tsv", "0\t0\n1\t0\n2\t1\n3\t2\n");
  auto r = run("metrics " + path("truth.tsv") + " " + path("found.tsv"));
  CHECK(r.code == 0);
  CHECK(r.out == "nmi=0.800000 ari=0.571429\n");

  write("other.tsv", "0\t0\n9\t0\n");
  CHECK(run("metrics " + path("truth.tsv") + " " + path("other.tsv")).code == 1);
  CHECK(run("metrics " + path("truth.tsv") + " " + path("missing.tsv")).code == 1);
}

TEST_CASE("detect splits two triangles") {
  write("tri.txt", "0 1\n0 2\n1 2\n3 4\n3 5\n4 5\n2 3 0.5\n");
  auto r = run("detect --input " + path("tri.txt") + " --output " + path("tri.part"));
  REQUIRE(r.code == 0);
  auto a = read_partition_file(scratch() / "tri.part");
  CHECK(a.at(0) == a.at(1));
  CHECK(a.at(1) == a.at(2));
  CHECK(a.at(3) == a.at(4));
  CHECK(a.at(4) == a.at(5));
  CHECK(a.at(0) != a.at(3));
  CHECK(r.err.find("communities=2") != std::string::npos);

  write("loop.txt", "0 0\n");
  CHECK(run("detect --input " + path("loop.txt") + " --output " + path("x.part")).code == 1);
}

TEST_CASE("generate is deterministic and run reads its deltas") {
  REQUIRE(run("generate --output " + path("g1") + " --seed 9 --community-size 15 --snapshots 4").code == 0);
  REQUIRE(run("generate --output " + path("g2") + " --seed 9 --community-size 15 --snapshots 4").code == 0);
  for (const auto& f : {"deltas/delta_0000.txt", "deltas/delta_0003.txt", "truth/truth_0003.tsv"}) {
    CHECK(slurp(scratch() / "g1" / f) == slurp(scratch() / "g2" / f));
  }

  auto r = run("run --deltas-dir " + path("g1/deltas") + " --format json");
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  auto reports = read_reports_json(in);
  CHECK(reports.size() == 8);

  r = run("run --deltas-dir " + path("g1/deltas") + " --algorithms dynamo --output " + path("r.csv"));
  REQUIRE(r.code == 0);
  std::ifstream csv(scratch() / "r.csv");
  auto rows = read_reports_csv(csv);
  CHECK(rows.size() == 4);

  CHECK(run("generate --output " + path("bad") + " --communities 1").code == 2);
}

TEST_CASE("slice writes deltas and rejects a zero interval") {
  write("events.tsv", "0 1 0\n1 2 1\n2 0 2\n2 3 2 3\n");
  CHECK(run("slice --input " + path("events.tsv") + " --interval 2 --output " + path("sliced")).code == 0);
  CHECK(fs::exists(scratch() / "sliced" / "delta_0001.txt"));
  CHECK_FALSE(fs::exists(scratch() / "sliced" / "delta_0002.txt"));
  CHECK(run("slice --input " + path("events.tsv") + " --interval 0 --output " + path("sliced0")).code == 2);

  auto r = run("run --input " + path("events.tsv") + " --interval 1");
  CHECK(r.code == 0);
  CHECK(r.out.rfind(kReportCsvHeader, 0) == 0);
}

TEST_CASE("several sequences go to one report file each") {
  write("a.tsv", "0 1 0\n1 2 1\n");
  write("b.tsv", "5 6 0\n6 7 0\n5 7 1\n");
  auto r = run("run --input " + path("a.tsv") + " --input " + path("b.tsv") + " --interval 1 --jobs 2 --output " +
               path("multi"));
  CHECK(r.code == 0);
  CHECK(fs::exists(scratch() / "multi" / "000_a.csv"));
  CHECK(fs::exists(scratch() / "multi" / "001_b.csv"));
  fs::remove_all(scratch());
}
