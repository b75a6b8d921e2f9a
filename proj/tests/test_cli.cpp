#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"

namespace {

std::string data(const std::string& name) {
  return std::string(PNET_TESTDATA_DIR) + "/" + name;
}

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = pnet::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

// Scratch file helper for inputs the CLI has to read back.
struct TempFile {
  std::string path;
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path = std::string("cli_test_tmp_") + std::to_string(counter++) + ".txt";
    std::ofstream f(path);
    f << contents;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("simulate counts maximal runs") {
  auto r = run({"simulate", data("fig1.pnet"), "--steps", "5", "--semantics", "max"});
  CHECK(r.code == 0);
  CHECK(r.out == "2 sequences\n");
}

TEST_CASE("simulate of the empty net at horizon zero") {
  auto r = run({"simulate", data("empty.pnet"), "--steps", "0"});
  CHECK(r.code == 0);
  CHECK(r.out == "1 sequence\n");
}

TEST_CASE("simulate exits 2 with a partial count at the limit") {
  auto r = run({"simulate", data("fig1.pnet"), "--steps", "5", "--semantics", "set",
                "--limit-sequences", "100"});
  CHECK(r.code == 2);
  CHECK(r.out == "100 sequences (partial: sequences limit reached)\n");
}

TEST_CASE("simulate dump emits the pinned trace schema") {
  auto r = run({"simulate", data("fig1.pnet"), "--steps", "2", "--semantics", "max",
                "--dump", "--format", "json"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["semantics"] == "max");
  CHECK(j["reset_mode"] == "contention");
  CHECK(j["k"] == 2);
  // The last step already offers the t5b/t6 choice, so two runs.
  REQUIRE(j["sequences"].size() == 2);
  CHECK(j["sequences"][0]["firings"].size() == 3);   // steps 0..2
  CHECK(j["sequences"][0]["markings"].size() == 4);  // M0..M3
  CHECK(j["sequences"][0]["markings"][1]["f16bp"] == 1);

  // Determinism: byte-identical on a second run.
  auto again = run({"simulate", data("fig1.pnet"), "--steps", "2", "--semantics", "max",
                    "--dump", "--format", "json"});
  CHECK(again.out == r.out);
}

TEST_CASE("simulate rejects a missing file") {
  auto r = run({"simulate", "no_such.pnet", "--steps", "1"});
  CHECK(r.code == 1);
  CHECK(r.err.find("cannot open") != std::string::npos);
}

TEST_CASE("emit-asp golden compare mode") {
  auto ok = run({"emit-asp", data("fig1.pnet"), "--steps", "5", "--ntok", "60",
                 "--level", "base", "--expand-shorthand",
                 data("golden/fig1_k5_base_facts.txt")});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("facts match") != std::string::npos);

  TempFile tampered("num(0..60).time(0..5).place(f16bp;dhap;g3p;bpg13;ghost).");
  auto bad = run({"emit-asp", data("fig1.pnet"), "--steps", "5", "--ntok", "60",
                  "--expand-shorthand", tampered.path});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("missing: place(ghost)") != std::string::npos);
}

TEST_CASE("emit-asp requires ntok and suggests a bound") {
  auto r = run({"emit-asp", data("fig1.pnet"), "--steps", "5"});
  CHECK(r.code == 1);
  CHECK(r.err.find("35") != std::string::npos);
}

TEST_CASE("emit-asp rejects a level below the net") {
  auto r = run({"emit-asp", data("fig2.pnet"), "--steps", "3", "--ntok", "20",
                "--level", "base"});
  CHECK(r.code == 1);
  CHECK(r.err.find("VariantTooLow") != std::string::npos);
}

TEST_CASE("emit-asp auto level picks the smallest covering variant") {
  auto r = run({"emit-asp", data("fig2.pnet"), "--steps", "3", "--ntok", "20"});
  CHECK(r.code == 0);
  CHECK(r.out.find("ptarc(dhap,tr,X,TS) :- holds(dhap,X,TS), num(X), X > 0.") !=
        std::string::npos);
}

TEST_CASE("emit-asp interleaved appends its rules") {
  auto r = run({"emit-asp", data("fig1.pnet"), "--steps", "2", "--ntok", "10",
                "--semantics", "interleaved"});
  CHECK(r.code == 0);
  CHECK(r.out.find("more_than_one_fires") != std::string::npos);
  CHECK(r.out.find(":- more_than_one_fires.") != std::string::npos);
}

TEST_CASE("analyze reachable emits a witnessed json report") {
  auto r = run({"analyze", data("fig1.pnet"), "--steps", "5", "--property", "reachable",
                "--target", "bpg13=4", "--format", "json"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["property"] == "reachable");
  CHECK(j["result"]["reachable"] == true);
  CHECK(j["witnesses"].size() == 1);
}

TEST_CASE("analyze bounded reports the dhap violation") {
  auto r = run({"analyze", data("fig1.pnet"), "--steps", "5", "--semantics", "max",
                "--property", "bounded", "--bound", "3", "--format", "json"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["result"]["bounded"] == false);
  bool dhap5 = false;
  for (const auto& v : j["result"]["violations"])
    dhap5 |= (v["place"] == "dhap" && v["step"] == 5);
  CHECK(dhap5);
}

TEST_CASE("analyze t-invariants on the cycle net") {
  TempFile cyc(
      "place p1 tokens=1\nplace p2\ntrans t1\ntrans t2\n"
      "arc p1 -> t1\narc t1 -> p2\narc p2 -> t2\narc t2 -> p1\n");
  auto r = run({"analyze", cyc.path, "--steps", "3", "--property", "t-invariants",
                "--format", "json"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  REQUIRE(j["result"].size() == 1);
  CHECK(j["result"][0]["transitions"]["t1"] == 1);
  CHECK(j["result"][0]["transitions"]["t2"] == 1);
}

TEST_CASE("analyze waypoints filter") {
  auto r = run({"analyze", data("fig1.pnet"), "--steps", "5", "--property", "waypoints",
                "--waypoint", "bpg13=4@5", "--format", "json"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["result"]["matched"].get<std::uint64_t>() > 0);
  CHECK(j["result"]["matched"].get<std::uint64_t>() <
        j["result"]["total"].get<std::uint64_t>());

  auto bad = run({"analyze", data("fig1.pnet"), "--steps", "2", "--property",
                  "waypoints", "--waypoint", "bpg13<4"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("InvalidPredicate") != std::string::npos);
}

TEST_CASE("stats csv uses the pinned schema") {
  auto r = run({"stats", data("fig1.pnet"), "--steps", "5", "--semantics", "max",
                "--place", "bpg13", "--format", "csv"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "place,step,mean,min,max,distinct_count");
  std::getline(lines, line);
  CHECK(line == "bpg13,0,0,0,0,1");
  // Final step: mean 5 over the two runs, min 4, max 6.
  for (int i = 0; i < 5; ++i) std::getline(lines, line);
  CHECK(line == "bpg13,5,5,4,6,2");
  std::getline(lines, line);
  CHECK(line.empty());
  std::getline(lines, line);
  CHECK(line == "place,mean_rate");
  std::getline(lines, line);
  CHECK(line == "bpg13,1");  // mean rate 5/5
}

TEST_CASE("stats json mirrors the csv with distinct values") {
  auto r = run({"stats", data("fig1.pnet"), "--steps", "5", "--semantics", "max",
                "--place", "bpg13", "--format", "json"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["sequences"] == 2);
  auto& steps = j["places"][0]["steps"];
  CHECK(steps[5]["mean_exact"] == "5");
  CHECK(steps[5]["distinct_values"] == nlohmann::json::array({4, 6}));
  CHECK(j["places"][0]["rate"]["exact"] == "1");
}

TEST_CASE("stats of a single run collapse to the trace") {
  auto r = run({"stats", data("fig1.pnet"), "--steps", "2", "--semantics", "max",
                "--place", "dhap", "--format", "json"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  for (const auto& st : j["places"][0]["steps"]) {
    CHECK(st["min"] == st["max"]);
    CHECK(st["distinct_count"] == 1);
  }
}

TEST_CASE("crossval matches synthesized solver output") {
  // Simulate, reshape the dump into solver-style answer sets, cross-check.
  auto dump = run({"simulate", data("fig1.pnet"), "--steps", "3", "--semantics", "max",
                   "--dump", "--format", "json"});
  REQUIRE(dump.code == 0);
  auto j = nlohmann::json::parse(dump.out);
  std::ostringstream solver;
  int n = 0;
  for (const auto& seq : j["sequences"]) {
    solver << "Answer: " << ++n << "\n";
    for (std::size_t ts = 0; ts < seq["firings"].size(); ++ts) {
      for (const auto& t : seq["firings"][ts])
        solver << "fires(" << t.get<std::string>() << "," << ts << ") ";
      for (auto& [place, count] : seq["markings"][ts].items())
        solver << "holds(" << place << "," << count.get<std::uint64_t>() << "," << ts
               << ") ";
    }
    solver << "\n";
  }
  solver << "SATISFIABLE\n";
  TempFile file(solver.str());

  auto ok = run({"crossval", data("fig1.pnet"), file.path, "--steps", "3",
                 "--semantics", "max"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("match") == 0);

  // Tamper: drop the last answer set.
  auto text = solver.str();
  auto cut = text.rfind("Answer:");
  TempFile partial(text.substr(0, cut) + "SATISFIABLE\n");
  auto bad = run({"crossval", data("fig1.pnet"), partial.path, "--steps", "3",
                  "--semantics", "max"});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("mismatch") == 0);

  TempFile empty("");
  auto none = run({"crossval", data("fig1.pnet"), empty.path, "--steps", "3",
                   "--semantics", "max"});
  CHECK(none.code == 1);
}

TEST_CASE("PNET_LIMITS sets default limits") {
  setenv("PNET_LIMITS", "50", 1);
  auto r = run({"simulate", data("fig1.pnet"), "--steps", "5"});
  unsetenv("PNET_LIMITS");
  CHECK(r.code == 2);
  CHECK(r.out == "50 sequences (partial: sequences limit reached)\n");

  // Explicit flags override the environment.
  setenv("PNET_LIMITS", "50", 1);
  auto r2 = run({"simulate", data("fig1.pnet"), "--steps", "5", "--semantics", "max",
                 "--limit-sequences", "1000"});
  unsetenv("PNET_LIMITS");
  CHECK(r2.code == 0);
  CHECK(r2.out == "2 sequences\n");
}

TEST_CASE("output goes to --out when given") {
  TempFile sinkfile("");
  auto r = run({"simulate", data("fig1.pnet"), "--steps", "5", "--semantics", "max",
                "--out", sinkfile.path});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(sinkfile.path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "2 sequences");
}

TEST_CASE("malformed net reports diagnostics with positions") {
  TempFile bad("place a\nwat\narc a -> ghost\n");
  auto r = run({"simulate", bad.path, "--steps", "1"});
  CHECK(r.code == 1);
  CHECK(r.err.find("2:1: SyntaxError") != std::string::npos);
  CHECK(r.err.find("UnknownNode") != std::string::npos);
}
