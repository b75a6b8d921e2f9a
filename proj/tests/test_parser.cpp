#include "doctest.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "nets.hpp"
#include "pnet/asp.hpp"
#include "pnet/parser.hpp"

using namespace pnet;
using testutil::at;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool same_structure(const PetriNet& a, const Marking& ma, const PetriNet& b,
                    const Marking& mb) {
  if (a.place_names() != b.place_names()) return false;
  if (a.transition_names() != b.transition_names()) return false;
  if (ma != mb) return false;
  for (TransIndex t = 0; t < a.transition_count(); ++t) {
    if (a.inputs(t) != b.inputs(t)) return false;
    if (a.outputs(t) != b.outputs(t)) return false;
  }
  return true;
}

bool has_diag(const std::vector<Diagnostic>& diags, DiagKind kind) {
  return std::any_of(diags.begin(), diags.end(),
                     [&](const Diagnostic& d) { return d.kind == kind; });
}

}  // namespace

TEST_CASE("fig1.pnet parses into the reference net") {
  auto parsed = parse_net(slurp(std::string(PNET_TESTDATA_DIR) + "/fig1.pnet"));
  REQUIRE(parsed.ok());
  auto [want, want_m0] = testnets::fig1();
  CHECK(same_structure(*parsed.net, parsed.m0, want, want_m0));
}

TEST_CASE("fig4 fragment: read plus consume on the same pair") {
  auto parsed = parse_net(
      "place h_is tokens=30\nplace atp\ntrans syn\n"
      "read h_is -> syn weight=25\narc h_is -> syn weight=3\narc syn -> atp\n");
  REQUIRE(parsed.ok());
  auto [want, want_m0] = testnets::fig4(30);
  CHECK(same_structure(*parsed.net, parsed.m0, want, want_m0));
}

TEST_CASE("empty file gives an empty valid net") {
  auto parsed = parse_net("");
  REQUIRE(parsed.ok());
  CHECK(parsed.net->place_count() == 0);
  CHECK(parsed.net->transition_count() == 0);
}

TEST_CASE("comments and defaults") {
  auto parsed = parse_net(
      "# leading comment\n"
      "place a tokens=2  # trailing comment\n"
      "place b\n"
      "trans t\n"
      "arc a -> t\n"
      "arc t -> b\n");
  REQUIRE(parsed.ok());
  CHECK(at(*parsed.net, parsed.m0, "a") == 2);
  CHECK(at(*parsed.net, parsed.m0, "b") == 0);  // tokens default to 0
  auto t = parsed.net->transition("t");
  CHECK(parsed.net->inputs(t)[0].weight == 1);  // weight defaults to 1
}

TEST_CASE("declarations may follow their uses") {
  auto parsed = parse_net("arc a -> t\nplace a tokens=1\ntrans t\n");
  REQUIRE(parsed.ok());
}

TEST_CASE("syntax errors carry positions and parsing continues") {
  auto parsed = parse_net(
      "place a\n"
      "bogus line here\n"
      "trans t\n"
      "arc a => t\n"
      "read a -> t\n");
  CHECK(!parsed.ok());
  REQUIRE(parsed.diagnostics.size() == 3);
  CHECK(parsed.diagnostics[0].kind == DiagKind::syntax_error);
  CHECK(parsed.diagnostics[0].pos.line == 2);
  CHECK(parsed.diagnostics[1].pos.line == 4);  // '=>' is not '->'
  CHECK(parsed.diagnostics[2].pos.line == 5);  // read arcs need a weight
}

TEST_CASE("unknown arc endpoints") {
  auto parsed = parse_net("place a\ntrans t\narc a -> ghost\n");
  CHECK(!parsed.ok());
  CHECK(has_diag(parsed.diagnostics, DiagKind::unknown_node));
}

TEST_CASE("builder violations surface as diagnostics") {
  auto parsed = parse_net("place a\ntrans t\narc a -> t weight=0\n");
  CHECK(!parsed.ok());
  CHECK(has_diag(parsed.diagnostics, DiagKind::zero_weight));

  auto clash = parse_net("place x\ntrans x\n");
  CHECK(!clash.ok());
  CHECK(has_diag(clash.diagnostics, DiagKind::name_clash));
}

TEST_CASE("round trips") {
  for (const char* name : {"fig1.pnet", "fig2.pnet", "fig3.pnet", "fig4.pnet"}) {
    auto text = slurp(std::string(PNET_TESTDATA_DIR) + "/" + name);
    auto first = parse_net(text);
    REQUIRE(first.ok());
    auto serialized = serialize_net(*first.net, first.m0);
    auto second = parse_net(serialized);
    REQUIRE(second.ok());
    CHECK(same_structure(*first.net, first.m0, *second.net, second.m0));
    // Canonical text is a fixpoint.
    CHECK(serialize_net(*second.net, second.m0) == serialized);
  }
}

TEST_CASE("serialization elides defaults and names arc kinds") {
  auto [net, m0] = testnets::fig2();
  auto text = serialize_net(net, m0);
  CHECK(text.find("reset dhap -> tr") != std::string::npos);
  CHECK(text.find("arc t6 -> bpg13 weight=2") != std::string::npos);
  CHECK(text.find("arc g3p -> t6\n") != std::string::npos);   // weight 1 elided
  CHECK(text.find("tokens=") == std::string::npos);           // all-zero marking
}

TEST_CASE("answer set ingestion reconstructs the worked trace") {
  auto [net, m0] = testnets::fig1();
  std::string pooled =
      slurp(std::string(PNET_TESTDATA_DIR) + "/golden/fig1_k5_trace_answer.txt");
  std::string text = "Answer: 1\n" + expand_shorthand(pooled) + "\nSATISFIABLE\n";

  auto parsed = parse_answer_sets(text, net, 5);
  REQUIRE(parsed.ok());
  REQUIRE(parsed.sequences.size() == 1);
  const auto& seq = parsed.sequences[0];
  REQUIRE(seq.firings.size() == 6);
  REQUIRE(seq.markings.size() == 6);  // holds atoms stop at the horizon
  CHECK(seq.firings[0] == testutil::fs(net, {"t3"}));
  CHECK(seq.firings[2] == testutil::fs(net, {"t3", "t4", "t5a", "t5b"}));
  CHECK(at(net, seq.markings[5], "bpg13") == 4);
  CHECK(at(net, seq.markings[5], "dhap") == 4);
  CHECK(at(net, seq.markings[5], "f16bp") == 1);
  CHECK(at(net, seq.markings[5], "g3p") == 2);
}

TEST_CASE("conflicting holds atoms are rejected") {
  auto [net, m0] = testnets::chain2();
  std::string text =
      "Answer: 1\n"
      "holds(p1,1,0) holds(p2,0,0) holds(p1,1,1) holds(p1,2,1) holds(p2,0,1)\n";
  auto parsed = parse_answer_sets(text, net, 1);
  CHECK(!parsed.ok());
  CHECK(has_diag(parsed.diagnostics, DiagKind::incomplete_marking));
  CHECK(parsed.sequences.empty());
}

TEST_CASE("missing holds atoms are rejected") {
  auto [net, m0] = testnets::chain2();
  std::string text = "Answer: 1\nholds(p1,1,0) holds(p2,0,0) holds(p1,1,1)\n";
  auto parsed = parse_answer_sets(text, net, 1);
  CHECK(!parsed.ok());
  CHECK(has_diag(parsed.diagnostics, DiagKind::incomplete_marking));
}

TEST_CASE("unknown names and malformed atoms are rejected") {
  auto [net, m0] = testnets::chain2();
  auto bad_name = parse_answer_sets("Answer: 1\nholds(pX,0,0)\n", net, 0);
  CHECK(has_diag(bad_name.diagnostics, DiagKind::unknown_name));

  auto bad_step = parse_answer_sets(
      "Answer: 1\nholds(p1,1,0) holds(p2,0,0) fires(t1,9)\n", net, 0);
  CHECK(has_diag(bad_step.diagnostics, DiagKind::malformed_atom));

  auto bad_atom = parse_answer_sets("Answer: 1\nholds(p1,1,0) junk((\n", net, 0);
  CHECK(has_diag(bad_atom.diagnostics, DiagKind::malformed_atom));
}

TEST_CASE("empty solver output parses to nothing") {
  auto [net, m0] = testnets::fig1();
  auto parsed = parse_answer_sets("", net, 5);
  CHECK(parsed.ok());
  CHECK(parsed.sequences.empty());

  // Banners alone don't produce answer sets either.
  auto banners = parse_answer_sets("clingo version 5.4.0\nSolving...\nUNSATISFIABLE\n",
                                   net, 5);
  CHECK(banners.sequences.empty());
}

TEST_CASE("one answer set per line mode") {
  auto [net, m0] = testnets::chain2();
  std::string line = "holds(p1,1,0) holds(p2,0,0) fires(t1,0)";
  auto parsed = parse_answer_sets(line + "\n" + line + "\n", net, 0,
                                  AnswerSetFormat::one_per_line);
  REQUIRE(parsed.ok());
  CHECK(parsed.sequences.size() == 2);
  CHECK(parsed.sequences[0].firings[0] == testutil::fs(net, {"t1"}));
}

TEST_CASE("ignored predicates do not disturb ingestion") {
  auto [net, m0] = testnets::chain2();
  std::string text =
      "Answer: 1\n"
      "holds(p1,1,0) holds(p2,0,0) enabled(t1,0) add(p2,1,t1,0) tot_decr(p1,1,0)\n";
  auto parsed = parse_answer_sets(text, net, 0);
  REQUIRE(parsed.ok());
  REQUIRE(parsed.sequences.size() == 1);
  CHECK(parsed.sequences[0].firings[0].empty());  // no fires atoms at all
}
