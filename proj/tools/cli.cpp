#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "pnet/analysis.hpp"
#include "pnet/asp.hpp"
#include "pnet/core.hpp"
#include "pnet/parser.hpp"
#include "pnet/semantics.hpp"

using json = nlohmann::json;

namespace pnet {

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kLimitError = 2;

struct Common {
  std::string net_path;
  std::uint64_t steps = 0;
  std::string semantics = "set";
  std::string reset_mode = "contention";
  std::string format = "text";
  std::string out_path;
  std::uint64_t limit_sequences = 0;
  std::uint64_t limit_states = 0;
};

void add_common(CLI::App* cmd, Common& c, bool with_semantics = true) {
  cmd->add_option("net", c.net_path, "net description (.pnet)")->required();
  cmd->add_option("--steps", c.steps, "simulation horizon k")->required();
  if (with_semantics) {
    cmd->add_option("--semantics", c.semantics, "firing semantics")
        ->check(CLI::IsMember({"set", "max", "maximal", "interleaved"}))
        ->default_str("set");
    cmd->add_option("--reset-mode", c.reset_mode, "reset arc semantics")
        ->check(CLI::IsMember({"contention", "standard"}))
        ->default_str("contention");
  }
  cmd->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"text", "json", "csv"}))
      ->default_str("text");
  cmd->add_option("--out", c.out_path, "write output to a file instead of stdout");
  cmd->add_option("--limit-sequences", c.limit_sequences, "max sequences to enumerate");
  cmd->add_option("--limit-states", c.limit_states, "max tree states to visit");
}

EnumerationLimits resolve_limits(const Common& c) {
  EnumerationLimits limits;
  if (const char* env = std::getenv("PNET_LIMITS")) {
    std::string s(env);
    auto comma = s.find(',');
    try {
      limits.max_sequences = std::stoull(s.substr(0, comma));
      if (comma != std::string::npos) limits.max_states = std::stoull(s.substr(comma + 1));
    } catch (...) {
      // junk in the environment is ignored, flags still apply
    }
  }
  if (c.limit_sequences > 0) limits.max_sequences = c.limit_sequences;
  if (c.limit_states > 0) limits.max_states = c.limit_states;
  return limits;
}

std::optional<std::pair<PetriNet, Marking>> load_net(const Common& c, std::ostream& err) {
  std::ifstream in(c.net_path);
  if (!in.good()) {
    err << "cannot open '" << c.net_path << "'\n";
    return std::nullopt;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  auto parsed = parse_net(ss.str());
  if (!parsed.ok()) {
    for (const auto& d : parsed.diagnostics)
      err << c.net_path << ":" << d.to_string() << "\n";
    return std::nullopt;
  }
  return std::make_pair(std::move(*parsed.net), std::move(parsed.m0));
}

// Output sink: --out file or the supplied stream.
struct Sink {
  std::optional<std::ofstream> file;
  std::ostream* stream;

  Sink(const Common& c, std::ostream& fallback) : stream(&fallback) {
    if (!c.out_path.empty()) {
      file.emplace(c.out_path);
      stream = &*file;
    }
  }
  std::ostream& out() { return *stream; }
  bool ok() const { return !file || file->good(); }
};

json marking_json(const PetriNet& net, const Marking& m) {
  json obj = json::object();
  for (PlaceIndex p = 0; p < net.place_count(); ++p) obj[net.place_name(p)] = m[p];
  return obj;
}

json sequence_json(const PetriNet& net, const ExecutionSequence& seq) {
  json firings = json::array();
  for (const auto& f : seq.firings) {
    json names = json::array();
    for (TransIndex t : f) names.push_back(net.transition_name(t));
    firings.push_back(std::move(names));
  }
  json markings = json::array();
  for (const auto& m : seq.markings) markings.push_back(marking_json(net, m));
  return json{{"firings", std::move(firings)}, {"markings", std::move(markings)}};
}

void print_sequence_text(std::ostream& out, const PetriNet& net,
                         const ExecutionSequence& seq) {
  for (std::size_t s = 0; s < seq.markings.size(); ++s) {
    out << "  t=" << s << "  ";
    for (PlaceIndex p = 0; p < net.place_count(); ++p) {
      if (p) out << ' ';
      out << net.place_name(p) << '=' << seq.markings[s][p];
    }
    if (s < seq.firings.size())
      out << "  fires " << firing_set_names(net, seq.firings[s]);
    out << '\n';
  }
}

bool hard_truncation(const EnumerationStats& stats) {
  return stats.truncated && stats.truncated_by != "visitor";
}

int cmd_simulate(const Common& c, bool dump, std::ostream& out_stream,
                 std::ostream& err) {
  auto loaded = load_net(c, err);
  if (!loaded) return kInputError;
  auto& [net, m0] = *loaded;
  Semantics sem = *parse_semantics(c.semantics);
  ResetMode mode = *parse_reset_mode(c.reset_mode);
  auto limits = resolve_limits(c);

  Sink sink(c, out_stream);
  std::ostream& out = sink.out();

  if (!dump) {
    auto stats = for_each_sequence(net, m0, c.steps, sem, mode, limits,
                                   [](const ExecutionSequence&) { return true; });
    if (c.format == "json") {
      json report{{"semantics", semantics_name(sem)},
                  {"reset_mode", reset_mode_name(mode)},
                  {"k", c.steps},
                  {"count", stats.sequence_count},
                  {"truncated", stats.truncated}};
      out << report.dump(2) << '\n';
    } else if (c.format == "csv") {
      out << "count,truncated\n"
          << stats.sequence_count << ',' << (stats.truncated ? "true" : "false") << '\n';
    } else {
      out << stats.sequence_count << (stats.sequence_count == 1 ? " sequence" : " sequences");
      if (stats.truncated) out << " (partial: " << stats.truncated_by << " limit reached)";
      out << '\n';
    }
    return stats.truncated ? kLimitError : kOk;
  }

  auto result = enumerate_sequences(net, m0, c.steps, sem, mode, limits);
  if (c.format == "json") {
    json sequences = json::array();
    for (const auto& seq : result.sequences) sequences.push_back(sequence_json(net, seq));
    json report{{"semantics", semantics_name(sem)},
                {"reset_mode", reset_mode_name(mode)},
                {"k", c.steps},
                {"sequences", std::move(sequences)}};
    out << report.dump(2) << '\n';
  } else if (c.format == "csv") {
    out << "sequence,step,fires";
    for (PlaceIndex p = 0; p < net.place_count(); ++p) out << ',' << net.place_name(p);
    out << '\n';
    for (std::size_t i = 0; i < result.sequences.size(); ++i) {
      const auto& seq = result.sequences[i];
      for (std::size_t s = 0; s < seq.markings.size(); ++s) {
        out << i << ',' << s << ',';
        if (s < seq.firings.size()) {
          for (std::size_t j = 0; j < seq.firings[s].size(); ++j) {
            if (j) out << ' ';
            out << net.transition_name(seq.firings[s][j]);
          }
        }
        for (PlaceIndex p = 0; p < net.place_count(); ++p)
          out << ',' << seq.markings[s][p];
        out << '\n';
      }
    }
  } else {
    out << result.stats.sequence_count
        << (result.stats.sequence_count == 1 ? " sequence" : " sequences");
    if (result.stats.truncated)
      out << " (partial: " << result.stats.truncated_by << " limit reached)";
    out << '\n';
    for (std::size_t i = 0; i < result.sequences.size(); ++i) {
      out << "sequence " << i << ":\n";
      print_sequence_text(out, net, result.sequences[i]);
    }
  }
  return result.stats.truncated ? kLimitError : kOk;
}

int cmd_emit_asp(const Common& c, const std::string& level_str, std::uint64_t ntok,
                 bool ntok_set, const std::string& golden_path, std::ostream& out_stream,
                 std::ostream& err) {
  auto loaded = load_net(c, err);
  if (!loaded) return kInputError;
  auto& [net, m0] = *loaded;

  if (!ntok_set) {
    err << "--ntok is required; answer sets silently vanish when it is too small."
        << " Suggested upper bound for this net and horizon: "
        << suggest_ntok(net, m0, c.steps) << "\n";
    return kInputError;
  }

  AspVariant variant;
  variant.semantics = *parse_semantics(c.semantics);
  variant.reset_mode = *parse_reset_mode(c.reset_mode);
  variant.ntok = ntok;
  variant.horizon = c.steps;
  variant.level = level_str == "auto" ? required_level(net) : *parse_asp_level(level_str);

  AspProgram prog;
  try {
    prog = emit(net, m0, variant);
  } catch (const Error& e) {
    err << error_kind_name(e.kind()) << ": " << e.what() << "\n";
    return kInputError;
  }

  Sink sink(c, out_stream);
  std::ostream& out = sink.out();

  if (!golden_path.empty()) {
    std::ifstream in(golden_path);
    if (!in.good()) {
      err << "cannot open '" << golden_path << "'\n";
      return kInputError;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    std::set<std::string> golden;
    try {
      for (auto& atom : expand_shorthand_atoms(ss.str())) golden.insert(std::move(atom));
    } catch (const Error& e) {
      err << error_kind_name(e.kind()) << ": " << e.what() << "\n";
      return kInputError;
    }
    std::set<std::string> ours;
    for (auto& fact : prog.facts()) {
      if (!fact.empty() && fact.back() == '.') fact.pop_back();
      ours.insert(std::move(fact));
    }
    std::vector<std::string> missing, extra;
    for (const auto& g : golden)
      if (!ours.count(g)) missing.push_back(g);
    for (const auto& f : ours)
      if (!golden.count(f)) extra.push_back(f);
    if (missing.empty() && extra.empty()) {
      out << "facts match (" << ours.size() << " atoms)\n";
      return kOk;
    }
    out << "fact sets differ: " << missing.size() << " missing, " << extra.size()
        << " extra\n";
    for (const auto& m : missing) out << "  missing: " << m << '\n';
    for (const auto& e : extra) out << "  extra:   " << e << '\n';
    return kInputError;
  }

  out << prog.text();
  return kOk;
}

json rational_json(const Rational& r) {
  return json{{"decimal", r.to_double()}, {"exact", r.to_string()}};
}

int cmd_stats(const Common& c, std::vector<std::string> places,
              const std::vector<std::string>& waypoint_strs,
              const std::vector<std::string>& recovers, std::ostream& out_stream,
              std::ostream& err) {
  auto loaded = load_net(c, err);
  if (!loaded) return kInputError;
  auto& [net, m0] = *loaded;
  Semantics sem = *parse_semantics(c.semantics);
  ResetMode mode = *parse_reset_mode(c.reset_mode);
  auto limits = resolve_limits(c);

  std::vector<Waypoint> predicates;
  std::vector<PlaceIndex> tracked;
  try {
    for (const auto& w : waypoint_strs) predicates.push_back(parse_waypoint(w));
    for (const auto& place : recovers)
      predicates.push_back({Waypoint::Kind::recovery, place, Cmp::eq, 0, 0});
    if (places.empty()) places = net.place_names();
    for (const auto& p : places) tracked.push_back(net.place(p));
    for (const auto& w : predicates) (void)net.place(w.place);
  } catch (const Error& e) {
    err << error_kind_name(e.kind()) << ": " << e.what() << "\n";
    return kInputError;
  }

  StatsAccumulator acc(net, tracked);
  auto stats = for_each_sequence(net, m0, c.steps, sem, mode, limits,
                                 [&](const ExecutionSequence& seq) {
                                   if (predicates.empty() ||
                                       matches_waypoints(net, seq, predicates))
                                     acc.add(seq);
                                   return true;
                                 });
  if (acc.sequences() == 0) {
    err << "no sequences" << (predicates.empty() ? "" : " match the waypoints") << "\n";
    return hard_truncation(stats) ? kLimitError : kInputError;
  }

  Sink sink(c, out_stream);
  std::ostream& out = sink.out();

  if (c.format == "json") {
    json jplaces = json::array();
    for (const auto& name : places) {
      auto series = acc.series(name);
      json steps = json::array();
      for (std::size_t s = 0; s < series.per_step.size(); ++s) {
        const auto& st = series.per_step[s];
        json distinct = json::array();
        for (TokenCount v : st.distinct) distinct.push_back(v);
        steps.push_back(json{{"step", s},
                             {"mean", st.mean.to_double()},
                             {"mean_exact", st.mean.to_string()},
                             {"min", st.min},
                             {"max", st.max},
                             {"distinct_count", st.distinct.size()},
                             {"distinct_values", std::move(distinct)}});
      }
      json entry{{"place", name}, {"steps", std::move(steps)}};
      if (c.steps >= 1) entry["rate"] = rational_json(acc.rate_of(name).mean_rate);
      jplaces.push_back(std::move(entry));
    }
    json report{{"semantics", semantics_name(sem)},
                {"reset_mode", reset_mode_name(mode)},
                {"k", c.steps},
                {"sequences", acc.sequences()},
                {"truncated", stats.truncated},
                {"places", std::move(jplaces)}};
    out << report.dump(2) << '\n';
  } else if (c.format == "csv") {
    out << "place,step,mean,min,max,distinct_count\n";
    for (const auto& name : places) {
      auto series = acc.series(name);
      for (std::size_t s = 0; s < series.per_step.size(); ++s) {
        const auto& st = series.per_step[s];
        out << name << ',' << s << ',' << st.mean.to_decimal() << ',' << st.min << ','
            << st.max << ',' << st.distinct.size() << '\n';
      }
    }
    if (c.steps >= 1) {
      out << "\nplace,mean_rate\n";
      for (const auto& name : places)
        out << name << ',' << acc.rate_of(name).mean_rate.to_decimal() << '\n';
    }
  } else {
    out << acc.sequences() << " sequences, horizon " << c.steps << '\n';
    for (const auto& name : places) {
      auto series = acc.series(name);
      out << name << ":\n";
      for (std::size_t s = 0; s < series.per_step.size(); ++s) {
        const auto& st = series.per_step[s];
        out << "  step " << s << ": mean " << st.mean.to_string() << " ("
            << st.mean.to_decimal() << "), min " << st.min << ", max " << st.max
            << ", distinct " << st.distinct.size() << '\n';
      }
      if (c.steps >= 1)
        out << "  rate: " << acc.rate_of(name).mean_rate.to_string() << " ("
            << acc.rate_of(name).mean_rate.to_decimal() << ")\n";
    }
  }
  return hard_truncation(stats) ? kLimitError : kOk;
}

int cmd_analyze(const Common& c, const std::string& property, const std::string& target,
                TokenCount bound, const std::string& transition,
                std::size_t max_subset_size, const std::vector<std::string>& waypoint_strs,
                const std::vector<std::string>& recovers, std::ostream& out_stream,
                std::ostream& err) {
  auto loaded = load_net(c, err);
  if (!loaded) return kInputError;
  auto& [net, m0] = *loaded;
  Semantics sem = *parse_semantics(c.semantics);
  ResetMode mode = *parse_reset_mode(c.reset_mode);
  auto limits = resolve_limits(c);

  Sink sink(c, out_stream);
  std::ostream& out = sink.out();

  json report{{"property", property},
              {"k", c.steps},
              {"semantics", semantics_name(sem)},
              {"reset_mode", reset_mode_name(mode)},
              {"parameters", json::object()}};
  EnumerationStats stats;
  std::string text;
  std::string csv;

  try {
    if (property == "reachable") {
      std::vector<std::pair<std::string, TokenCount>> goal;
      std::istringstream ss(target);
      for (std::string part; std::getline(ss, part, ',');) {
        auto eq = part.find('=');
        if (eq == std::string::npos)
          throw Error(ErrorKind::invalid_predicate,
                      "--target expects name=count[,name=count...]");
        goal.emplace_back(part.substr(0, eq), std::stoull(part.substr(eq + 1)));
      }
      if (goal.empty())
        throw Error(ErrorKind::invalid_predicate, "reachable needs --target");
      auto result = reachable(net, m0, goal, c.steps, sem, mode, limits, &stats);
      report["parameters"]["target"] = target;
      report["result"] = json{{"reachable", result.reachable}};
      if (result.reachable) {
        report["result"]["step"] = result.step;
        report["witnesses"] = json::array({sequence_json(net, *result.witness)});
        text = "reachable at step " + std::to_string(result.step);
        csv = "reachable,step\ntrue," + std::to_string(result.step) + "\n";
      } else {
        text = "not reachable within " + std::to_string(c.steps) + " steps";
        csv = "reachable,step\nfalse,\n";
      }
    } else if (property == "bounded") {
      auto violations = bounded(net, m0, bound, c.steps, sem, mode, limits, &stats);
      report["parameters"]["bound"] = bound;
      json jv = json::array();
      for (const auto& v : violations)
        jv.push_back(json{{"sequence", v.sequence},
                          {"step", v.step},
                          {"place", v.place},
                          {"count", v.count}});
      report["result"] = json{{"bounded", violations.empty()},
                              {"violations", std::move(jv)}};
      text = violations.empty()
                 ? std::to_string(bound) + "-bounded within " + std::to_string(c.steps) +
                       " steps"
                 : std::to_string(violations.size()) + " violations of bound " +
                       std::to_string(bound);
      std::ostringstream cs;
      cs << "sequence,step,place,count\n";
      for (const auto& v : violations)
        cs << v.sequence << ',' << v.step << ',' << v.place << ',' << v.count << '\n';
      csv = cs.str();
    } else if (property == "deadlocks") {
      auto hits = deadlocks(net, m0, c.steps, sem, mode, limits, &stats);
      json jh = json::array();
      for (const auto& h : hits)
        jh.push_back(json{{"sequence", h.sequence},
                          {"step", h.step},
                          {"marking", marking_json(net, h.marking)}});
      report["result"] = json{{"deadlock_free", hits.empty()}, {"hits", std::move(jh)}};
      text = hits.empty() ? "no deadlocks within " + std::to_string(c.steps) + " steps"
                          : std::to_string(hits.size()) + " deadlocked steps";
      std::ostringstream cs;
      cs << "sequence,step\n";
      for (const auto& h : hits) cs << h.sequence << ',' << h.step << '\n';
      csv = cs.str();
    } else if (property == "liveness") {
      if (transition.empty())
        throw Error(ErrorKind::invalid_predicate, "liveness needs --transition");
      bool live = liveness_basic(net, m0, transition, c.steps, mode, limits, &stats);
      report["parameters"]["transition"] = transition;
      report["result"] = json{{"live", live}};
      text = transition + (live ? " fires" : " never fires") + " within " +
             std::to_string(c.steps) + " steps (source-extended, interleaved)";
      csv = "live\n" + std::string(live ? "true" : "false") + "\n";
    } else if (property == "t-invariants") {
      auto invs = t_invariants(net, m0, c.steps, mode, limits, &stats);
      json ji = json::array();
      std::ostringstream cs, ts;
      cs << "transitions\n";
      for (const auto& inv : invs) {
        json members = json::object();
        std::string rendered;
        for (const auto& [name, count] : inv.multiset) {
          members[name] = count;
          if (!rendered.empty()) rendered += ' ';
          rendered += name + "*" + std::to_string(count);
        }
        ji.push_back(json{{"transitions", std::move(members)},
                          {"sequence", inv.sequence},
                          {"from", inv.from},
                          {"to", inv.to}});
        cs << rendered << '\n';
        ts << "  " << rendered << '\n';
      }
      report["result"] = std::move(ji);
      text = std::to_string(invs.size()) + " t-invariants\n" + ts.str();
      if (!text.empty() && text.back() == '\n') text.pop_back();
      csv = cs.str();
    } else if (property == "p-invariants") {
      auto invs =
          p_invariants(net, m0, c.steps, max_subset_size, mode, limits, 1'000'000, &stats);
      json ji = json::array();
      std::ostringstream cs, ts;
      cs << "places\n";
      for (const auto& inv : invs) {
        json members = json::array();
        std::string rendered;
        for (const auto& name : inv) {
          members.push_back(name);
          if (!rendered.empty()) rendered += ' ';
          rendered += name;
        }
        ji.push_back(std::move(members));
        cs << rendered << '\n';
        ts << "  " << rendered << '\n';
      }
      report["parameters"]["max_subset_size"] = max_subset_size;
      report["result"] = std::move(ji);
      text = std::to_string(invs.size()) + " p-invariants\n" + ts.str();
      if (!text.empty() && text.back() == '\n') text.pop_back();
      csv = cs.str();
    } else if (property == "waypoints") {
      std::vector<Waypoint> predicates;
      for (const auto& w : waypoint_strs) predicates.push_back(parse_waypoint(w));
      for (const auto& place : recovers)
        predicates.push_back({Waypoint::Kind::recovery, place, Cmp::eq, 0, 0});
      for (const auto& w : predicates) (void)net.place(w.place);
      std::uint64_t matched = 0, total = 0;
      std::vector<std::uint64_t> indices;
      stats = for_each_sequence(net, m0, c.steps, sem, mode, limits,
                                [&](const ExecutionSequence& seq) {
                                  if (matches_waypoints(net, seq, predicates)) {
                                    ++matched;
                                    indices.push_back(total);
                                  }
                                  ++total;
                                  return true;
                                });
      report["parameters"]["waypoints"] = waypoint_strs;
      report["parameters"]["recovers"] = recovers;
      report["result"] = json{{"matched", matched}, {"total", total},
                              {"indices", indices}};
      text = std::to_string(matched) + " of " + std::to_string(total) +
             " sequences match";
      csv = "matched,total\n" + std::to_string(matched) + "," + std::to_string(total) +
            "\n";
    } else {
      err << "unknown property '" << property << "'\n";
      return kInputError;
    }
  } catch (const Error& e) {
    err << error_kind_name(e.kind()) << ": " << e.what() << "\n";
    return kInputError;
  }

  report["truncated"] = hard_truncation(stats);
  if (c.format == "json")
    out << report.dump(2) << '\n';
  else if (c.format == "csv")
    out << csv;
  else
    out << text << '\n';
  return hard_truncation(stats) ? kLimitError : kOk;
}

int cmd_crossval(const Common& c, const std::string& solver_path, bool per_line,
                 std::ostream& out_stream, std::ostream& err) {
  auto loaded = load_net(c, err);
  if (!loaded) return kInputError;
  auto& [net, m0] = *loaded;
  Semantics sem = *parse_semantics(c.semantics);
  ResetMode mode = *parse_reset_mode(c.reset_mode);
  auto limits = resolve_limits(c);

  std::ifstream in(solver_path);
  if (!in.good()) {
    err << "cannot open '" << solver_path << "'\n";
    return kInputError;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  auto parsed = parse_answer_sets(ss.str(), net, c.steps,
                                  per_line ? AnswerSetFormat::one_per_line
                                           : AnswerSetFormat::clingo_blocks);
  for (const auto& d : parsed.diagnostics) err << solver_path << ":" << d.to_string() << "\n";
  if (!parsed.ok()) return kInputError;

  auto native = enumerate_sequences(net, m0, c.steps, sem, mode, limits);
  if (native.stats.truncated) {
    err << "native enumeration hit the " << native.stats.truncated_by << " limit\n";
    return kLimitError;
  }

  auto report = cross_validate(native.sequences, parsed.sequences);

  Sink sink(c, out_stream);
  std::ostream& out = sink.out();
  if (c.format == "json") {
    json j{{"match", report.match},
           {"native_count", native.sequences.size()},
           {"external_count", parsed.sequences.size()},
           {"unmatched_native", report.unmatched_native},
           {"unmatched_external", report.unmatched_external}};
    out << j.dump(2) << '\n';
  } else if (c.format == "csv") {
    out << "match,native_count,external_count,unmatched_native,unmatched_external\n"
        << (report.match ? "true" : "false") << ',' << native.sequences.size() << ','
        << parsed.sequences.size() << ',' << report.unmatched_native.size() << ','
        << report.unmatched_external.size() << '\n';
  } else {
    if (report.match) {
      out << "match: " << native.sequences.size() << " sequences correspond 1-1\n";
    } else {
      out << "mismatch: " << report.unmatched_native.size() << " native unmatched, "
          << report.unmatched_external.size() << " external unmatched\n";
    }
  }
  return report.match ? kOk : kInputError;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Petri net simulator with exhaustive semantics and ASP emission"};
  app.require_subcommand(1);

  Common sim_c, emit_c, stats_c, analyze_c, crossval_c;

  auto* sim = app.add_subcommand("simulate", "enumerate all execution sequences");
  add_common(sim, sim_c);
  bool dump = false;
  sim->add_flag("--dump", dump, "print every sequence, not just the count");

  auto* emit_cmd = app.add_subcommand("emit-asp", "emit the logic program for a net");
  add_common(emit_cmd, emit_c);
  std::string level = "auto";
  emit_cmd->add_option("--level", level, "encoding level")
      ->check(CLI::IsMember({"base", "reset", "inhibit", "read", "auto"}))
      ->default_str("auto");
  std::uint64_t ntok = 0;
  auto* ntok_opt = emit_cmd->add_option("--ntok", ntok, "token domain upper bound");
  std::string golden_path;
  emit_cmd->add_option("--expand-shorthand", golden_path,
                       "expand a pooled reference listing and compare fact sets");

  auto* stats_cmd = app.add_subcommand("stats", "per-step statistics and rates");
  add_common(stats_cmd, stats_c);
  std::vector<std::string> stat_places, stat_waypoints, stat_recovers;
  stats_cmd->add_option("--place", stat_places, "places to report (default: all)");
  stats_cmd->add_option("--waypoint", stat_waypoints,
                        "keep sequences satisfying place=<n>[@step|@any]");
  stats_cmd->add_option("--recovers", stat_recovers,
                        "keep sequences where the place empties and later recovers");

  auto* analyze = app.add_subcommand("analyze", "bounded property checks");
  add_common(analyze, analyze_c);
  std::string property, target, transition;
  TokenCount bound = 0;
  std::size_t max_subset_size = 3;
  std::vector<std::string> an_waypoints, an_recovers;
  analyze
      ->add_option("--property", property,
                   "reachable | bounded | deadlocks | liveness | t-invariants | "
                   "p-invariants | waypoints")
      ->required()
      ->check(CLI::IsMember({"reachable", "bounded", "deadlocks", "liveness",
                             "t-invariants", "p-invariants", "waypoints"}));
  analyze->add_option("--target", target, "partial marking name=count[,name=count...]");
  analyze->add_option("--bound", bound, "token bound per place");
  analyze->add_option("--transition", transition, "subject transition for liveness");
  analyze->add_option("--max-subset-size", max_subset_size,
                      "largest place subset for p-invariants");
  analyze->add_option("--waypoint", an_waypoints, "sequence filter (waypoints property)");
  analyze->add_option("--recovers", an_recovers, "depletion-recovery filter");

  auto* crossval = app.add_subcommand("crossval",
                                      "compare solver answer sets with the native run");
  add_common(crossval, crossval_c);
  std::string solver_path;
  crossval->add_option("solver-output", solver_path, "saved solver output file")
      ->required();
  bool per_line = false;
  crossval->add_flag("--answers-per-line", per_line,
                     "treat every line as one pre-processed answer set");

  std::vector<const char*> argv;
  argv.push_back("pnet");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (sim->parsed()) return cmd_simulate(sim_c, dump, out, err);
    if (emit_cmd->parsed())
      return cmd_emit_asp(emit_c, level, ntok, ntok_opt->count() > 0, golden_path, out,
                          err);
    if (stats_cmd->parsed())
      return cmd_stats(stats_c, stat_places, stat_waypoints, stat_recovers, out, err);
    if (analyze->parsed())
      return cmd_analyze(analyze_c, property, target, bound, transition, max_subset_size,
                         an_waypoints, an_recovers, out, err);
    if (crossval->parsed())
      return cmd_crossval(crossval_c, solver_path, per_line, out, err);
  } catch (const Error& e) {
    err << error_kind_name(e.kind()) << ": " << e.what() << "\n";
    return e.kind() == ErrorKind::limit_exceeded ? kLimitError : kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace pnet
