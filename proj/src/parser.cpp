#include "pnet/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <sstream>

namespace pnet {

const char* diag_kind_name(DiagKind kind) {
  switch (kind) {
    case DiagKind::syntax_error: return "SyntaxError";
    case DiagKind::unknown_node: return "UnknownNode";
    case DiagKind::duplicate_arc: return "DuplicateArc";
    case DiagKind::zero_weight: return "ZeroWeight";
    case DiagKind::name_clash: return "NameClash";
    case DiagKind::invalid_name: return "InvalidName";
    case DiagKind::marking_missing_place: return "MarkingMissingPlace";
    case DiagKind::malformed_atom: return "MalformedAtom";
    case DiagKind::incomplete_marking: return "IncompleteMarking";
    case DiagKind::unknown_name: return "UnknownName";
  }
  return "?";
}

std::string Diagnostic::to_string() const {
  std::ostringstream out;
  if (pos.line > 0) out << pos.line << ':' << pos.column << ": ";
  out << diag_kind_name(kind) << ": " << message;
  return out.str();
}

namespace {

DiagKind diag_kind_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::unknown_node: return DiagKind::unknown_node;
    case ErrorKind::duplicate_arc: return DiagKind::duplicate_arc;
    case ErrorKind::zero_weight: return DiagKind::zero_weight;
    case ErrorKind::name_clash: return DiagKind::name_clash;
    case ErrorKind::invalid_name: return DiagKind::invalid_name;
    case ErrorKind::marking_missing_place: return DiagKind::marking_missing_place;
    default: return DiagKind::syntax_error;
  }
}

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize_line(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace((unsigned char)line[i])) {
      ++i;
      continue;
    }
    if (line[i] == '#') break;
    std::size_t start = i;
    while (i < line.size() && !std::isspace((unsigned char)line[i]) && line[i] != '#')
      ++i;
    tokens.push_back({line.substr(start, i - start), start + 1});
  }
  return tokens;
}

// "key=value" with a non-negative integer value.
std::optional<TokenCount> parse_kv(std::string_view token, std::string_view key) {
  if (token.size() <= key.size() + 1) return std::nullopt;
  if (token.substr(0, key.size()) != key || token[key.size()] != '=') return std::nullopt;
  std::string_view value = token.substr(key.size() + 1);
  TokenCount n = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
  if (ec != std::errc() || ptr != value.data() + value.size()) return std::nullopt;
  return n;
}

}  // namespace

ParsedNet parse_net(std::string_view text) {
  ParsedNet result;
  auto& diags = result.diagnostics;
  auto error = [&](DiagKind kind, SourcePos pos, std::string message) {
    diags.push_back({kind, pos, std::move(message)});
  };

  std::size_t line_no = 0;
  std::size_t offset = 0;
  while (offset <= text.size()) {
    auto nl = text.find('\n', offset);
    std::string_view line = text.substr(
        offset, nl == std::string_view::npos ? text.size() - offset : nl - offset);
    ++line_no;
    offset = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

    auto tokens = tokenize_line(line);
    if (tokens.empty()) continue;
    SourcePos pos{line_no, tokens[0].column};
    std::string_view head = tokens[0].text;

    auto want_arrow = [&](std::size_t idx) {
      if (tokens.size() > idx && tokens[idx].text == "->") return true;
      error(DiagKind::syntax_error, pos,
            "expected '<src> -> <dst>' after '" + std::string(head) + "'");
      return false;
    };

    if (head == "place") {
      if (tokens.size() < 2) {
        error(DiagKind::syntax_error, pos, "place needs a name");
        continue;
      }
      TokenCount tokens_count = 0;
      if (tokens.size() >= 3) {
        auto v = parse_kv(tokens[2].text, "tokens");
        if (!v || tokens.size() > 3) {
          error(DiagKind::syntax_error, {line_no, tokens[2].column},
                "expected 'tokens=<n>'");
          continue;
        }
        tokens_count = *v;
      }
      result.document.statements.push_back({NetStatement::Kind::place,
                                            std::string(tokens[1].text), "",
                                            tokens_count, pos});
    } else if (head == "trans") {
      if (tokens.size() != 2) {
        error(DiagKind::syntax_error, pos, "trans needs exactly a name");
        continue;
      }
      result.document.statements.push_back(
          {NetStatement::Kind::transition, std::string(tokens[1].text), "", 0, pos});
    } else if (head == "arc" || head == "reset" || head == "inhibit" || head == "read") {
      if (tokens.size() < 4 || !want_arrow(2)) continue;
      TokenCount weight = 1;
      bool have_weight = false;
      if (tokens.size() >= 5) {
        auto v = parse_kv(tokens[4].text, "weight");
        if (!v || tokens.size() > 5) {
          error(DiagKind::syntax_error, {line_no, tokens[4].column},
                "expected 'weight=<n>'");
          continue;
        }
        weight = *v;
        have_weight = true;
      }
      NetStatement::Kind kind;
      if (head == "arc")
        kind = NetStatement::Kind::arc;
      else if (head == "reset")
        kind = NetStatement::Kind::reset;
      else if (head == "inhibit")
        kind = NetStatement::Kind::inhibit;
      else
        kind = NetStatement::Kind::read;

      if (kind != NetStatement::Kind::arc && kind != NetStatement::Kind::read &&
          have_weight) {
        error(DiagKind::syntax_error, pos,
              std::string(head) + " arcs do not take a weight");
        continue;
      }
      if (kind == NetStatement::Kind::read && !have_weight) {
        error(DiagKind::syntax_error, pos, "read arcs need an explicit weight=<n>");
        continue;
      }
      result.document.statements.push_back({kind, std::string(tokens[1].text),
                                            std::string(tokens[3].text), weight, pos});
    } else {
      error(DiagKind::syntax_error, pos, "unknown statement '" + std::string(head) + "'");
    }
  }

  // Resolve in two passes so declarations may follow their uses.
  std::map<std::string, SourcePos> place_decls, trans_decls;
  NetBuilder builder;
  for (const auto& st : result.document.statements) {
    if (st.kind == NetStatement::Kind::place) {
      place_decls.emplace(st.first, st.pos);
      builder.place(st.first, st.number);
    } else if (st.kind == NetStatement::Kind::transition) {
      trans_decls.emplace(st.first, st.pos);
      builder.transition(st.first);
    }
  }
  for (const auto& st : result.document.statements) {
    switch (st.kind) {
      case NetStatement::Kind::place:
      case NetStatement::Kind::transition:
        break;
      case NetStatement::Kind::arc: {
        bool src_place = place_decls.count(st.first) > 0;
        bool src_trans = trans_decls.count(st.first) > 0;
        bool dst_place = place_decls.count(st.second) > 0;
        bool dst_trans = trans_decls.count(st.second) > 0;
        if (src_place && dst_trans) {
          builder.input_arc(st.first, st.second, st.number);
        } else if (src_trans && dst_place) {
          builder.output_arc(st.first, st.second, st.number);
        } else {
          error(DiagKind::unknown_node, st.pos,
                "arc endpoints '" + st.first + "' -> '" + st.second +
                    "' do not name a declared place/transition pair");
        }
        break;
      }
      case NetStatement::Kind::reset:
      case NetStatement::Kind::inhibit:
      case NetStatement::Kind::read: {
        if (!place_decls.count(st.first) || !trans_decls.count(st.second)) {
          error(DiagKind::unknown_node, st.pos,
                "expected a declared place -> transition pair, got '" + st.first +
                    "' -> '" + st.second + "'");
          break;
        }
        if (st.kind == NetStatement::Kind::reset)
          builder.reset_arc(st.first, st.second);
        else if (st.kind == NetStatement::Kind::inhibit)
          builder.inhibitor_arc(st.first, st.second);
        else
          builder.read_arc(st.first, st.second, st.number);
        break;
      }
    }
  }

  std::vector<ValidationIssue> issues;
  auto built = builder.build(issues);
  for (const auto& issue : issues)
    error(diag_kind_for(issue.kind), {}, issue.message);

  if (diags.empty() && built) {
    result.net = std::move(built->first);
    result.m0 = std::move(built->second);
  }
  return result;
}

std::string serialize_net(const PetriNet& net, const Marking& m0) {
  std::ostringstream out;
  for (PlaceIndex p = 0; p < net.place_count(); ++p) {
    out << "place " << net.place_name(p);
    if (m0[p] > 0) out << " tokens=" << m0[p];
    out << '\n';
  }
  for (TransIndex t = 0; t < net.transition_count(); ++t)
    out << "trans " << net.transition_name(t) << '\n';

  // Normal input arcs sorted by (place, transition), then outputs, then the
  // extended kinds. Index order is already name order.
  std::vector<std::tuple<PlaceIndex, TransIndex, TokenCount, ArcType>> in;
  for (TransIndex t = 0; t < net.transition_count(); ++t)
    for (const auto& arc : net.inputs(t)) in.emplace_back(arc.place, t, arc.weight, arc.type);
  std::sort(in.begin(), in.end());

  for (const auto& [p, t, w, type] : in) {
    if (type != ArcType::normal) continue;
    out << "arc " << net.place_name(p) << " -> " << net.transition_name(t);
    if (w != 1) out << " weight=" << w;
    out << '\n';
  }
  std::vector<std::tuple<TransIndex, PlaceIndex, TokenCount>> outs;
  for (TransIndex t = 0; t < net.transition_count(); ++t)
    for (const auto& arc : net.outputs(t)) outs.emplace_back(t, arc.place, arc.weight);
  std::sort(outs.begin(), outs.end());
  for (const auto& [t, p, w] : outs) {
    out << "arc " << net.transition_name(t) << " -> " << net.place_name(p);
    if (w != 1) out << " weight=" << w;
    out << '\n';
  }
  for (auto type : {ArcType::reset, ArcType::inhibitor, ArcType::read}) {
    for (const auto& [p, t, w, at] : in) {
      if (at != type) continue;
      if (type == ArcType::reset)
        out << "reset " << net.place_name(p) << " -> " << net.transition_name(t) << '\n';
      else if (type == ArcType::inhibitor)
        out << "inhibit " << net.place_name(p) << " -> " << net.transition_name(t)
            << '\n';
      else
        out << "read " << net.place_name(p) << " -> " << net.transition_name(t)
            << " weight=" << w << '\n';
    }
  }
  return out.str();
}

namespace {

struct GroundAtom {
  std::string name;
  std::vector<std::string> args;
};

std::optional<GroundAtom> parse_atom(std::string_view token) {
  GroundAtom atom;
  auto open = token.find('(');
  if (open == std::string_view::npos) {
    if (token.empty()) return std::nullopt;
    atom.name = std::string(token);
    return atom;
  }
  if (token.back() != ')') return std::nullopt;
  atom.name = std::string(token.substr(0, open));
  std::string_view inner = token.substr(open + 1, token.size() - open - 2);
  if (inner.empty()) return std::nullopt;
  std::size_t pos = 0;
  while (true) {
    auto comma = inner.find(',', pos);
    if (comma == std::string_view::npos) {
      atom.args.emplace_back(inner.substr(pos));
      break;
    }
    atom.args.emplace_back(inner.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return atom;
}

std::optional<std::uint64_t> parse_number(std::string_view s) {
  std::uint64_t n = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return n;
}

// Split solver output into per-answer-set atom lists.
std::vector<std::pair<std::vector<std::string>, std::size_t>> split_answer_sets(
    std::string_view text, AnswerSetFormat format) {
  std::vector<std::pair<std::vector<std::string>, std::size_t>> sets;
  bool in_answer = false;

  std::size_t line_no = 0, offset = 0;
  while (offset <= text.size()) {
    auto nl = text.find('\n', offset);
    std::string_view line = text.substr(
        offset, nl == std::string_view::npos ? text.size() - offset : nl - offset);
    ++line_no;
    offset = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

    std::istringstream words{std::string(line)};
    std::vector<std::string> tokens;
    for (std::string w; words >> w;) tokens.push_back(std::move(w));
    if (tokens.empty()) {
      if (format == AnswerSetFormat::one_per_line) continue;
      in_answer = false;
      continue;
    }

    if (format == AnswerSetFormat::one_per_line) {
      sets.push_back({std::move(tokens), line_no});
      continue;
    }

    if (tokens[0] == "Answer:") {
      sets.push_back({{}, line_no});
      in_answer = true;
      continue;
    }
    // Solver banners and verdict lines end the current answer block.
    bool atoms_only = std::all_of(tokens.begin(), tokens.end(), [](const std::string& w) {
      return !w.empty() && w[0] >= 'a' && w[0] <= 'z';
    });
    if (!in_answer || !atoms_only) {
      in_answer = false;
      continue;
    }
    for (auto& w : tokens) sets.back().first.push_back(std::move(w));
  }
  return sets;
}

}  // namespace

AnswerSetParse parse_answer_sets(std::string_view text, const PetriNet& net,
                                 std::uint64_t k, AnswerSetFormat format) {
  AnswerSetParse result;
  auto error = [&](DiagKind kind, std::size_t line, std::string message) {
    result.diagnostics.push_back({kind, {line, 0}, std::move(message)});
  };

  for (const auto& [tokens, line_no] : split_answer_sets(text, format)) {
    std::vector<FiringSet> firings(k + 1);
    // holds values per (step, place); UINT64_MAX marks "not seen yet".
    std::vector<std::vector<TokenCount>> holds(
        k + 1, std::vector<TokenCount>(net.place_count(), UINT64_MAX));
    bool bad = false;

    for (const auto& token : tokens) {
      auto atom = parse_atom(token);
      if (!atom) {
        error(DiagKind::malformed_atom, line_no, "unparsable atom '" + token + "'");
        bad = true;
        continue;
      }
      if (atom->name == "fires") {
        if (atom->args.size() != 2) {
          error(DiagKind::malformed_atom, line_no, "fires/" +
                                                       std::to_string(atom->args.size()) +
                                                       " in '" + token + "'");
          bad = true;
          continue;
        }
        auto t = net.find_transition(atom->args[0]);
        if (!t) {
          error(DiagKind::unknown_name, line_no,
                "fires names unknown transition '" + atom->args[0] + "'");
          bad = true;
          continue;
        }
        auto ts = parse_number(atom->args[1]);
        if (!ts || *ts > k) {
          error(DiagKind::malformed_atom, line_no,
                "fires time step out of range in '" + token + "'");
          bad = true;
          continue;
        }
        firings[*ts].push_back(*t);
      } else if (atom->name == "holds") {
        if (atom->args.size() != 3) {
          error(DiagKind::malformed_atom, line_no, "holds/" +
                                                       std::to_string(atom->args.size()) +
                                                       " in '" + token + "'");
          bad = true;
          continue;
        }
        auto p = net.find_place(atom->args[0]);
        if (!p) {
          error(DiagKind::unknown_name, line_no,
                "holds names unknown place '" + atom->args[0] + "'");
          bad = true;
          continue;
        }
        auto q = parse_number(atom->args[1]);
        auto ts = parse_number(atom->args[2]);
        if (!q || !ts || *ts > k) {
          error(DiagKind::malformed_atom, line_no,
                "holds count or step out of range in '" + token + "'");
          bad = true;
          continue;
        }
        if (holds[*ts][*p] != UINT64_MAX && holds[*ts][*p] != *q) {
          error(DiagKind::incomplete_marking, line_no,
                "conflicting counts for " + atom->args[0] + " at step " +
                    std::to_string(*ts));
          bad = true;
          continue;
        }
        holds[*ts][*p] = *q;
      }
      // Any other predicate (enabled, add, del, ...) is irrelevant here.
    }

    for (std::uint64_t ts = 0; ts <= k && !bad; ++ts) {
      for (PlaceIndex p = 0; p < net.place_count(); ++p) {
        if (holds[ts][p] == UINT64_MAX) {
          error(DiagKind::incomplete_marking, line_no,
                "no holds atom for " + net.place_name(p) + " at step " +
                    std::to_string(ts));
          bad = true;
        }
      }
    }
    if (bad) continue;

    ExecutionSequence seq;
    for (std::uint64_t ts = 0; ts <= k; ++ts) {
      auto& f = firings[ts];
      std::sort(f.begin(), f.end());
      f.erase(std::unique(f.begin(), f.end()), f.end());
      seq.firings.push_back(std::move(f));
      seq.markings.emplace_back(std::move(holds[ts]));
    }
    result.sequences.push_back(std::move(seq));
  }
  return result;
}

}  // namespace pnet
