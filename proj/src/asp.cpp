#include "pnet/asp.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace pnet {

const char* asp_level_name(AspLevel level) {
  switch (level) {
    case AspLevel::base: return "base";
    case AspLevel::reset: return "reset";
    case AspLevel::inhibit: return "inhibit";
    case AspLevel::read: return "read";
  }
  return "?";
}

std::optional<AspLevel> parse_asp_level(std::string_view text) {
  if (text == "base") return AspLevel::base;
  if (text == "reset") return AspLevel::reset;
  if (text == "inhibit") return AspLevel::inhibit;
  if (text == "read") return AspLevel::read;
  return std::nullopt;
}

AspLevel required_level(const PetriNet& net) {
  AspLevel level = AspLevel::base;
  if (net.has_reset_arcs()) level = AspLevel::reset;
  if (net.has_inhibitor_arcs()) level = AspLevel::inhibit;
  if (net.has_read_arcs()) level = AspLevel::read;
  return level;
}

std::string AspProgram::text() const {
  std::string out;
  for (const auto& line : lines) {
    out += line.text;
    out += '\n';
  }
  return out;
}

std::vector<std::string> AspProgram::facts() const {
  std::vector<std::string> out;
  for (const auto& line : lines)
    if (line.is_fact) out.push_back(line.text);
  return out;
}

std::vector<std::pair<std::string, int>> AspProgram::atom_schema() const {
  std::set<std::pair<std::string, int>> seen;
  for (const auto& line : lines) {
    const std::string& s = line.text;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!(s[i] >= 'a' && s[i] <= 'z')) continue;
      if (i > 0 && (std::isalnum((unsigned char)s[i - 1]) || s[i - 1] == '_')) continue;
      std::size_t j = i;
      while (j < s.size() && (std::isalnum((unsigned char)s[j]) || s[j] == '_')) ++j;
      std::string name = s.substr(i, j - i);
      if (name == "not") {
        i = j - 1;
        continue;
      }
      int arity = 0;
      if (j < s.size() && s[j] == '(') {
        arity = 1;
        int depth = 1;
        for (std::size_t p = j + 1; p < s.size() && depth > 0; ++p) {
          if (s[p] == '(' || s[p] == '[') ++depth;
          if (s[p] == ')' || s[p] == ']') --depth;
          if (s[p] == ',' && depth == 1) ++arity;
        }
      }
      seen.insert({std::move(name), arity});
      i = j - 1;
    }
  }
  return {seen.begin(), seen.end()};
}

namespace {

struct Emitter {
  const PetriNet& net;
  const Marking& m0;
  const AspVariant& v;
  bool timed;  // reset level and above parameterize arcs over time
  AspProgram prog;

  void fact(std::string text, const char* label) {
    prog.lines.push_back({std::move(text), label, true});
  }
  void rule(std::string text, const char* label) {
    prog.lines.push_back({std::move(text), label, false});
  }

  void arcs() {
    // Input arcs, grouped by kind, sorted by (place, transition).
    std::vector<std::tuple<PlaceIndex, TransIndex, const InputArc*>> in;
    for (TransIndex t = 0; t < net.transition_count(); ++t)
      for (const auto& arc : net.inputs(t)) in.emplace_back(arc.place, t, &arc);
    std::sort(in.begin(), in.end(), [](const auto& a, const auto& b) {
      return std::tie(std::get<0>(a), std::get<1>(a)) <
             std::tie(std::get<0>(b), std::get<1>(b));
    });

    for (const auto& [p, t, arc] : in) {
      const std::string& pn = net.place_name(p);
      const std::string& tn = net.transition_name(t);
      switch (arc->type) {
        case ArcType::normal:
          if (timed)
            rule("ptarc(" + pn + "," + tn + "," + std::to_string(arc->weight) +
                     ",TS) :- time(TS).",
                 "f6");
          else
            fact("ptarc(" + pn + "," + tn + "," + std::to_string(arc->weight) + ").",
                 "f3");
          break;
        case ArcType::reset:
          if (v.reset_mode == ResetMode::contention)
            rule("ptarc(" + pn + "," + tn + ",X,TS) :- holds(" + pn +
                     ",X,TS), num(X), X > 0.",
                 "f8");
          else
            fact("rptarc(" + pn + "," + tn + ").", "f8'");
          break;
        case ArcType::inhibitor:
          rule("iptarc(" + pn + "," + tn + ",1,TS) :- time(TS).", "f9");
          break;
        case ArcType::read:
          rule("tptarc(" + pn + "," + tn + "," + std::to_string(arc->weight) +
                   ",TS) :- time(TS).",
               "f10");
          break;
      }
    }

    std::vector<std::tuple<TransIndex, PlaceIndex, TokenCount>> out;
    for (TransIndex t = 0; t < net.transition_count(); ++t)
      for (const auto& arc : net.outputs(t)) out.emplace_back(t, arc.place, arc.weight);
    std::sort(out.begin(), out.end());
    for (const auto& [t, p, w] : out) {
      const std::string& pn = net.place_name(p);
      const std::string& tn = net.transition_name(t);
      if (timed)
        rule("tparc(" + tn + "," + pn + "," + std::to_string(w) + ",TS) :- time(TS).",
             "f7");
      else
        fact("tparc(" + tn + "," + pn + "," + std::to_string(w) + ").", "f4");
    }
  }

  void run() {
    for (std::uint64_t n = 0; n <= v.ntok; ++n)
      fact("num(" + std::to_string(n) + ").", "x1");
    for (std::uint64_t ts = 0; ts <= v.horizon; ++ts)
      fact("time(" + std::to_string(ts) + ").", "f5");
    for (PlaceIndex p = 0; p < net.place_count(); ++p)
      fact("place(" + net.place_name(p) + ").", "f1");
    for (TransIndex t = 0; t < net.transition_count(); ++t)
      fact("trans(" + net.transition_name(t) + ").", "f2");

    arcs();

    for (PlaceIndex p = 0; p < net.place_count(); ++p)
      fact("holds(" + net.place_name(p) + "," + std::to_string(m0[p]) + ",0).", "i1");

    bool standard_reset =
        timed && v.reset_mode == ResetMode::standard && net.has_reset_arcs();

    if (timed)
      rule("notenabled(T,TS) :- ptarc(P,T,N,TS), holds(P,Q,TS), Q < N, place(P), "
           "trans(T), time(TS), num(N), num(Q).",
           "e3");
    else
      rule("notenabled(T,TS) :- ptarc(P,T,N), holds(P,Q,TS), Q < N, place(P), "
           "trans(T), time(TS), num(N), num(Q).",
           "e1");
    if (v.level == AspLevel::inhibit || v.level == AspLevel::read)
      rule("notenabled(T,TS) :- iptarc(P,T,N,TS), holds(P,Q,TS), place(P), trans(T), "
           "time(TS), num(N), num(Q), Q >= N.",
           "e4");
    if (v.level == AspLevel::read)
      rule("notenabled(T,TS) :- tptarc(P,T,N,TS), holds(P,Q,TS), place(P), trans(T), "
           "time(TS), num(N), num(Q), Q < N.",
           "e5");
    rule("enabled(T,TS) :- trans(T), time(TS), not notenabled(T,TS).", "e2");
    rule("{fires(T,TS)} :- enabled(T,TS), trans(T), time(TS).", "a1");

    if (timed) {
      rule("add(P,Q,T,TS) :- fires(T,TS), tparc(T,P,Q,TS), time(TS).", "r6");
      rule("del(P,Q,T,TS) :- fires(T,TS), ptarc(P,T,Q,TS), time(TS).", "r7");
    } else {
      rule("add(P,Q,T,TS) :- fires(T,TS), tparc(T,P,Q), time(TS).", "r1");
      rule("del(P,Q,T,TS) :- fires(T,TS), ptarc(P,T,Q), time(TS).", "r2");
    }
    rule("tot_incr(P,QQ,TS) :- QQ=#sum[add(P,Q,T,TS)=Q:num(Q):trans(T)], time(TS), "
         "num(QQ), place(P).",
         "r3");
    rule("tot_decr(P,QQ,TS) :- QQ=#sum[del(P,Q,T,TS)=Q:num(Q):trans(T)], time(TS), "
         "num(QQ), place(P).",
         "r4");

    if (standard_reset) {
      rule("reset(P,TS) :- rptarc(P,T), place(P), trans(T), fires(T,TS), time(TS).",
           "a7'");
      rule("holds(P,Q,TS+1) :- holds(P,Q1,TS), tot_incr(P,Q2,TS), tot_decr(P,Q3,TS), "
           "Q = Q1+Q2-Q3, place(P), num(Q;Q1;Q2;Q3), time(TS), time(TS+1), "
           "not reset(P,TS).",
           "r5a'");
      rule("holds(P,Q,TS+1) :- tot_incr(P,Q,TS), place(P), num(Q), time(TS), "
           "time(TS+1), reset(P,TS).",
           "r5b'");
    } else {
      rule("holds(P,Q,TS+1) :- holds(P,Q1,TS), tot_incr(P,Q2,TS), tot_decr(P,Q3,TS), "
           "Q = Q1+Q2-Q3, place(P), num(Q;Q1;Q2;Q3), time(TS), time(TS+1).",
           "r5");
    }

    rule("consumesmore(P,TS) :- holds(P,Q,TS), tot_decr(P,Q1,TS), Q1 > Q.", "a2");
    rule("consumesmore :- consumesmore(P,TS).", "a3");
    rule(":- consumesmore.", "a4");

    if (v.semantics == Semantics::maximal) {
      if (timed)
        rule("could_not_have(T,TS) :- enabled(T,TS), not fires(T,TS), ptarc(S,T,Q,TS), "
             "holds(S,QQ,TS), tot_decr(S,QQQ,TS), Q > QQ-QQQ.",
             "a5");
      else
        rule("could_not_have(T,TS) :- enabled(T,TS), not fires(T,TS), ptarc(S,T,Q), "
             "holds(S,QQ,TS), tot_decr(S,QQQ,TS), Q > QQ-QQQ.",
             "a5");
      rule(":- not could_not_have(T,TS), enabled(T,TS), not fires(T,TS), trans(T), "
           "time(TS).",
           "a6");
    } else if (v.semantics == Semantics::interleaved) {
      rule("more_than_one_fires :- fires(T1,TS), fires(T2,TS), T1 != T2, time(TS).",
           "a5'");
      rule(":- more_than_one_fires.", "a6'");
    }
  }
};

}  // namespace

AspProgram emit(const PetriNet& net, const Marking& m0, const AspVariant& variant) {
  AspLevel needed = required_level(net);
  if (static_cast<int>(variant.level) < static_cast<int>(needed)) {
    throw Error(ErrorKind::variant_too_low,
                std::string("net needs level '") + asp_level_name(needed) +
                    "' but '" + asp_level_name(variant.level) + "' was requested");
  }
  Emitter e{net, m0, variant, variant.level != AspLevel::base, {}};
  e.run();
  return std::move(e.prog);
}

std::uint64_t suggest_ntok(const PetriNet& net, const Marking& m0, std::uint64_t k) {
  auto add = [](std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_add_overflow(a, b, &r))
      throw Error(ErrorKind::overflow, "ntok heuristic overflow");
    return r;
  };
  std::uint64_t total = 0;
  for (PlaceIndex p = 0; p < net.place_count(); ++p) total = add(total, m0[p]);
  std::uint64_t per_step = 0;
  for (TransIndex t = 0; t < net.transition_count(); ++t)
    for (const auto& arc : net.outputs(t)) per_step = add(per_step, arc.weight);
  std::uint64_t growth;
  if (__builtin_mul_overflow(per_step, k, &growth))
    throw Error(ErrorKind::overflow, "ntok heuristic overflow");
  return add(total, growth);
}

namespace {

struct Atom {
  std::string name;
  std::vector<std::string> args;
  bool period = false;
  bool newline_before = false;
};

// Fact-text scanner for the shorthand expander. Accepts identifiers with an
// optional argument list; anything rule-like is an error.
std::vector<Atom> scan_atoms(std::string_view text) {
  std::vector<Atom> atoms;
  std::size_t i = 0;
  bool pending_newline = false;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorKind::parse_error,
                "shorthand expansion: " + what + " at offset " + std::to_string(i));
  };

  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      pending_newline = !atoms.empty();
      ++i;
      continue;
    }
    if (std::isspace((unsigned char)c)) {
      ++i;
      continue;
    }
    if (c == '%') {  // comment to end of line
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (!(c >= 'a' && c <= 'z')) fail("expected a fact");

    Atom atom;
    atom.newline_before = pending_newline;
    pending_newline = false;
    std::size_t start = i;
    while (i < text.size() &&
           (std::isalnum((unsigned char)text[i]) || text[i] == '_'))
      ++i;
    atom.name = std::string(text.substr(start, i - start));

    if (i < text.size() && text[i] == '(') {
      ++i;
      std::string arg;
      int depth = 1;
      while (i < text.size() && depth > 0) {
        char a = text[i];
        if (a == '(') ++depth;
        if (a == ')') {
          --depth;
          if (depth == 0) break;
        }
        if (a == ',' && depth == 1) {
          atom.args.push_back(arg);
          arg.clear();
        } else {
          arg += a;
        }
        ++i;
      }
      if (depth != 0) fail("unbalanced parentheses");
      atom.args.push_back(arg);
      ++i;  // closing paren
    }
    if (i < text.size() && text[i] == '.') {
      // Don't confuse a range's ".." with a terminator; ranges only occur
      // inside parentheses, so a lone '.' here always terminates.
      atom.period = true;
      ++i;
    }
    if (i < text.size() && (text[i] == ':' || text[i] == '-')) fail("not a fact");
    atoms.push_back(std::move(atom));
  }
  return atoms;
}

std::vector<std::string> expand_arg(const std::string& arg) {
  auto dots = arg.find("..");
  if (dots != std::string::npos) {
    auto numeric = [](std::string_view s) {
      return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isdigit(c);
      });
    };
    std::string lo = arg.substr(0, dots), hi = arg.substr(dots + 2);
    if (!numeric(lo) || !numeric(hi))
      throw Error(ErrorKind::parse_error, "malformed range '" + arg + "'");
    std::uint64_t a = std::stoull(lo), b = std::stoull(hi);
    if (a > b) throw Error(ErrorKind::parse_error, "descending range '" + arg + "'");
    std::vector<std::string> out;
    for (std::uint64_t n = a; n <= b; ++n) out.push_back(std::to_string(n));
    return out;
  }
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    auto semi = arg.find(';', pos);
    if (semi == std::string::npos) {
      out.push_back(arg.substr(pos));
      break;
    }
    out.push_back(arg.substr(pos, semi - pos));
    pos = semi + 1;
  }
  return out;
}

// All ground instances of one (possibly pooled) atom, without periods.
std::vector<std::string> render_atom(const Atom& atom) {
  std::vector<std::vector<std::string>> choices;
  for (const auto& arg : atom.args) choices.push_back(expand_arg(arg));

  std::vector<std::string> out;
  std::vector<std::size_t> idx(choices.size(), 0);
  while (true) {
    std::string rendered = atom.name;
    if (!choices.empty()) {
      rendered += '(';
      for (std::size_t a = 0; a < choices.size(); ++a) {
        if (a) rendered += ',';
        rendered += choices[a][idx[a]];
      }
      rendered += ')';
    }
    out.push_back(std::move(rendered));

    bool done = true;
    for (std::size_t a = choices.size(); a-- > 0;) {
      if (++idx[a] < choices[a].size()) {
        done = false;
        break;
      }
      idx[a] = 0;
    }
    if (done) break;
  }
  return out;
}

}  // namespace

std::vector<std::string> expand_shorthand_atoms(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& atom : scan_atoms(text))
    for (auto& rendered : render_atom(atom)) out.push_back(std::move(rendered));
  return out;
}

std::string expand_shorthand(std::string_view text) {
  std::string out;
  for (const auto& atom : scan_atoms(text)) {
    bool first_of_atom = true;
    for (const auto& rendered : render_atom(atom)) {
      if (!out.empty()) out += (first_of_atom && atom.newline_before) ? '\n' : ' ';
      first_of_atom = false;
      out += rendered;
      if (atom.period) out += '.';
    }
  }
  if (!out.empty()) out += '\n';
  return out;
}

}  // namespace pnet
