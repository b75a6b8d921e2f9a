#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pnet/core.hpp"
#include "pnet/semantics.hpp"

namespace pnet {

// Encoding family. Each level includes everything below it: reset switches
// the arc facts to their time-parameterized form, inhibit and read add
// their extra disabling rules on top of that.
enum class AspLevel { base, reset, inhibit, read };

const char* asp_level_name(AspLevel level);
std::optional<AspLevel> parse_asp_level(std::string_view text);

// Smallest level whose machinery covers every arc kind in the net.
AspLevel required_level(const PetriNet& net);

struct AspVariant {
  AspLevel level = AspLevel::base;
  Semantics semantics = Semantics::set;
  ResetMode reset_mode = ResetMode::contention;
  std::uint64_t ntok = 0;  // embedded verbatim; see suggest_ntok
  std::uint64_t horizon = 0;
};

// One emitted statement plus the label of the rule schema it instantiates.
struct AspLine {
  std::string text;
  std::string label;
  bool is_fact = false;
};

struct AspProgram {
  std::vector<AspLine> lines;

  std::string text() const;
  std::vector<std::string> facts() const;
  // Predicate name/arity pairs appearing in the program, sorted.
  std::vector<std::pair<std::string, int>> atom_schema() const;
};

// Generates the logic program whose answer sets are exactly the execution
// sequences of (net, m0) to the given horizon. Throws Error(variant_too_low)
// when the net has arc kinds the chosen level cannot express. Note that a
// too-small ntok silently suppresses answer sets on the solver side; it is
// not detectable here.
AspProgram emit(const PetriNet& net, const Marking& m0, const AspVariant& variant);

// Upper bound heuristic for ntok: initial tokens plus horizon times the
// largest amount any single step can produce. Offered to callers, never
// applied implicitly.
std::uint64_t suggest_ntok(const PetriNet& net, const Marking& m0, std::uint64_t k);

// Expands pooled terms and numeric ranges in fact text, one atom per
// combination: "holds(a;b,0,0)." becomes "holds(a,0,0). holds(b,0,0)." and
// "num(0..2)." becomes "num(0). num(1). num(2).". Idempotent on expanded
// text. Lines starting with % are dropped. Throws Error(parse_error).
std::string expand_shorthand(std::string_view text);

// expand_shorthand split into individual atoms (with any trailing period
// removed); handy for set comparisons against reference listings.
std::vector<std::string> expand_shorthand_atoms(std::string_view text);

}  // namespace pnet
