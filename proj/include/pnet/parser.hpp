#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pnet/core.hpp"
#include "pnet/semantics.hpp"

namespace pnet {

struct SourcePos {
  std::size_t line = 0;  // 1-based; 0 means "no position"
  std::size_t column = 0;
};

enum class DiagKind {
  syntax_error,
  unknown_node,
  duplicate_arc,
  zero_weight,
  name_clash,
  invalid_name,
  marking_missing_place,
  malformed_atom,
  incomplete_marking,
  unknown_name,
};

const char* diag_kind_name(DiagKind kind);

struct Diagnostic {
  DiagKind kind;
  SourcePos pos;
  std::string message;

  std::string to_string() const;
};

// One parsed statement of the net description, with its source span.
struct NetStatement {
  enum class Kind { place, transition, arc, reset, inhibit, read } kind;
  std::string first;   // place name / arc source
  std::string second;  // arc target (empty for node declarations)
  TokenCount number = 0;  // tokens= or weight=
  SourcePos pos;
};

struct NetDocument {
  std::vector<NetStatement> statements;
};

struct ParsedNet {
  std::optional<PetriNet> net;
  Marking m0;
  NetDocument document;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return net.has_value(); }
};

// Line-oriented net description:
//   place <name> [tokens=<n>]
//   trans <name>
//   arc <src> -> <dst> [weight=<n>]
//   reset <place> -> <trans>
//   inhibit <place> -> <trans>
//   read <place> -> <trans> weight=<n>
//   # comment (full line or trailing)
// Arc direction decides whether it consumes or produces. Declarations may
// appear in any order. Parsing continues past errors and reports them all.
ParsedNet parse_net(std::string_view text);

// Canonical description: sorted declarations, default weights and token
// counts elided. parse_net(serialize_net(net, m0)) reproduces the net.
std::string serialize_net(const PetriNet& net, const Marking& m0);

enum class AnswerSetFormat {
  clingo_blocks,  // "Answer: N" header, atoms on following lines
  one_per_line,   // each nonempty line is one answer set
};

struct AnswerSetParse {
  std::vector<ExecutionSequence> sequences;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return diagnostics.empty(); }
};

// Rebuilds execution sequences from solver output: fires/2 gives the firing
// set per step, holds/3 the marking per step 0..k; all other atoms are
// ignored. Every (place, step) must be described exactly once or the answer
// set is rejected.
AnswerSetParse parse_answer_sets(std::string_view text, const PetriNet& net,
                                 std::uint64_t k,
                                 AnswerSetFormat format = AnswerSetFormat::clingo_blocks);

}  // namespace pnet
