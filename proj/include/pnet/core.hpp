#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pnet {

using PlaceIndex = std::uint32_t;
using TransIndex = std::uint32_t;
using TokenCount = std::uint64_t;

enum class ArcType { normal, reset, inhibitor, read };

const char* arc_type_name(ArcType type);

// Arc from a place into a transition. The weight is meaningful for normal
// and read arcs only; a reset arc consumes whatever the place currently
// holds and an inhibitor arc tests for emptiness, so both store weight 0.
struct InputArc {
  PlaceIndex place = 0;
  ArcType type = ArcType::normal;
  TokenCount weight = 0;

  friend bool operator==(const InputArc&, const InputArc&) = default;
};

// Arc from a transition into a place.
struct OutputArc {
  PlaceIndex place = 0;
  TokenCount weight = 1;

  friend bool operator==(const OutputArc&, const OutputArc&) = default;
};

// Total token assignment, indexed by place. Comparable so it can key maps
// and be checked for revisits.
class Marking {
 public:
  Marking() = default;
  explicit Marking(std::size_t places) : counts_(places, 0) {}
  explicit Marking(std::vector<TokenCount> counts) : counts_(std::move(counts)) {}

  TokenCount operator[](PlaceIndex p) const { return counts_[p]; }
  TokenCount& operator[](PlaceIndex p) { return counts_[p]; }
  std::size_t size() const { return counts_.size(); }
  const std::vector<TokenCount>& counts() const { return counts_; }

  friend bool operator==(const Marking&, const Marking&) = default;
  friend auto operator<=>(const Marking&, const Marking&) = default;

 private:
  std::vector<TokenCount> counts_;
};

enum class ErrorKind {
  unknown_node,
  duplicate_arc,
  zero_weight,
  name_clash,
  marking_missing_place,
  invalid_name,
  not_admissible,
  overflow,
  variant_too_low,
  limit_exceeded,
  empty_input,
  invalid_predicate,
  subset_limit_exceeded,
  parse_error,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

struct ValidationIssue {
  ErrorKind kind;
  std::string message;
};

// Identifiers double as ASP constants, so they must start with a lowercase
// letter and contain only letters, digits and underscores.
bool is_valid_name(std::string_view name);

// Immutable net: places and transitions are stored sorted by name, so an
// index order is also lexicographic name order. Construct via NetBuilder.
class PetriNet {
 public:
  std::size_t place_count() const { return places_.size(); }
  std::size_t transition_count() const { return transitions_.size(); }

  const std::string& place_name(PlaceIndex p) const { return places_[p]; }
  const std::string& transition_name(TransIndex t) const { return transitions_[t]; }
  const std::vector<std::string>& place_names() const { return places_; }
  const std::vector<std::string>& transition_names() const { return transitions_; }

  std::optional<PlaceIndex> find_place(std::string_view name) const;
  std::optional<TransIndex> find_transition(std::string_view name) const;

  // Lookup that throws Error(unknown_node) when the name is not declared.
  PlaceIndex place(std::string_view name) const;
  TransIndex transition(std::string_view name) const;

  // Pre-set of a transition, with arc kinds; post-set with weights.
  const std::vector<InputArc>& inputs(TransIndex t) const { return inputs_[t]; }
  const std::vector<OutputArc>& outputs(TransIndex t) const { return outputs_[t]; }

  bool has_reset_arcs() const { return reset_arcs_ > 0; }
  bool has_inhibitor_arcs() const { return inhibitor_arcs_ > 0; }
  bool has_read_arcs() const { return read_arcs_ > 0; }

 private:
  friend class NetBuilder;

  std::vector<std::string> places_;
  std::vector<std::string> transitions_;
  std::vector<std::vector<InputArc>> inputs_;
  std::vector<std::vector<OutputArc>> outputs_;
  std::size_t reset_arcs_ = 0;
  std::size_t inhibitor_arcs_ = 0;
  std::size_t read_arcs_ = 0;
};

// Accumulates declarations and produces a validated net plus its initial
// marking. build() reports every violation it finds, not just the first.
class NetBuilder {
 public:
  NetBuilder& place(std::string name, TokenCount tokens = 0);
  NetBuilder& transition(std::string name);
  NetBuilder& input_arc(std::string place, std::string trans, TokenCount weight = 1);
  NetBuilder& output_arc(std::string trans, std::string place, TokenCount weight = 1);
  NetBuilder& reset_arc(std::string place, std::string trans);
  NetBuilder& inhibitor_arc(std::string place, std::string trans);
  NetBuilder& read_arc(std::string place, std::string trans, TokenCount weight);

  // Returns the net and initial marking when everything validates;
  // otherwise nullopt with the full issue list in `issues`.
  std::optional<std::pair<PetriNet, Marking>> build(std::vector<ValidationIssue>& issues) const;

  // Convenience for tests and hand-built nets; throws on the first issue
  // with all of them folded into the message.
  std::pair<PetriNet, Marking> build_or_throw() const;

 private:
  struct PlaceDecl {
    std::string name;
    TokenCount tokens;
  };
  struct ArcDecl {
    std::string place;
    std::string trans;
    ArcType type;
    TokenCount weight;
    bool into_transition;  // false for transition -> place
  };

  std::vector<PlaceDecl> places_;
  std::vector<std::string> transitions_;
  std::vector<ArcDecl> arcs_;
};

// Re-checks an already built net against a marking. A net built by
// NetBuilder is structurally valid, so this only flags marking problems;
// it exists so validation can be re-run after deserialization.
std::vector<ValidationIssue> validate(const PetriNet& net, const Marking& m0);

}  // namespace pnet
