#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pnet/core.hpp"

namespace pnet {

// How a step's firing set is chosen.
//   set         - any admissible subset of the enabled transitions, including
//                 the empty set.
//   maximal     - admissible sets that excuse every enabled non-member: adding
//                 it would overconsume some input place.
//   interleaved - at most one transition per step.
enum class Semantics { set, maximal, interleaved };

// How a reset arc's consumption interacts with other consumers of the same
// place. Under contention the reset arc claims the full current count and
// competes with normal arcs; under standard semantics emptying the place is
// a side effect that conflicts with nothing.
enum class ResetMode { contention, standard };

const char* semantics_name(Semantics s);
const char* reset_mode_name(ResetMode m);
std::optional<Semantics> parse_semantics(std::string_view text);
std::optional<ResetMode> parse_reset_mode(std::string_view text);

// Transitions selected to fire simultaneously, kept sorted by index (index
// order is lexicographic name order).
using FiringSet = std::vector<TransIndex>;

// One complete simulation run: firings T0..Tk with markings M0..M(k+1).
// Sequences reconstructed from solver output stop at Mk (the last step a
// holds atom describes), so markings may have firings.size() entries
// instead of firings.size() + 1.
struct ExecutionSequence {
  std::vector<FiringSet> firings;
  std::vector<Marking> markings;

  friend bool operator==(const ExecutionSequence&, const ExecutionSequence&) = default;
  friend auto operator<=>(const ExecutionSequence&, const ExecutionSequence&) = default;
};

bool is_enabled(const PetriNet& net, const Marking& m, TransIndex t);
std::vector<TransIndex> enabled_transitions(const PetriNet& net, const Marking& m);

// Tokens the firing set claims at each place: normal arc weights, plus the
// full current count for every reset arc whose transition fires (contention
// mode only). Throws Error(overflow) if a sum exceeds the token range.
std::vector<TokenCount> effective_consumption(const PetriNet& net, const Marking& m,
                                              const FiringSet& f, ResetMode mode);

// True iff every member is enabled and no place is overdrawn.
bool is_admissible(const PetriNet& net, const Marking& m, const FiringSet& f,
                   ResetMode mode);

// Applies a firing set. Places with a fired reset arc keep only what the
// step produces; everything else follows M - consumed + produced. Throws
// Error(not_admissible) or Error(overflow).
Marking fire(const PetriNet& net, const Marking& m, const FiringSet& f, ResetMode mode);

// All firing-set choices at a marking under the given semantics, in
// canonical order: by size, then lexicographically by member list.
std::vector<FiringSet> firing_sets(const PetriNet& net, const Marking& m,
                                   Semantics semantics, ResetMode mode);

struct EnumerationLimits {
  std::uint64_t max_sequences = 1'000'000;
  std::uint64_t max_states = 100'000'000;
};

struct EnumerationStats {
  std::uint64_t sequence_count = 0;
  std::uint64_t states_visited = 0;
  bool truncated = false;
  std::string truncated_by;  // "sequences" or "states" when truncated
};

struct EnumerationResult {
  std::vector<ExecutionSequence> sequences;
  EnumerationStats stats;
};

// Exhaustive depth-first expansion of every firing-set choice at every step
// 0..k. Distinct choice paths stay distinct even when they revisit the same
// marking. Deterministic: canonical firing-set order drives the walk.
EnumerationResult enumerate_sequences(const PetriNet& net, const Marking& m0,
                                      std::uint64_t k, Semantics semantics,
                                      ResetMode mode, EnumerationLimits limits = {});

// Streaming variant: invokes visit once per complete sequence (the reference
// is only valid during the call). visit returns false to stop early, which
// reports truncation by "visitor".
EnumerationStats for_each_sequence(const PetriNet& net, const Marking& m0,
                                   std::uint64_t k, Semantics semantics, ResetMode mode,
                                   EnumerationLimits limits,
                                   const std::function<bool(const ExecutionSequence&)>& visit);

struct CorrespondenceReport {
  bool match = false;
  std::vector<std::size_t> unmatched_native;
  std::vector<std::size_t> unmatched_external;
};

// Compares two sequence collections as sets of (fires, holds) atom sets over
// steps 0..k; the marking after the final firing is deliberately ignored
// because solver output never contains it.
CorrespondenceReport cross_validate(const std::vector<ExecutionSequence>& native,
                                    const std::vector<ExecutionSequence>& external);

std::string firing_set_names(const PetriNet& net, const FiringSet& f);

}  // namespace pnet
