#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pnet/core.hpp"
#include "pnet/semantics.hpp"

namespace pnet {

// Exact rational arithmetic for rates and means; keeps statistics free of
// float comparisons. Normalized, denominator > 0. Throws Error(overflow)
// when a result leaves the 64-bit range.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t value) : num_(value) {}
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;

  friend bool operator==(const Rational&, const Rational&) = default;
  bool operator<(const Rational& o) const;
  bool operator>(const Rational& o) const { return o < *this; }

  // "3/4", or just "3" for integers.
  std::string to_string() const;
  // Exact long-division rendering with at most `max_digits` fractional
  // digits (rounded half up), trailing zeros trimmed.
  std::string to_decimal(int max_digits = 9) const;
  double to_double() const { return double(num_) / double(den_); }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// Per-step aggregate of one place's token count across sequences, for the
// observable steps 0..k.
struct StepStats {
  Rational mean;
  TokenCount min = 0;
  TokenCount max = 0;
  std::set<TokenCount> distinct;
};

struct PlaceSeries {
  std::string place;
  std::vector<StepStats> per_step;  // index = time step, size k+1
};

struct RateResult {
  std::string place;
  std::uint64_t horizon = 0;
  std::vector<Rational> rate_per_sequence;  // M_k(place) / k
  Rational mean_rate;
};

// Throws Error(empty_input) without sequences and Error(unknown_node) for a
// bad place name. All sequences must share one horizon.
PlaceSeries place_stats(const PetriNet& net, const std::vector<ExecutionSequence>& seqs,
                        std::string_view place);

RateResult rate(const PetriNet& net, const std::vector<ExecutionSequence>& seqs,
                std::string_view place, std::uint64_t k);

// Streaming counterpart used for enumerations too large to keep around.
// Tracks every place by default; pass an explicit subset when only a few
// matter and the run is big.
class StatsAccumulator {
 public:
  explicit StatsAccumulator(const PetriNet& net);
  StatsAccumulator(const PetriNet& net, std::vector<PlaceIndex> tracked);
  void add(const ExecutionSequence& seq);
  std::uint64_t sequences() const { return count_; }
  std::uint64_t horizon() const { return horizon_; }
  PlaceSeries series(std::string_view place) const;
  RateResult rate_of(std::string_view place) const;

 private:
  std::size_t slot(std::string_view place) const;

  const PetriNet& net_;
  std::vector<PlaceIndex> tracked_;
  std::uint64_t count_ = 0;
  std::uint64_t horizon_ = 0;
  // indexed [tracked slot][step]
  std::vector<std::vector<unsigned __int128>> sums_;
  std::vector<std::vector<TokenCount>> mins_;
  std::vector<std::vector<TokenCount>> maxs_;
  std::vector<std::vector<std::set<TokenCount>>> distinct_;
};

enum class Cmp { eq, le, ge };

// Sequence filter: either a threshold on one place (at a fixed step or at
// any step), or the depletion-recovery pattern "empties, then holds tokens
// again later".
struct Waypoint {
  enum class Kind { at_step, at_any, recovery } kind = Kind::at_any;
  std::string place;
  Cmp cmp = Cmp::eq;
  TokenCount value = 0;
  std::uint64_t step = 0;  // at_step only
};

// "bpg13=4@5", "dhap>=2", "g3p<=0@any". Throws Error(invalid_predicate).
Waypoint parse_waypoint(std::string_view text);

std::vector<ExecutionSequence> filter_waypoints(const PetriNet& net,
                                                const std::vector<ExecutionSequence>& seqs,
                                                const std::vector<Waypoint>& predicates);
bool matches_waypoints(const PetriNet& net, const ExecutionSequence& seq,
                       const std::vector<Waypoint>& predicates);

struct ReachabilityResult {
  bool reachable = false;
  std::uint64_t step = 0;             // step at which the target matched
  std::optional<ExecutionSequence> witness;  // firings up to that step
};

// Bounded reachability of a partial marking: unspecified places are
// unconstrained. A negative answer means "not reachable within k steps".
ReachabilityResult reachable(const PetriNet& net, const Marking& m0,
                             const std::vector<std::pair<std::string, TokenCount>>& target,
                             std::uint64_t k, Semantics semantics,
                             ResetMode mode = ResetMode::contention,
                             EnumerationLimits limits = {},
                             EnumerationStats* stats = nullptr);

struct BoundViolation {
  std::uint64_t sequence = 0;
  std::uint64_t step = 0;
  std::string place;
  TokenCount count = 0;
};

// Every (sequence, step, place) in steps 0..k whose count exceeds bound;
// empty result means the net is k-bounded by `bound`.
std::vector<BoundViolation> bounded(const PetriNet& net, const Marking& m0,
                                    TokenCount bound, std::uint64_t k,
                                    Semantics semantics,
                                    ResetMode mode = ResetMode::contention,
                                    EnumerationLimits limits = {},
                                    EnumerationStats* stats = nullptr);

struct DeadlockHit {
  std::uint64_t sequence = 0;
  std::uint64_t step = 0;
  Marking marking;
};

// Steps 0..k whose marking enables no transition at all.
std::vector<DeadlockHit> deadlocks(const PetriNet& net, const Marking& m0,
                                   std::uint64_t k, Semantics semantics,
                                   ResetMode mode = ResetMode::contention,
                                   EnumerationLimits limits = {},
                                   EnumerationStats* stats = nullptr);

// Adds a fresh source transition src_<place> (weight-1 arc) for every place,
// then asks whether t ever fires within k steps under interleaved semantics.
// Rejects nets that already use an src_<place> name.
bool liveness_basic(const PetriNet& net, const Marking& m0, std::string_view transition,
                    std::uint64_t k, ResetMode mode = ResetMode::contention,
                    EnumerationLimits limits = {}, EnumerationStats* stats = nullptr);

struct TInvariant {
  std::map<std::string, std::uint64_t> multiset;  // transition -> count
  // witness: interleaved sequence index and the step pair with M_j == M_i
  std::uint64_t sequence = 0;
  std::uint64_t from = 0;
  std::uint64_t to = 0;
};

// Observational T-invariants: transition multisets fired between two equal
// markings of an interleaved run, deduplicated, empty multisets dropped.
std::vector<TInvariant> t_invariants(const PetriNet& net, const Marking& m0,
                                     std::uint64_t k,
                                     ResetMode mode = ResetMode::contention,
                                     EnumerationLimits limits = {},
                                     EnumerationStats* stats = nullptr);

// Observational P-invariants: place subsets (1..max_subset_size) whose token
// sum never changes across any step of any interleaved run. Throws
// Error(subset_limit_exceeded) when more than subset_cap subsets would be
// needed.
std::vector<std::vector<std::string>> p_invariants(const PetriNet& net, const Marking& m0,
                                                   std::uint64_t k,
                                                   std::size_t max_subset_size,
                                                   ResetMode mode = ResetMode::contention,
                                                   EnumerationLimits limits = {},
                                                   std::uint64_t subset_cap = 1'000'000,
                                                   EnumerationStats* stats = nullptr);

}  // namespace pnet
