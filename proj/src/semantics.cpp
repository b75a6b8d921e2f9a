#include "pnet/semantics.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <sstream>
#include <unordered_map>

namespace pnet {

namespace {

TokenCount checked_add(TokenCount a, TokenCount b) {
  TokenCount r;
  if (__builtin_add_overflow(a, b, &r))
    throw Error(ErrorKind::overflow, "token count overflow");
  return r;
}

}  // namespace

const char* semantics_name(Semantics s) {
  switch (s) {
    case Semantics::set: return "set";
    case Semantics::maximal: return "max";
    case Semantics::interleaved: return "interleaved";
  }
  return "?";
}

const char* reset_mode_name(ResetMode m) {
  return m == ResetMode::contention ? "contention" : "standard";
}

std::optional<Semantics> parse_semantics(std::string_view text) {
  if (text == "set") return Semantics::set;
  if (text == "max" || text == "maximal") return Semantics::maximal;
  if (text == "interleaved") return Semantics::interleaved;
  return std::nullopt;
}

std::optional<ResetMode> parse_reset_mode(std::string_view text) {
  if (text == "contention") return ResetMode::contention;
  if (text == "standard") return ResetMode::standard;
  return std::nullopt;
}

bool is_enabled(const PetriNet& net, const Marking& m, TransIndex t) {
  for (const auto& arc : net.inputs(t)) {
    switch (arc.type) {
      case ArcType::normal:
        if (m[arc.place] < arc.weight) return false;
        break;
      case ArcType::inhibitor:
        if (m[arc.place] != 0) return false;
        break;
      case ArcType::read:
        if (m[arc.place] < arc.weight) return false;
        break;
      case ArcType::reset:
        break;  // no enabling condition either way
    }
  }
  return true;
}

std::vector<TransIndex> enabled_transitions(const PetriNet& net, const Marking& m) {
  std::vector<TransIndex> out;
  for (TransIndex t = 0; t < net.transition_count(); ++t)
    if (is_enabled(net, m, t)) out.push_back(t);
  return out;
}

std::vector<TokenCount> effective_consumption(const PetriNet& net, const Marking& m,
                                              const FiringSet& f, ResetMode mode) {
  std::vector<TokenCount> used(net.place_count(), 0);
  for (TransIndex t : f) {
    for (const auto& arc : net.inputs(t)) {
      if (arc.type == ArcType::normal)
        used[arc.place] = checked_add(used[arc.place], arc.weight);
      else if (arc.type == ArcType::reset && mode == ResetMode::contention)
        used[arc.place] = checked_add(used[arc.place], m[arc.place]);
    }
  }
  return used;
}

bool is_admissible(const PetriNet& net, const Marking& m, const FiringSet& f,
                   ResetMode mode) {
  for (TransIndex t : f)
    if (!is_enabled(net, m, t)) return false;
  auto used = effective_consumption(net, m, f, mode);
  for (PlaceIndex p = 0; p < net.place_count(); ++p)
    if (used[p] > m[p]) return false;
  return true;
}

Marking fire(const PetriNet& net, const Marking& m, const FiringSet& f, ResetMode mode) {
  if (!is_admissible(net, m, f, mode))
    throw Error(ErrorKind::not_admissible,
                "firing set " + firing_set_names(net, f) + " is not admissible");

  std::vector<TokenCount> produced(net.place_count(), 0);
  std::vector<bool> reset_hit(net.place_count(), false);
  for (TransIndex t : f) {
    for (const auto& arc : net.outputs(t))
      produced[arc.place] = checked_add(produced[arc.place], arc.weight);
    for (const auto& arc : net.inputs(t))
      if (arc.type == ArcType::reset) reset_hit[arc.place] = true;
  }
  auto used = effective_consumption(net, m, f, mode);

  Marking out(net.place_count());
  for (PlaceIndex p = 0; p < net.place_count(); ++p) {
    // A reset leaves only what this step produced; admissibility guarantees
    // used <= m everywhere else.
    out[p] = reset_hit[p] ? produced[p] : checked_add(m[p] - used[p], produced[p]);
  }
  return out;
}

namespace {

// The per-arc excuse behind maximal semantics: an enabled transition may
// stay out of the set only if one of its consuming arcs no longer fits once
// the set's own consumption is taken. Reset arcs count only under
// contention and only while the place is non-empty.
bool could_not_have(const PetriNet& net, const Marking& m,
                    const std::vector<TokenCount>& used, TransIndex t, ResetMode mode) {
  for (const auto& arc : net.inputs(t)) {
    TokenCount q;
    if (arc.type == ArcType::normal) {
      q = arc.weight;
    } else if (arc.type == ArcType::reset && mode == ResetMode::contention &&
               m[arc.place] > 0) {
      q = m[arc.place];
    } else {
      continue;
    }
    if (q > m[arc.place] - used[arc.place]) return true;
  }
  return false;
}

void canonical_sort(std::vector<FiringSet>& sets) {
  std::sort(sets.begin(), sets.end(), [](const FiringSet& a, const FiringSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
}

}  // namespace

std::vector<FiringSet> firing_sets(const PetriNet& net, const Marking& m,
                                   Semantics semantics, ResetMode mode) {
  std::vector<TransIndex> en = enabled_transitions(net, m);
  std::vector<FiringSet> out;

  if (semantics == Semantics::interleaved) {
    out.push_back({});
    for (TransIndex t : en)
      if (is_admissible(net, m, {t}, mode)) out.push_back({t});
    canonical_sort(out);
    return out;
  }

  // All admissible subsets of the enabled transitions. Consumption only
  // grows when a transition is added, so a subset that overdraws some place
  // can be pruned together with all of its supersets.
  FiringSet current;
  std::vector<TokenCount> used(net.place_count(), 0);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == en.size()) {
      out.push_back(current);
      return;
    }
    self(self, i + 1);

    // Apply the transition's arcs one by one so that several arcs on the
    // same place accumulate; roll back on the first place that overdraws.
    TransIndex t = en[i];
    const auto& arcs = net.inputs(t);
    auto demand = [&](const InputArc& arc) -> TokenCount {
      if (arc.type == ArcType::normal) return arc.weight;
      if (arc.type == ArcType::reset && mode == ResetMode::contention)
        return m[arc.place];
      return 0;
    };
    std::size_t applied = 0;
    bool fits = true;
    for (; applied < arcs.size(); ++applied) {
      TokenCount q = demand(arcs[applied]);
      if (checked_add(used[arcs[applied].place], q) > m[arcs[applied].place]) {
        fits = false;
        break;
      }
      used[arcs[applied].place] += q;
    }
    if (fits) {
      current.push_back(t);
      self(self, i + 1);
      current.pop_back();
    }
    while (applied-- > 0) used[arcs[applied].place] -= demand(arcs[applied]);
  };
  rec(rec, 0);

  if (semantics == Semantics::maximal) {
    std::vector<FiringSet> keep;
    for (auto& f : out) {
      auto taken = effective_consumption(net, m, f, mode);
      bool maximal = true;
      for (TransIndex t : en) {
        if (std::binary_search(f.begin(), f.end(), t)) continue;
        if (!could_not_have(net, m, taken, t, mode)) {
          maximal = false;
          break;
        }
      }
      if (maximal) keep.push_back(std::move(f));
    }
    out = std::move(keep);
  }

  canonical_sort(out);
  return out;
}

namespace {

struct MarkingHash {
  std::size_t operator()(const std::vector<TokenCount>& v) const {
    std::size_t h = 0x9e3779b97f4a7c15ull ^ v.size();
    for (TokenCount c : v) {
      h ^= c + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

struct Walker {
  const PetriNet& net;
  Semantics semantics;
  ResetMode mode;
  EnumerationLimits limits;
  const std::function<bool(const ExecutionSequence&)>& visit;

  EnumerationStats stats;
  bool stopped = false;
  ExecutionSequence buf;

  // Markings recur across branches, so choices and successor markings are
  // computed once per distinct marking.
  using Children = std::vector<std::pair<FiringSet, Marking>>;
  std::unordered_map<std::vector<TokenCount>, std::shared_ptr<const Children>, MarkingHash>
      memo;

  const Children& children_of(const Marking& m) {
    auto it = memo.find(m.counts());
    if (it != memo.end()) return *it->second;
    auto kids = std::make_shared<Children>();
    for (auto& f : firing_sets(net, m, semantics, mode)) {
      Marking next = fire(net, m, f, mode);
      kids->emplace_back(std::move(f), std::move(next));
    }
    return *memo.emplace(m.counts(), std::move(kids)).first->second;
  }

  void walk(std::uint64_t step, std::uint64_t k) {
    if (stopped) return;
    if (++stats.states_visited > limits.max_states) {
      stats.truncated = true;
      stats.truncated_by = "states";
      stopped = true;
      return;
    }
    if (step > k) {
      if (stats.sequence_count >= limits.max_sequences) {
        stats.truncated = true;
        stats.truncated_by = "sequences";
        stopped = true;
        return;
      }
      ++stats.sequence_count;
      if (!visit(buf)) {
        stats.truncated = true;
        stats.truncated_by = "visitor";
        stopped = true;
      }
      return;
    }
    for (const auto& [f, next] : children_of(buf.markings.back())) {
      buf.firings.push_back(f);
      buf.markings.push_back(next);
      walk(step + 1, k);
      buf.firings.pop_back();
      buf.markings.pop_back();
      if (stopped) return;
    }
  }
};

}  // namespace

EnumerationStats for_each_sequence(const PetriNet& net, const Marking& m0,
                                   std::uint64_t k, Semantics semantics, ResetMode mode,
                                   EnumerationLimits limits,
                                   const std::function<bool(const ExecutionSequence&)>& visit) {
  Walker w{net, semantics, mode, limits, visit, {}, false, {}, {}};
  w.buf.markings.push_back(m0);
  w.walk(0, k);
  return w.stats;
}

EnumerationResult enumerate_sequences(const PetriNet& net, const Marking& m0,
                                      std::uint64_t k, Semantics semantics,
                                      ResetMode mode, EnumerationLimits limits) {
  EnumerationResult result;
  result.stats = for_each_sequence(net, m0, k, semantics, mode, limits,
                                   [&](const ExecutionSequence& seq) {
                                     result.sequences.push_back(seq);
                                     return true;
                                   });
  return result;
}

namespace {

// Comparison key per the answer-set view: firings T0..Tk plus markings
// M0..Mk. The trailing marking of a native sequence has no holds atoms, so
// it does not participate.
std::pair<std::vector<FiringSet>, std::vector<Marking>> correspondence_key(
    const ExecutionSequence& seq) {
  std::vector<Marking> observed(seq.markings.begin(),
                                seq.markings.begin() +
                                    std::min(seq.markings.size(), seq.firings.size()));
  return {seq.firings, std::move(observed)};
}

}  // namespace

CorrespondenceReport cross_validate(const std::vector<ExecutionSequence>& native,
                                    const std::vector<ExecutionSequence>& external) {
  std::map<std::pair<std::vector<FiringSet>, std::vector<Marking>>, std::vector<std::size_t>>
      pool;
  for (std::size_t i = 0; i < native.size(); ++i)
    pool[correspondence_key(native[i])].push_back(i);

  CorrespondenceReport report;
  for (std::size_t j = 0; j < external.size(); ++j) {
    auto it = pool.find(correspondence_key(external[j]));
    if (it == pool.end() || it->second.empty()) {
      report.unmatched_external.push_back(j);
      continue;
    }
    it->second.pop_back();
  }
  for (const auto& [key, left] : pool)
    for (std::size_t i : left) report.unmatched_native.push_back(i);
  std::sort(report.unmatched_native.begin(), report.unmatched_native.end());
  report.match = report.unmatched_native.empty() && report.unmatched_external.empty();
  return report;
}

std::string firing_set_names(const PetriNet& net, const FiringSet& f) {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) out << ',';
    out << net.transition_name(f[i]);
  }
  out << '}';
  return out.str();
}

}  // namespace pnet
