#include "pnet/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

namespace pnet {

namespace {

std::int64_t narrow(__int128 v, const char* what) {
  if (v > INT64_MAX || v < INT64_MIN)
    throw Error(ErrorKind::overflow, std::string(what) + " overflows");
  return (std::int64_t)v;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
  if (den_ == 0) throw Error(ErrorKind::overflow, "zero denominator");
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

Rational Rational::operator+(const Rational& o) const {
  __int128 n = (__int128)num_ * o.den_ + (__int128)o.num_ * den_;
  __int128 d = (__int128)den_ * o.den_;
  return Rational(narrow(n, "rational sum"), narrow(d, "rational sum"));
}

Rational Rational::operator-(const Rational& o) const {
  return *this + Rational(-o.num_, o.den_);
}

Rational Rational::operator*(const Rational& o) const {
  __int128 n = (__int128)num_ * o.num_;
  __int128 d = (__int128)den_ * o.den_;
  return Rational(narrow(n, "rational product"), narrow(d, "rational product"));
}

Rational Rational::operator/(const Rational& o) const {
  if (o.num_ == 0) throw Error(ErrorKind::overflow, "division by zero");
  return *this * Rational(o.den_, o.num_);
}

bool Rational::operator<(const Rational& o) const {
  return (__int128)num_ * o.den_ < (__int128)o.num_ * den_;
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::string Rational::to_decimal(int max_digits) const {
  std::int64_t n = num_;
  std::string out;
  if (n < 0) {
    out += '-';
    n = -n;
  }
  out += std::to_string(n / den_);
  std::int64_t rem = n % den_;
  if (rem == 0) return out;
  std::string frac;
  for (int i = 0; i < max_digits && rem != 0; ++i) {
    rem *= 10;
    frac += char('0' + rem / den_);
    rem %= den_;
  }
  if (rem != 0) {  // round half up on the first dropped digit
    if ((rem * 10) / den_ >= 5) {
      int i = (int)frac.size() - 1;
      for (; i >= 0; --i) {
        if (frac[i] != '9') {
          ++frac[i];
          break;
        }
        frac[i] = '0';
      }
      if (i < 0) {
        // carried all the way into the integer part
        auto dot = out.find_last_not_of("0123456789");
        std::int64_t whole = std::stoll(out.substr(dot + 1)) + 1;
        out = out.substr(0, dot + 1) + std::to_string(whole);
      }
    }
  }
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  if (frac.empty()) return out;
  return out + "." + frac;
}

namespace {

std::uint64_t common_horizon(const std::vector<ExecutionSequence>& seqs) {
  if (seqs.empty()) throw Error(ErrorKind::empty_input, "no sequences");
  std::size_t steps = seqs.front().firings.size();
  for (const auto& s : seqs) {
    if (s.firings.size() != steps || s.markings.size() < steps)
      throw Error(ErrorKind::empty_input, "sequences disagree on horizon");
  }
  if (steps == 0) throw Error(ErrorKind::empty_input, "sequences have no steps");
  return steps - 1;
}

}  // namespace

StatsAccumulator::StatsAccumulator(const PetriNet& net) : net_(net) {
  for (PlaceIndex p = 0; p < net.place_count(); ++p) tracked_.push_back(p);
}

StatsAccumulator::StatsAccumulator(const PetriNet& net, std::vector<PlaceIndex> tracked)
    : net_(net), tracked_(std::move(tracked)) {}

void StatsAccumulator::add(const ExecutionSequence& seq) {
  std::size_t steps = seq.firings.size();  // observable markings 0..k
  if (count_ == 0) {
    horizon_ = steps == 0 ? 0 : steps - 1;
    sums_.assign(tracked_.size(), std::vector<unsigned __int128>(steps, 0));
    mins_.assign(tracked_.size(), std::vector<TokenCount>(steps, UINT64_MAX));
    maxs_.assign(tracked_.size(), std::vector<TokenCount>(steps, 0));
    distinct_.assign(tracked_.size(), std::vector<std::set<TokenCount>>(steps));
  } else if (steps != horizon_ + 1) {
    throw Error(ErrorKind::empty_input, "sequences disagree on horizon");
  }
  ++count_;
  for (std::size_t s = 0; s < steps; ++s) {
    const Marking& m = seq.markings[s];
    for (std::size_t i = 0; i < tracked_.size(); ++i) {
      TokenCount c = m[tracked_[i]];
      sums_[i][s] += c;
      mins_[i][s] = std::min(mins_[i][s], c);
      maxs_[i][s] = std::max(maxs_[i][s], c);
      distinct_[i][s].insert(c);
    }
  }
}

std::size_t StatsAccumulator::slot(std::string_view place) const {
  PlaceIndex p = net_.place(place);
  for (std::size_t i = 0; i < tracked_.size(); ++i)
    if (tracked_[i] == p) return i;
  throw Error(ErrorKind::unknown_node,
              "place '" + std::string(place) + "' is not tracked");
}

PlaceSeries StatsAccumulator::series(std::string_view place) const {
  if (count_ == 0) throw Error(ErrorKind::empty_input, "no sequences");
  std::size_t i = slot(place);
  PlaceSeries out;
  out.place = std::string(place);
  for (std::size_t s = 0; s < sums_[i].size(); ++s) {
    StepStats st;
    st.mean = Rational(narrow((__int128)sums_[i][s], "token sum"),
                       narrow((__int128)count_, "sequence count"));
    st.min = mins_[i][s];
    st.max = maxs_[i][s];
    st.distinct = distinct_[i][s];
    out.per_step.push_back(std::move(st));
  }
  return out;
}

RateResult StatsAccumulator::rate_of(std::string_view place) const {
  if (count_ == 0) throw Error(ErrorKind::empty_input, "no sequences");
  if (horizon_ == 0) throw Error(ErrorKind::empty_input, "rate needs a horizon >= 1");
  std::size_t i = slot(place);
  RateResult out;
  out.place = std::string(place);
  out.horizon = horizon_;
  // mean rate = (sum of final counts) / (count * k)
  out.mean_rate = Rational(narrow((__int128)sums_[i][horizon_], "token sum"),
                           narrow((__int128)count_ * (__int128)horizon_, "rate"));
  return out;
}

PlaceSeries place_stats(const PetriNet& net, const std::vector<ExecutionSequence>& seqs,
                        std::string_view place) {
  common_horizon(seqs);
  StatsAccumulator acc(net);
  for (const auto& s : seqs) acc.add(s);
  return acc.series(place);
}

RateResult rate(const PetriNet& net, const std::vector<ExecutionSequence>& seqs,
                std::string_view place, std::uint64_t k) {
  std::uint64_t horizon = common_horizon(seqs);
  if (k == 0 || k != horizon)
    throw Error(ErrorKind::empty_input, "rate horizon must match the sequences");
  PlaceIndex p = net.place(place);
  RateResult out;
  out.place = std::string(place);
  out.horizon = k;
  Rational sum;
  for (const auto& s : seqs) {
    Rational r(narrow((__int128)s.markings[k][p], "count"), (std::int64_t)k);
    out.rate_per_sequence.push_back(r);
    sum = sum + r;
  }
  out.mean_rate = sum / Rational((std::int64_t)seqs.size());
  return out;
}

Waypoint parse_waypoint(std::string_view text) {
  Waypoint w;
  auto at = text.find('@');
  std::string_view head = text.substr(0, at);

  std::size_t op_pos = head.find_first_of("<>=");
  if (op_pos == std::string_view::npos || op_pos == 0)
    throw Error(ErrorKind::invalid_predicate, "expected place=<n>, place<=<n> or place>=<n>");
  w.place = std::string(head.substr(0, op_pos));
  std::string_view rest = head.substr(op_pos);
  if (rest.starts_with("=")) {
    w.cmp = Cmp::eq;
    rest.remove_prefix(1);
  } else if (rest.starts_with("<=")) {
    w.cmp = Cmp::le;
    rest.remove_prefix(2);
  } else if (rest.starts_with(">=")) {
    w.cmp = Cmp::ge;
    rest.remove_prefix(2);
  } else {
    throw Error(ErrorKind::invalid_predicate,
                "comparator must be =, <= or >= in '" + std::string(text) + "'");
  }
  auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), w.value);
  if (ec != std::errc() || ptr != rest.data() + rest.size())
    throw Error(ErrorKind::invalid_predicate, "bad value in '" + std::string(text) + "'");

  if (at == std::string_view::npos) {
    w.kind = Waypoint::Kind::at_any;
  } else {
    std::string_view step = text.substr(at + 1);
    if (step == "any") {
      w.kind = Waypoint::Kind::at_any;
    } else {
      auto [p2, e2] = std::from_chars(step.data(), step.data() + step.size(), w.step);
      if (e2 != std::errc() || p2 != step.data() + step.size())
        throw Error(ErrorKind::invalid_predicate,
                    "bad step in '" + std::string(text) + "'");
      w.kind = Waypoint::Kind::at_step;
    }
  }
  return w;
}

namespace {

bool compare(TokenCount have, Cmp cmp, TokenCount want) {
  switch (cmp) {
    case Cmp::eq: return have == want;
    case Cmp::le: return have <= want;
    case Cmp::ge: return have >= want;
  }
  return false;
}

}  // namespace

bool matches_waypoints(const PetriNet& net, const ExecutionSequence& seq,
                       const std::vector<Waypoint>& predicates) {
  std::size_t steps = seq.firings.size();  // observable steps 0..k
  for (const auto& w : predicates) {
    PlaceIndex p = net.place(w.place);
    bool ok = false;
    switch (w.kind) {
      case Waypoint::Kind::at_step:
        ok = w.step < steps && compare(seq.markings[w.step][p], w.cmp, w.value);
        break;
      case Waypoint::Kind::at_any:
        for (std::size_t s = 0; s < steps && !ok; ++s)
          ok = compare(seq.markings[s][p], w.cmp, w.value);
        break;
      case Waypoint::Kind::recovery:
        for (std::size_t i = 0; i < steps && !ok; ++i) {
          if (seq.markings[i][p] != 0) continue;
          for (std::size_t j = i + 1; j < steps && !ok; ++j)
            ok = seq.markings[j][p] > 0;
        }
        break;
    }
    if (!ok) return false;
  }
  return true;
}

std::vector<ExecutionSequence> filter_waypoints(const PetriNet& net,
                                                const std::vector<ExecutionSequence>& seqs,
                                                const std::vector<Waypoint>& predicates) {
  std::vector<ExecutionSequence> out;
  for (const auto& s : seqs)
    if (matches_waypoints(net, s, predicates)) out.push_back(s);
  return out;
}

ReachabilityResult reachable(const PetriNet& net, const Marking& m0,
                             const std::vector<std::pair<std::string, TokenCount>>& target,
                             std::uint64_t k, Semantics semantics, ResetMode mode,
                             EnumerationLimits limits, EnumerationStats* stats) {
  std::vector<std::pair<PlaceIndex, TokenCount>> goal;
  for (const auto& [name, count] : target) goal.emplace_back(net.place(name), count);

  auto hits = [&](const Marking& m) {
    return std::all_of(goal.begin(), goal.end(),
                       [&](const auto& g) { return m[g.first] == g.second; });
  };

  ReachabilityResult result;
  auto st = for_each_sequence(net, m0, k, semantics, mode, limits,
                    [&](const ExecutionSequence& seq) {
                      for (std::size_t s = 0; s + 1 < seq.markings.size(); ++s) {
                        if (!hits(seq.markings[s])) continue;
                        result.reachable = true;
                        result.step = s;
                        ExecutionSequence witness;
                        witness.firings.assign(seq.firings.begin(),
                                               seq.firings.begin() + s);
                        witness.markings.assign(seq.markings.begin(),
                                                seq.markings.begin() + s + 1);
                        result.witness = std::move(witness);
                        return false;  // stop enumerating
                      }
                      return true;
                    });
  if (stats) *stats = st;
  return result;
}

std::vector<BoundViolation> bounded(const PetriNet& net, const Marking& m0,
                                    TokenCount bound, std::uint64_t k,
                                    Semantics semantics, ResetMode mode,
                                    EnumerationLimits limits, EnumerationStats* stats) {
  std::vector<BoundViolation> out;
  std::uint64_t index = 0;
  auto st = for_each_sequence(net, m0, k, semantics, mode, limits,
                    [&](const ExecutionSequence& seq) {
                      for (std::size_t s = 0; s < seq.firings.size(); ++s)
                        for (PlaceIndex p = 0; p < net.place_count(); ++p)
                          if (seq.markings[s][p] > bound)
                            out.push_back({index, s, net.place_name(p),
                                           seq.markings[s][p]});
                      ++index;
                      return true;
                    });
  if (stats) *stats = st;
  return out;
}

std::vector<DeadlockHit> deadlocks(const PetriNet& net, const Marking& m0,
                                   std::uint64_t k, Semantics semantics, ResetMode mode,
                                   EnumerationLimits limits, EnumerationStats* stats) {
  std::vector<DeadlockHit> out;
  std::uint64_t index = 0;
  auto st = for_each_sequence(net, m0, k, semantics, mode, limits,
                    [&](const ExecutionSequence& seq) {
                      for (std::size_t s = 0; s < seq.firings.size(); ++s)
                        if (enabled_transitions(net, seq.markings[s]).empty())
                          out.push_back({index, s, seq.markings[s]});
                      ++index;
                      return true;
                    });
  if (stats) *stats = st;
  return out;
}

bool liveness_basic(const PetriNet& net, const Marking& m0, std::string_view transition,
                    std::uint64_t k, ResetMode mode, EnumerationLimits limits,
                    EnumerationStats* stats) {
  TransIndex subject = net.transition(transition);

  NetBuilder b;
  for (PlaceIndex p = 0; p < net.place_count(); ++p) {
    const std::string& name = net.place_name(p);
    std::string src = "src_" + name;
    if (net.find_transition(src) || net.find_place(src))
      throw Error(ErrorKind::name_clash,
                  "net already uses the reserved name '" + src + "'");
    b.place(name, m0[p]);
    b.transition(src);
    b.output_arc(src, name);
  }
  for (TransIndex t = 0; t < net.transition_count(); ++t) {
    b.transition(net.transition_name(t));
    for (const auto& arc : net.inputs(t)) {
      const std::string& pn = net.place_name(arc.place);
      const std::string& tn = net.transition_name(t);
      switch (arc.type) {
        case ArcType::normal: b.input_arc(pn, tn, arc.weight); break;
        case ArcType::reset: b.reset_arc(pn, tn); break;
        case ArcType::inhibitor: b.inhibitor_arc(pn, tn); break;
        case ArcType::read: b.read_arc(pn, tn, arc.weight); break;
      }
    }
    for (const auto& arc : net.outputs(t))
      b.output_arc(net.transition_name(t), net.place_name(arc.place), arc.weight);
  }
  auto [extended, em0] = b.build_or_throw();
  TransIndex target = extended.transition(net.transition_name(subject));

  bool fired = false;
  auto st = for_each_sequence(extended, em0, k, Semantics::interleaved, mode, limits,
                    [&](const ExecutionSequence& seq) {
                      for (const auto& f : seq.firings) {
                        if (std::binary_search(f.begin(), f.end(), target)) {
                          fired = true;
                          return false;
                        }
                      }
                      return true;
                    });
  if (stats) *stats = st;
  return fired;
}

std::vector<TInvariant> t_invariants(const PetriNet& net, const Marking& m0,
                                     std::uint64_t k, ResetMode mode,
                                     EnumerationLimits limits, EnumerationStats* stats) {
  std::map<std::map<std::string, std::uint64_t>, TInvariant> found;
  std::uint64_t index = 0;
  auto st = for_each_sequence(
      net, m0, k, Semantics::interleaved, mode, limits,
      [&](const ExecutionSequence& seq) {
        std::size_t steps = seq.firings.size();  // compare markings 0..k
        for (std::size_t i = 0; i < steps; ++i) {
          for (std::size_t j = i + 1; j < steps; ++j) {
            if (seq.markings[j] != seq.markings[i]) continue;
            std::map<std::string, std::uint64_t> multiset;
            for (std::size_t s = i; s < j; ++s)
              for (TransIndex t : seq.firings[s]) ++multiset[net.transition_name(t)];
            if (multiset.empty()) continue;
            if (!found.count(multiset))
              found.emplace(multiset, TInvariant{multiset, index, i, j});
          }
        }
        ++index;
        return true;
      });
  if (stats) *stats = st;

  std::vector<TInvariant> out;
  for (auto& [key, inv] : found) out.push_back(std::move(inv));
  return out;
}

std::vector<std::vector<std::string>> p_invariants(const PetriNet& net, const Marking& m0,
                                                   std::uint64_t k,
                                                   std::size_t max_subset_size,
                                                   ResetMode mode,
                                                   EnumerationLimits limits,
                                                   std::uint64_t subset_cap,
                                                   EnumerationStats* stats) {
  std::size_t n = net.place_count();
  max_subset_size = std::min(max_subset_size, n);

  // Enumerate candidate subsets up front; bail out when the count explodes.
  std::vector<std::vector<PlaceIndex>> candidates;
  std::vector<PlaceIndex> current;
  auto gen = [&](auto&& self, PlaceIndex start) -> void {
    if (!current.empty()) {
      if (candidates.size() >= subset_cap)
        throw Error(ErrorKind::subset_limit_exceeded,
                    "more than " + std::to_string(subset_cap) + " place subsets");
      candidates.push_back(current);
    }
    if (current.size() == max_subset_size) return;
    for (PlaceIndex p = start; p < n; ++p) {
      current.push_back(p);
      self(self, p + 1);
      current.pop_back();
    }
  };
  gen(gen, 0);

  std::vector<bool> alive(candidates.size(), true);
  auto st = for_each_sequence(
      net, m0, k, Semantics::interleaved, mode, limits,
      [&](const ExecutionSequence& seq) {
        std::size_t steps = seq.firings.size();
        for (std::size_t c = 0; c < candidates.size(); ++c) {
          if (!alive[c]) continue;
          unsigned __int128 base = 0;
          for (PlaceIndex p : candidates[c]) base += seq.markings[0][p];
          for (std::size_t s = 1; s < steps; ++s) {
            unsigned __int128 sum = 0;
            for (PlaceIndex p : candidates[c]) sum += seq.markings[s][p];
            if (sum != base) {
              alive[c] = false;
              break;
            }
          }
        }
        return true;
      });
  if (stats) *stats = st;

  std::vector<std::vector<std::string>> out;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (!alive[c]) continue;
    std::vector<std::string> names;
    for (PlaceIndex p : candidates[c]) names.push_back(net.place_name(p));
    out.push_back(std::move(names));
  }
  return out;
}

}  // namespace pnet
