#include "pnet/core.hpp"

#include <algorithm>
#include <cctype>
#include <tuple>
#include <set>
#include <sstream>

namespace pnet {

const char* arc_type_name(ArcType type) {
  switch (type) {
    case ArcType::normal: return "normal";
    case ArcType::reset: return "reset";
    case ArcType::inhibitor: return "inhibitor";
    case ArcType::read: return "read";
  }
  return "?";
}

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::unknown_node: return "UnknownNode";
    case ErrorKind::duplicate_arc: return "DuplicateArc";
    case ErrorKind::zero_weight: return "ZeroWeight";
    case ErrorKind::name_clash: return "NameClash";
    case ErrorKind::marking_missing_place: return "MarkingMissingPlace";
    case ErrorKind::invalid_name: return "InvalidName";
    case ErrorKind::not_admissible: return "NotAdmissible";
    case ErrorKind::overflow: return "Overflow";
    case ErrorKind::variant_too_low: return "VariantTooLow";
    case ErrorKind::limit_exceeded: return "LimitExceeded";
    case ErrorKind::empty_input: return "EmptyInput";
    case ErrorKind::invalid_predicate: return "InvalidPredicate";
    case ErrorKind::subset_limit_exceeded: return "SubsetLimitExceeded";
    case ErrorKind::parse_error: return "ParseError";
  }
  return "?";
}

bool is_valid_name(std::string_view name) {
  if (name.empty() || !(name.front() >= 'a' && name.front() <= 'z')) return false;
  return std::all_of(name.begin(), name.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_';
  });
}

std::optional<PlaceIndex> PetriNet::find_place(std::string_view name) const {
  auto it = std::lower_bound(places_.begin(), places_.end(), name);
  if (it == places_.end() || *it != name) return std::nullopt;
  return static_cast<PlaceIndex>(it - places_.begin());
}

std::optional<TransIndex> PetriNet::find_transition(std::string_view name) const {
  auto it = std::lower_bound(transitions_.begin(), transitions_.end(), name);
  if (it == transitions_.end() || *it != name) return std::nullopt;
  return static_cast<TransIndex>(it - transitions_.begin());
}

PlaceIndex PetriNet::place(std::string_view name) const {
  if (auto p = find_place(name)) return *p;
  throw Error(ErrorKind::unknown_node, "unknown place: " + std::string(name));
}

TransIndex PetriNet::transition(std::string_view name) const {
  if (auto t = find_transition(name)) return *t;
  throw Error(ErrorKind::unknown_node, "unknown transition: " + std::string(name));
}

NetBuilder& NetBuilder::place(std::string name, TokenCount tokens) {
  places_.push_back({std::move(name), tokens});
  return *this;
}

NetBuilder& NetBuilder::transition(std::string name) {
  transitions_.push_back(std::move(name));
  return *this;
}

NetBuilder& NetBuilder::input_arc(std::string place, std::string trans, TokenCount weight) {
  arcs_.push_back({std::move(place), std::move(trans), ArcType::normal, weight, true});
  return *this;
}

NetBuilder& NetBuilder::output_arc(std::string trans, std::string place, TokenCount weight) {
  arcs_.push_back({std::move(place), std::move(trans), ArcType::normal, weight, false});
  return *this;
}

NetBuilder& NetBuilder::reset_arc(std::string place, std::string trans) {
  arcs_.push_back({std::move(place), std::move(trans), ArcType::reset, 0, true});
  return *this;
}

NetBuilder& NetBuilder::inhibitor_arc(std::string place, std::string trans) {
  arcs_.push_back({std::move(place), std::move(trans), ArcType::inhibitor, 0, true});
  return *this;
}

NetBuilder& NetBuilder::read_arc(std::string place, std::string trans, TokenCount weight) {
  arcs_.push_back({std::move(place), std::move(trans), ArcType::read, weight, true});
  return *this;
}

std::optional<std::pair<PetriNet, Marking>> NetBuilder::build(
    std::vector<ValidationIssue>& issues) const {
  auto complain = [&issues](ErrorKind kind, std::string message) {
    issues.push_back({kind, std::move(message)});
  };

  std::set<std::string> place_names;
  std::set<std::string> trans_names;
  for (const auto& p : places_) {
    if (!is_valid_name(p.name))
      complain(ErrorKind::invalid_name, "invalid place name '" + p.name + "'");
    else if (!place_names.insert(p.name).second)
      complain(ErrorKind::name_clash, "place '" + p.name + "' declared twice");
  }
  for (const auto& t : transitions_) {
    if (!is_valid_name(t))
      complain(ErrorKind::invalid_name, "invalid transition name '" + t + "'");
    else if (!trans_names.insert(t).second)
      complain(ErrorKind::name_clash, "transition '" + t + "' declared twice");
    else if (place_names.count(t))
      complain(ErrorKind::name_clash, "'" + t + "' is both a place and a transition");
  }

  std::set<std::tuple<std::string, std::string, ArcType, bool>> seen_arcs;
  for (const auto& a : arcs_) {
    if (!place_names.count(a.place))
      complain(ErrorKind::unknown_node, "arc references unknown place '" + a.place + "'");
    if (!trans_names.count(a.trans))
      complain(ErrorKind::unknown_node, "arc references unknown transition '" + a.trans + "'");
    if ((a.type == ArcType::normal || a.type == ArcType::read) && a.weight == 0) {
      complain(ErrorKind::zero_weight,
               std::string(arc_type_name(a.type)) + " arc " +
                   (a.into_transition ? a.place + " -> " + a.trans
                                      : a.trans + " -> " + a.place) +
                   " has weight 0");
    }
    if (!seen_arcs.insert({a.place, a.trans, a.type, a.into_transition}).second) {
      complain(ErrorKind::duplicate_arc,
               std::string("duplicate ") + arc_type_name(a.type) + " arc " +
                   (a.into_transition ? a.place + " -> " + a.trans
                                      : a.trans + " -> " + a.place));
    }
  }

  if (!issues.empty()) return std::nullopt;

  PetriNet net;
  net.places_.assign(place_names.begin(), place_names.end());
  net.transitions_.assign(trans_names.begin(), trans_names.end());
  net.inputs_.resize(net.transitions_.size());
  net.outputs_.resize(net.transitions_.size());

  Marking m0(net.places_.size());
  for (const auto& p : places_) m0[*net.find_place(p.name)] = p.tokens;

  for (const auto& a : arcs_) {
    PlaceIndex p = *net.find_place(a.place);
    TransIndex t = *net.find_transition(a.trans);
    if (a.into_transition) {
      TokenCount w = (a.type == ArcType::normal || a.type == ArcType::read) ? a.weight : 0;
      net.inputs_[t].push_back({p, a.type, w});
      switch (a.type) {
        case ArcType::reset: ++net.reset_arcs_; break;
        case ArcType::inhibitor: ++net.inhibitor_arcs_; break;
        case ArcType::read: ++net.read_arcs_; break;
        case ArcType::normal: break;
      }
    } else {
      net.outputs_[t].push_back({p, a.weight});
    }
  }

  // Canonical arc order inside each transition: by place, normal first.
  auto arc_rank = [](ArcType t) {
    switch (t) {
      case ArcType::normal: return 0;
      case ArcType::reset: return 1;
      case ArcType::inhibitor: return 2;
      case ArcType::read: return 3;
    }
    return 4;
  };
  for (auto& in : net.inputs_) {
    std::sort(in.begin(), in.end(), [&](const InputArc& a, const InputArc& b) {
      if (a.place != b.place) return a.place < b.place;
      return arc_rank(a.type) < arc_rank(b.type);
    });
  }
  for (auto& out : net.outputs_) {
    std::sort(out.begin(), out.end(),
              [](const OutputArc& a, const OutputArc& b) { return a.place < b.place; });
  }

  return std::make_pair(std::move(net), std::move(m0));
}

std::pair<PetriNet, Marking> NetBuilder::build_or_throw() const {
  std::vector<ValidationIssue> issues;
  auto built = build(issues);
  if (built) return std::move(*built);
  std::ostringstream msg;
  msg << "net validation failed:";
  for (const auto& issue : issues)
    msg << "\n  [" << error_kind_name(issue.kind) << "] " << issue.message;
  throw Error(issues.front().kind, msg.str());
}

std::vector<ValidationIssue> validate(const PetriNet& net, const Marking& m0) {
  std::vector<ValidationIssue> issues;
  if (m0.size() != net.place_count()) {
    issues.push_back({ErrorKind::marking_missing_place,
                      "marking covers " + std::to_string(m0.size()) + " places, net has " +
                          std::to_string(net.place_count())});
  }
  // Structural invariants are enforced at construction; re-verify the
  // cheap ones so a round-tripped net can be spot-checked.
  for (TransIndex t = 0; t < net.transition_count(); ++t) {
    for (const auto& arc : net.inputs(t)) {
      if ((arc.type == ArcType::normal || arc.type == ArcType::read) && arc.weight == 0)
        issues.push_back({ErrorKind::zero_weight, "zero-weight input arc on " +
                                                      net.transition_name(t)});
    }
    for (const auto& arc : net.outputs(t)) {
      if (arc.weight == 0)
        issues.push_back({ErrorKind::zero_weight, "zero-weight output arc on " +
                                                      net.transition_name(t)});
    }
  }
  return issues;
}

}  // namespace pnet
