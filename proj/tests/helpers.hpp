#pragma once

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "pnet/core.hpp"
#include "pnet/semantics.hpp"

namespace testutil {

// Marking literal by place name; unnamed places stay 0.
inline pnet::Marking mk(const pnet::PetriNet& net,
                        std::initializer_list<std::pair<const char*, pnet::TokenCount>> vals) {
  pnet::Marking m(net.place_count());
  for (const auto& [name, count] : vals) m[net.place(name)] = count;
  return m;
}

// Firing set literal by transition name, canonically sorted.
inline pnet::FiringSet fs(const pnet::PetriNet& net,
                          std::initializer_list<const char*> names) {
  pnet::FiringSet f;
  for (const char* n : names) f.push_back(net.transition(n));
  std::sort(f.begin(), f.end());
  return f;
}

inline pnet::TokenCount at(const pnet::PetriNet& net, const pnet::Marking& m,
                           const char* place) {
  return m[net.place(place)];
}

}  // namespace testutil
