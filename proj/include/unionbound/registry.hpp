#pragma once

#include "unionbound/algorithmic_bounds.hpp"
#include "unionbound/closed_bounds.hpp"
#include "unionbound/gk.hpp"

#include <functional>
#include <optional>

namespace unionbound {

// One registered bound: canonical name, direction, double-precision
// evaluator, and the event-count cap for exhaustive searches. This table is
// the single source of truth for bound names across the tools.
struct BoundEntry {
  std::string name;
  Direction direction;
  std::function<BoundResult<double>(const MomentSummary<double>&)> evaluate;
  std::optional<int> max_events;
};

inline const std::vector<BoundEntry>& bound_registry() {
  using MS = MomentSummary<double>;
  static const std::vector<BoundEntry> entries = {
      {"bonferroni", Direction::lower, [](const MS& ms) { return bonferroni_lower(ms); }, {}},
      {"frac", Direction::lower, [](const MS& ms) { return frac_lower(ms); }, {}},
      {"max", Direction::lower, [](const MS& ms) { return max_lower(ms); }, {}},
      {"cs", Direction::lower, [](const MS& ms) { return cs_lower(ms); }, {}},
      {"ds", Direction::lower, [](const MS& ms) { return ds_lower(ms); }, {}},
      {"dc", Direction::lower, [](const MS& ms) { return dc_lower(ms); }, {}},
      {"kat", Direction::lower, [](const MS& ms) { return kat_lower(ms); }, {}},
      {"kounias-exhaustive", Direction::lower,
       [](const MS& ms) { return kounias_exhaustive(ms); }, kKouniasExhaustiveCap},
      {"kounias-stepwise", Direction::lower,
       [](const MS& ms) { return kounias_stepwise(ms); }, {}},
      {"gk", Direction::lower, [](const MS& ms) { return gk_direct(ms); }, {}},
      {"union", Direction::upper, [](const MS& ms) { return union_upper(ms); }, {}},
      {"new1", Direction::upper, [](const MS& ms) { return new1_upper(ms); }, {}},
      {"hunter-exhaustive", Direction::upper,
       [](const MS& ms) { return hunter_exhaustive(ms); }, kHunterExhaustiveCap},
      {"hunter-greedy", Direction::upper,
       [](const MS& ms) { return hunter_greedy(ms); }, {}},
  };
  return entries;
}

inline std::vector<std::string> bound_names() {
  std::vector<std::string> names;
  for (const auto& e : bound_registry()) names.push_back(e.name);
  return names;
}

inline const BoundEntry& find_bound(const std::string& name) {
  for (const auto& e : bound_registry())
    if (e.name == name) return e;
  std::string msg = "unknown bound '" + name + "'; valid names:";
  for (const auto& e : bound_registry()) msg += " " + e.name;
  throw std::invalid_argument(msg);
}

// Every bound applicable to an n-event system: caps on exhaustive searches
// drop them for larger systems rather than erroring.
inline std::vector<std::string> default_bound_names(Eigen::Index n_events) {
  std::vector<std::string> names;
  for (const auto& e : bound_registry())
    if (!e.max_events || n_events <= *e.max_events) names.push_back(e.name);
  return names;
}

}  // namespace unionbound
