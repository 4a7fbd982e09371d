#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "adsp/model.hpp"
#include "adsp/validate.hpp"

namespace adsp::testing {

/// Violation kinds found by walking every tick. Shares no code with
/// validate() beyond the instance accessors.
inline std::set<ViolationKind> tick_oracle_kinds(const Instance& inst, const Schedule& s, RelaxFlags relax = {}) {
  using K = ViolationKind;
  std::set<K> kinds;
  struct Row {
    std::size_t task;
    TimeTick start, end;
    std::set<std::size_t> techs;
  };
  std::map<std::size_t, Row> rows;
  TimeTick last = 0;
  for (const auto& [id, e] : s.entries()) {
    auto i = inst.task_index(id);
    if (!i) {
      kinds.insert(K::UnknownReference);
      continue;
    }
    Row r{*i, e.start, e.start + inst.tasks()[*i].duration, {}};
    for (const auto& t : e.techs) {
      auto j = inst.tech_index(t);
      if (!j)
        kinds.insert(K::UnknownReference);
      else
        r.techs.insert(*j);
    }
    last = std::max(last, r.end);
    rows.emplace(*i, std::move(r));
  }
  if (rows.size() < inst.num_tasks()) kinds.insert(K::Unscheduled);

  for (const auto& [i, r] : rows) {
    const auto& t = inst.tasks()[i];
    if (static_cast<int>(r.techs.size()) != t.crew) kinds.insert(K::CrewSize);
    for (const auto& p : t.precedences) {
      auto it = rows.find(*inst.task_index(p));
      if (it != rows.end() && it->second.end > r.start) kinds.insert(K::PrecedenceBroken);
    }
    if (!relax.dropRequirements)
      for (const auto& q : t.requirements) {
        int have = 0;
        for (auto j : r.techs) {
          const auto& sk = inst.technicians()[j].skills;
          have += std::find(sk.begin(), sk.end(), q.skill) != sk.end() ? 1 : 0;
        }
        if (have < q.count) kinds.insert(K::RequirementUnmet);
      }
  }

  for (TimeTick t = 0; t < last; ++t) {
    std::map<std::size_t, int> tech_load;
    std::map<std::string, int> loc_load;
    MassKg af = 0, lr = 0;
    for (const auto& [i, r] : rows) {
      const auto& task = inst.tasks()[i];
      if (r.start <= t) {
        af += inst.signed_mass(i, Axis::AF);
        lr += inst.signed_mass(i, Axis::LR);
      }
      if (!(r.start <= t && t < r.end)) continue;
      for (auto j : r.techs) {
        ++tech_load[j];
        for (const auto& w : inst.technicians()[j].unavailable)
          if (w.start <= t && t < w.end) kinds.insert(K::TechUnavailable);
      }
      if (task.location) loc_load[*task.location] += task.crew;
    }
    for (const auto& [j, n] : tech_load)
      if (n > 1) kinds.insert(K::TechOverlap);
    if (!relax.dropCapacity)
      for (const auto& l : inst.locations())
        if (l.capacity && loc_load[l.id] > *l.capacity) kinds.insert(K::CapacityExceeded);
    if (!relax.dropBalance) {
      if (af > inst.balance_af() || af < -inst.balance_af()) kinds.insert(K::BalanceAF);
      if (lr > inst.balance_lr() || lr < -inst.balance_lr()) kinds.insert(K::BalanceLR);
    }
  }
  return kinds;
}

}  // namespace adsp::testing
