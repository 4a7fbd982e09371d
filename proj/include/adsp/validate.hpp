#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "adsp/model.hpp"
#include "adsp/profile.hpp"

namespace adsp {

enum class ViolationKind {
  CrewSize,
  TechOverlap,
  TechUnavailable,
  PrecedenceBroken,
  RequirementUnmet,
  CapacityExceeded,
  BalanceAF,
  BalanceLR,
  UnknownReference,
  Unscheduled,
};

inline const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::CrewSize: return "CrewSize";
    case ViolationKind::TechOverlap: return "TechOverlap";
    case ViolationKind::TechUnavailable: return "TechUnavailable";
    case ViolationKind::PrecedenceBroken: return "PrecedenceBroken";
    case ViolationKind::RequirementUnmet: return "RequirementUnmet";
    case ViolationKind::CapacityExceeded: return "CapacityExceeded";
    case ViolationKind::BalanceAF: return "BalanceAF";
    case ViolationKind::BalanceLR: return "BalanceLR";
    case ViolationKind::UnknownReference: return "UnknownReference";
    case ViolationKind::Unscheduled: return "Unscheduled";
  }
  return "?";
}

struct Violation {
  ViolationKind kind;
  std::string subject;  // task, technician or location id
  std::optional<TimeTick> time;
  std::string detail;
};

struct ViolationReport {
  static constexpr std::size_t kMaxViolations = 10000;

  std::vector<Violation> violations;
  bool truncated = false;

  bool feasible() const { return violations.empty(); }

  std::set<ViolationKind> kinds() const {
    std::set<ViolationKind> out;
    for (const auto& v : violations) out.insert(v.kind);
    return out;
  }

  bool has(ViolationKind k) const {
    return std::any_of(violations.begin(), violations.end(), [k](const Violation& v) { return v.kind == k; });
  }

  void add(ViolationKind kind, std::string subject, std::optional<TimeTick> time, std::string detail) {
    if (violations.size() >= kMaxViolations) {
      truncated = true;
      return;
    }
    violations.push_back(Violation{kind, std::move(subject), time, std::move(detail)});
  }
};

/// Latest completion time over scheduled tasks; 0 for an empty schedule.
inline TimeTick makespan(const Schedule& schedule, const Instance& inst) {
  TimeTick ms = 0;
  for (const auto& [task, e] : schedule.entries()) {
    auto i = inst.task_index(task);
    if (!i) throw UnknownReference("schedule references unknown task '" + task + "'");
    ms = std::max(ms, e.start + inst.tasks()[*i].duration);
  }
  return ms;
}

/// Sum of pulse(start, end, crew) over scheduled tasks at a location.
inline Profile occupancy_profile(const Instance& inst, const Schedule& schedule, const std::string& location) {
  auto l = inst.location_index(location);
  if (!l) throw UnknownReference("unknown location '" + location + "'");
  Profile p;
  for (const auto& [task, e] : schedule.entries()) {
    auto i = inst.task_index(task);
    if (!i) throw UnknownReference("schedule references unknown task '" + task + "'");
    if (inst.task_location(*i) != l) continue;
    const auto& t = inst.tasks()[*i];
    p.add_pulse(e.start, e.start + t.duration, t.crew);
  }
  return p;
}

/// Signed mass-difference profile: +mass for Aft/Left, -mass for Fwd/Right,
/// applied at each task's start.
inline Profile balance_profile(const Instance& inst, const Schedule& schedule, Axis axis) {
  Profile p;
  for (const auto& [task, e] : schedule.entries()) {
    auto i = inst.task_index(task);
    if (!i) continue;
    p.add_step(e.start, inst.signed_mass(*i, axis));
  }
  return p;
}

/// Checks a schedule against all eight constraint families (minus the relaxed
/// ones) and lists every violation found. Missing tasks make a schedule
/// infeasible.
inline ViolationReport validate(const Instance& inst, const Schedule& schedule, RelaxFlags relax = {}) {
  ViolationReport rep;
  const std::size_t n = inst.num_tasks();
  struct Placed {
    TimeTick start;
    TimeTick end;
    std::vector<std::size_t> techs;
  };
  std::vector<std::optional<Placed>> placed(n);

  for (const auto& [task, e] : schedule.entries()) {
    auto i = inst.task_index(task);
    if (!i) {
      rep.add(ViolationKind::UnknownReference, task, std::nullopt, "task not in instance");
      continue;
    }
    Placed p{e.start, e.start + inst.tasks()[*i].duration, {}};
    for (const auto& tech : e.techs) {
      auto j = inst.tech_index(tech);
      if (!j) {
        rep.add(ViolationKind::UnknownReference, tech, std::nullopt, "technician not in instance (task " + task + ")");
        continue;
      }
      p.techs.push_back(*j);
    }
    std::sort(p.techs.begin(), p.techs.end());
    p.techs.erase(std::unique(p.techs.begin(), p.techs.end()), p.techs.end());
    placed[*i] = std::move(p);
  }

  std::vector<std::vector<std::tuple<TimeTick, TimeTick, std::size_t>>> per_tech(inst.num_techs());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& t = inst.tasks()[i];
    if (!placed[i]) {
      rep.add(ViolationKind::Unscheduled, t.id, std::nullopt, "task is not scheduled");
      continue;
    }
    const auto& p = *placed[i];
    if (static_cast<int>(p.techs.size()) != t.crew)
      rep.add(ViolationKind::CrewSize, t.id, p.start,
              "assigned " + std::to_string(p.techs.size()) + " technicians, needs " + std::to_string(t.crew));
    for (auto j : p.techs) {
      per_tech[j].emplace_back(p.start, p.end, i);
      for (const auto& w : inst.merged_unavailability(j))
        if (w.overlaps(p.start, p.end))
          rep.add(ViolationKind::TechUnavailable, inst.technicians()[j].id, std::max(p.start, w.start),
                  "task " + t.id + " overlaps unavailability [" + std::to_string(w.start) + "," +
                      std::to_string(w.end) + ")");
    }
    for (auto pred : inst.predecessors(i)) {
      if (!placed[pred]) continue;
      if (placed[pred]->end > p.start)
        rep.add(ViolationKind::PrecedenceBroken, t.id, p.start,
                "predecessor " + inst.tasks()[pred].id + " ends at " + std::to_string(placed[pred]->end));
    }
    if (!relax.dropRequirements) {
      for (const auto& [skill, count] : inst.task_requirements(i)) {
        int have = 0;
        for (auto j : p.techs) have += inst.tech_has_skill(j, skill) ? 1 : 0;
        if (have < count)
          rep.add(ViolationKind::RequirementUnmet, t.id, p.start,
                  "needs " + std::to_string(count) + " x " + inst.skills()[skill] + ", has " + std::to_string(have));
      }
    }
  }

  for (std::size_t j = 0; j < per_tech.size(); ++j) {
    auto& iv = per_tech[j];
    std::sort(iv.begin(), iv.end());
    std::optional<std::tuple<TimeTick, TimeTick, std::size_t>> reach;
    for (const auto& cur : iv) {
      if (reach && std::get<0>(cur) < std::get<1>(*reach))
        rep.add(ViolationKind::TechOverlap, inst.technicians()[j].id, std::get<0>(cur),
                "tasks " + inst.tasks()[std::get<2>(*reach)].id + " and " + inst.tasks()[std::get<2>(cur)].id);
      if (!reach || std::get<1>(cur) > std::get<1>(*reach)) reach = cur;
    }
  }

  if (!relax.dropCapacity) {
    std::vector<Profile> occ(inst.locations().size());
    for (std::size_t i = 0; i < n; ++i) {
      auto l = inst.task_location(i);
      if (!placed[i] || !l || !inst.locations()[*l].capacity) continue;
      occ[*l].add_pulse(placed[i]->start, placed[i]->end, inst.tasks()[i].crew);
    }
    for (std::size_t l = 0; l < occ.size(); ++l) {
      const auto& cap = inst.locations()[l].capacity;
      if (!cap) continue;
      bool over = false;
      for (const auto& [t, v] : occ[l].breakpoints()) {
        if (v > *cap && !over)
          rep.add(ViolationKind::CapacityExceeded, inst.locations()[l].id, t,
                  "occupancy " + std::to_string(v) + " > capacity " + std::to_string(*cap));
        over = v > *cap;
      }
    }
  }

  if (!relax.dropBalance) {
    for (Axis axis : {Axis::AF, Axis::LR}) {
      Profile bal;
      for (std::size_t i = 0; i < n; ++i)
        if (placed[i]) bal.add_step(placed[i]->start, inst.signed_mass(i, axis));
      const MassKg limit = inst.balance_limit(axis);
      bool out = false;
      for (const auto& [t, v] : bal.breakpoints()) {
        bool now_out = v > limit || v < -limit;
        if (now_out && !out)
          rep.add(axis == Axis::AF ? ViolationKind::BalanceAF : ViolationKind::BalanceLR, to_string(axis), t,
                  "mass difference " + std::to_string(v) + " outside [-" + std::to_string(limit) + "," +
                      std::to_string(limit) + "]");
        out = now_out;
      }
    }
  }
  return rep;
}

inline nlohmann::ordered_json to_json(const Violation& v) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(v.kind);
  j["subject"] = v.subject;
  j["time"] = v.time ? nlohmann::ordered_json(*v.time) : nlohmann::ordered_json(nullptr);
  j["detail"] = v.detail;
  return j;
}

/// One JSON object per line.
inline std::string report_jsonl(const ViolationReport& rep) {
  std::string out;
  for (const auto& v : rep.violations) out += to_json(v).dump() + "\n";
  return out;
}

inline std::string report_summary(const ViolationReport& rep, const Schedule& schedule, const Instance& inst) {
  std::ostringstream out;
  if (rep.feasible()) {
    out << "feasible, makespan " << makespan(schedule, inst);
  } else {
    out << "infeasible, " << rep.violations.size() << (rep.truncated ? "+" : "") << " violations (";
    bool first = true;
    for (auto k : rep.kinds()) {
      out << (first ? "" : ", ") << to_string(k);
      first = false;
    }
    out << ")";
  }
  return out.str();
}

}  // namespace adsp
