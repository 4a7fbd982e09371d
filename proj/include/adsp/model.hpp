#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "adsp/types.hpp"

namespace adsp {

/// Half-open window [start, end).
struct Window {
  TimeTick start = 0;
  TimeTick end = 0;

  bool overlaps(TimeTick s, TimeTick e) const { return start < e && s < end; }
  friend bool operator==(const Window&, const Window&) = default;
};

struct Requirement {
  std::string skill;
  int count = 1;
};

struct Task {
  std::string id;
  TimeTick duration = 1;
  std::optional<std::string> location;
  int crew = 1;
  MassKg mass = 0;
  std::vector<std::string> precedences;
  std::vector<Requirement> requirements;
};

struct Technician {
  std::string id;
  std::vector<std::string> skills;
  std::vector<Window> unavailable;
};

struct Location {
  std::string id;
  std::optional<int> capacity;  // nullopt = unbounded
  std::optional<Zone> zone;
};

/// A problem instance. Immutable once constructed; the constructor checks
/// every structural invariant and resolves all string references to indices.
class Instance {
 public:
  Instance() = default;

  Instance(std::string name, MassKg balance_af, MassKg balance_lr, std::vector<Location> locations,
           std::vector<Technician> technicians, std::vector<Task> tasks)
      : name_(std::move(name)),
        balance_af_(balance_af),
        balance_lr_(balance_lr),
        locations_(std::move(locations)),
        technicians_(std::move(technicians)),
        tasks_(std::move(tasks)) {
    resolve();
  }

  const std::string& name() const { return name_; }
  MassKg balance_af() const { return balance_af_; }
  MassKg balance_lr() const { return balance_lr_; }
  MassKg balance_limit(Axis a) const { return a == Axis::AF ? balance_af_ : balance_lr_; }

  const std::vector<Task>& tasks() const { return tasks_; }
  const std::vector<Technician>& technicians() const { return technicians_; }
  const std::vector<Location>& locations() const { return locations_; }
  std::size_t num_tasks() const { return tasks_.size(); }
  std::size_t num_techs() const { return technicians_.size(); }

  std::optional<std::size_t> task_index(std::string_view id) const { return lookup(task_ix_, id); }
  std::optional<std::size_t> tech_index(std::string_view id) const { return lookup(tech_ix_, id); }
  std::optional<std::size_t> location_index(std::string_view id) const { return lookup(loc_ix_, id); }

  const std::vector<std::size_t>& predecessors(std::size_t task) const { return preds_[task]; }
  const std::vector<std::size_t>& successors(std::size_t task) const { return succs_[task]; }
  std::optional<std::size_t> task_location(std::size_t task) const { return task_loc_[task]; }

  /// Capacity of the task's location, nullopt when it has none or it is unbounded.
  std::optional<int> task_capacity(std::size_t task) const {
    auto l = task_loc_[task];
    return l ? locations_[*l].capacity : std::nullopt;
  }

  /// Signed mass contribution of a task to an axis (0 when it does not weigh on it).
  MassKg signed_mass(std::size_t task, Axis axis) const {
    auto l = task_loc_[task];
    if (!l || !locations_[*l].zone) return 0;
    return balance_sign(*locations_[*l].zone, axis) * tasks_[task].mass;
  }

  /// Skill ids are interned; a requirement's skill index is stable per instance.
  const std::vector<std::string>& skills() const { return skills_; }
  bool tech_has_skill(std::size_t tech, std::size_t skill) const { return tech_skills_[tech][skill]; }
  std::size_t tech_skill_count(std::size_t tech) const { return tech_skill_count_[tech]; }
  /// (skill index, count) pairs of a task.
  const std::vector<std::pair<std::size_t, int>>& task_requirements(std::size_t task) const {
    return task_reqs_[task];
  }

  /// Unavailability windows of a technician, sorted and with overlapping or
  /// touching windows merged.
  const std::vector<Window>& merged_unavailability(std::size_t tech) const { return merged_unav_[tech]; }

  /// Latest end over all unavailability windows (0 if none).
  TimeTick max_unavailability_end() const { return max_unav_end_; }

  /// Task indices in a topological order of the precedence graph (stable by index).
  const std::vector<std::size_t>& topological_order() const { return topo_; }

 private:
  template <typename Map>
  static std::optional<std::size_t> lookup(const Map& m, std::string_view id) {
    auto it = m.find(std::string(id));
    if (it == m.end()) return std::nullopt;
    return it->second;
  }

  void resolve() {
    if (balance_af_ <= 0 || balance_lr_ <= 0) throw ValidationError("balance limits must be positive");

    for (std::size_t l = 0; l < locations_.size(); ++l) {
      const auto& loc = locations_[l];
      if (!loc_ix_.emplace(loc.id, l).second) throw ValidationError("duplicate location id '" + loc.id + "'");
      if (loc.capacity && *loc.capacity < 1)
        throw ValidationError("location '" + loc.id + "' has capacity < 1");
    }

    std::map<std::string, std::size_t> skill_ix;
    auto intern = [&](const std::string& s) {
      auto [it, inserted] = skill_ix.emplace(s, skills_.size());
      if (inserted) skills_.push_back(s);
      return it->second;
    };
    for (const auto& t : technicians_)
      for (const auto& s : t.skills) intern(s);
    for (const auto& t : tasks_)
      for (const auto& r : t.requirements) intern(r.skill);

    tech_skills_.assign(technicians_.size(), std::vector<bool>(skills_.size(), false));
    tech_skill_count_.assign(technicians_.size(), 0);
    merged_unav_.resize(technicians_.size());
    for (std::size_t j = 0; j < technicians_.size(); ++j) {
      const auto& tech = technicians_[j];
      if (!tech_ix_.emplace(tech.id, j).second)
        throw ValidationError("duplicate technician id '" + tech.id + "'");
      for (const auto& s : tech.skills) {
        auto k = skill_ix.at(s);
        if (!tech_skills_[j][k]) ++tech_skill_count_[j];
        tech_skills_[j][k] = true;
      }
      auto windows = tech.unavailable;
      for (const auto& w : windows) {
        if (w.start >= w.end)
          throw ValidationError("technician '" + tech.id + "' has an empty unavailability window");
        if (w.start < 0) throw ValidationError("technician '" + tech.id + "' has a negative window");
      }
      std::sort(windows.begin(), windows.end(),
                [](const Window& a, const Window& b) { return a.start < b.start; });
      for (const auto& w : windows) {
        auto& m = merged_unav_[j];
        if (!m.empty() && w.start <= m.back().end)
          m.back().end = std::max(m.back().end, w.end);
        else
          m.push_back(w);
        max_unav_end_ = std::max(max_unav_end_, w.end);
      }
    }

    const std::size_t n = tasks_.size();
    for (std::size_t i = 0; i < n; ++i)
      if (!task_ix_.emplace(tasks_[i].id, i).second)
        throw ValidationError("duplicate task id '" + tasks_[i].id + "'");

    preds_.assign(n, {});
    succs_.assign(n, {});
    task_loc_.assign(n, std::nullopt);
    task_reqs_.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
      const auto& t = tasks_[i];
      if (t.duration < 1) throw ValidationError("task '" + t.id + "' has nonpositive duration");
      if (t.crew < 1) throw ValidationError("task '" + t.id + "' has crew < 1");
      if (t.mass < 0) throw ValidationError("task '" + t.id + "' has negative mass");
      if (t.location) {
        auto l = location_index(*t.location);
        if (!l) throw ValidationError("task '" + t.id + "' references unknown location '" + *t.location + "'");
        task_loc_[i] = *l;
      }
      for (const auto& p : t.precedences) {
        auto pi = task_index(p);
        if (!pi) throw ValidationError("task '" + t.id + "' has dangling precedence '" + p + "'");
        if (std::find(preds_[i].begin(), preds_[i].end(), *pi) == preds_[i].end()) {
          preds_[i].push_back(*pi);
          succs_[*pi].push_back(i);
        }
      }
      for (const auto& r : t.requirements) {
        if (r.count < 1 || r.count > t.crew)
          throw ValidationError("task '" + t.id + "' requirement '" + r.skill + "' count out of range");
        task_reqs_[i].emplace_back(skill_ix.at(r.skill), r.count);
      }
    }

    // Kahn's algorithm, smallest index first.
    std::vector<std::size_t> indeg(n);
    for (std::size_t i = 0; i < n; ++i) indeg[i] = preds_[i].size();
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t i = 0; i < n; ++i)
      if (indeg[i] == 0) ready.push(i);
    topo_.reserve(n);
    while (!ready.empty()) {
      std::size_t i = ready.top();
      ready.pop();
      topo_.push_back(i);
      for (auto s : succs_[i])
        if (--indeg[s] == 0) ready.push(s);
    }
    if (topo_.size() != n) throw ValidationError("precedence graph contains a cycle");
  }

  std::string name_;
  MassKg balance_af_ = 1;
  MassKg balance_lr_ = 1;
  std::vector<Location> locations_;
  std::vector<Technician> technicians_;
  std::vector<Task> tasks_;

  std::unordered_map<std::string, std::size_t> task_ix_, tech_ix_, loc_ix_;
  std::vector<std::string> skills_;
  std::vector<std::vector<bool>> tech_skills_;
  std::vector<std::size_t> tech_skill_count_;
  std::vector<std::vector<Window>> merged_unav_;
  TimeTick max_unav_end_ = 0;
  std::vector<std::vector<std::size_t>> preds_, succs_;
  std::vector<std::optional<std::size_t>> task_loc_;
  std::vector<std::vector<std::pair<std::size_t, int>>> task_reqs_;
  std::vector<std::size_t> topo_;
};

/// Planning horizon: the sum of all task durations.
inline TimeTick horizon(const Instance& inst) {
  TimeTick sum = 0;
  for (const auto& t : inst.tasks()) sum += t.duration;
  return sum;
}

/// Upper bound on the makespan of some optimal schedule, when one exists:
/// every start of a left-justified schedule is 0, an unavailability end or
/// the end of another task, so the chain behind the last task is bounded by
/// the latest unavailability end plus the sum of durations.
inline TimeTick start_cap(const Instance& inst) { return horizon(inst) + inst.max_unavailability_end(); }

/// Longest precedence chain (sum of durations), ignoring resources.
inline TimeTick critical_path(const Instance& inst) {
  std::vector<TimeTick> finish(inst.num_tasks(), 0);
  TimeTick best = 0;
  for (auto i : inst.topological_order()) {
    TimeTick est = 0;
    for (auto p : inst.predecessors(i)) est = std::max(est, finish[p]);
    finish[i] = est + inst.tasks()[i].duration;
    best = std::max(best, finish[i]);
  }
  return best;
}

struct ScheduleEntry {
  TimeTick start = 0;
  std::vector<std::string> techs;  // sorted

  TimeTick end(TimeTick duration) const { return start + duration; }
  friend bool operator==(const ScheduleEntry&, const ScheduleEntry&) = default;
};

/// Start time and technician set per task. Feasibility is the validator's job.
class Schedule {
 public:
  void set(std::string task, TimeTick start, std::vector<std::string> techs) {
    if (start < 0) throw ValidationError("task '" + task + "' has a negative start");
    std::sort(techs.begin(), techs.end());
    techs.erase(std::unique(techs.begin(), techs.end()), techs.end());
    entries_[std::move(task)] = ScheduleEntry{start, std::move(techs)};
  }

  const ScheduleEntry* find(const std::string& task) const {
    auto it = entries_.find(task);
    return it == entries_.end() ? nullptr : &it->second;
  }

  void erase(const std::string& task) { entries_.erase(task); }

  const std::map<std::string, ScheduleEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  friend bool operator==(const Schedule&, const Schedule&) = default;

 private:
  std::map<std::string, ScheduleEntry> entries_;
};

/// Keeps `n` tasks drawn by a seeded generator. Surviving tasks inherit the
/// surviving ancestors reachable only through removed tasks, so the ordering
/// structure survives the cut.
inline Instance subsample(const Instance& inst, std::size_t n, std::uint64_t seed) {
  const std::size_t total = inst.num_tasks();
  if (n > total) throw CountOutOfRange("subsample size exceeds task count");

  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t i = total; i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(order[i - 1], order[pick(rng)]);
  }
  std::vector<bool> keep(total, false);
  for (std::size_t k = 0; k < n; ++k) keep[order[k]] = true;

  // Surviving frontier behind each task through removed tasks.
  std::vector<std::optional<std::vector<std::size_t>>> frontier(total);
  for (auto i : inst.topological_order()) {
    std::vector<std::size_t> f;
    for (auto p : inst.predecessors(i)) {
      if (keep[p]) {
        f.push_back(p);
      } else {
        const auto& pf = *frontier[p];
        f.insert(f.end(), pf.begin(), pf.end());
      }
    }
    std::sort(f.begin(), f.end());
    f.erase(std::unique(f.begin(), f.end()), f.end());
    frontier[i] = std::move(f);
  }

  std::vector<Task> tasks;
  tasks.reserve(n);
  for (std::size_t i = 0; i < total; ++i) {
    if (!keep[i]) continue;
    Task t = inst.tasks()[i];
    t.precedences.clear();
    for (auto p : *frontier[i]) t.precedences.push_back(inst.tasks()[p].id);
    tasks.push_back(std::move(t));
  }
  return Instance(inst.name() + "-" + std::to_string(n), inst.balance_af(), inst.balance_lr(), inst.locations(),
                  inst.technicians(), std::move(tasks));
}

}  // namespace adsp
