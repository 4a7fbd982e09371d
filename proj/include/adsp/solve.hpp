#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "adsp/anytime.hpp"
#include "adsp/model.hpp"
#include "adsp/validate.hpp"

namespace adsp {

struct SolveParams {
  double timeLimitSeconds = 60.0;
  std::uint64_t seed = 0;
  RelaxFlags relax;
  double destroyFraction = 0.15;
  int restartStallLimit = 20;
  int workers = 1;
  /// Optional cap on LNS iterations (summed over workers). With one worker
  /// and a cap that binds before the clock, runs are reproducible.
  std::optional<std::uint64_t> maxIterations;
};

/// Start and crew of one placed task, indexed form.
struct Placement {
  TimeTick start = 0;
  std::vector<std::size_t> crew;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Level map: time -> value on [time, next time). Value before the first key is 0.
class LevelMap {
 public:
  std::int64_t level_at(TimeTick t) const {
    auto it = levels_.upper_bound(t);
    return it == levels_.begin() ? 0 : std::prev(it)->second;
  }

  std::int64_t max_over(TimeTick s, TimeTick e) const {
    std::int64_t best = level_at(s);
    for (auto it = levels_.upper_bound(s); it != levels_.end() && it->first < e; ++it)
      best = std::max(best, it->second);
    return best;
  }

  void add(TimeTick s, TimeTick e, std::int64_t h) {
    split(s);
    split(e);
    for (auto it = levels_.find(s); it != levels_.end() && it->first < e; ++it) it->second += h;
  }

  std::optional<TimeTick> next_after(TimeTick t) const {
    auto it = levels_.upper_bound(t);
    if (it == levels_.end()) return std::nullopt;
    return it->first;
  }

 private:
  void split(TimeTick t) {
    if (levels_.count(t)) return;
    levels_.emplace(t, level_at(t));
  }
  std::map<TimeTick, std::int64_t> levels_;
};

/// Step-at-start balance track with suffix extrema for O(log n) feasibility queries.
class BalanceTrack {
 public:
  /// True if adding `mass` at `s` keeps every value from s on within [-limit, limit].
  bool admits(TimeTick s, MassKg mass, MassKg limit) const {
    auto k = first_after(s);
    MassKg here = k == 0 ? 0 : points_[k - 1].second;
    MassKg lo = here, hi = here;
    if (k < points_.size()) {
      lo = std::min(lo, suf_min_[k]);
      hi = std::max(hi, suf_max_[k]);
    }
    return lo + mass >= -limit && hi + mass <= limit;
  }

  void add(TimeTick s, MassKg mass) {
    if (mass == 0) return;
    auto k = first_after(s);
    if (k == 0 || points_[k - 1].first != s) {
      MassKg here = k == 0 ? 0 : points_[k - 1].second;
      points_.insert(points_.begin() + static_cast<std::ptrdiff_t>(k), {s, here});
      ++k;
    }
    for (std::size_t i = k - 1; i < points_.size(); ++i) points_[i].second += mass;
    suf_min_.resize(points_.size());
    suf_max_.resize(points_.size());
    for (std::size_t i = points_.size(); i-- > 0;) {
      suf_min_[i] = points_[i].second;
      suf_max_[i] = points_[i].second;
      if (i + 1 < points_.size()) {
        suf_min_[i] = std::min(suf_min_[i], suf_min_[i + 1]);
        suf_max_[i] = std::max(suf_max_[i], suf_max_[i + 1]);
      }
    }
  }

  std::optional<TimeTick> next_after(TimeTick t) const {
    auto k = first_after(t);
    if (k == points_.size()) return std::nullopt;
    return points_[k].first;
  }

  MassKg final_level() const { return points_.empty() ? 0 : points_.back().second; }

 private:
  std::size_t first_after(TimeTick t) const {
    return static_cast<std::size_t>(
        std::upper_bound(points_.begin(), points_.end(), t,
                         [](TimeTick v, const std::pair<TimeTick, MassKg>& p) { return v < p.first; }) -
        points_.begin());
  }
  std::vector<std::pair<TimeTick, MassKg>> points_;
  std::vector<MassKg> suf_min_, suf_max_;
};

}  // namespace detail

/// Resource bookkeeping of a partial schedule: technician busy intervals
/// (including unavailabilities), location occupancy and both balance axes.
/// Every placement made through `place` keeps the partial schedule feasible
/// when the caller checked it with the query methods first.
class SolverState {
 public:
  SolverState(const Instance& inst, RelaxFlags relax)
      : inst_(&inst),
        relax_(relax),
        busy_(inst.num_techs()),
        occupancy_(inst.locations().size()),
        placements_(inst.num_tasks()) {
    for (std::size_t j = 0; j < inst.num_techs(); ++j)
      for (const auto& w : inst.merged_unavailability(j)) busy_[j].emplace(w.start, w.end);
  }

  const Instance& instance() const { return *inst_; }
  RelaxFlags relax() const { return relax_; }

  bool is_placed(std::size_t task) const { return placements_[task].has_value(); }
  const std::optional<Placement>& placement(std::size_t task) const { return placements_[task]; }
  std::size_t placed_count() const { return placed_; }

  bool tech_free(std::size_t tech, TimeTick s, TimeTick e) const {
    const auto& b = busy_[tech];
    auto it = b.lower_bound(e);  // first interval starting at or after e
    if (it == b.begin()) return true;
    --it;
    // Intervals are disjoint and sorted; only the last one starting before e can reach s.
    return it->second <= s;
  }

  std::vector<std::size_t> free_techs(TimeTick s, TimeTick e) const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < busy_.size(); ++j)
      if (tech_free(j, s, e)) out.push_back(j);
    return out;
  }

  /// Earliest start allowed by placed predecessors. Unplaced predecessors are the caller's concern.
  TimeTick earliest_start(std::size_t task) const {
    TimeTick est = 0;
    for (auto p : inst_->predecessors(task))
      if (placements_[p]) est = std::max(est, placements_[p]->start + inst_->tasks()[p].duration);
    return est;
  }

  bool capacity_admits(std::size_t task, TimeTick s, int extra = 0) const {
    if (relax_.dropCapacity) return true;
    auto l = inst_->task_location(task);
    if (!l || !inst_->locations()[*l].capacity) return true;
    const auto& t = inst_->tasks()[task];
    return occupancy_[*l].max_over(s, s + t.duration) + t.crew + extra <= *inst_->locations()[*l].capacity;
  }

  bool balance_admits(std::size_t task, TimeTick s) const {
    return balance_admits_mass(s, inst_->signed_mass(task, Axis::AF), inst_->signed_mass(task, Axis::LR));
  }

  bool balance_admits_mass(TimeTick s, MassKg af, MassKg lr) const {
    if (relax_.dropBalance) return true;
    if (af != 0 && !balance_[0].admits(s, af, inst_->balance_af())) return false;
    if (lr != 0 && !balance_[1].admits(s, lr, inst_->balance_lr())) return false;
    return true;
  }

  /// Smallest time > t at which any resource relevant to `task` changes state.
  std::optional<TimeTick> next_event_after(std::size_t task, TimeTick t) const {
    std::optional<TimeTick> best;
    auto consider = [&](std::optional<TimeTick> c) {
      if (c && (!best || *c < *best)) best = c;
    };
    for (const auto& b : busy_) {
      auto it = b.upper_bound(t);
      if (it != b.begin() && std::prev(it)->second > t)
        consider(std::prev(it)->second);
      else if (it != b.end())
        consider(it->second);
    }
    if (!relax_.dropCapacity)
      if (auto l = inst_->task_location(task); l && inst_->locations()[*l].capacity)
        consider(occupancy_[*l].next_after(t));
    if (!relax_.dropBalance) {
      if (inst_->signed_mass(task, Axis::AF) != 0) consider(balance_[0].next_after(t));
      if (inst_->signed_mass(task, Axis::LR) != 0) consider(balance_[1].next_after(t));
    }
    return best;
  }

  void place(std::size_t task, TimeTick s, std::vector<std::size_t> crew) {
    const auto& t = inst_->tasks()[task];
    for (auto j : crew) busy_[j].emplace(s, s + t.duration);
    if (auto l = inst_->task_location(task); l && inst_->locations()[*l].capacity)
      occupancy_[*l].add(s, s + t.duration, t.crew);
    balance_[0].add(s, inst_->signed_mass(task, Axis::AF));
    balance_[1].add(s, inst_->signed_mass(task, Axis::LR));
    std::sort(crew.begin(), crew.end());
    placements_[task] = Placement{s, std::move(crew)};
    ++placed_;
  }

  TimeTick makespan() const {
    TimeTick ms = 0;
    for (std::size_t i = 0; i < placements_.size(); ++i)
      if (placements_[i]) ms = std::max(ms, placements_[i]->start + inst_->tasks()[i].duration);
    return ms;
  }

  Schedule to_schedule() const {
    Schedule s;
    for (std::size_t i = 0; i < placements_.size(); ++i) {
      if (!placements_[i]) continue;
      std::vector<std::string> techs;
      for (auto j : placements_[i]->crew) techs.push_back(inst_->technicians()[j].id);
      s.set(inst_->tasks()[i].id, placements_[i]->start, std::move(techs));
    }
    return s;
  }

 private:
  const Instance* inst_;
  RelaxFlags relax_;
  std::vector<std::map<TimeTick, TimeTick>> busy_;
  std::vector<detail::LevelMap> occupancy_;
  std::array<detail::BalanceTrack, 2> balance_;
  std::vector<std::optional<Placement>> placements_;
  std::size_t placed_ = 0;
};

/// Picks `crew` technicians free on [start, start + duration) that cover every
/// requirement. Requirements are filled from qualified technicians holding the
/// fewest skills first, the rest from any free technician, again fewest skills
/// first; ties are broken by a seeded key. Falls back to exhaustive search
/// when the greedy pass fails. Returns nullopt when no such crew exists.
inline std::optional<std::vector<std::size_t>> assign_crew(const SolverState& state, std::size_t task, TimeTick start,
                                                           RelaxFlags relax, std::uint64_t seed,
                                                           const std::vector<std::size_t>& exclude = {}) {
  const auto& inst = state.instance();
  const auto& t = inst.tasks()[task];
  std::vector<std::size_t> free;
  for (auto j : state.free_techs(start, start + t.duration))
    if (std::find(exclude.begin(), exclude.end(), j) == exclude.end()) free.push_back(j);
  if (static_cast<int>(free.size()) < t.crew) return std::nullopt;

  std::sort(free.begin(), free.end(), [&](std::size_t a, std::size_t b) {
    auto ka = std::make_pair(inst.tech_skill_count(a), detail::mix64(seed ^ (a * 0x100000001B3ULL)));
    auto kb = std::make_pair(inst.tech_skill_count(b), detail::mix64(seed ^ (b * 0x100000001B3ULL)));
    return ka < kb;
  });

  const auto& reqs = inst.task_requirements(task);
  auto covers = [&](const std::vector<std::size_t>& crew) {
    if (relax.dropRequirements) return true;
    for (const auto& [skill, count] : reqs) {
      int have = 0;
      for (auto j : crew) have += inst.tech_has_skill(j, skill) ? 1 : 0;
      if (have < count) return false;
    }
    return true;
  };

  std::vector<std::size_t> chosen;
  std::vector<bool> taken(inst.num_techs(), false);
  bool ok = true;
  if (!relax.dropRequirements) {
    auto order = reqs;
    // Scarcest requirement first.
    auto qualified = [&](std::size_t skill) {
      return std::count_if(free.begin(), free.end(), [&](std::size_t j) { return inst.tech_has_skill(j, skill); });
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](const auto& a, const auto& b) { return qualified(a.first) < qualified(b.first); });
    for (const auto& [skill, count] : order) {
      int have = 0;
      for (auto j : chosen) have += inst.tech_has_skill(j, skill) ? 1 : 0;
      for (auto j : free) {
        if (have >= count) break;
        if (taken[j] || !inst.tech_has_skill(j, skill)) continue;
        taken[j] = true;
        chosen.push_back(j);
        ++have;
      }
      if (have < count) ok = false;
    }
  }
  for (auto j : free) {
    if (static_cast<int>(chosen.size()) >= t.crew) break;
    if (!taken[j]) {
      taken[j] = true;
      chosen.push_back(j);
    }
  }
  if (ok && static_cast<int>(chosen.size()) == t.crew && covers(chosen)) {
    std::sort(chosen.begin(), chosen.end());
    return chosen;
  }

  // Exhaustive: combinations of `free` in its preference order.
  const std::size_t k = static_cast<std::size_t>(t.crew);
  if (free.size() > 30) return std::nullopt;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::uint64_t guard = 0; guard < 200000; ++guard) {
    std::vector<std::size_t> crew;
    for (auto i : idx) crew.push_back(free[i]);
    if (covers(crew)) {
      std::sort(crew.begin(), crew.end());
      return crew;
    }
    std::size_t pos = k;
    while (pos > 0 && idx[pos - 1] == free.size() - k + pos - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t q = pos; q < k; ++q) idx[q] = idx[q - 1] + 1;
  }
  return std::nullopt;
}

namespace detail {

/// Earliest feasible start >= est for `task`, with its crew. Scans event
/// points only; gives up once no further resource event exists.
inline std::optional<Placement> earliest_placement(const SolverState& state, std::size_t task, TimeTick est,
                                                   std::uint64_t seed) {
  const auto& inst = state.instance();
  const auto& t = inst.tasks()[task];
  if (auto cap = inst.task_capacity(task); cap && !state.relax().dropCapacity && t.crew > *cap) return std::nullopt;
  TimeTick s = est;
  while (true) {
    if (state.capacity_admits(task, s) && state.balance_admits(task, s))
      if (auto crew = assign_crew(state, task, s, state.relax(), seed)) return Placement{s, std::move(*crew)};
    auto next = state.next_event_after(task, s);
    if (!next) return std::nullopt;
    s = *next;
  }
}

/// Two tasks started together; used when balance deadlocks every single placement.
inline std::optional<std::pair<Placement, Placement>> earliest_pair_placement(const SolverState& state, std::size_t a,
                                                                              std::size_t b, std::uint64_t seed) {
  const auto& inst = state.instance();
  const auto& ta = inst.tasks()[a];
  const auto& tb = inst.tasks()[b];
  TimeTick s = std::max(state.earliest_start(a), state.earliest_start(b));
  const MassKg af = inst.signed_mass(a, Axis::AF) + inst.signed_mass(b, Axis::AF);
  const MassKg lr = inst.signed_mass(a, Axis::LR) + inst.signed_mass(b, Axis::LR);
  const bool same_loc = inst.task_location(a) && inst.task_location(a) == inst.task_location(b);
  while (true) {
    bool cap_ok = state.capacity_admits(a, s) && state.capacity_admits(b, s);
    if (cap_ok && same_loc && inst.task_capacity(a) && !state.relax().dropCapacity) {
      // Overlap of the two pulses is [s, s + min duration).
      cap_ok = state.capacity_admits(ta.duration <= tb.duration ? a : b, s, ta.duration <= tb.duration ? tb.crew : ta.crew);
    }
    if (cap_ok && state.balance_admits_mass(s, af, lr)) {
      if (auto ca = assign_crew(state, a, s, state.relax(), seed)) {
        // Crews overlap in time, so b may not reuse a's technicians.
        if (auto cb = assign_crew(state, b, s, state.relax(), seed, *ca))
          return std::make_pair(Placement{s, *ca}, Placement{s, *cb});
      }
    }
    auto na = state.next_event_after(a, s);
    auto nb = state.next_event_after(b, s);
    if (!na && !nb) return std::nullopt;
    s = !na ? *nb : !nb ? *na : std::min(*na, *nb);
  }
}

}  // namespace detail

/// Serial schedule-generation scheme over task indices. `rank[i]` is the
/// priority of task i (lower = earlier); ties break by task id. Throws
/// ConstructionStalled when no eligible task admits any feasible start.
inline std::vector<Placement> sgs_indexed(const Instance& inst, const std::vector<std::size_t>& rank,
                                          std::uint64_t seed, RelaxFlags relax) {
  const std::size_t n = inst.num_tasks();
  SolverState state(inst, relax);
  auto worse = [&](std::size_t a, std::size_t b) {
    if (rank[a] != rank[b]) return rank[a] > rank[b];
    return inst.tasks()[a].id > inst.tasks()[b].id;
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(worse)> eligible(worse);
  std::vector<std::size_t> missing(n);
  for (std::size_t i = 0; i < n; ++i) {
    missing[i] = inst.predecessors(i).size();
    if (missing[i] == 0) eligible.push(i);
  }
  std::vector<std::size_t> blocked;
  std::uint64_t step = 0;

  auto commit = [&](std::size_t i, Placement p) {
    state.place(i, p.start, std::move(p.crew));
    for (auto s : inst.successors(i))
      if (--missing[s] == 0) eligible.push(s);
    for (auto b : blocked) eligible.push(b);
    blocked.clear();
  };

  while (state.placed_count() < n) {
    if (!eligible.empty()) {
      std::size_t i = eligible.top();
      eligible.pop();
      auto p = detail::earliest_placement(state, i, state.earliest_start(i), detail::mix64(seed + ++step));
      if (p)
        commit(i, std::move(*p));
      else
        blocked.push_back(i);
      continue;
    }
    std::sort(blocked.begin(), blocked.end(), [&](std::size_t a, std::size_t b) { return worse(b, a); });
    bool placed = false;
    for (std::size_t x = 0; x < blocked.size() && !placed; ++x)
      for (std::size_t y = x + 1; y < blocked.size() && !placed; ++y) {
        auto a = blocked[x], b = blocked[y];
        auto pp = detail::earliest_pair_placement(state, a, b, detail::mix64(seed + ++step));
        if (!pp) continue;
        blocked.erase(blocked.begin() + static_cast<std::ptrdiff_t>(y));
        blocked.erase(blocked.begin() + static_cast<std::ptrdiff_t>(x));
        state.place(a, pp->first.start, pp->first.crew);
        commit(b, std::move(pp->second));
        for (auto s : inst.successors(a))
          if (--missing[s] == 0) eligible.push(s);
        placed = true;
      }
    if (!placed)
      throw ConstructionStalled("no remaining task admits a feasible start (" + std::to_string(n - state.placed_count()) +
                                " unscheduled)");
  }

  std::vector<Placement> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = *state.placement(i);
  return out;
}

inline Schedule to_schedule(const Instance& inst, const std::vector<Placement>& placements) {
  Schedule s;
  for (std::size_t i = 0; i < placements.size(); ++i) {
    std::vector<std::string> techs;
    for (auto j : placements[i].crew) techs.push_back(inst.technicians()[j].id);
    s.set(inst.tasks()[i].id, placements[i].start, std::move(techs));
  }
  return s;
}

inline TimeTick makespan_of(const Instance& inst, const std::vector<Placement>& placements) {
  TimeTick ms = 0;
  for (std::size_t i = 0; i < placements.size(); ++i)
    ms = std::max(ms, placements[i].start + inst.tasks()[i].duration);
  return ms;
}

/// Serial SGS driven by an ordering of task ids (earlier = higher priority).
/// Tasks missing from the ordering come last.
inline Schedule sgs(const Instance& inst, const std::vector<std::string>& priority, std::uint64_t seed,
                    RelaxFlags relax = {}) {
  std::vector<std::size_t> rank(inst.num_tasks(), priority.size());
  for (std::size_t k = 0; k < priority.size(); ++k) {
    auto i = inst.task_index(priority[k]);
    if (!i) throw UnknownReference("priority references unknown task '" + priority[k] + "'");
    rank[*i] = std::min(rank[*i], k);
  }
  return to_schedule(inst, sgs_indexed(inst, rank, seed, relax));
}

/// Cheap valid lower bound on the makespan: critical path and crew energy.
inline TimeTick makespan_lower_bound(const Instance& inst) {
  TimeTick lb = critical_path(inst);
  if (inst.num_techs() > 0) {
    TimeTick work = 0;
    for (const auto& t : inst.tasks()) work += t.duration * t.crew;
    const auto r = static_cast<TimeTick>(inst.num_techs());
    lb = std::max(lb, (work + r - 1) / r);
  }
  return lb;
}

struct SolveResult {
  Schedule best;
  AnytimeLog log;
  std::uint64_t iterations = 0;
};

namespace detail {

/// Shared incumbent with monotone compare-and-improve.
class IncumbentStore {
 public:
  explicit IncumbentStore(std::chrono::steady_clock::time_point t0) : t0_(t0) {}

  bool offer(const Instance& inst, std::vector<Placement> p) {
    TimeTick ms = makespan_of(inst, p);
    std::lock_guard lock(mu_);
    if (best_ && ms >= best_ms_) return false;
    double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    if (!log_.points.empty() && el <= log_.points.back().seconds) el = std::nextafter(log_.points.back().seconds, 1e300);
    log_.points.push_back({el, ms});
    best_ = std::move(p);
    best_ms_ = ms;
    return true;
  }

  std::optional<std::pair<std::vector<Placement>, TimeTick>> snapshot() const {
    std::lock_guard lock(mu_);
    if (!best_) return std::nullopt;
    return std::make_pair(*best_, best_ms_);
  }

  std::optional<TimeTick> best_makespan() const {
    std::lock_guard lock(mu_);
    if (!best_) return std::nullopt;
    return best_ms_;
  }

  AnytimeLog log() const {
    std::lock_guard lock(mu_);
    return log_;
  }

 private:
  std::chrono::steady_clock::time_point t0_;
  mutable std::mutex mu_;
  std::optional<std::vector<Placement>> best_;
  TimeTick best_ms_ = 0;
  AnytimeLog log_;
};

/// Priority by latest-finish-first on the remaining precedence chain.
inline std::vector<std::size_t> tail_priority(const Instance& inst) {
  const std::size_t n = inst.num_tasks();
  std::vector<TimeTick> tail(n, 0);
  const auto& topo = inst.topological_order();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    TimeTick best = 0;
    for (auto s : inst.successors(*it)) best = std::max(best, tail[s]);
    tail[*it] = best + inst.tasks()[*it].duration;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return tail[a] > tail[b]; });
  std::vector<std::size_t> rank(n);
  for (std::size_t k = 0; k < n; ++k) rank[order[k]] = k;
  return rank;
}

inline std::vector<std::size_t> random_priority(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::size_t> rank(n);
  std::iota(rank.begin(), rank.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(rank[i - 1], rank[std::uniform_int_distribution<std::size_t>(0, i - 1)(rng)]);
  return rank;
}

/// Keeps the incumbent's start order for surviving tasks and reinserts the
/// destroyed ones at random positions.
inline std::vector<std::size_t> repair_priority(const Instance& inst, const std::vector<Placement>& incumbent,
                                                const std::vector<bool>& destroyed, std::mt19937_64& rng) {
  const std::size_t n = inst.num_tasks();
  std::vector<std::size_t> kept, freed;
  for (std::size_t i = 0; i < n; ++i) (destroyed[i] ? freed : kept).push_back(i);
  std::sort(kept.begin(), kept.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(incumbent[a].start, inst.tasks()[a].id) < std::tie(incumbent[b].start, inst.tasks()[b].id);
  });
  std::vector<std::size_t> order = kept;
  for (auto f : freed) {
    auto pos = std::uniform_int_distribution<std::size_t>(0, order.size())(rng);
    order.insert(order.begin() + static_cast<std::ptrdiff_t>(pos), f);
  }
  std::vector<std::size_t> rank(n);
  for (std::size_t k = 0; k < n; ++k) rank[order[k]] = k;
  return rank;
}

}  // namespace detail

/// Anytime large neighbourhood search around the serial SGS. Runs until the
/// time limit, the iteration cap, or the trivial lower bound is reached.
/// Throws NoSolutionFound if no construction succeeded.
inline SolveResult lns_solve(const Instance& inst, const SolveParams& params) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto deadline = t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                 std::chrono::duration<double>(params.timeLimitSeconds));
  const std::size_t n = inst.num_tasks();
  const TimeTick lower = makespan_lower_bound(inst);
  detail::IncumbentStore store(t0);
  std::atomic<std::uint64_t> iterations{0};

  if (n == 0) {
    store.offer(inst, {});
    return {Schedule{}, store.log(), 0};
  }

  auto out_of_budget = [&] {
    if (std::chrono::steady_clock::now() >= deadline) return true;
    if (params.maxIterations && iterations.load() >= *params.maxIterations) return true;
    auto best = store.best_makespan();
    return best && *best <= lower;
  };

  auto worker = [&](int w) {
    std::mt19937_64 rng(detail::mix64(params.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(w)));
    std::uniform_real_distribution<double> coin(0.0, 1.0);

    // Construction: tail-first priority, then random restarts.
    bool first = true;
    while (!store.best_makespan()) {
      if (std::chrono::steady_clock::now() >= deadline) return;
      auto rank = (first && w == 0) ? detail::tail_priority(inst) : detail::random_priority(n, rng);
      first = false;
      try {
        store.offer(inst, sgs_indexed(inst, rank, rng(), params.relax));
      } catch (const ConstructionStalled&) {
      }
    }

    while (!out_of_budget()) {
      iterations.fetch_add(1);
      auto snap = store.snapshot();
      const auto& incumbent = snap->first;
      const TimeTick span = snap->second;

      std::vector<bool> destroyed(n, false);
      if (coin(rng) < 0.5) {
        const auto k = std::max<std::size_t>(1, static_cast<std::size_t>(params.destroyFraction * static_cast<double>(n)));
        auto perm = detail::random_priority(n, rng);
        for (std::size_t i = 0; i < n; ++i)
          if (perm[i] < k) destroyed[i] = true;
      } else {
        const double cut = 0.8 * static_cast<double>(span);
        bool any = false;
        for (std::size_t i = 0; i < n; ++i)
          if (static_cast<double>(incumbent[i].start + inst.tasks()[i].duration) > cut) destroyed[i] = any = true;
        if (!any) destroyed[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)] = true;
      }

      for (int attempt = 0; attempt <= params.restartStallLimit; ++attempt) {
        auto rank = detail::repair_priority(inst, incumbent, destroyed, rng);
        try {
          auto cand = sgs_indexed(inst, rank, rng(), params.relax);
          if (makespan_of(inst, cand) < span) store.offer(inst, std::move(cand));
          break;
        } catch (const ConstructionStalled&) {
          if (std::chrono::steady_clock::now() >= deadline) break;
        }
      }
    }
  };

  const int workers = std::max(1, params.workers);
  if (workers == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker, w);
  }

  auto snap = store.snapshot();
  if (!snap) throw NoSolutionFound("no feasible construction within the time limit");
  return {to_schedule(inst, snap->first), store.log(), iterations.load()};
}

}  // namespace adsp
