#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "adsp/model.hpp"
#include "adsp/solve.hpp"
#include "adsp/validate.hpp"

namespace adsp {

struct ExactResult {
  std::optional<Schedule> best;
  std::optional<TimeTick> optimum;
  bool proven = false;
  /// Search tree fully explored. Without `best` this means no schedule beats
  /// the bound (or none exists at all).
  bool exhausted = false;
  std::uint64_t nodes = 0;
};

namespace detail {

class ExactSearch {
 public:
  ExactSearch(const Instance& inst, RelaxFlags relax, std::uint64_t node_limit)
      : inst_(inst),
        relax_(relax),
        node_limit_(node_limit),
        n_(inst.num_tasks()),
        r_(inst.num_techs()),
        start_(n_, -1),
        crew_(n_),
        tech_busy_(r_),
        tail_(n_, 0) {
    const auto& topo = inst.topological_order();
    for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
      TimeTick best = 0;
      for (auto s : inst.successors(*it)) best = std::max(best, tail_[s]);
      tail_[*it] = best + inst.tasks()[*it].duration;
    }
    // Interchangeable technicians share skills and unavailability.
    std::map<std::pair<std::vector<bool>, std::vector<std::pair<TimeTick, TimeTick>>>, std::size_t> classes;
    tech_class_.resize(r_);
    for (std::size_t j = 0; j < r_; ++j) {
      std::vector<bool> skills(inst.skills().size());
      for (std::size_t q = 0; q < skills.size(); ++q) skills[q] = inst.tech_has_skill(j, q);
      std::vector<std::pair<TimeTick, TimeTick>> unav;
      for (const auto& w : inst.merged_unavailability(j)) {
        unav.emplace_back(w.start, w.end);
        unav_ends_.push_back(w.end);
      }
      tech_class_[j] = classes.try_emplace({skills, unav}, classes.size()).first->second;
    }
    std::sort(unav_ends_.begin(), unav_ends_.end());
    unav_ends_.erase(std::unique(unav_ends_.begin(), unav_ends_.end()), unav_ends_.end());
    bool massy = false;
    for (std::size_t i = 0; i < n_; ++i)
      massy = massy || inst.signed_mass(i, Axis::AF) != 0 || inst.signed_mass(i, Axis::LR) != 0;
    every_tick_ = massy && !relax.dropBalance && n_ <= 6;
  }

  /// Looks for schedules with makespan < bound.
  void run(TimeTick bound, std::optional<std::vector<Placement>> incumbent) {
    ub_ = bound;
    if (incumbent) {
      best_ = std::move(incumbent);
      ub_ = makespan_of(inst_, *best_);
    }
    exhausted_ = dfs(0, 0, -1, 0);
  }

  const std::optional<std::vector<Placement>>& best() const { return best_; }
  bool exhausted() const { return exhausted_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  // Returns false once the node limit is hit.
  bool dfs(std::size_t placed, TimeTick now, std::ptrdiff_t last_index, TimeTick span) {
    if (placed == n_) {
      if (!balance_ok()) return true;
      if (span < ub_) {
        ub_ = span;
        best_ = snapshot();
      }
      return true;
    }
    if (lower_bound(now, span) >= ub_) return true;

    std::vector<TimeTick> cands = candidates(now);
    for (std::size_t i = 0; i < n_; ++i) {
      if (start_[i] >= 0) continue;
      const auto& t = inst_.tasks()[i];
      TimeTick est = 0;
      bool ready = true;
      for (auto p : inst_.predecessors(i)) {
        if (start_[p] < 0) {
          ready = false;
          break;
        }
        est = std::max(est, start_[p] + inst_.tasks()[p].duration);
      }
      if (!ready) continue;
      if (est + tail_[i] >= ub_) continue;
      for (TimeTick s : cands) {
        if (s < est) continue;
        if (s == now && static_cast<std::ptrdiff_t>(i) < last_index) continue;
        if (s + tail_[i] >= ub_) break;
        // Balance is final at `now` once time moves past it.
        if (s > now && !balance_settled_ok()) break;
        if (!capacity_ok(i, s)) continue;
        std::vector<std::size_t> free;
        for (std::size_t j = 0; j < r_; ++j)
          if (tech_free(j, s, s + t.duration)) free.push_back(j);
        if (static_cast<int>(free.size()) < t.crew) continue;
        bool keep_going = true;
        for_each_crew(i, s, free, [&](const std::vector<std::size_t>& crew) {
          if (++nodes_ > node_limit_) return keep_going = false;
          place(i, s, crew);
          if (!dfs(placed + 1, s, static_cast<std::ptrdiff_t>(i), std::max(span, s + t.duration))) keep_going = false;
          unplace(i, crew);
          return keep_going;
        });
        if (!keep_going) return false;
      }
    }
    return true;
  }

  std::vector<TimeTick> candidates(TimeTick now) const {
    std::vector<TimeTick> c;
    if (every_tick_) {
      for (TimeTick s = now; s < ub_; ++s) c.push_back(s);
      return c;
    }
    c.push_back(now);
    for (std::size_t i = 0; i < n_; ++i)
      if (start_[i] >= 0 && start_[i] + inst_.tasks()[i].duration > now) c.push_back(start_[i] + inst_.tasks()[i].duration);
    for (auto e : unav_ends_)
      if (e > now) c.push_back(e);
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return c;
  }

  TimeTick lower_bound(TimeTick now, TimeTick span) const {
    TimeTick lb = span;
    TimeTick remaining = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (start_[i] >= 0) continue;
      remaining += inst_.tasks()[i].duration * inst_.tasks()[i].crew;
      TimeTick est = now;
      for (auto p : inst_.predecessors(i))
        if (start_[p] >= 0) est = std::max(est, start_[p] + inst_.tasks()[p].duration);
      lb = std::max(lb, est + tail_[i]);
    }
    if (remaining > 0 && r_ > 0 && lb < ub_) {
      // Smallest T whose technician free time on [now, T) can hold the remaining work.
      const auto r = static_cast<TimeTick>(r_);
      TimeTick horizon_end = std::max(lb, now + (remaining + r - 1) / r);
      for (int guard = 0; guard < 64 && horizon_end < ub_; ++guard) {
        TimeTick free = 0;
        for (std::size_t j = 0; j < r_; ++j) free += free_time(j, now, horizon_end);
        if (free >= remaining) break;
        horizon_end += (remaining - free + r - 1) / r;
      }
      lb = std::max(lb, horizon_end);
    }
    return lb;
  }

  TimeTick free_time(std::size_t j, TimeTick a, TimeTick b) const {
    TimeTick busy = 0;
    auto clip = [&](TimeTick s, TimeTick e) { busy += std::max<TimeTick>(0, std::min(e, b) - std::max(s, a)); };
    for (const auto& [s, e] : tech_busy_[j]) clip(s, e);
    for (const auto& w : inst_.merged_unavailability(j)) clip(w.start, w.end);
    return std::max<TimeTick>(0, (b - a) - busy);
  }

  bool tech_free(std::size_t j, TimeTick s, TimeTick e) const {
    for (const auto& [a, b] : tech_busy_[j])
      if (a < e && s < b) return false;
    for (const auto& w : inst_.merged_unavailability(j))
      if (w.overlaps(s, e)) return false;
    return true;
  }

  bool tech_idle_from(std::size_t j, TimeTick s) const {
    for (const auto& iv : tech_busy_[j])
      if (iv.second > s) return false;
    return true;
  }

  /// Occupancy only needs checking at `s`: every placed task started at or before it.
  bool capacity_ok(std::size_t i, TimeTick s) const {
    if (relax_.dropCapacity) return true;
    auto cap = inst_.task_capacity(i);
    if (!cap) return true;
    auto loc = inst_.task_location(i);
    int occ = inst_.tasks()[i].crew;
    for (std::size_t k = 0; k < n_; ++k)
      if (start_[k] >= 0 && inst_.task_location(k) == loc && start_[k] <= s && s < start_[k] + inst_.tasks()[k].duration)
        occ += inst_.tasks()[k].crew;
    return occ <= *cap;
  }

  bool balance_settled_ok() const {
    if (relax_.dropBalance) return true;
    return std::abs(bal_[0]) <= inst_.balance_af() && std::abs(bal_[1]) <= inst_.balance_lr();
  }
  bool balance_ok() const { return balance_settled_ok(); }

  template <typename F>
  void for_each_crew(std::size_t i, TimeTick s, const std::vector<std::size_t>& free, F&& visit) {
    const auto k = static_cast<std::size_t>(inst_.tasks()[i].crew);
    // Within a class, idle technicians are interchangeable: only the lowest-index prefix may be used.
    std::vector<bool> idle(r_, false);
    for (auto j : free) idle[j] = tech_idle_from(j, s);
    std::vector<std::size_t> crew;
    crew.reserve(k);
    std::vector<bool> chosen(free.size(), false);
    bool go = true;
    auto rec = [&](auto&& self, std::size_t from) -> void {
      if (!go) return;
      if (crew.size() == k) {
        if (meets_requirements(i, crew)) go = visit(crew);
        return;
      }
      for (std::size_t x = from; x + (k - crew.size()) <= free.size() && go; ++x) {
        auto j = free[x];
        if (idle[j]) {
          bool skipped_twin = false;
          for (std::size_t y = 0; y < x; ++y)
            if (!chosen[y] && idle[free[y]] && tech_class_[free[y]] == tech_class_[j]) skipped_twin = true;
          if (skipped_twin) continue;
        }
        crew.push_back(j);
        chosen[x] = true;
        self(self, x + 1);
        chosen[x] = false;
        crew.pop_back();
      }
    };
    rec(rec, 0);
  }

  bool meets_requirements(std::size_t i, const std::vector<std::size_t>& crew) const {
    if (relax_.dropRequirements) return true;
    for (const auto& [skill, count] : inst_.task_requirements(i)) {
      int have = 0;
      for (auto j : crew) have += inst_.tech_has_skill(j, skill) ? 1 : 0;
      if (have < count) return false;
    }
    return true;
  }

  void place(std::size_t i, TimeTick s, const std::vector<std::size_t>& crew) {
    start_[i] = s;
    crew_[i] = crew;
    for (auto j : crew) tech_busy_[j].emplace_back(s, s + inst_.tasks()[i].duration);
    bal_[0] += inst_.signed_mass(i, Axis::AF);
    bal_[1] += inst_.signed_mass(i, Axis::LR);
  }

  void unplace(std::size_t i, const std::vector<std::size_t>& crew) {
    for (auto j : crew) tech_busy_[j].pop_back();
    bal_[0] -= inst_.signed_mass(i, Axis::AF);
    bal_[1] -= inst_.signed_mass(i, Axis::LR);
    start_[i] = -1;
    crew_[i].clear();
  }

  std::vector<Placement> snapshot() const {
    std::vector<Placement> out(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = Placement{start_[i], crew_[i]};
    return out;
  }

  const Instance& inst_;
  RelaxFlags relax_;
  std::uint64_t node_limit_;
  std::size_t n_, r_;
  std::vector<TimeTick> start_;
  std::vector<std::vector<std::size_t>> crew_;
  std::vector<std::vector<std::pair<TimeTick, TimeTick>>> tech_busy_;
  std::vector<TimeTick> tail_;
  std::vector<std::size_t> tech_class_;
  std::vector<TimeTick> unav_ends_;
  bool every_tick_ = false;
  MassKg bal_[2] = {0, 0};
  TimeTick ub_ = 0;
  std::optional<std::vector<Placement>> best_;
  bool exhausted_ = false;
  std::uint64_t nodes_ = 0;
};

}  // namespace detail

/// Depth-first branch and bound. Tasks are placed in order of start time
/// (ties by index). A start is either the current time, the end of a placed
/// task or the end of an unavailability: shifting any other start group one
/// tick left keeps every constraint satisfied, so some optimum is reachable.
/// With `upperBound`, only schedules of makespan <= upperBound are sought.
inline ExactResult exact_solve(const Instance& inst, std::optional<TimeTick> upperBound = std::nullopt,
                               RelaxFlags relax = {},
                               std::uint64_t nodeLimit = std::numeric_limits<std::uint64_t>::max()) {
  ExactResult res;
  if (inst.num_tasks() == 0) {
    res.best = Schedule{};
    res.optimum = 0;
    res.proven = res.exhausted = true;
    return res;
  }
  TimeTick bound = start_cap(inst) + 1;
  if (upperBound) bound = std::min(bound, *upperBound + 1);

  // Seed with a few constructions; they only tighten the bound.
  std::optional<std::vector<Placement>> seed;
  auto rank = detail::tail_priority(inst);
  for (std::uint64_t k = 0; k < 4; ++k) {
    try {
      auto p = sgs_indexed(inst, rank, k, relax);
      if (makespan_of(inst, p) < bound && (!seed || makespan_of(inst, p) < makespan_of(inst, *seed))) seed = std::move(p);
    } catch (const ConstructionStalled&) {
    }
    std::mt19937_64 rng(k);
    rank = detail::random_priority(inst.num_tasks(), rng);
  }

  detail::ExactSearch search(inst, relax, nodeLimit);
  search.run(bound, std::move(seed));
  res.nodes = search.nodes();
  res.exhausted = search.exhausted();
  if (search.best()) {
    res.best = to_schedule(inst, *search.best());
    res.optimum = makespan_of(inst, *search.best());
    res.proven = res.exhausted;
  }
  return res;
}

struct EnumerationResult {
  std::uint64_t count = 0;
  std::optional<TimeTick> minMakespan;
};

/// Brute force over every start tick in [0, horizonCap - d] and every crew
/// of the right size, using per-tick resource arrays. Counts the assignments
/// the validator accepts and records their smallest makespan.
inline EnumerationResult enumerate_feasible(const Instance& inst, TimeTick horizonCap, RelaxFlags relax = {}) {
  const std::size_t n = inst.num_tasks();
  const std::size_t r = inst.num_techs();
  if (n > 5 || horizonCap > 40 || r > 16) throw ScaleExceeded("enumeration limited to 5 tasks, 16 technicians, 40 ticks");
  const auto H = static_cast<std::size_t>(std::max<TimeTick>(horizonCap, 0));

  std::vector<std::uint32_t> unav(H, 0), busy(H, 0);
  for (std::size_t j = 0; j < r; ++j)
    for (const auto& w : inst.merged_unavailability(j))
      for (TimeTick t = std::max<TimeTick>(w.start, 0); t < std::min<TimeTick>(w.end, horizonCap); ++t)
        unav[static_cast<std::size_t>(t)] |= 1u << j;
  std::vector<std::vector<int>> occ(inst.locations().size(), std::vector<int>(H, 0));
  std::vector<TimeTick> start(n, -1);
  EnumerationResult res;

  auto requirements_ok = [&](std::size_t i, std::uint32_t mask) {
    if (relax.dropRequirements) return true;
    for (const auto& [skill, count] : inst.task_requirements(i)) {
      int have = 0;
      for (std::size_t j = 0; j < r; ++j)
        if ((mask >> j) & 1u) have += inst.tech_has_skill(j, skill) ? 1 : 0;
      if (have < count) return false;
    }
    return true;
  };

  auto balance_ok = [&] {
    if (relax.dropBalance) return true;
    for (Axis axis : {Axis::AF, Axis::LR}) {
      const MassKg limit = inst.balance_limit(axis);
      for (std::size_t t = 0; t < H; ++t) {
        MassKg v = 0;
        for (std::size_t i = 0; i < n; ++i)
          if (start[i] <= static_cast<TimeTick>(t)) v += inst.signed_mass(i, axis);
        if (v > limit || v < -limit) return false;
      }
    }
    return true;
  };

  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      if (!balance_ok()) return;
      ++res.count;
      TimeTick ms = 0;
      for (std::size_t k = 0; k < n; ++k) ms = std::max(ms, start[k] + inst.tasks()[k].duration);
      if (!res.minMakespan || ms < *res.minMakespan) res.minMakespan = ms;
      return;
    }
    const auto& t = inst.tasks()[i];
    auto loc = inst.task_location(i);
    auto cap = inst.task_capacity(i);
    for (TimeTick s = 0; s + t.duration <= horizonCap; ++s) {
      bool prec = true;
      for (auto p : inst.predecessors(i))
        if (start[p] >= 0 && start[p] + inst.tasks()[p].duration > s) prec = false;
      for (auto q : inst.successors(i))
        if (start[q] >= 0 && s + t.duration > start[q]) prec = false;
      if (!prec) continue;
      std::uint32_t blocked = 0;
      bool cap_ok = true;
      for (TimeTick u = s; u < s + t.duration; ++u) {
        const auto k = static_cast<std::size_t>(u);
        blocked |= busy[k] | unav[k];
        if (cap && !relax.dropCapacity && occ[*loc][k] + t.crew > *cap) cap_ok = false;
      }
      if (!cap_ok) continue;
      const std::uint32_t free = ~blocked & ((1u << r) - 1);
      // All subsets of the free technicians with exactly `crew` members.
      for (std::uint32_t sub = free;; sub = (sub - 1) & free) {
        if (std::popcount(sub) == t.crew && requirements_ok(i, sub)) {
          for (TimeTick u = s; u < s + t.duration; ++u) {
            busy[static_cast<std::size_t>(u)] |= sub;
            if (loc) occ[*loc][static_cast<std::size_t>(u)] += t.crew;
          }
          start[i] = s;
          self(self, i + 1);
          start[i] = -1;
          for (TimeTick u = s; u < s + t.duration; ++u) {
            busy[static_cast<std::size_t>(u)] &= ~sub;
            if (loc) occ[*loc][static_cast<std::size_t>(u)] -= t.crew;
          }
        }
        if (sub == 0) break;
      }
    }
  };
  rec(rec, 0);
  return res;
}

}  // namespace adsp
