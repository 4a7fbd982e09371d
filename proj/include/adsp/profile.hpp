#pragma once

#include <algorithm>
#include <iterator>
#include <map>
#include <utility>
#include <vector>

#include "adsp/types.hpp"

namespace adsp {

/// Piecewise-constant function of time built from signed deltas.
///
/// The value at t is the sum of every delta whose time is <= t; before the
/// first delta the value is 0. Zero deltas are dropped so two profiles that
/// describe the same function compare equal.
template <typename Value = std::int64_t>
class StepProfile {
 public:
  using value_type = Value;

  StepProfile() = default;

  /// Adds `height` on [start, end).
  StepProfile& add_pulse(TimeTick start, TimeTick end, Value height) {
    if (start >= end) throw DegenerateInterval("pulse requires start < end");
    add_delta(start, height);
    add_delta(end, -height);
    return *this;
  }

  /// Adds a permanent change of `height` from `time` on (stepAtStart / step).
  StepProfile& add_step(TimeTick time, Value height) {
    add_delta(time, height);
    return *this;
  }

  Value value_at(TimeTick t) const {
    Value v{};
    for (auto it = deltas_.begin(); it != deltas_.end() && it->first <= t; ++it) v += it->second;
    return v;
  }

  /// Exact (min, max) of the function over [begin, end).
  std::pair<Value, Value> extrema(TimeTick begin, TimeTick end) const {
    if (begin >= end) throw DegenerateInterval("window requires start < end");
    Value v = value_at(begin);
    Value lo = v, hi = v;
    for (auto it = deltas_.upper_bound(begin); it != deltas_.end() && it->first < end; ++it) {
      v += it->second;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return {lo, hi};
  }

  /// (time, value from that time on) at every change point.
  std::vector<std::pair<TimeTick, Value>> breakpoints() const {
    std::vector<std::pair<TimeTick, Value>> out;
    out.reserve(deltas_.size());
    Value v{};
    for (const auto& [t, d] : deltas_) {
      v += d;
      out.emplace_back(t, v);
    }
    return out;
  }

  const std::map<TimeTick, Value>& deltas() const { return deltas_; }
  bool empty() const { return deltas_.empty(); }

  friend bool operator==(const StepProfile&, const StepProfile&) = default;

 private:
  void add_delta(TimeTick t, Value d) {
    if (d == Value{}) return;
    auto [it, inserted] = deltas_.try_emplace(t, d);
    if (!inserted) {
      it->second += d;
      if (it->second == Value{}) deltas_.erase(it);
    }
  }

  std::map<TimeTick, Value> deltas_;
};

using Profile = StepProfile<std::int64_t>;

template <typename V>
StepProfile<V> profile_pulse(StepProfile<V> p, TimeTick start, TimeTick end, V height) {
  p.add_pulse(start, end, height);
  return p;
}

template <typename V>
StepProfile<V> profile_step_at(StepProfile<V> p, TimeTick time, V height) {
  p.add_step(time, height);
  return p;
}

template <typename V>
std::pair<V, V> profile_extrema(const StepProfile<V>& p, TimeTick begin, TimeTick end) {
  return p.extrema(begin, end);
}

}  // namespace adsp
