#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "adsp/anytime.hpp"
#include "adsp/types.hpp"

namespace adsp {

/// Normalized distance between an objective and the best known one.
inline double primal_gap(std::int64_t bestKnown, std::int64_t objective) {
  if (bestKnown == 0 && objective == 0) return 0.0;
  if ((bestKnown < 0 && objective > 0) || (bestKnown > 0 && objective < 0)) return 1.0;
  const double a = static_cast<double>(bestKnown), b = static_cast<double>(objective);
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

struct GapCurve {
  /// (time, gap from that time on). The first point is always at time 0.
  std::vector<std::pair<double, double>> breakpoints;

  double at(double t) const {
    double g = 1.0;
    for (const auto& [time, gap] : breakpoints) {
      if (time > t) break;
      g = gap;
    }
    return g;
  }
};

inline void require_well_formed(const AnytimeLog& log) {
  if (!log.well_formed())
    throw MalformedLog("anytime log must have increasing non-negative times and decreasing objectives");
}

inline GapCurve gap_curve(const AnytimeLog& log, std::int64_t bestKnown) {
  require_well_formed(log);
  GapCurve c;
  if (log.points.empty() || log.points.front().seconds > 0) c.breakpoints.emplace_back(0.0, 1.0);
  for (const auto& p : log.points) c.breakpoints.emplace_back(p.seconds, primal_gap(bestKnown, p.objective));
  return c;
}

/// Area under the gap curve on [0, T].
inline double primal_integral(const AnytimeLog& log, std::int64_t bestKnown, double T) {
  require_well_formed(log);
  double area = 0.0;
  double prev_t = 0.0;
  double prev_gap = 1.0;
  for (const auto& p : log.points) {
    if (p.seconds >= T) break;
    area += prev_gap * (p.seconds - prev_t);
    prev_t = p.seconds;
    prev_gap = primal_gap(bestKnown, p.objective);
  }
  area += prev_gap * (T - prev_t);
  return area;
}

inline std::string format3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

inline nlohmann::ordered_json metrics_report(const AnytimeLog& log, std::int64_t bestKnown, double T) {
  nlohmann::ordered_json j;
  j["bestKnown"] = bestKnown;
  // Rounded to three decimals, the precision of published tables.
  j["P"] = std::round(primal_integral(log, bestKnown, T) * 1000.0) / 1000.0;
  j["finalObjective"] = log.points.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(log.points.back().objective);
  j["firstSolutionTime"] =
      log.points.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(log.points.front().seconds);
  return j;
}

}  // namespace adsp
