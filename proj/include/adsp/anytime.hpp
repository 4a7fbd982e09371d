#pragma once

#include <cstdint>
#include <vector>

namespace adsp {

struct AnytimePoint {
  double seconds = 0.0;
  std::int64_t objective = 0;
  friend bool operator==(const AnytimePoint&, const AnytimePoint&) = default;
};

/// Incumbent history of one run: times strictly increase, objectives strictly
/// decrease. May be empty when no solution was found.
struct AnytimeLog {
  std::vector<AnytimePoint> points;

  bool empty() const { return points.empty(); }
  bool well_formed() const {
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i].seconds < 0) return false;
      if (i > 0 && (points[i].seconds <= points[i - 1].seconds || points[i].objective >= points[i - 1].objective))
        return false;
    }
    return true;
  }
};

}  // namespace adsp
