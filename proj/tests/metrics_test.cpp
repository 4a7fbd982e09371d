#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "adsp/metrics.hpp"

namespace adsp {
namespace {

AnytimeLog log_of(std::vector<AnytimePoint> pts) { return AnytimeLog{std::move(pts)}; }

TEST(PrimalGap, Examples) {
  EXPECT_DOUBLE_EQ(primal_gap(64, 64), 0.0);
  EXPECT_DOUBLE_EQ(primal_gap(64, 128), 0.5);
  EXPECT_DOUBLE_EQ(primal_gap(-5, 5), 1.0);
  EXPECT_DOUBLE_EQ(primal_gap(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(primal_gap(0, 7), 1.0);
}

TEST(GapCurve, EmptyLogIsOne) {
  auto c = gap_curve(log_of({}), 64);
  EXPECT_DOUBLE_EQ(c.at(0), 1.0);
  EXPECT_DOUBLE_EQ(c.at(1e6), 1.0);
}

TEST(GapCurve, TwoIncumbents) {
  auto c = gap_curve(log_of({{10, 80}, {20, 64}}), 64);
  EXPECT_DOUBLE_EQ(c.at(0), 1.0);
  EXPECT_DOUBLE_EQ(c.at(9.999), 1.0);
  EXPECT_DOUBLE_EQ(c.at(10), 0.2);
  EXPECT_DOUBLE_EQ(c.at(19.5), 0.2);
  EXPECT_DOUBLE_EQ(c.at(20), 0.0);
  EXPECT_DOUBLE_EQ(c.at(5000), 0.0);
}

TEST(GapCurve, SolvedAtZeroIsZero) {
  auto c = gap_curve(log_of({{0, 64}}), 64);
  ASSERT_EQ(c.breakpoints.size(), 1u);
  EXPECT_DOUBLE_EQ(c.at(0), 0.0);
  EXPECT_DOUBLE_EQ(c.at(100), 0.0);
}

TEST(PrimalIntegral, Examples) {
  EXPECT_NEAR(primal_integral(log_of({{10, 80}, {20, 64}}), 64, 30), 12.0, 1e-12);
  EXPECT_DOUBLE_EQ(primal_integral(log_of({}), 64, 3600), 3600.0);
  EXPECT_DOUBLE_EQ(primal_integral(log_of({{0, 64}}), 64, 777), 0.0);
}

TEST(PrimalIntegral, IgnoresPointsAfterHorizon) {
  EXPECT_NEAR(primal_integral(log_of({{10, 80}, {20, 64}}), 64, 15), 10.0 + 5 * 0.2, 1e-12);
  EXPECT_NEAR(primal_integral(log_of({{10, 80}}), 64, 10), 10.0, 1e-12);
}

TEST(PrimalIntegral, MalformedLogThrows) {
  EXPECT_THROW(primal_integral(log_of({{5, 70}, {5, 60}}), 64, 30), MalformedLog);
  EXPECT_THROW(primal_integral(log_of({{5, 70}, {6, 70}}), 64, 30), MalformedLog);
  EXPECT_THROW(gap_curve(log_of({{-1, 70}}), 64), MalformedLog);
}

TEST(Format3, ThreeDecimals) {
  EXPECT_EQ(format3(3600), "3600.000");
  EXPECT_EQ(format3(179.6614), "179.661");
  EXPECT_EQ(format3(0), "0.000");
}

TEST(MetricsReport, Fields) {
  auto j = metrics_report(log_of({{1.5, 80}, {20, 64}}), 64, 30);
  EXPECT_EQ(j["bestKnown"], 64);
  EXPECT_DOUBLE_EQ(j["P"].get<double>(), 1.5 + 18.5 * 0.2);
  EXPECT_EQ(j["finalObjective"], 64);
  EXPECT_DOUBLE_EQ(j["firstSolutionTime"].get<double>(), 1.5);
  auto empty = metrics_report(log_of({}), 64, 3600);
  EXPECT_TRUE(empty["finalObjective"].is_null());
  EXPECT_TRUE(empty["firstSolutionTime"].is_null());
  EXPECT_DOUBLE_EQ(empty["P"].get<double>(), 3600.0);
}

AnytimeLog random_log(std::mt19937_64& rng, std::int64_t floor) {
  AnytimeLog log;
  double t = std::uniform_real_distribution<double>(0, 5)(rng);
  std::int64_t obj = floor + std::uniform_int_distribution<std::int64_t>(0, 200)(rng);
  const int n = std::uniform_int_distribution<int>(0, 8)(rng);
  for (int k = 0; k < n && obj >= floor; ++k) {
    log.points.push_back({t, obj});
    t += std::uniform_real_distribution<double>(0.01, 20)(rng);
    obj -= std::uniform_int_distribution<std::int64_t>(1, 30)(rng);
  }
  return log;
}

TEST(MetricsProperty, GapIsBoundedAndSymmetric) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::int64_t> v(-1000, 1000);
  for (int k = 0; k < 20000; ++k) {
    auto a = v(rng), b = v(rng);
    const double g = primal_gap(a, b);
    ASSERT_GE(g, 0.0);
    ASSERT_LE(g, 1.0);
    ASSERT_DOUBLE_EQ(g, primal_gap(b, a)) << a << " " << b;
  }
}

TEST(MetricsProperty, IntegralIsMonotoneAndAdditive) {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 2000; ++k) {
    const std::int64_t best = std::uniform_int_distribution<std::int64_t>(1, 100)(rng);
    auto log = random_log(rng, best);
    const double T1 = std::uniform_real_distribution<double>(0, 100)(rng);
    const double T2 = T1 + std::uniform_real_distribution<double>(0, 100)(rng);
    const double p1 = primal_integral(log, best, T1), p2 = primal_integral(log, best, T2);
    ASSERT_LE(p1, p2 + 1e-9);
    // Middle piece by midpoint quadrature on the step function.
    double mid = 0;
    const auto curve = gap_curve(log, best);
    std::vector<double> cuts{T1, T2};
    for (const auto& [t, g] : curve.breakpoints)
      if (t > T1 && t < T2) cuts.push_back(t);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) mid += curve.at((cuts[c] + cuts[c + 1]) / 2) * (cuts[c + 1] - cuts[c]);
    ASSERT_NEAR(p1 + mid, p2, 1e-7);
  }
}

TEST(MetricsProperty, ImprovingIncumbentNeverRaisesIntegral) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 2000; ++k) {
    const std::int64_t best = 10;
    auto log = random_log(rng, best + 1);
    if (log.empty()) continue;
    auto better = log;
    const double ts = log.points.back().seconds + std::uniform_real_distribution<double>(0.01, 10)(rng);
    better.points.push_back({ts, std::uniform_int_distribution<std::int64_t>(best, log.points.back().objective - 1)(rng)});
    for (double T : {ts, ts + 1, ts + 50, ts + 1000}) ASSERT_LE(primal_integral(better, best, T), primal_integral(log, best, T) + 1e-9);
  }
}

}  // namespace
}  // namespace adsp
