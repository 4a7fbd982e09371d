#include <gtest/gtest.h>

#include "adsp/exact.hpp"
#include "adsp/validate.hpp"
#include "support/build.hpp"
#include "support/golden.hpp"
#include "support/random_instance.hpp"

namespace adsp {
namespace {

using testing::make_instance;
using testing::task;
using testing::tech;

void expect_proven(const Instance& inst, const ExactResult& r, RelaxFlags relax = {}) {
  ASSERT_TRUE(r.proven);
  ASSERT_TRUE(r.best.has_value());
  EXPECT_TRUE(validate(inst, *r.best, relax).feasible()) << report_jsonl(validate(inst, *r.best, relax));
  EXPECT_EQ(makespan(*r.best, inst), *r.optimum);
}

TEST(Exact, GoldenOptimumIsSixteen) {
  auto inst = testing::golden_instance();
  auto r = exact_solve(inst);
  expect_proven(inst, r);
  EXPECT_EQ(r.optimum, 16);
}

TEST(Exact, SingleTask) {
  auto inst = make_instance({task("a", 5)}, {tech("r")});
  auto r = exact_solve(inst);
  expect_proven(inst, r);
  EXPECT_EQ(r.optimum, 5);
}

TEST(Exact, EmptyInstance) {
  auto r = exact_solve(make_instance({}, {tech("r")}));
  EXPECT_TRUE(r.proven);
  EXPECT_EQ(r.optimum, 0);
}

TEST(Exact, OpposingHeavyTasksMustStartTogether) {
  std::vector<Location> locs{{"left", std::nullopt, Zone::Left}, {"right", std::nullopt, Zone::Right}};
  auto inst = make_instance({task("l", 2, 1, "left", 600), task("r", 3, 1, "right", 600)}, {tech("x"), tech("y")}, locs,
                            1000, 500);
  auto r = exact_solve(inst);
  expect_proven(inst, r);
  EXPECT_EQ(r.best->find("l")->start, r.best->find("r")->start);
  auto brute = enumerate_feasible(inst, 8);
  ASSERT_TRUE(brute.minMakespan.has_value());
  EXPECT_EQ(r.optimum, brute.minMakespan);
  EXPECT_EQ(r.optimum, 3);
  // Without the band they still overlap; two technicians, no precedence.
  EXPECT_EQ(exact_solve(inst, std::nullopt, {false, false, true}).optimum, 3);
}

TEST(Exact, UnbalanceableIsExhaustedWithoutSchedule) {
  std::vector<Location> locs{{"left", std::nullopt, Zone::Left}};
  auto inst = make_instance({task("a", 1, 1, "left", 600)}, {tech("r")}, locs, 1000, 500);
  auto r = exact_solve(inst);
  EXPECT_TRUE(r.exhausted);
  EXPECT_FALSE(r.best.has_value());
  EXPECT_FALSE(r.proven);
}

TEST(Exact, UpperBoundBelowOptimumFindsNothing) {
  auto r = exact_solve(testing::golden_instance(), 15);
  EXPECT_TRUE(r.exhausted);
  EXPECT_FALSE(r.best.has_value());
  auto at = exact_solve(testing::golden_instance(), 16);
  EXPECT_EQ(at.optimum, 16);
}

TEST(Exact, NodeLimitStopsUnproven) {
  auto r = exact_solve(testing::golden_instance(), std::nullopt, {}, 1);
  EXPECT_FALSE(r.exhausted);
  EXPECT_FALSE(r.proven);
  EXPECT_LE(r.nodes, 2u);
}

TEST(Enumerate, SingleTaskStarts) {
  auto inst = make_instance({task("a", 2)}, {tech("r")});
  EXPECT_EQ(enumerate_feasible(inst, 4).count, 3u);
  auto blocked = make_instance({task("a", 2)}, {tech("r", {}, {{0, 1}})});
  EXPECT_EQ(enumerate_feasible(blocked, 4).count, 2u);
}

TEST(Enumerate, TwoUnitTasksOneTechnician) {
  auto inst = make_instance({task("a", 1), task("b", 1)}, {tech("r")});
  auto e = enumerate_feasible(inst, 2);
  EXPECT_EQ(e.count, 2u);
  EXPECT_EQ(e.minMakespan, 2);
}

TEST(Enumerate, NothingFitsGivesZero) {
  auto inst = make_instance({task("a", 5)}, {tech("r")});
  auto e = enumerate_feasible(inst, 4);
  EXPECT_EQ(e.count, 0u);
  EXPECT_FALSE(e.minMakespan.has_value());
}

TEST(Enumerate, RefusesLargeInputs) {
  EXPECT_THROW(enumerate_feasible(testing::golden_instance(), 23), ScaleExceeded);
  auto inst = make_instance({task("a", 1)}, {tech("r")});
  EXPECT_THROW(enumerate_feasible(inst, 41), ScaleExceeded);
}

// Exact optimum equals the brute-force minimum; relaxing never raises it.
TEST(ExactProperty, AgreesWithEnumerationAndRelaxesMonotonically) {
  const RelaxFlags variants[] = {{true, false, false}, {false, true, false}, {false, false, true}, {true, true, true}};
  testing::RandomSpec spec;
  spec.maxTasks = 4;
  spec.maxTechs = 3;
  spec.maxDuration = 4;
  spec.maxStartCap = 16;
  int feasible = 0;
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    auto inst = testing::random_instance(spec, seed);
    const TimeTick cap = start_cap(inst);
    if (cap > 16) continue;
    auto r = exact_solve(inst);
    auto brute = enumerate_feasible(inst, cap);
    ASSERT_TRUE(r.exhausted) << "seed " << seed;
    ASSERT_EQ(r.optimum, brute.minMakespan) << "seed " << seed;
    if (!r.best) continue;
    ++feasible;
    expect_proven(inst, r);
    for (auto relax : variants) {
      auto rr = exact_solve(inst, std::nullopt, relax);
      ASSERT_TRUE(rr.proven) << "seed " << seed;
      ASSERT_LE(*rr.optimum, *r.optimum) << "seed " << seed;
      ASSERT_TRUE(validate(inst, *rr.best, relax).feasible()) << "seed " << seed;
    }
  }
  EXPECT_GT(feasible, 60);
}

}  // namespace
}  // namespace adsp
