#include <gtest/gtest.h>

#include <random>

#include "adsp/solve.hpp"
#include "adsp/validate.hpp"
#include "support/build.hpp"
#include "support/golden.hpp"
#include "support/random_instance.hpp"
#include "support/tick_oracle.hpp"

namespace adsp {
namespace {

using K = ViolationKind;
using testing::make_instance;
using testing::task;
using testing::tech;

const RelaxFlags kAllRelaxations[] = {
    {}, {true, false, false}, {false, true, false}, {false, false, true}, {true, true, false},
    {true, false, true}, {false, true, true}, {true, true, true},
};

TEST(Makespan, Examples) {
  EXPECT_EQ(makespan(testing::golden_schedule(), testing::golden_instance()), 16);
  EXPECT_EQ(makespan(Schedule{}, testing::golden_instance()), 0);
  auto inst = make_instance({task("a", 4)}, {tech("r")});
  Schedule s;
  s.set("a", 3, {"r"});
  EXPECT_EQ(makespan(s, inst), 7);
  Schedule bad;
  bad.set("zzz", 0, {});
  EXPECT_THROW(makespan(bad, inst), UnknownReference);
}

TEST(Validate, GoldenSolutionIsFeasible) {
  const auto inst = testing::golden_instance();
  const auto sol = testing::golden_schedule();
  auto rep = validate(inst, sol);
  EXPECT_TRUE(rep.feasible()) << report_jsonl(rep);
  EXPECT_EQ(report_summary(rep, sol, inst), "feasible, makespan 16");
}

TEST(Validate, DToTechOneLosesB1) {
  auto inst = testing::golden_instance();
  auto s = testing::golden_schedule();
  s.set("D", 7, {"1"});
  EXPECT_TRUE(validate(inst, s).has(K::RequirementUnmet));
}

TEST(Validate, BAtTwoHitsUnavailabilityOnly) {
  auto inst = testing::golden_instance();
  auto s = testing::golden_schedule();
  s.set("B", 2, {"1", "3"});
  auto rep = validate(inst, s);
  EXPECT_EQ(rep.kinds(), std::set<K>{K::TechUnavailable});
  EXPECT_EQ(rep.violations.front().subject, "3");
}

TEST(Validate, GoldenMutationsMatchExpectedAndOracle) {
  for (const auto& m : testing::golden_mutations()) {
    auto rep = validate(m.instance, m.schedule);
    EXPECT_EQ(rep.kinds(), m.expected) << m.name;
    EXPECT_EQ(testing::tick_oracle_kinds(m.instance, m.schedule), m.expected) << m.name;
  }
}

TEST(Validate, MissingTaskIsUnscheduled) {
  auto s = testing::golden_schedule();
  s.erase("G");
  auto rep = validate(testing::golden_instance(), s);
  EXPECT_EQ(rep.kinds(), std::set<K>{K::Unscheduled});
}

TEST(Validate, DanglingIdsAreUnknownReference) {
  auto s = testing::golden_schedule();
  s.set("Z", 0, {"1"});
  s.set("A", 0, {"9"});
  auto rep = validate(testing::golden_instance(), s);
  EXPECT_TRUE(rep.has(K::UnknownReference));
  EXPECT_TRUE(rep.has(K::CrewSize));
}

TEST(Validate, HalfOpenWindowsTouchWithoutConflict) {
  auto inst = make_instance({task("a", 3), task("b", 2)}, {tech("r", {}, {{3, 5}})});
  Schedule s;
  s.set("a", 0, {"r"});
  s.set("b", 5, {"r"});
  EXPECT_TRUE(validate(inst, s).feasible());
  s.set("b", 4, {"r"});
  EXPECT_TRUE(validate(inst, s).has(K::TechUnavailable));
}

TEST(Validate, CapacityAndBalanceCarryTimeWitness) {
  std::vector<Location> locs{{"bay", 1, Zone::Left}};
  auto inst = make_instance({task("a", 2, 1, "bay", 800), task("b", 2, 1, "bay", 0)}, {tech("r"), tech("q")}, locs, 1000, 500);
  Schedule s;
  s.set("a", 4, {"r"});
  s.set("b", 5, {"q"});
  auto rep = validate(inst, s);
  EXPECT_EQ(rep.kinds(), (std::set<K>{K::CapacityExceeded, K::BalanceLR}));
  for (const auto& v : rep.violations) {
    ASSERT_TRUE(v.time.has_value());
    EXPECT_EQ(*v.time, v.kind == K::CapacityExceeded ? 5 : 4) << to_string(v.kind);
  }
  EXPECT_TRUE(validate(inst, s, {false, true, true}).feasible());
}

TEST(OccupancyProfile, GoldenCockpit) {
  auto p = occupancy_profile(testing::golden_instance(), testing::golden_schedule(), "Cockpit");
  for (TimeTick t = 0; t < 3; ++t) EXPECT_EQ(p.value_at(t), 0);
  for (TimeTick t = 3; t < 7; ++t) EXPECT_EQ(p.value_at(t), 2);
  for (TimeTick t = 7; t < 10; ++t) EXPECT_EQ(p.value_at(t), 1);
  EXPECT_EQ(p.value_at(10), 0);
  EXPECT_THROW(occupancy_profile(testing::golden_instance(), testing::golden_schedule(), "Hangar"), UnknownReference);
}

TEST(OccupancyProfile, EmptyAndSingle) {
  std::vector<Location> locs{{"l", 5, std::nullopt}, {"m", 5, std::nullopt}};
  auto inst = make_instance({task("a", 4, 3, "l")}, {tech("1"), tech("2"), tech("3")}, locs);
  Schedule s;
  s.set("a", 0, {"1", "2", "3"});
  EXPECT_TRUE(occupancy_profile(inst, s, "m").empty());
  auto p = occupancy_profile(inst, s, "l");
  EXPECT_EQ(p.value_at(0), 3);
  EXPECT_EQ(p.value_at(3), 3);
  EXPECT_EQ(p.value_at(4), 0);
}

TEST(BalanceProfile, GoldenLeftRight) {
  auto p = balance_profile(testing::golden_instance(), testing::golden_schedule(), Axis::LR);
  std::vector<std::pair<TimeTick, std::int64_t>> want{{2, 500}, {5, 0}, {8, -1200}, {12, 0}};
  EXPECT_EQ(p.breakpoints(), want);
  EXPECT_TRUE(balance_profile(testing::golden_instance(), testing::golden_schedule(), Axis::AF).empty());
}

TEST(BalanceProfile, SingleAftStep) {
  std::vector<Location> locs{{"tail", std::nullopt, Zone::Aft}};
  auto inst = make_instance({task("a", 2, 1, "tail", 300)}, {tech("r")}, locs);
  Schedule s;
  s.set("a", 4, {"r"});
  auto p = balance_profile(inst, s, Axis::AF);
  EXPECT_EQ(p.value_at(3), 0);
  EXPECT_EQ(p.value_at(4), 300);
  EXPECT_EQ(p.value_at(1000), 300);
  EXPECT_TRUE(balance_profile(inst, s, Axis::LR).empty());
}

Schedule random_schedule(const Instance& inst, std::mt19937_64& rng) {
  auto uni = [&](std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng); };
  Schedule s;
  const TimeTick cap = start_cap(inst);
  for (const auto& t : inst.tasks()) {
    if (uni(0, 19) == 0) continue;
    std::vector<std::string> crew;
    for (const auto& r : inst.technicians())
      if (uni(0, 1)) crew.push_back(r.id);
    if (uni(0, 29) == 0) crew.push_back("ghost");
    s.set(t.id, uni(0, cap), std::move(crew));
  }
  return s;
}

// A constructed schedule with one task moved: mostly near-feasible.
Schedule nudged_schedule(const Instance& inst, std::mt19937_64& rng, std::uint64_t seed) {
  std::vector<std::size_t> rank(inst.num_tasks());
  for (std::size_t i = 0; i < rank.size(); ++i) rank[i] = i;
  auto s = to_schedule(inst, sgs_indexed(inst, rank, seed, {true, true, true}));
  if (inst.num_tasks() == 0) return s;
  const auto& t = inst.tasks()[std::uniform_int_distribution<std::size_t>(0, inst.num_tasks() - 1)(rng)];
  auto e = *s.find(t.id);
  s.set(t.id, std::max<TimeTick>(0, e.start + std::uniform_int_distribution<TimeTick>(-3, 3)(rng)), e.techs);
  return s;
}

TEST(ValidateProperty, AgreesWithTickOracle) {
  testing::RandomSpec spec;
  spec.maxTasks = 6;
  spec.maxTechs = 4;
  int feasible = 0;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    auto inst = testing::random_instance(spec, seed);
    std::mt19937_64 rng(seed);
    for (int k = 0; k < 4; ++k) {
      auto s = k % 2 == 0 ? random_schedule(inst, rng) : nudged_schedule(inst, rng, seed);
      for (auto relax : kAllRelaxations) {
        auto rep = validate(inst, s, relax);
        ASSERT_EQ(rep.kinds(), testing::tick_oracle_kinds(inst, s, relax))
            << "seed " << seed << " k " << k << "\n" << dump_schedule(s);
        feasible += rep.feasible() ? 1 : 0;
      }
    }
  }
  EXPECT_GT(feasible, 100);
}

TEST(ValidateProperty, RelaxationOnlyRemovesViolations) {
  testing::RandomSpec spec;
  spec.maxTasks = 6;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    auto inst = testing::random_instance(spec, seed);
    std::mt19937_64 rng(seed + 99);
    auto s = seed % 2 ? random_schedule(inst, rng) : nudged_schedule(inst, rng, seed);
    const auto full = validate(inst, s).kinds();
    for (auto relax : kAllRelaxations) {
      for (auto k : validate(inst, s, relax).kinds()) ASSERT_TRUE(full.count(k)) << "seed " << seed;
    }
  }
}

TEST(ValidateProperty, FeasibleSchedulesRespectTheCriticalPath) {
  testing::RandomSpec spec;
  spec.maxTasks = 6;
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    auto inst = testing::random_instance(spec, seed);
    std::mt19937_64 rng(seed);
    auto s = nudged_schedule(inst, rng, seed);
    if (!validate(inst, s).feasible()) continue;
    ++checked;
    ASSERT_GE(makespan(s, inst), critical_path(inst)) << "seed " << seed;
  }
  EXPECT_GT(checked, 20);
}

}  // namespace
}  // namespace adsp
