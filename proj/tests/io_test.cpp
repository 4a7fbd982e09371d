#include <gtest/gtest.h>

#include "adsp/io.hpp"
#include "support/golden.hpp"
#include "support/random_instance.hpp"

namespace adsp {
namespace {

TEST(LoadInstance, Golden) {
  auto inst = testing::golden_instance();
  EXPECT_EQ(inst.name(), "example");
  EXPECT_EQ(inst.num_tasks(), 8u);
  EXPECT_EQ(inst.num_techs(), 4u);
  EXPECT_EQ(inst.locations().size(), 3u);
  EXPECT_EQ(inst.balance_lr(), 1500);
  const auto& cockpit = inst.locations()[*inst.location_index("Cockpit")];
  EXPECT_EQ(cockpit.capacity, 2);
  EXPECT_FALSE(cockpit.zone.has_value());
  EXPECT_FALSE(inst.locations()[*inst.location_index("LeftWing")].capacity.has_value());
  EXPECT_EQ(inst.locations()[*inst.location_index("RightWing")].zone, Zone::Right);
  std::vector<Window> w{{12, 23}};
  EXPECT_EQ(inst.technicians()[1].unavailable, w);
}

TEST(LoadInstance, MalformedJsonIsParseError) {
  EXPECT_THROW(load_instance("{ not json"), ParseError);
  EXPECT_THROW(load_instance(R"({"name": "x"})"), ParseError);
  EXPECT_THROW(load_instance(R"({"name": "x", "balanceAF": 1, "balanceLR": 1, "locations": [], "technicians": [],
                                 "tasks": [{"id": "a", "duration": "long"}]})"),
               ParseError);
}

TEST(LoadInstance, DanglingPrecedenceIsValidationError) {
  const char* doc = R"({"name": "x", "balanceAF": 10, "balanceLR": 10, "locations": [], "technicians": [],
    "tasks": [{"id": "X", "duration": 1, "location": null, "crew": 1, "mass": 0, "precedences": ["Y"], "requirements": []}]})";
  EXPECT_THROW(load_instance(doc), ValidationError);
}

TEST(LoadInstance, UnknownZoneIsParseError) {
  const char* doc = R"({"name": "x", "balanceAF": 10, "balanceLR": 10,
    "locations": [{"id": "l", "capacity": 1, "zone": "Up"}], "technicians": [], "tasks": []})";
  EXPECT_THROW(load_instance(doc), ParseError);
}

TEST(RoundTrip, InstanceSurvivesDumpAndLoad) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto inst = testing::random_instance({}, seed);
    auto text = dump_instance(inst);
    ASSERT_EQ(dump_instance(load_instance(text)), text) << "seed " << seed;
  }
  auto golden = testing::golden_instance();
  EXPECT_EQ(dump_instance(load_instance(dump_instance(golden))), dump_instance(golden));
}

TEST(RoundTrip, Schedule) {
  auto s = testing::golden_schedule();
  EXPECT_EQ(load_schedule(dump_schedule(s)), s);
  EXPECT_EQ(s.find("H")->start, 8);
  std::vector<std::string> crew{"1", "2", "4"};
  EXPECT_EQ(s.find("H")->techs, crew);
}

TEST(LoadSchedule, Errors) {
  EXPECT_THROW(load_schedule("["), ParseError);
  EXPECT_THROW(load_schedule(R"({"entries": [{"start": 3}]})"), ParseError);
}

TEST(RoundTrip, AnytimeLogCsv) {
  AnytimeLog log{{{0.25, 30}, {1.5, 22}, {9.125, 16}}};
  auto text = dump_log_csv(log);
  EXPECT_EQ(text.substr(0, 24), "elapsed_seconds,makespan");
  EXPECT_EQ(load_log_csv(text).points, log.points);
  EXPECT_TRUE(load_log_csv("elapsed_seconds,makespan\n").empty());
  EXPECT_THROW(load_log_csv("elapsed_seconds,makespan\n1.0;5\n"), ParseError);
}

TEST(ProfileCsv, TwoColumns) {
  auto p = profile_pulse(Profile{}, 3, 5, std::int64_t{2});
  EXPECT_EQ(dump_profile_csv(p), "time,value\n3,2\n5,0\n");
}

}  // namespace
}  // namespace adsp
