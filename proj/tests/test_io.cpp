#include <doctest.h>

#include "chorediv/errors.hpp"
#include "chorediv/io.hpp"
#include "chorediv/knife.hpp"
#include "helpers.hpp"

using namespace chorediv;
using testing_support::q;

TEST_CASE("decimal literals stay exact") {
  auto doc = parse_exact_json(R"({"weights":[0.1,0.9],"costs":[[1,2.5],[3,1e-2]]})");
  auto inst = instance_from_json(doc);
  CHECK(inst.weight(0) == Rational(1, 10));
  CHECK(inst.row(0) == q({"1", "5/2"}));
  CHECK(inst.row(1) == q({"3", "1/100"}));
  CHECK_THROWS_AS(parse_exact_json("{"), ParseError);
}

TEST_CASE("instance round-trip keeps input order and labels") {
  auto inst = Instance::from_input(q({"2/3", "1/3"}), {q({"1", "2"}), q({"3", "4"})}, {"x", "y"}, {"c1", "c2"});
  auto doc = instance_to_json(inst);
  CHECK(doc["agent_labels"][0] == "x");
  auto back = instance_from_json(parse_exact_json(doc.dump()));
  CHECK(back.costs() == inst.costs());
  CHECK(back.agent_labels() == inst.agent_labels());
  CHECK(back.chore_labels() == inst.chore_labels());
  CHECK(back.entitlements().input_order() == inst.entitlements().input_order());
}

TEST_CASE("assignment and profile round-trips") {
  auto inst = testing_support::random_instance(3, 5, 2);
  Assignment a{{{0, 3}, {}, {1, 2, 4}}};
  CHECK(assignment_from_json(inst, parse_exact_json(assignment_to_json(inst, a).dump())) == a);
  auto profile = wmms_profile(inst);
  auto back = profile_from_json(inst, parse_exact_json(profile_to_json(inst, profile).dump()));
  CHECK(back.values == profile.values);
  CHECK(back.witnesses == profile.witnesses);

  nlohmann::json bad = assignment_to_json(inst, a);
  bad["bundles"][0]["chores"].push_back("b2");
  CHECK_THROWS(assignment_from_json(inst, bad));
}

TEST_CASE("report json") {
  auto inst = Instance::from_input(q({"1"}), {q({"2", "3"})});
  auto r = solve(inst);
  auto doc = report_to_json(inst, r.report);
  CHECK(doc["max_ratio"] == "1");
  CHECK(doc["unbounded"] == false);
  CHECK(doc["agents"][0]["ratio"] == "1");
}
