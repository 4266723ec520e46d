#include <doctest.h>

#include "chorediv/errors.hpp"
#include "chorediv/oracle.hpp"
#include "helpers.hpp"

using namespace chorediv;
using testing_support::q;
using testing_support::random_instance;

TEST_CASE("odometer visits n^m assignments") {
  auto count = [](std::size_t m, std::size_t n) {
    AssignmentEnumerator e(m, n);
    std::uint64_t k = 0;
    while (e.next()) ++k;
    CHECK(k == e.total());
    return k;
  };
  CHECK(count(1, 2) == 2);
  CHECK(count(2, 2) == 4);
  CHECK(count(3, 3) == 27);
  CHECK(count(0, 3) == 1);
  CHECK(assignment_count(64, 2) == std::nullopt);
  CHECK_THROWS_AS(AssignmentEnumerator(25, 2), SizeLimitExceeded);
}

TEST_CASE("small hand instances") {
  // Uniform pair with costs (1,1,2): best split {2} | {1,1}.
  auto inst = Instance::from_input(q({"1/2", "1/2"}), {q({"1", "1", "2"}), q({"1", "1", "2"})});
  CHECK(mms(inst, 0) == 2);
  CHECK(wmms(inst, 0) == 2);

  // Weighted pair: the split {1} | {3} balances both weighted bundles.
  auto w = Instance::from_input(q({"1/4", "3/4"}), {q({"1", "1", "1", "1"}), q({"1", "1", "1", "1"})});
  CHECK(wmms(w, 0) == 1);
  CHECK(wmms(w, 1) == 3);
}

TEST_CASE("branch and bound agrees with enumeration") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const std::size_t n = 1 + seed % 3;
    const std::size_t m = 1 + seed % 7;
    auto inst = random_instance(n, m, seed, seed % 2 ? WeightMode::dirichlet_unit : WeightMode::power_of_two);
    for (std::size_t i = 0; i < n; ++i) {
      auto fast = wmms_with_witness(inst, i);
      auto slow = reference::wmms_by_enumeration(inst, i);
      CHECK(fast.value == slow.value);
      CHECK(wmms_objective(inst, i, fast.witness) == fast.value);
      CHECK(mms(inst, i) == reference::mms_by_enumeration(inst, i).value);
    }
  }
}

TEST_CASE("uniform entitlements: wmms equals mms") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto inst = random_instance(1 + seed % 3, 2 + seed % 5, seed, WeightMode::uniform);
    for (std::size_t i = 0; i < inst.agents(); ++i) CHECK(wmms(inst, i) == mms(inst, i));
  }
}

TEST_CASE("share is zero exactly for a zero row") {
  auto inst = Instance::from_input(q({"1/2", "1/2"}), {q({"0", "0"}), q({"0", "5"})});
  CHECK(wmms(inst, 0) == 0);
  CHECK(wmms(inst, 1) > 0);
}

TEST_CASE("scaling a row scales its share") {
  auto inst = random_instance(3, 5, 7);
  const auto factors = q({"3", "1/2", "7/3"});
  auto scaled = scale_costs(inst, factors);
  for (std::size_t i = 0; i < 3; ++i) CHECK(wmms(scaled, i) == factors[i] * wmms(inst, i));
}

TEST_CASE("oracle respects the cap") {
  auto inst = random_instance(3, 12, 1);
  OracleConfig small;
  small.max_assignments = 1000;
  CHECK_THROWS_AS(wmms(inst, 0, small), SizeLimitExceeded);
  CHECK_THROWS_AS(wmms_profile(inst, small), SizeLimitExceeded);
}

TEST_CASE("profile and ratio report") {
  auto inst = random_instance(3, 5, 11);
  auto profile = wmms_profile(inst);
  REQUIRE(profile.values.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(profile.values[i] == wmms(inst, i));

  Assignment all_to_last{{{}, {}, {0, 1, 2, 3, 4}}};
  auto report = ratio_report(inst, all_to_last, profile);
  CHECK(report.per_agent[0].cost == 0);
  CHECK(report.per_agent[0].ratio == 0);
  if (profile.values[2] > 0) {
    CHECK(report.per_agent[2].ratio == inst.total_cost(2) / profile.values[2]);
    CHECK(report.max_ratio == report.per_agent[2].ratio);
  }

  WmmsProfile zero{{0, 0, 0}, {}};
  auto unbounded = ratio_report(inst, all_to_last, zero);
  CHECK(unbounded.unbounded == (inst.total_cost(2) > 0));
}
