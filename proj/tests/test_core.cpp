#include <doctest.h>

#include "chorediv/errors.hpp"
#include "chorediv/instance.hpp"
#include "chorediv/rational.hpp"
#include "helpers.hpp"

using namespace chorediv;
using testing_support::q;

TEST_CASE("rationals parse exactly") {
  CHECK(parse_rational("3/8") == Rational(3, 8));
  CHECK(parse_rational("0.1") == Rational(1, 10));
  CHECK(parse_rational("-1.5e-3") == Rational(-3, 2000));
  CHECK(parse_rational("2E2") == Rational(200));
  CHECK(parse_rational("6/4") == Rational(3, 2));
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("abc"), ParseError);
  CHECK_THROWS_AS(parse_rational(""), ParseError);
  CHECK(to_string(Rational(6, 4)) == "3/2");
  CHECK(to_string(Rational(4)) == "4");
}

TEST_CASE("powers of two") {
  CHECK(floor_power_of_two(Rational(3, 8)) == Rational(1, 4));
  CHECK(floor_power_of_two(Rational(1, 3)) == Rational(1, 4));
  CHECK(floor_power_of_two(Rational(5)) == Rational(4));
  CHECK(floor_power_of_two(Rational(1, 2)) == Rational(1, 2));
  CHECK(is_power_of_two(Rational(1, 8)));
  CHECK_FALSE(is_power_of_two(Rational(3, 8)));
  CHECK(is_integral_power_of_two(Rational(4)));
  CHECK_FALSE(is_integral_power_of_two(Rational(1, 2)));
}

TEST_CASE("entitlements validate and sort stably") {
  CHECK_THROWS_AS(Entitlements(q({"1/2", "1/3"})), WeightSumError);
  CHECK_THROWS_AS(Entitlements(q({"0", "1"})), NonPositiveWeight);
  CHECK_THROWS_AS(Entitlements(q({"3/2", "-1/2"})), NonPositiveWeight);

  Entitlements e(q({"1/2", "1/4", "1/4"}));
  CHECK(e.sorted() == q({"1/4", "1/4", "1/2"}));
  CHECK(e.original_index(0) == 1);
  CHECK(e.original_index(1) == 2);
  CHECK(e.original_index(2) == 0);
  CHECK(e.input_order() == q({"1/2", "1/4", "1/4"}));
}

TEST_CASE("instances carry labels with their agents") {
  auto inst = Instance::from_input(q({"2/3", "1/3"}), {q({"1", "2"}), q({"3", "4"})}, {"heavy", "light"});
  CHECK(inst.agent_label(0) == "light");
  CHECK(inst.row(0) == q({"3", "4"}));
  CHECK(inst.chore_label(1) == "b2");
  CHECK(inst.total_cost(1) == 3);
  CHECK_THROWS_AS(Instance::from_input(q({"1"}), {q({"-1"})}), NegativeCost);
  CHECK_THROWS_AS(Instance::from_input(q({"1/2", "1/2"}), {q({"1"})}), DimensionMismatch);
  CHECK_THROWS_AS(Instance::from_input(q({"1/2", "1/2"}), {q({"1"}), q({"1", "2"})}), DimensionMismatch);
}

TEST_CASE("scale_costs") {
  auto inst = Instance::from_input(q({"1/2", "1/2"}), {q({"1", "2"}), q({"3", "4"})});
  const auto ones = q({"1", "1"});
  auto same = scale_costs(inst, ones);
  CHECK(same.costs() == inst.costs());
  const auto two = q({"2", "1"});
  auto doubled = scale_costs(inst, two);
  CHECK(doubled.row(0) == q({"2", "4"}));
  CHECK(doubled.row(1) == inst.row(1));
  const auto bad = q({"0", "1"});
  CHECK_THROWS_AS(scale_costs(inst, bad), NonPositiveFactor);
}

TEST_CASE("assignments") {
  CHECK_NOTHROW(validate_assignment(Assignment{{{0, 2}, {1}}}, 2, 3));
  CHECK_THROWS_AS(validate_assignment(Assignment{{{0, 1}, {1, 2}}}, 2, 3), IncompleteAssignment);
  CHECK_THROWS_AS(validate_assignment(Assignment{{{0}, {1}}}, 2, 3), IncompleteAssignment);
  const std::vector<std::size_t> owners = {1, 0, 1};
  CHECK(assignment_from_owners(owners, 2) == Assignment{{{1}, {0, 2}}});
  CHECK(owners_of(Assignment{{{1}, {0, 2}}}, 2, 3) == owners);
}
