#include <doctest.h>

#include "chorediv/errors.hpp"
#include "chorediv/generator.hpp"
#include "chorediv/oracle.hpp"
#include "helpers.hpp"

using namespace chorediv;

TEST_CASE("generation is deterministic in its parameters") {
  GenSpec spec;
  spec.n = 3;
  spec.m = 6;
  spec.seed = 7;
  spec.weight_mode = WeightMode::dirichlet_unit;
  auto a = generate(spec);
  auto b = generate(spec);
  CHECK(a.costs() == b.costs());
  CHECK(a.entitlements().sorted() == b.entitlements().sorted());
  spec.seed = 8;
  CHECK(generate(spec).costs() != a.costs());
}

TEST_CASE("weight modes") {
  GenSpec spec;
  spec.n = 1;
  spec.weight_mode = WeightMode::dirichlet_unit;
  CHECK(generate(spec).weight(0) == 1);

  spec.weight_mode = WeightMode::power_of_two;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    spec.seed = seed;
    spec.n = 1 + seed % 6;
    spec.m = 1;
    auto inst = generate(spec);
    for (std::size_t i = 1; i < inst.agents(); ++i) {
      REQUIRE(is_integral_power_of_two(inst.weight(i) / inst.weight(0)));
    }
  }

  spec.weight_mode = WeightMode::fixed;
  spec.n = 2;
  spec.fixed_weights = testing_support::q({"1/3", "2/3"});
  CHECK(generate(spec).weight(1) == Rational(2, 3));
  spec.fixed_weights = testing_support::q({"1/3", "1/3"});
  CHECK_THROWS_AS(generate(spec), InvalidInstance);

  spec.n = 0;
  CHECK_THROWS_AS(generate(spec), std::invalid_argument);
}

TEST_CASE("cost modes") {
  GenSpec spec;
  spec.n = 3;
  spec.m = 8;
  spec.seed = 3;
  spec.cost_mode = CostMode::identical_agents;
  auto same = generate(spec);
  CHECK(same.row(0) == same.row(1));
  CHECK(same.row(1) == same.row(2));

  spec.cost_mode = CostMode::iid_uniform_integer;
  spec.max_cost = 5;
  const auto bounded = generate(spec);
  for (const auto& row : bounded.costs()) {
    for (const auto& c : row) {
      CHECK(c >= 0);
      CHECK(c <= 5);
    }
  }

  spec.cost_mode = CostMode::planted;
  spec.weight_mode = WeightMode::power_of_two;
  spec.m = 6;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    spec.seed = seed;
    auto p = generate(spec);
    for (std::size_t i = 0; i < 3; ++i) REQUIRE(p.total_cost(i) == 1);
  }
  auto planted = generate(spec);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(planted.total_cost(i) == 1);
    CHECK(wmms(planted, i) <= planted.weight(i));
  }

  CHECK(parse_cost_mode("planted") == CostMode::planted);
  CHECK(parse_weight_mode(to_string(WeightMode::dirichlet_unit)) == WeightMode::dirichlet_unit);
  CHECK_FALSE(parse_weight_mode("nope").has_value());
}

TEST_CASE("uniform_below stays in range") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 1000; ++t) CHECK(uniform_below(rng, 7) < 7);
}
