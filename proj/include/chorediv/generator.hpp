#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "chorediv/instance.hpp"

namespace chorediv {

enum class WeightMode {
  uniform,         // 1/n each
  dirichlet_unit,  // gaps of n-1 distinct cuts of {1..D-1}, D = 1000 n
  power_of_two,    // 2^e_i / sum, e_i uniform in {0..3}
  fixed,           // GenSpec::fixed_weights
};

enum class CostMode {
  iid_uniform_integer,  // every entry uniform in {0..max_cost}
  identical_agents,     // one such row shared by all agents
  correlated,           // 4*base_c + noise in {0..3}; every row ranks chores alike
  planted,              // per agent, a random ordered partition with bundle j summing to w_j
};

const char* to_string(WeightMode mode);
const char* to_string(CostMode mode);
std::optional<WeightMode> parse_weight_mode(const std::string& text);
std::optional<CostMode> parse_cost_mode(const std::string& text);

struct GenSpec {
  std::size_t n = 2;
  std::size_t m = 4;
  WeightMode weight_mode = WeightMode::uniform;
  std::vector<Rational> fixed_weights;
  CostMode cost_mode = CostMode::iid_uniform_integer;
  std::uint64_t max_cost = 20;
  std::uint64_t seed = 0;
};

/// Deterministic in the spec. Throws std::invalid_argument for n = 0 and
/// InvalidInstance for bad fixed weights.
Instance generate(const GenSpec& spec);

/// Uniform integer in [0, bound) by rejection; identical on every platform.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

}  // namespace chorediv
