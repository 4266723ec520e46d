#pragma once

#include <string>
#include <vector>

#include "chorediv/generator.hpp"
#include "chorediv/instance.hpp"

namespace testing_support {

using chorediv::Rational;

inline std::vector<Rational> q(std::initializer_list<const char*> texts) {
  std::vector<Rational> out;
  for (const char* t : texts) out.push_back(chorediv::parse_rational(t));
  return out;
}

inline chorediv::Instance random_instance(std::size_t n, std::size_t m, std::uint64_t seed,
                                          chorediv::WeightMode weights = chorediv::WeightMode::dirichlet_unit,
                                          chorediv::CostMode costs = chorediv::CostMode::iid_uniform_integer,
                                          std::uint64_t max_cost = 20) {
  chorediv::GenSpec spec;
  spec.n = n;
  spec.m = m;
  spec.seed = seed;
  spec.weight_mode = weights;
  spec.cost_mode = costs;
  spec.max_cost = max_cost;
  return chorediv::generate(spec);
}

}  // namespace testing_support
