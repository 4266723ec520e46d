#include "chorediv/instance.hpp"

#include <algorithm>
#include <numeric>

#include "chorediv/errors.hpp"

namespace chorediv {

void Entitlements::check(const std::vector<Rational>& weights) {
  if (weights.empty()) throw DimensionMismatch("at least one agent is required");
  Rational sum = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0) {
      throw NonPositiveWeight("weight " + std::to_string(i) + " is " + to_string(weights[i]) +
                              ", must be > 0");
    }
    if (weights[i] > 1) {
      throw NonPositiveWeight("weight " + std::to_string(i) + " exceeds 1");
    }
    sum += weights[i];
  }
  if (sum != 1) throw WeightSumError("weights sum to " + to_string(sum) + ", expected 1");
}

Entitlements::Entitlements(std::vector<Rational> input_order) {
  for (auto& w : input_order) w.canonicalize();
  check(input_order);
  permutation_.resize(input_order.size());
  std::iota(permutation_.begin(), permutation_.end(), std::size_t{0});
  std::stable_sort(permutation_.begin(), permutation_.end(),
                   [&](std::size_t a, std::size_t b) { return input_order[a] < input_order[b]; });
  sorted_.reserve(input_order.size());
  for (std::size_t k : permutation_) sorted_.push_back(input_order[k]);
}

std::vector<Rational> Entitlements::input_order() const {
  std::vector<Rational> out(sorted_.size());
  for (std::size_t k = 0; k < sorted_.size(); ++k) out[permutation_[k]] = sorted_[k];
  return out;
}

Entitlements Entitlements::with_sorted_weights(std::vector<Rational> sorted) const {
  if (sorted.size() != sorted_.size()) throw DimensionMismatch("entitlement count changed");
  for (auto& w : sorted) w.canonicalize();
  check(sorted);
  if (!std::is_sorted(sorted.begin(), sorted.end())) {
    throw InvalidInstance("replacement weights must stay ascending");
  }
  Entitlements out;
  out.sorted_ = std::move(sorted);
  out.permutation_ = permutation_;
  return out;
}

Instance Instance::from_input(std::vector<Rational> weights, std::vector<CostRow> costs,
                              std::vector<std::string> agent_labels,
                              std::vector<std::string> chore_labels) {
  const std::size_t n = weights.size();
  if (costs.size() != n) {
    throw DimensionMismatch("cost matrix has " + std::to_string(costs.size()) + " rows for " +
                            std::to_string(n) + " agents");
  }
  const std::size_t m = n == 0 ? 0 : costs.front().size();
  if (agent_labels.empty()) {
    for (std::size_t i = 0; i < n; ++i) agent_labels.push_back("a" + std::to_string(i + 1));
  }
  if (chore_labels.empty()) {
    for (std::size_t j = 0; j < m; ++j) chore_labels.push_back("b" + std::to_string(j + 1));
  }
  if (agent_labels.size() != n) throw DimensionMismatch("agent_labels length does not match weights");

  Entitlements entitlements(std::move(weights));
  std::vector<CostRow> sorted_rows;
  std::vector<std::string> sorted_labels;
  sorted_rows.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = entitlements.original_index(k);
    sorted_rows.push_back(std::move(costs[src]));
    sorted_labels.push_back(std::move(agent_labels[src]));
  }
  return Instance(std::move(entitlements), std::move(sorted_rows), std::move(sorted_labels),
                  std::move(chore_labels));
}

Instance::Instance(Entitlements entitlements, std::vector<CostRow> costs,
                   std::vector<std::string> agent_labels, std::vector<std::string> chore_labels)
    : entitlements_(std::move(entitlements)),
      costs_(std::move(costs)),
      agent_labels_(std::move(agent_labels)),
      chore_labels_(std::move(chore_labels)) {
  const std::size_t n = entitlements_.size();
  const std::size_t m = chore_labels_.size();
  if (costs_.size() != n || agent_labels_.size() != n) {
    throw DimensionMismatch("cost rows / agent labels do not match the number of agents");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (costs_[i].size() != m) {
      throw DimensionMismatch("cost row " + std::to_string(i) + " has " +
                              std::to_string(costs_[i].size()) + " entries, expected " +
                              std::to_string(m));
    }
    for (std::size_t j = 0; j < m; ++j) {
      costs_[i][j].canonicalize();
      if (costs_[i][j] < 0) {
        throw NegativeCost("cost of chore " + std::to_string(j) + " for agent " + agent_labels_[i] +
                           " is negative");
      }
    }
  }
}

Rational Instance::bundle_cost(std::size_t agent, std::span<const std::size_t> bundle) const {
  Rational sum = 0;
  for (std::size_t c : bundle) sum += costs_[agent][c];
  return sum;
}

Rational Instance::total_cost(std::size_t agent) const {
  Rational sum = 0;
  for (const auto& c : costs_[agent]) sum += c;
  return sum;
}

Instance Instance::with_costs(std::vector<CostRow> costs) const {
  return Instance(entitlements_, std::move(costs), agent_labels_, chore_labels_);
}

Instance Instance::with_entitlements(Entitlements entitlements) const {
  return Instance(std::move(entitlements), costs_, agent_labels_, chore_labels_);
}

Instance scale_costs(const Instance& instance, std::span<const Rational> factors) {
  if (factors.size() != instance.agents()) {
    throw DimensionMismatch("one scale factor per agent is required");
  }
  std::vector<CostRow> rows = instance.costs();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (factors[i] <= 0) throw NonPositiveFactor("scale factor " + std::to_string(i) + " is not positive");
    for (auto& c : rows[i]) c *= factors[i];
  }
  return instance.with_costs(std::move(rows));
}

std::vector<std::size_t> owners_of(const Assignment& assignment, std::size_t agents,
                                   std::size_t chores) {
  if (assignment.bundles.size() != agents) {
    throw IncompleteAssignment("assignment has " + std::to_string(assignment.bundles.size()) +
                               " bundles for " + std::to_string(agents) + " agents");
  }
  constexpr std::size_t kUnowned = static_cast<std::size_t>(-1);
  std::vector<std::size_t> owner(chores, kUnowned);
  for (std::size_t a = 0; a < agents; ++a) {
    for (std::size_t c : assignment.bundles[a]) {
      if (c >= chores) throw IncompleteAssignment("chore index " + std::to_string(c) + " out of range");
      if (owner[c] != kUnowned) throw IncompleteAssignment("chore " + std::to_string(c) + " assigned twice");
      owner[c] = a;
    }
  }
  for (std::size_t c = 0; c < chores; ++c) {
    if (owner[c] == kUnowned) throw IncompleteAssignment("chore " + std::to_string(c) + " is unassigned");
  }
  return owner;
}

void validate_assignment(const Assignment& assignment, std::size_t agents, std::size_t chores) {
  (void)owners_of(assignment, agents, chores);
}

Assignment assignment_from_owners(std::span<const std::size_t> owners, std::size_t agents) {
  Assignment out;
  out.bundles.resize(agents);
  for (std::size_t c = 0; c < owners.size(); ++c) out.bundles[owners[c]].push_back(c);
  return out;
}

}  // namespace chorediv
