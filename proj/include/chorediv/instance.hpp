#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "chorediv/rational.hpp"

namespace chorediv {

/// Agent entitlements, kept sorted ascending. Ties keep input order, so
/// sorted position k always maps to the same input agent for equal inputs.
class Entitlements {
 public:
  /// Validates (each weight in (0, 1], exact sum 1) and sorts.
  explicit Entitlements(std::vector<Rational> input_order);

  std::size_t size() const { return sorted_.size(); }
  const Rational& operator[](std::size_t k) const { return sorted_[k]; }
  const std::vector<Rational>& sorted() const { return sorted_; }

  /// Input index of the agent at sorted position k.
  std::size_t original_index(std::size_t k) const { return permutation_[k]; }
  const std::vector<std::size_t>& permutation() const { return permutation_; }

  std::vector<Rational> input_order() const;

  /// Same permutation, new sorted weights (validated; must stay ascending).
  Entitlements with_sorted_weights(std::vector<Rational> sorted) const;

 private:
  Entitlements() = default;
  static void check(const std::vector<Rational>& weights);

  std::vector<Rational> sorted_;
  std::vector<std::size_t> permutation_;
};

using CostRow = std::vector<Rational>;

/// n agents, m chores, additive nonnegative costs. Agent rows are stored in
/// sorted-entitlement order; labels stay attached to their agent.
class Instance {
 public:
  /// Builds from data in input order (rows follow the weight order given).
  static Instance from_input(std::vector<Rational> weights, std::vector<CostRow> costs,
                             std::vector<std::string> agent_labels = {},
                             std::vector<std::string> chore_labels = {});

  /// Builds from already-sorted rows; `costs[k]` belongs to sorted agent k.
  Instance(Entitlements entitlements, std::vector<CostRow> costs,
           std::vector<std::string> agent_labels, std::vector<std::string> chore_labels);

  std::size_t agents() const { return entitlements_.size(); }
  std::size_t chores() const { return chore_labels_.size(); }

  const Entitlements& entitlements() const { return entitlements_; }
  const Rational& weight(std::size_t agent) const { return entitlements_[agent]; }
  const CostRow& row(std::size_t agent) const { return costs_[agent]; }
  const Rational& cost(std::size_t agent, std::size_t chore) const { return costs_[agent][chore]; }
  const std::vector<CostRow>& costs() const { return costs_; }

  /// Label of the agent at sorted position k.
  const std::string& agent_label(std::size_t agent) const { return agent_labels_[agent]; }
  const std::vector<std::string>& agent_labels() const { return agent_labels_; }
  const std::string& chore_label(std::size_t chore) const { return chore_labels_[chore]; }
  const std::vector<std::string>& chore_labels() const { return chore_labels_; }

  Rational bundle_cost(std::size_t agent, std::span<const std::size_t> bundle) const;
  Rational total_cost(std::size_t agent) const;

  /// Same agents and labels, different cost rows (sorted agent order).
  Instance with_costs(std::vector<CostRow> costs) const;
  Instance with_entitlements(Entitlements entitlements) const;

 private:
  Entitlements entitlements_;
  std::vector<CostRow> costs_;
  std::vector<std::string> agent_labels_;
  std::vector<std::string> chore_labels_;
};

/// Row k multiplied by factors[k] (sorted agent order). Throws
/// NonPositiveFactor / DimensionMismatch.
Instance scale_costs(const Instance& instance, std::span<const Rational> factors);

/// bundles[k] is the set of chores held by sorted agent k.
struct Assignment {
  std::vector<std::vector<std::size_t>> bundles;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Throws IncompleteAssignment unless bundles are disjoint and cover [0, m).
void validate_assignment(const Assignment& assignment, std::size_t agents, std::size_t chores);

/// Owner of every chore, or throws IncompleteAssignment.
std::vector<std::size_t> owners_of(const Assignment& assignment, std::size_t agents,
                                   std::size_t chores);

Assignment assignment_from_owners(std::span<const std::size_t> owners, std::size_t agents);

}  // namespace chorediv
