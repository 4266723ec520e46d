#include "chorediv/reductions.hpp"

#include <algorithm>
#include <numeric>

#include "chorediv/errors.hpp"

namespace chorediv {

SortedReduction to_sorted(const Instance& instance) {
  const std::size_t n = instance.agents();
  const std::size_t m = instance.chores();
  std::vector<std::vector<std::size_t>> ranks(n);
  std::vector<CostRow> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& rank = ranks[i];
    rank.resize(m);
    std::iota(rank.begin(), rank.end(), std::size_t{0});
    const auto& row = instance.row(i);
    std::stable_sort(rank.begin(), rank.end(),
                     [&](std::size_t a, std::size_t b) { return row[a] < row[b]; });
    rows[i].reserve(m);
    for (std::size_t c : rank) rows[i].push_back(row[c]);
  }
  std::vector<std::string> positions;
  for (std::size_t j = 0; j < m; ++j) positions.push_back("b" + std::to_string(j + 1));
  Instance sorted(instance.entitlements(), std::move(rows), instance.agent_labels(), std::move(positions));
  return SortedReduction{std::move(sorted), std::move(ranks)};
}

Assignment map_back(const Assignment& sorted_assignment, const SortedReduction& reduction,
                    const Instance& original) {
  const std::size_t n = original.agents();
  const std::size_t m = original.chores();
  const auto owner = owners_of(sorted_assignment, n, m);
  std::vector<bool> taken(m, false);
  std::vector<std::size_t> mapped(m);
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t agent = owner[j];
    const auto& rank = reduction.rank_tables[agent];
    // Fewer than j+1 chores are taken, so one of the j+1 cheapest is free.
    for (std::size_t t = 0; t <= j; ++t) {
      if (!taken[rank[t]]) {
        taken[rank[t]] = true;
        mapped[rank[t]] = agent;
        break;
      }
    }
  }
  return assignment_from_owners(mapped, n);
}

DivisibleReduction round_entitlements(const Instance& instance) {
  const auto& weights = instance.entitlements().sorted();
  std::vector<Rational> rounded;
  Rational total = 0;
  for (const auto& w : weights) {
    rounded.push_back(floor_power_of_two(w));
    total += rounded.back();
  }
  for (auto& r : rounded) {
    r /= total;
    r.canonicalize();
  }
  Entitlements divisible = instance.entitlements().with_sorted_weights(std::move(rounded));
  return DivisibleReduction{instance.with_entitlements(std::move(divisible)), instance.entitlements()};
}

Instance normalize(const Instance& instance, const WmmsProfile& profile) {
  const std::size_t n = instance.agents();
  if (profile.values.size() != n) throw DimensionMismatch("profile does not match the instance");
  std::vector<CostRow> rows = instance.costs();
  for (std::size_t i = 0; i < n; ++i) {
    if (profile.values[i] < 0) throw InvalidInstance("negative WMMS value in profile");
    if (profile.values[i] == 0) {
      if (instance.total_cost(i) != 0) {
        throw InvalidInstance("agent " + instance.agent_label(i) + " has WMMS 0 but a nonzero cost row");
      }
      continue;
    }
    const Rational factor = instance.weight(i) / profile.values[i];
    for (auto& c : rows[i]) {
      c *= factor;
      c.canonicalize();
    }
  }
  return instance.with_costs(std::move(rows));
}

}  // namespace chorediv
