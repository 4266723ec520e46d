#pragma once

#include <cstddef>
#include <vector>

#include "chorediv/instance.hpp"
#include "chorediv/oracle.hpp"

namespace chorediv {

/// Every agent's row sorted ascending independently. Chore positions in the
/// sorted instance carry no identity; rank_tables maps them back.
struct SortedReduction {
  Instance sorted_instance;
  /// rank_tables[i][j]: original chore that is agent i's j-th cheapest
  /// (ties by lower original index).
  std::vector<std::vector<std::size_t>> rank_tables;
};

SortedReduction to_sorted(const Instance& instance);

/// Replays a sorted-instance assignment onto the original chores: walking
/// positions 0..m-1, the recipient of position j takes its cheapest still
/// unassigned chore among its j+1 cheapest. Each agent's original cost is
/// then at most its sorted-instance cost.
Assignment map_back(const Assignment& sorted_assignment, const SortedReduction& reduction,
                    const Instance& original);

struct DivisibleReduction {
  Instance rounded_instance;
  Entitlements original_weights;
};

/// Weights replaced by f(w_i) / sum_j f(w_j), f(x) the largest power of two
/// not above x. All pairwise ratios of the result are powers of two.
DivisibleReduction round_entitlements(const Instance& instance);

/// Scales agent i's row by w_i / profile.values[i], so that the share of
/// every agent with a nonzero row becomes exactly w_i. Zero rows (share 0)
/// are passed through.
Instance normalize(const Instance& instance, const WmmsProfile& profile);

}  // namespace chorediv
