#pragma once

// Chore-oblivious upper bounds F^(w) on the best approximation factor for
// entitlements w, built from known constants and two reductions:
//   red1: group agents, pick one representative per group; the factor is
//         alpha * F^(normalized representative weights), alpha the worst
//         group weight over its representative's weight.
//   red2: (w_max / w_min) * the symmetric constant for n agents.
// Doubles throughout; the targets are irrational.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace chorediv {

inline constexpr std::size_t kMaxBoundAgents = 12;

/// (sqrt(3)+1)/2, the two-agent constant.
double two_agent_constant();
/// 15/13, 20/17 or 13/11 for n >= 3 uniform agents; 1 for n <= 2.
double symmetric_constant(std::size_t n);

struct BaseCase {
  std::string name;
  double constant;
};

/// Known constants: <1>, two agents, uniform n >= 3. Weights need not be
/// sorted. Equal means within 1e-12.
std::optional<BaseCase> base_f(std::span<const double> weights);

enum class Rule { base, red1, red2 };
const char* to_string(Rule rule);

struct Derivation {
  Rule rule = Rule::base;
  std::vector<double> weights;  // normalized, ascending
  double value = 0;

  // base: name and constant. red2: the symmetric constant.
  std::string base_name;
  double constant = 0;

  double ratio = 0;  // red2: max / min

  // red1: indices into `weights`. representatives[g] stands for groups[g].
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> representatives;
  double alpha = 0;
  std::shared_ptr<const Derivation> child;  // weights = normalized representatives
};

struct BoundResult {
  double value = 0;
  std::shared_ptr<const Derivation> derivation;
};

/// Recomputes the value bottom-up from weights, groups and constants.
double evaluate(const Derivation& derivation);

struct Grouping {
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> representatives;
};

/// max_g sum(groups[g]) / w[representatives[g]]. Throws InvalidGrouping.
double grouping_alpha(std::span<const double> weights, const Grouping& grouping);

using BoundFn = std::function<BoundResult(std::span<const double>)>;

/// alpha * child(normalized representative weights). Indices refer to
/// `weights` as given; the derivation is re-indexed to ascending order.
BoundResult red1_bound(std::span<const double> weights, const Grouping& grouping, const BoundFn& child);

/// (max/min) * symmetric_constant(n). Defined for n >= 2 (constant 1 at n = 2).
BoundResult red2_bound(std::span<const double> weights);

enum class GroupingFamily {
  three_agent,  // n = 3: red1 {a2},{a1,a3} over the two-agent constant, and red2
  four_agent,   // n = 4: 1/w4, red1 {a1,a3},{a2,a4} over min(w4/w3, k), and red2
  exhaustive,   // every representative set, best surjective grouping onto it
  heuristic,    // contiguous runs over sorted weights and residue classes, rep = heaviest member
  automatic,    // exhaustive on nodes up to exhaustive_limit agents, heuristic above
};

const char* to_string(GroupingFamily family);
std::optional<GroupingFamily> parse_family(const std::string& text);

struct SearchConfig {
  GroupingFamily family = GroupingFamily::automatic;
  int max_depth = 3;  // red1 nesting
  std::size_t exhaustive_limit = kMaxBoundAgents;
};

/// Smallest bound found over base cases, red2 and the red1 family, with
/// recursive children. Sorts and normalizes the input; at most
/// kMaxBoundAgents agents. Throws InvalidWeights.
BoundResult best_bound(std::span<const double> weights, const SearchConfig& config = {});

/// The two bounds of the three-agent argument at sorted w1 <= w2 <= w3.
struct ThreeAgentBounds {
  double red1_two_agent;  // (w1 + w3) k / w3
  double red2_symmetric;  // 15 w3 / (13 w1)
};
ThreeAgentBounds three_agent_bounds(std::span<const double> weights);

/// The three bounds of the four-agent argument at sorted weights.
struct FourAgentBounds {
  double heaviest_absorbs;  // 1 / w4
  double paired;            // max((w1+w3)/w3, (w2+w4)/w4) * min(w4/w3, k)
  double red2_symmetric;    // 20 w4 / (17 w1)
  bool case_one;            // w1/w3 >= w2/w4
};
FourAgentBounds four_agent_bounds(std::span<const double> weights);

/// Root of 13c^2 - 13kc - 15k = 0, closed form.
double theorem3_constant();
/// Root of 1/x + 20/(17x^2) + 40/(17x^2(2x/(sqrt3+1) - 1)) = 1 on x > k.
double theorem4_constant();
/// Left-hand side of the defining equation minus 1.
double theorem4_residual(double x);

/// log2(n) + 1.
double logn_baseline(std::size_t n);

/// Multi-line human-readable derivation.
std::string describe(const Derivation& derivation);

}  // namespace chorediv
