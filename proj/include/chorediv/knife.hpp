#pragma once

// Layered moving knife for chores with unequal entitlements.
//
// Agents are indexed in ascending weight order and split into three
// contiguous layers: queued Q = [0, minp), in progress P = [minp, dead_begin)
// and dead D = [dead_begin, n). Chores are consumed from the most expensive
// end (sorted instance, position m-1 first). Each round, every agent i in P
// contributes 2*w_i/w_minp copies to a multiset P'; the knife grows a bag
// leftwards while some copy can afford it at 5*w_minp, hands it to one such
// copy, and repeats until P' is empty or the chores run out. Then P turns
// dead and the next layer [minp', minp) moves in.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "chorediv/errors.hpp"
#include "chorediv/instance.hpp"
#include "chorediv/oracle.hpp"

namespace chorediv {

/// How the next layer boundary is chosen.
enum class MinpRule {
  /// Largest i < minp with sum_{i<=j<minp} w_j >= sum_{j>=minp} w_j; else 0
  /// and the round is final.
  prefix_cover,
  /// The pseudocode condition sum_{j>=i} w_j >= sum_{D u P} w_j restricted to
  /// i < minp, which always selects minp-1. Kept for comparison only.
  literal,
};

struct KnifeConfig {
  MinpRule minp_rule = MinpRule::prefix_cover;
};

struct KnifeState {
  std::size_t remaining = 0;   // chores [0, remaining) are unassigned
  std::size_t minp = 0;        // lowest in-progress agent
  std::size_t dead_begin = 0;  // first dead agent
  std::vector<std::uint64_t> copies;  // P' as per-agent copy counts
  std::size_t knife_lo = 0;    // last knife interval, inclusive
  std::size_t knife_hi = 0;
  std::size_t round = 0;

  static KnifeState initial(std::size_t agents, std::size_t chores);
  std::uint64_t copies_left() const;
};

enum class SafetyKind {
  progress_covers_dead,    // sum_P w >= sum_D w
  enough_chores_assigned,  // m - s >= sum_{i>minp} w_i / w_minp
  final_round_exhausts,    // a final round leaves no chore behind
};

const char* to_string(SafetyKind kind);

struct RoundStart {
  std::size_t round;
  std::size_t minp;
  std::size_t dead_begin;
  std::size_t remaining;
  std::vector<std::uint64_t> copies;
};

struct BagAssigned {
  std::size_t round;
  std::size_t agent;
  std::size_t first;  // inclusive chore positions
  std::size_t last;
  Rational cost;      // for the recipient
};

struct SafetyCheck {
  std::size_t round;
  SafetyKind kind;
  Rational lhs;
  Rational rhs;
  bool ok;
};

struct RoundEnd {
  std::size_t round;
  std::size_t next_minp;
  bool final_round;
  std::size_t remaining;
  bool copies_exhausted;  // false when the round stopped because s reached 0
};

using TraceEvent = std::variant<RoundStart, BagAssigned, SafetyCheck, RoundEnd>;

struct KnifeTrace {
  std::vector<TraceEvent> events;
};

class SafetyViolation : public Error {
 public:
  SafetyViolation(const std::string& what, SafetyCheck failed, KnifeTrace trace)
      : Error(what), failed_(std::move(failed)), trace_(std::move(trace)) {}
  const SafetyCheck& failed() const { return failed_; }
  const KnifeTrace& trace() const { return trace_; }

 private:
  SafetyCheck failed_;
  KnifeTrace trace_;
};

/// One failed runtime property. `agent` and `round` refer to the run's
/// sorted instance.
struct CheckViolation {
  std::string check;
  std::size_t round = 0;
  std::size_t agent = 0;
  std::string detail;
};

struct MinpChoice {
  std::size_t index;
  bool final_round;
};

MinpChoice compute_minp_prime(std::span<const Rational> weights, std::size_t minp,
                              MinpRule rule = MinpRule::prefix_cover);

/// 2*w_i/w_minp copies for i in [minp, dead_begin), zero elsewhere.
/// Throws NonIntegralCopyCount.
std::vector<std::uint64_t> build_copy_multiset(std::span<const Rational> weights, std::size_t minp,
                                               std::size_t dead_begin);

/// Every agent's cost for the next chore (position remaining-1) is at most
/// w_minp. Empty result means the bound holds.
std::vector<CheckViolation> lemma3_bound_check(const KnifeState& state, const Instance& instance);

struct Bag {
  std::size_t first;
  std::size_t last;
  std::size_t recipient;
  Rational cost;
};

/// One knife cut: the maximal bag ending at position remaining-1 that some
/// copy affords at 5*w_minp. The lowest-index affording agent receives it.
/// Updates copies, remaining and the knife interval. Throws
/// NoAffordableAgent when nobody can take the next chore alone.
Bag knife_sweep(KnifeState& state, const Instance& instance);

struct LayeredResult {
  Assignment assignment;
  KnifeTrace trace;
};

/// Requires a sorted-chores, entitlement-divisible instance (throws
/// PreconditionViolation otherwise) whose shares satisfy WMMS_i <= w_i.
/// Throws SafetyViolation if a round-start invariant fails.
LayeredResult run_layered(const Instance& instance, const KnifeConfig& config = {});

/// State at the start of every recorded round.
std::vector<KnifeState> round_start_states(const KnifeTrace& trace, std::size_t agents);

/// Replays the removal argument: once c/2 copies have been served in a round
/// that still has chores left, every surviving copy must value each served
/// bag at >= 4*w_minp and each remaining chore at <= w_minp'. A final round
/// must be done by then.
std::vector<CheckViolation> lemma4_check(const KnifeTrace& trace, const Instance& instance);

/// Structural replay: bags disjoint and covering, copy accounting, recipient
/// cost <= 5*w_minp, maximal sweeps, and every recorded safety check ok.
std::vector<CheckViolation> verify_trace(const KnifeTrace& trace, const Instance& instance);

struct SolveOptions {
  OracleConfig oracle;
  KnifeConfig knife;
};

struct SolveResult {
  Assignment assignment;          // original instance, sorted agent order
  RatioReport report;             // against `profile`
  WmmsProfile profile;
  KnifeTrace trace;
  Instance knife_instance;        // sorted, rounded, normalized input to the knife
  Assignment knife_assignment;    // on knife_instance
  bool supplied_profile = false;
};

/// Sorts chores, rounds entitlements, normalizes shares, runs the layered
/// knife and maps the result back. Without a supplied profile both the
/// original and the rounded shares come from the exact oracle. With one,
/// the rounded shares are bounded by twice the supplied values, so the
/// report is relative to those values.
SolveResult solve(const Instance& instance, const std::optional<WmmsProfile>& supplied = std::nullopt,
                  const SolveOptions& options = {});

}  // namespace chorediv
