#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "chorediv/instance.hpp"
#include "chorediv/rational.hpp"

namespace chorediv {

struct OracleConfig {
  /// Upper bound on n^m, the number of ordered assignments per agent.
  std::uint64_t max_assignments = std::uint64_t{1} << 24;
  /// Ordered partitions may leave bundles empty. Turning this off is only
  /// meant for sensitivity checks.
  bool allow_empty_bundles = true;
};

/// n^m, or nullopt when it does not fit in 64 bits.
std::optional<std::uint64_t> assignment_count(std::size_t chores, std::size_t agents);

/// Streams every ordered assignment of m chores to n bundles as an odometer
/// over owner digits: owners()[c] is the bundle of chore c.
class AssignmentEnumerator {
 public:
  /// Throws SizeLimitExceeded when n^m exceeds `cap`.
  AssignmentEnumerator(std::size_t chores, std::size_t agents,
                       std::uint64_t cap = OracleConfig{}.max_assignments);

  /// Advances to the next assignment; false once all n^m were produced.
  /// The first call yields the all-zeros assignment.
  bool next();

  const std::vector<std::size_t>& owners() const { return owners_; }
  Assignment assignment() const { return assignment_from_owners(owners_, agents_); }
  std::uint64_t total() const { return total_; }

 private:
  std::size_t agents_;
  std::vector<std::size_t> owners_;
  std::uint64_t total_;
  bool started_ = false;
  bool done_ = false;
};

/// Value of an agent's share together with a partition attaining it.
struct ShareResult {
  Rational value;
  Assignment witness;
};

/// max_j V_i(A_j) * w_i / w_j for the given partition.
Rational wmms_objective(const Instance& instance, std::size_t agent, const Assignment& partition);
/// max_j V_i(A_j).
Rational mms_objective(const Instance& instance, std::size_t agent, const Assignment& partition);

Rational mms(const Instance& instance, std::size_t agent, const OracleConfig& config = {});
Rational wmms(const Instance& instance, std::size_t agent, const OracleConfig& config = {});
ShareResult mms_with_witness(const Instance& instance, std::size_t agent,
                             const OracleConfig& config = {});
ShareResult wmms_with_witness(const Instance& instance, std::size_t agent,
                              const OracleConfig& config = {});

struct WmmsProfile {
  std::vector<Rational> values;     // sorted agent order
  std::vector<Assignment> witnesses;  // may be empty for externally supplied values
};

/// Per-agent exact WMMS with witnesses. Agents are solved in parallel.
WmmsProfile wmms_profile(const Instance& instance, const OracleConfig& config = {});

struct AgentRatio {
  Rational cost;
  Rational wmms;
  Rational ratio;  // 0 for a zero-cost bundle
  bool unbounded = false;  // positive cost against WMMS 0
};

struct RatioReport {
  std::vector<AgentRatio> per_agent;
  Rational max_ratio;  // over bounded agents
  bool unbounded = false;

  bool within(const Rational& alpha) const { return !unbounded && max_ratio <= alpha; }
};

RatioReport ratio_report(const Instance& instance, const Assignment& assignment,
                         const WmmsProfile& profile);

/// Independent strategy: walks every ordered assignment with the odometer
/// and evaluates the objective exactly. No pruning, no integer scaling.
namespace reference {
ShareResult wmms_by_enumeration(const Instance& instance, std::size_t agent,
                                const OracleConfig& config = {});
ShareResult mms_by_enumeration(const Instance& instance, std::size_t agent,
                               const OracleConfig& config = {});
}  // namespace reference

}  // namespace chorediv
