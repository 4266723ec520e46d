#include "chorediv/oracle.hpp"

#include <algorithm>
#include <exception>
#include <numeric>

#include "chorediv/errors.hpp"

namespace chorediv {

std::optional<std::uint64_t> assignment_count(std::size_t chores, std::size_t agents) {
  std::uint64_t total = 1;
  for (std::size_t c = 0; c < chores; ++c) {
    if (agents != 0 && total > UINT64_MAX / agents) return std::nullopt;
    total *= agents;
  }
  return total;
}

namespace {

void check_size(std::size_t chores, std::size_t agents, std::uint64_t cap) {
  auto total = assignment_count(chores, agents);
  if (!total || *total > cap) {
    throw SizeLimitExceeded("exhaustive enumeration needs " + std::to_string(agents) + "^" +
                            std::to_string(chores) + " assignments, above the cap of " +
                            std::to_string(cap));
  }
}

void check_agent(const Instance& instance, std::size_t agent) {
  if (agent >= instance.agents()) {
    throw std::out_of_range("agent index " + std::to_string(agent) + " out of range");
  }
}

}  // namespace

AssignmentEnumerator::AssignmentEnumerator(std::size_t chores, std::size_t agents, std::uint64_t cap)
    : agents_(agents), owners_(chores, 0) {
  if (agents == 0) throw std::invalid_argument("enumeration needs at least one bundle");
  check_size(chores, agents, cap);
  total_ = *assignment_count(chores, agents);
}

bool AssignmentEnumerator::next() {
  if (done_) return false;
  if (!started_) {
    started_ = true;
    return true;
  }
  for (std::size_t c = 0; c < owners_.size(); ++c) {
    if (++owners_[c] < agents_) return true;
    owners_[c] = 0;
  }
  done_ = true;
  return false;
}

Rational mms_objective(const Instance& instance, std::size_t agent, const Assignment& partition) {
  Rational worst = 0;
  for (const auto& bundle : partition.bundles) {
    Rational v = instance.bundle_cost(agent, bundle);
    if (v > worst) worst = v;
  }
  return worst;
}

Rational wmms_objective(const Instance& instance, std::size_t agent, const Assignment& partition) {
  Rational worst = 0;
  for (std::size_t j = 0; j < partition.bundles.size(); ++j) {
    Rational v = instance.bundle_cost(agent, partition.bundles[j]) * instance.weight(agent) /
                 instance.weight(j);
    if (v > worst) worst = v;
  }
  return worst;
}

namespace {

// Branch-and-bound over chore placements, largest chores first. Bundles
// whose multipliers are equal are interchangeable, so a chore is only ever
// opened into the first empty bundle of each such class.
template <class Num>
class PlacementSearch {
 public:
  PlacementSearch(std::vector<Num> costs, std::vector<Num> scales, bool allow_empty)
      : costs_(std::move(costs)),
        scales_(std::move(scales)),
        allow_empty_(allow_empty),
        loads_(scales_.size(), Num(0)),
        counts_(scales_.size(), 0),
        owner_(costs_.size(), 0),
        order_(costs_.size(), std::vector<Candidate>(scales_.size())) {
    class_of_.resize(scales_.size());
    for (std::size_t j = 0; j < scales_.size(); ++j) {
      class_of_[j] = j;
      for (std::size_t k = 0; k < j; ++k) {
        if (scales_[k] == scales_[j]) {
          class_of_[j] = class_of_[k];
          break;
        }
      }
    }
  }

  void run() {
    empty_ = scales_.size();
    place(0, Num(0));
  }

  bool found() const { return found_; }
  const Num& best() const { return best_; }
  const std::vector<std::size_t>& best_owner() const { return best_owner_; }

 private:
  struct Candidate {
    Num value;
    std::size_t bundle;
  };

  void place(std::size_t depth, const Num& current) {
    const std::size_t m = costs_.size();
    if (depth == m) {
      if (!allow_empty_ && empty_ > 0) return;
      if (!found_ || current < best_) {
        best_ = current;
        best_owner_ = owner_;
        found_ = true;
      }
      return;
    }
    auto& cands = order_[depth];
    std::size_t count = 0;
    for (std::size_t j = 0; j < scales_.size(); ++j) {
      if (counts_[j] == 0) {
        bool earlier_empty = false;
        for (std::size_t k = 0; k < j; ++k) {
          if (counts_[k] == 0 && class_of_[k] == class_of_[j]) {
            earlier_empty = true;
            break;
          }
        }
        if (earlier_empty) continue;
      }
      Num value = scales_[j] * (loads_[j] + costs_[depth]);
      if (value < current) value = current;
      if (found_ && !(value < best_)) continue;
      if (!allow_empty_) {
        const std::size_t empties_after = empty_ - (counts_[j] == 0 ? 1 : 0);
        if (empties_after > m - depth - 1) continue;
      }
      cands[count++] = Candidate{value, j};
    }
    std::stable_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(count),
                     [](const Candidate& a, const Candidate& b) { return a.value < b.value; });
    for (std::size_t t = 0; t < count; ++t) {
      const Candidate cand = cands[t];
      if (found_ && !(cand.value < best_)) break;
      const std::size_t j = cand.bundle;
      loads_[j] += costs_[depth];
      if (counts_[j]++ == 0) --empty_;
      owner_[depth] = j;
      place(depth + 1, cand.value);
      if (--counts_[j] == 0) ++empty_;
      loads_[j] -= costs_[depth];
    }
  }

  std::vector<Num> costs_;
  std::vector<Num> scales_;
  bool allow_empty_;
  std::vector<Num> loads_;
  std::vector<std::size_t> counts_;
  std::vector<std::size_t> owner_;
  std::vector<std::vector<Candidate>> order_;
  std::vector<std::size_t> class_of_;
  std::size_t empty_ = 0;
  Num best_{};
  std::vector<std::size_t> best_owner_;
  bool found_ = false;
};

mpz_class lcm_of_denominators(const std::vector<Rational>& values) {
  mpz_class l = 1;
  for (const auto& v : values) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  return l;
}

bool fits_62(const mpz_class& v) { return mpz_sizeinbase(v.get_mpz_t(), 2) <= 62; }

// Minimizes max_j scales[j] * load_j over ordered partitions of `costs`.
// Returns the optimum and the owner of each chore.
ShareResult min_max_partition(const std::vector<Rational>& costs, const std::vector<Rational>& scales,
                              bool allow_empty) {
  const std::size_t m = costs.size();
  const std::size_t n = scales.size();
  if (!allow_empty && m < n) {
    throw Error("no ordered partition without empty bundles exists when m < n");
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return costs[a] > costs[b]; });

  // Scale to integers when everything fits comfortably in 128-bit products.
  const mpz_class cost_den = lcm_of_denominators(costs);
  const mpz_class scale_den = lcm_of_denominators(scales);
  mpz_class total = 0;
  mpz_class max_scale = 0;
  std::vector<mpz_class> int_costs;
  std::vector<mpz_class> int_scales;
  for (std::size_t k : order) {
    Rational v = costs[k] * cost_den;
    int_costs.push_back(v.get_num());
    total += v.get_num();
  }
  for (const auto& s : scales) {
    Rational v = s * scale_den;
    int_scales.push_back(v.get_num());
    if (v.get_num() > max_scale) max_scale = v.get_num();
  }

  std::vector<std::size_t> owner_sorted;
  Rational value;
  if (fits_62(total) && fits_62(max_scale)) {
    std::vector<__int128> c;
    std::vector<__int128> s;
    for (const auto& v : int_costs) c.push_back(static_cast<__int128>(v.get_si()));
    for (const auto& v : int_scales) s.push_back(static_cast<__int128>(v.get_si()));
    PlacementSearch<__int128> search(std::move(c), std::move(s), allow_empty);
    search.run();
    const __int128 best = search.best();
    // best < 2^124; split into two 62-bit halves for GMP.
    mpz_class hi = static_cast<long>(best >> 62);
    mpz_class lo = static_cast<long>(best & ((static_cast<__int128>(1) << 62) - 1));
    mpz_class num = hi;
    mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), 62);
    num += lo;
    value = Rational(num, mpz_class(cost_den * scale_den));
    value.canonicalize();
    owner_sorted = search.best_owner();
  } else {
    std::vector<Rational> c;
    for (std::size_t k : order) c.push_back(costs[k]);
    PlacementSearch<Rational> search(std::move(c), scales, allow_empty);
    search.run();
    value = search.best();
    owner_sorted = search.best_owner();
  }

  std::vector<std::size_t> owner(m);
  for (std::size_t t = 0; t < m; ++t) owner[order[t]] = owner_sorted[t];
  return ShareResult{value, assignment_from_owners(owner, n)};
}

std::vector<Rational> wmms_scales(const Instance& instance) {
  std::vector<Rational> s;
  for (std::size_t j = 0; j < instance.agents(); ++j) s.push_back(Rational(1) / instance.weight(j));
  return s;
}

}  // namespace

ShareResult mms_with_witness(const Instance& instance, std::size_t agent, const OracleConfig& config) {
  check_agent(instance, agent);
  check_size(instance.chores(), instance.agents(), config.max_assignments);
  std::vector<Rational> scales(instance.agents(), Rational(1));
  return min_max_partition(instance.row(agent), scales, config.allow_empty_bundles);
}

ShareResult wmms_with_witness(const Instance& instance, std::size_t agent, const OracleConfig& config) {
  check_agent(instance, agent);
  check_size(instance.chores(), instance.agents(), config.max_assignments);
  ShareResult r = min_max_partition(instance.row(agent), wmms_scales(instance), config.allow_empty_bundles);
  r.value *= instance.weight(agent);
  r.value.canonicalize();
  return r;
}

Rational mms(const Instance& instance, std::size_t agent, const OracleConfig& config) {
  return mms_with_witness(instance, agent, config).value;
}

Rational wmms(const Instance& instance, std::size_t agent, const OracleConfig& config) {
  return wmms_with_witness(instance, agent, config).value;
}

WmmsProfile wmms_profile(const Instance& instance, const OracleConfig& config) {
  const std::size_t n = instance.agents();
  check_size(instance.chores(), n, config.max_assignments);
  WmmsProfile profile;
  profile.values.resize(n);
  profile.witnesses.resize(n);
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t i = 0; i < n; ++i) {
    try {
      ShareResult r = wmms_with_witness(instance, i, config);
      profile.values[i] = r.value;
      profile.witnesses[i] = std::move(r.witness);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return profile;
}

RatioReport ratio_report(const Instance& instance, const Assignment& assignment,
                         const WmmsProfile& profile) {
  const std::size_t n = instance.agents();
  validate_assignment(assignment, n, instance.chores());
  if (profile.values.size() != n) throw DimensionMismatch("profile does not match the instance");
  RatioReport report;
  report.max_ratio = 0;
  for (std::size_t i = 0; i < n; ++i) {
    AgentRatio r;
    r.cost = instance.bundle_cost(i, assignment.bundles[i]);
    r.wmms = profile.values[i];
    r.ratio = 0;
    if (r.cost > 0) {
      if (r.wmms > 0) {
        r.ratio = r.cost / r.wmms;
        r.ratio.canonicalize();
      } else {
        r.unbounded = true;
        report.unbounded = true;
      }
    }
    if (r.ratio > report.max_ratio) report.max_ratio = r.ratio;
    report.per_agent.push_back(std::move(r));
  }
  return report;
}

namespace reference {
namespace {

template <class Objective>
ShareResult enumerate(const Instance& instance, std::size_t agent, const OracleConfig& config,
                      Objective objective) {
  check_agent(instance, agent);
  const std::size_t n = instance.agents();
  AssignmentEnumerator it(instance.chores(), n, config.max_assignments);
  std::optional<ShareResult> best;
  std::vector<Rational> loads(n);
  std::vector<std::size_t> counts(n);
  while (it.next()) {
    std::fill(loads.begin(), loads.end(), Rational(0));
    std::fill(counts.begin(), counts.end(), 0);
    const auto& owners = it.owners();
    for (std::size_t c = 0; c < owners.size(); ++c) {
      loads[owners[c]] += instance.cost(agent, c);
      ++counts[owners[c]];
    }
    if (!config.allow_empty_bundles &&
        std::find(counts.begin(), counts.end(), std::size_t{0}) != counts.end()) {
      continue;
    }
    Rational value = objective(loads);
    if (!best || value < best->value) best = ShareResult{value, it.assignment()};
  }
  if (!best) throw Error("no ordered partition without empty bundles exists when m < n");
  return *best;
}

}  // namespace

ShareResult wmms_by_enumeration(const Instance& instance, std::size_t agent, const OracleConfig& config) {
  return enumerate(instance, agent, config, [&](const std::vector<Rational>& loads) {
    Rational worst = 0;
    for (std::size_t j = 0; j < loads.size(); ++j) {
      Rational v = loads[j] * instance.weight(agent) / instance.weight(j);
      if (v > worst) worst = v;
    }
    return worst;
  });
}

ShareResult mms_by_enumeration(const Instance& instance, std::size_t agent, const OracleConfig& config) {
  return enumerate(instance, agent, config, [](const std::vector<Rational>& loads) {
    return *std::max_element(loads.begin(), loads.end());
  });
}

}  // namespace reference
}  // namespace chorediv
