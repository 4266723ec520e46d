#include "chorediv/knife.hpp"

#include <algorithm>
#include <numeric>

#include "chorediv/reductions.hpp"

namespace chorediv {

KnifeState KnifeState::initial(std::size_t agents, std::size_t chores) {
  if (agents == 0) throw std::invalid_argument("the knife needs at least one agent");
  KnifeState s;
  s.remaining = chores;
  s.minp = agents - 1;
  s.dead_begin = agents;
  s.copies.assign(agents, 0);
  s.knife_lo = s.knife_hi = chores;
  return s;
}

std::uint64_t KnifeState::copies_left() const {
  return std::accumulate(copies.begin(), copies.end(), std::uint64_t{0});
}

const char* to_string(SafetyKind kind) {
  switch (kind) {
    case SafetyKind::progress_covers_dead: return "progress_covers_dead";
    case SafetyKind::enough_chores_assigned: return "enough_chores_assigned";
    case SafetyKind::final_round_exhausts: return "final_round_exhausts";
  }
  return "unknown";
}

MinpChoice compute_minp_prime(std::span<const Rational> weights, std::size_t minp, MinpRule rule) {
  if (minp >= weights.size()) throw std::out_of_range("minp out of range");
  if (minp == 0) return {0, true};
  if (rule == MinpRule::literal) return {minp - 1, false};
  Rational upper = 0;  // weight of D u P
  for (std::size_t j = minp; j < weights.size(); ++j) upper += weights[j];
  Rational layer = 0;
  for (std::size_t i = minp; i-- > 0;) {
    layer += weights[i];
    if (layer >= upper) return {i, false};
  }
  return {0, true};
}

std::vector<std::uint64_t> build_copy_multiset(std::span<const Rational> weights, std::size_t minp,
                                               std::size_t dead_begin) {
  if (minp >= dead_begin || dead_begin > weights.size()) {
    throw std::out_of_range("in-progress range is empty or out of range");
  }
  std::vector<std::uint64_t> copies(weights.size(), 0);
  for (std::size_t i = minp; i < dead_begin; ++i) {
    Rational q = 2 * weights[i] / weights[minp];
    q.canonicalize();
    if (q.get_den() != 1 || !q.get_num().fits_ulong_p()) {
      throw NonIntegralCopyCount("2*w_" + std::to_string(i) + "/w_minp = " + to_string(q) +
                                 " is not an integer; round the entitlements first");
    }
    copies[i] = q.get_num().get_ui();
  }
  return copies;
}

std::vector<CheckViolation> lemma3_bound_check(const KnifeState& state, const Instance& instance) {
  std::vector<CheckViolation> out;
  if (state.remaining == 0) return out;
  const std::size_t next = state.remaining - 1;
  const Rational& bound = instance.weight(state.minp);
  for (std::size_t i = 0; i < instance.agents(); ++i) {
    if (instance.cost(i, next) > bound) {
      out.push_back({"lemma3_next_chore", state.round, i,
                     "cost " + to_string(instance.cost(i, next)) + " of position " +
                         std::to_string(next) + " exceeds w_minp = " + to_string(bound)});
    }
  }
  return out;
}

Bag knife_sweep(KnifeState& state, const Instance& instance) {
  if (state.remaining == 0) throw PreconditionViolation("knife_sweep called with no chores left");
  const Rational threshold = 5 * instance.weight(state.minp);
  const std::size_t last = state.remaining - 1;
  std::vector<std::size_t> holders;
  for (std::size_t a = 0; a < state.copies.size(); ++a) {
    if (state.copies[a] > 0) holders.push_back(a);
  }
  if (holders.empty()) throw PreconditionViolation("knife_sweep called with an empty P'");

  std::vector<Rational> sums(instance.agents());
  bool any = false;
  for (std::size_t a : holders) {
    sums[a] = instance.cost(a, last);
    any = any || sums[a] <= threshold;
  }
  if (!any) {
    throw NoAffordableAgent("no copy in P' can take chore position " + std::to_string(last) +
                            " at threshold " + to_string(threshold));
  }

  std::size_t first = last;
  while (first > 0) {
    const bool extend = std::any_of(holders.begin(), holders.end(), [&](std::size_t a) {
      return sums[a] + instance.cost(a, first - 1) <= threshold;
    });
    if (!extend) break;
    --first;
    for (std::size_t a : holders) sums[a] += instance.cost(a, first);
  }

  const auto recipient = *std::find_if(holders.begin(), holders.end(),
                                       [&](std::size_t a) { return sums[a] <= threshold; });
  --state.copies[recipient];
  state.remaining = first;
  state.knife_lo = first;
  state.knife_hi = last;
  return Bag{first, last, recipient, sums[recipient]};
}

namespace {

void check_preconditions(const Instance& instance) {
  const auto& w = instance.entitlements().sorted();
  for (std::size_t i = 1; i < w.size(); ++i) {
    Rational ratio = w[i] / w[0];
    ratio.canonicalize();
    if (!is_integral_power_of_two(ratio)) {
      throw PreconditionViolation("entitlements are not divisible: w_" + std::to_string(i) +
                                  "/w_0 = " + to_string(ratio));
    }
  }
  for (std::size_t i = 0; i < instance.agents(); ++i) {
    const auto& row = instance.row(i);
    if (!std::is_sorted(row.begin(), row.end())) {
      throw PreconditionViolation("cost row of agent " + instance.agent_label(i) + " is not sorted");
    }
  }
}

}  // namespace

LayeredResult run_layered(const Instance& instance, const KnifeConfig& config) {
  check_preconditions(instance);
  const std::size_t n = instance.agents();
  const std::size_t m = instance.chores();
  const auto& w = instance.entitlements().sorted();

  KnifeState state = KnifeState::initial(n, m);
  KnifeTrace trace;
  std::vector<std::size_t> owner(m, 0);

  auto record_check = [&](SafetyKind kind, Rational lhs, Rational rhs) {
    lhs.canonicalize();
    rhs.canonicalize();
    const bool ok = lhs >= rhs;
    SafetyCheck check{state.round, kind, lhs, rhs, ok};
    trace.events.emplace_back(check);
    if (!ok) {
      throw SafetyViolation(std::string("safety check ") + to_string(kind) + " failed in round " +
                                std::to_string(state.round) + ": " + to_string(lhs) + " < " +
                                to_string(rhs),
                            check, trace);
    }
  };

  while (state.remaining > 0) {
    if (state.minp >= state.dead_begin) {
      SafetyCheck check{state.round, SafetyKind::final_round_exhausts, Rational(0),
                        Rational(static_cast<long>(state.remaining)), false};
      trace.events.emplace_back(check);
      throw SafetyViolation("no agents left in progress with chores remaining", check, trace);
    }
    state.copies = build_copy_multiset(w, state.minp, state.dead_begin);
    trace.events.emplace_back(
        RoundStart{state.round, state.minp, state.dead_begin, state.remaining, state.copies});

    Rational progress = 0;
    Rational dead = 0;
    Rational above_minp = 0;
    for (std::size_t i = state.minp; i < state.dead_begin; ++i) progress += w[i];
    for (std::size_t i = state.dead_begin; i < n; ++i) dead += w[i];
    for (std::size_t i = state.minp + 1; i < n; ++i) above_minp += w[i];
    record_check(SafetyKind::progress_covers_dead, progress, dead);
    record_check(SafetyKind::enough_chores_assigned, Rational(static_cast<long>(m - state.remaining)),
                 above_minp / w[state.minp]);

    const MinpChoice next = compute_minp_prime(w, state.minp, config.minp_rule);
    while (state.copies_left() > 0 && state.remaining > 0) {
      Bag bag = knife_sweep(state, instance);
      for (std::size_t c = bag.first; c <= bag.last; ++c) owner[c] = bag.recipient;
      trace.events.emplace_back(BagAssigned{state.round, bag.recipient, bag.first, bag.last, bag.cost});
    }
    const bool copies_exhausted = state.copies_left() == 0;
    if (next.final_round) {
      record_check(SafetyKind::final_round_exhausts, Rational(0),
                   Rational(static_cast<long>(state.remaining)));
    }
    trace.events.emplace_back(
        RoundEnd{state.round, next.index, next.final_round, state.remaining, copies_exhausted});
    std::fill(state.copies.begin(), state.copies.end(), 0);
    state.dead_begin = state.minp;
    state.minp = next.index;
    ++state.round;
  }
  return LayeredResult{assignment_from_owners(owner, n), std::move(trace)};
}

std::vector<KnifeState> round_start_states(const KnifeTrace& trace, std::size_t agents) {
  std::vector<KnifeState> out;
  for (const auto& e : trace.events) {
    if (const auto* rs = std::get_if<RoundStart>(&e)) {
      KnifeState s;
      s.remaining = rs->remaining;
      s.minp = rs->minp;
      s.dead_begin = rs->dead_begin;
      s.copies = rs->copies;
      s.copies.resize(agents, 0);
      s.round = rs->round;
      s.knife_lo = s.knife_hi = rs->remaining;
      out.push_back(std::move(s));
    }
  }
  return out;
}

namespace {

struct RoundView {
  const RoundStart* start = nullptr;
  std::vector<const BagAssigned*> bags;
  const RoundEnd* end = nullptr;
};

std::vector<RoundView> split_rounds(const KnifeTrace& trace) {
  std::vector<RoundView> rounds;
  for (const auto& e : trace.events) {
    if (const auto* rs = std::get_if<RoundStart>(&e)) {
      rounds.push_back(RoundView{rs, {}, nullptr});
    } else if (const auto* bag = std::get_if<BagAssigned>(&e)) {
      if (!rounds.empty()) rounds.back().bags.push_back(bag);
    } else if (const auto* re = std::get_if<RoundEnd>(&e)) {
      if (!rounds.empty()) rounds.back().end = re;
    }
  }
  return rounds;
}

Rational interval_cost(const Instance& instance, std::size_t agent, std::size_t first, std::size_t last) {
  Rational sum = 0;
  for (std::size_t c = first; c <= last; ++c) sum += instance.cost(agent, c);
  return sum;
}

}  // namespace

std::vector<CheckViolation> lemma4_check(const KnifeTrace& trace, const Instance& instance) {
  std::vector<CheckViolation> out;
  for (const auto& round : split_rounds(trace)) {
    const RoundStart& rs = *round.start;
    const std::uint64_t total =
        std::accumulate(rs.copies.begin(), rs.copies.end(), std::uint64_t{0});
    const std::size_t half = static_cast<std::size_t>(total / 2);
    if (round.bags.size() < half || half == 0) continue;  // chores ran out first
    const std::size_t left_after = round.bags[half - 1]->first;
    const bool final_round = round.end != nullptr && round.end->final_round;
    if (left_after == 0) continue;
    if (final_round) {
      out.push_back({"lemma4_final_round", rs.round, 0,
                     std::to_string(left_after) + " chores left after c/2 = " + std::to_string(half) +
                         " removals in a final round"});
      continue;
    }
    std::vector<std::uint64_t> left = rs.copies;
    for (std::size_t b = 0; b < half; ++b) --left[round.bags[b]->agent];
    const Rational served_floor = 4 * instance.weight(rs.minp);
    const Rational* next_bound =
        round.end != nullptr ? &instance.weight(round.end->next_minp) : nullptr;
    for (std::size_t a = 0; a < left.size(); ++a) {
      if (left[a] == 0) continue;
      for (std::size_t b = 0; b < half; ++b) {
        const auto& bag = *round.bags[b];
        Rational v = interval_cost(instance, a, bag.first, bag.last);
        if (v < served_floor) {
          out.push_back({"lemma4_served_bag", rs.round, a,
                         "bag [" + std::to_string(bag.first) + "," + std::to_string(bag.last) +
                             "] costs " + to_string(v) + " < 4*w_minp = " + to_string(served_floor)});
        }
      }
      if (next_bound != nullptr && instance.cost(a, left_after - 1) > *next_bound) {
        out.push_back({"lemma4_remaining_chore", rs.round, a,
                       "remaining chore costs " + to_string(instance.cost(a, left_after - 1)) +
                           " > w_minp' = " + to_string(*next_bound)});
      }
    }
  }
  return out;
}

std::vector<CheckViolation> verify_trace(const KnifeTrace& trace, const Instance& instance) {
  std::vector<CheckViolation> out;
  const std::size_t m = instance.chores();
  std::vector<int> covered(m, 0);
  for (const auto& e : trace.events) {
    if (const auto* sc = std::get_if<SafetyCheck>(&e); sc && !sc->ok) {
      out.push_back({"safety_check", sc->round, 0, std::string(to_string(sc->kind)) + " recorded as failed"});
    }
  }
  for (const auto& round : split_rounds(trace)) {
    const RoundStart& rs = *round.start;
    const Rational threshold = 5 * instance.weight(rs.minp);
    std::vector<std::uint64_t> left = rs.copies;
    std::size_t expected_last = rs.remaining;
    for (const BagAssigned* bag : round.bags) {
      if (bag->last >= m || bag->first > bag->last) {
        out.push_back({"bag_bounds", rs.round, bag->agent, "malformed bag interval"});
        continue;
      }
      if (bag->last + 1 != expected_last) {
        out.push_back({"bag_contiguity", rs.round, bag->agent, "bag does not start at the knife position"});
      }
      expected_last = bag->first;
      for (std::size_t c = bag->first; c <= bag->last; ++c) ++covered[c];
      if (bag->agent < rs.minp || bag->agent >= rs.dead_begin || left[bag->agent] == 0) {
        out.push_back({"copy_accounting", rs.round, bag->agent, "recipient has no copy left in P'"});
        continue;
      }
      const Rational cost = interval_cost(instance, bag->agent, bag->first, bag->last);
      if (cost != bag->cost) {
        out.push_back({"bag_cost", rs.round, bag->agent, "recorded cost differs from the instance"});
      }
      if (cost > threshold) {
        out.push_back({"bag_threshold", rs.round, bag->agent,
                       "bag costs " + to_string(cost) + " > 5*w_minp = " + to_string(threshold)});
      }
      if (bag->first > 0) {
        for (std::size_t a = 0; a < left.size(); ++a) {
          if (left[a] > 0 && interval_cost(instance, a, bag->first - 1, bag->last) <= threshold) {
            out.push_back({"sweep_maximality", rs.round, a,
                           "could also afford position " + std::to_string(bag->first - 1)});
          }
        }
      }
      --left[bag->agent];
    }
  }
  for (std::size_t c = 0; c < m; ++c) {
    if (covered[c] != 1) {
      out.push_back({"completeness", 0, 0,
                     "position " + std::to_string(c) + " covered " + std::to_string(covered[c]) + " times"});
    }
  }
  return out;
}

SolveResult solve(const Instance& instance, const std::optional<WmmsProfile>& supplied,
                  const SolveOptions& options) {
  SolveResult result{.assignment = {},
                     .report = {},
                     .profile = supplied ? *supplied : wmms_profile(instance, options.oracle),
                     .trace = {},
                     .knife_instance = instance,
                     .knife_assignment = {},
                     .supplied_profile = supplied.has_value()};
  if (result.profile.values.size() != instance.agents()) {
    throw DimensionMismatch("supplied WMMS profile does not match the instance");
  }

  SortedReduction sorted = to_sorted(instance);
  DivisibleReduction rounded = round_entitlements(sorted.sorted_instance);
  WmmsProfile rounded_shares;
  if (supplied) {
    // Rounding at most doubles a share, so 2*WMMS_i bounds the rounded share.
    for (const auto& v : supplied->values) rounded_shares.values.push_back(2 * v);
  } else {
    rounded_shares = wmms_profile(rounded.rounded_instance, options.oracle);
  }
  result.knife_instance = normalize(rounded.rounded_instance, rounded_shares);

  LayeredResult layered = run_layered(result.knife_instance, options.knife);
  result.knife_assignment = layered.assignment;
  result.trace = std::move(layered.trace);
  result.assignment = map_back(layered.assignment, sorted, instance);
  result.report = ratio_report(instance, result.assignment, result.profile);
  return result;
}

}  // namespace chorediv
