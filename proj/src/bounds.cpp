#include "chorediv/bounds.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <sstream>

#include "chorediv/errors.hpp"

namespace chorediv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEqualTol = 1e-12;

bool all_equal(std::span<const double> w) {
  const auto [lo, hi] = std::minmax_element(w.begin(), w.end());
  return *hi - *lo <= kEqualTol * *hi;
}

std::vector<double> normalized_sorted(std::span<const double> weights) {
  if (weights.empty()) throw InvalidWeights("no weights");
  if (weights.size() > kMaxBoundAgents) {
    throw InvalidWeights("at most " + std::to_string(kMaxBoundAgents) + " agents are supported");
  }
  double total = 0;
  for (double x : weights) {
    if (!(x > 0) || !std::isfinite(x)) throw InvalidWeights("weights must be positive and finite");
    total += x;
  }
  std::vector<double> w(weights.begin(), weights.end());
  for (double& x : w) x /= total;
  std::sort(w.begin(), w.end());
  return w;
}

std::shared_ptr<Derivation> base_node(std::vector<double> w, const BaseCase& base) {
  auto d = std::make_shared<Derivation>();
  d->rule = Rule::base;
  d->weights = std::move(w);
  d->base_name = base.name;
  d->constant = base.constant;
  d->value = base.constant;
  return d;
}

std::shared_ptr<Derivation> red2_node(std::vector<double> w) {
  auto d = std::make_shared<Derivation>();
  d->rule = Rule::red2;
  d->constant = symmetric_constant(w.size());
  d->ratio = w.back() / w.front();
  d->value = d->ratio * d->constant;
  d->weights = std::move(w);
  return d;
}

// Red1 node over ascending weights; groups/reps already use those indices.
std::shared_ptr<Derivation> red1_node(std::vector<double> w, Grouping g,
                                      std::shared_ptr<const Derivation> child) {
  auto d = std::make_shared<Derivation>();
  d->rule = Rule::red1;
  d->alpha = grouping_alpha(w, g);
  d->weights = std::move(w);
  d->groups = std::move(g.groups);
  d->representatives = std::move(g.representatives);
  d->value = d->alpha * child->value;
  d->child = std::move(child);
  return d;
}

std::vector<double> normalize(std::vector<double> w) {
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  return w;
}

BoundResult result_of(std::shared_ptr<const Derivation> d) { return {d->value, std::move(d)}; }

// Memoized search over subsets of one sorted weight vector. A node is a
// bitmask of agents plus the red1 depth used to reach it.
class Search {
 public:
  Search(const std::vector<double>& w, const SearchConfig& config)
      : w_(w), n_(w.size()), max_depth_(std::max(config.max_depth, 0)) {
    switch (config.family) {
      case GroupingFamily::exhaustive: exhaustive_limit_ = kMaxBoundAgents; break;
      case GroupingFamily::automatic: exhaustive_limit_ = config.exhaustive_limit; break;
      default: exhaustive_limit_ = 0; break;
    }
    const std::size_t size = (std::size_t{1} << n_) * static_cast<std::size_t>(max_depth_ + 1);
    auto& memo = memo_storage();
    if (memo.size() < size) memo.resize(size);
    if (++stamp_counter() == 0) {
      std::fill(memo.begin(), memo.end(), Node{});
      stamp_counter() = 1;
    }
    stamp_ = stamp_counter();
  }

  double solve(std::uint32_t mask, int depth) {
    Node& node = at(mask, depth);
    if (node.stamp == stamp_) return node.value;
    Node result = compute(mask, depth);
    result.stamp = stamp_;
    at(mask, depth) = result;
    return result.value;
  }

  std::shared_ptr<const Derivation> build(std::uint32_t mask, int depth) {
    solve(mask, depth);
    const Node node = at(mask, depth);
    std::vector<std::size_t> members = members_of(mask);
    std::vector<double> local;
    for (std::size_t a : members) local.push_back(w_[a]);
    local = normalize(std::move(local));
    switch (node.rule) {
      case Rule::base: {
        auto base = base_f(local);
        return base_node(std::move(local), *base);
      }
      case Rule::red2:
        return red2_node(std::move(local));
      case Rule::red1: {
        Grouping g;
        for (std::size_t r = 0; r < members.size(); ++r) {
          if (!(node.child >> members[r] & 1U)) continue;
          std::vector<std::size_t> group;
          for (std::size_t p = 0; p < members.size(); ++p) {
            if (node.owner[members[p]] == members[r]) group.push_back(p);
          }
          g.groups.push_back(std::move(group));
          g.representatives.push_back(r);
        }
        return red1_node(std::move(local), std::move(g), build(node.child, node.child_depth));
      }
    }
    return nullptr;
  }

 private:
  struct Node {
    std::uint32_t stamp = 0;
    Rule rule = Rule::base;
    std::uint32_t child = 0;
    int child_depth = 0;
    double value = 0;
    std::array<std::uint8_t, kMaxBoundAgents> owner{};
  };

  static std::vector<Node>& memo_storage() {
    thread_local std::vector<Node> memo;
    return memo;
  }
  static std::uint32_t& stamp_counter() {
    thread_local std::uint32_t stamp = 0;
    return stamp;
  }

  Node& at(std::uint32_t mask, int depth) {
    return memo_storage()[static_cast<std::size_t>(mask) * (max_depth_ + 1) + depth];
  }

  std::vector<std::size_t> members_of(std::uint32_t mask) const {
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < n_; ++a) {
      if (mask >> a & 1U) out.push_back(a);
    }
    return out;
  }

  Node compute(std::uint32_t mask, int depth) {
    std::array<std::size_t, kMaxBoundAgents> idx{};
    std::size_t s = 0;
    double total = 0;
    for (std::size_t a = 0; a < n_; ++a) {
      if (mask >> a & 1U) {
        idx[s++] = a;
        total += w_[a];
      }
    }
    Node best;
    best.value = kInf;
    if (s == 1) {
      best.value = 1;
      return best;
    }
    const double lo = w_[idx[0]];
    const double hi = w_[idx[s - 1]];
    const bool uniform = hi - lo <= kEqualTol * hi;
    if (s == 2) {
      best.value = uniform ? 1.0 : two_agent_constant();
      return best;
    }
    if (uniform) best.value = symmetric_constant(s);
    const double red2 = hi / lo * symmetric_constant(s);
    if (red2 < best.value) {
      best.value = red2;
      best.rule = Rule::red2;
    }
    if (depth < max_depth_) {
      const std::span<const std::size_t> members(idx.data(), s);
      if (s <= exhaustive_limit_) {
        // Nested red1 inside the exhaustive family is dominated by a single
        // red1 on the composed grouping (alphas multiply at best), so
        // children only need base cases and red2. The cheap family runs
        // first for a low incumbent.
        heuristic_red1(members, max_depth_, best);
        exhaustive_red1(mask, members, total, best);
      } else {
        heuristic_red1(members, depth + 1, best);
      }
    }
    return best;
  }

  void consider(double alpha, std::uint32_t child, int child_depth, Node& best,
                const std::array<std::uint8_t, kMaxBoundAgents>& owner) {
    if (alpha >= best.value) return;
    const double value = alpha * solve(child, child_depth);
    if (value < best.value) {
      best.value = value;
      best.rule = Rule::red1;
      best.child = child;
      best.child_depth = child_depth;
      best.owner = owner;
    }
  }

  void heuristic_red1(std::span<const std::size_t> members, int child_depth, Node& best) {
    const std::size_t s = members.size();
    std::array<std::uint8_t, kMaxBoundAgents> owner{};
    // Contiguous runs: bit p of `cuts` ends a run after member p.
    const std::uint32_t all_cuts = (std::uint32_t{1} << (s - 1)) - 1;
    for (std::uint32_t cuts = 0; cuts < all_cuts; ++cuts) {
      double alpha = 0;
      double run = 0;
      std::uint32_t child = 0;
      std::size_t start = 0;
      for (std::size_t p = 0; p < s && alpha < best.value; ++p) {
        run += w_[members[p]];
        if (p == s - 1 || (cuts >> p & 1U)) {
          const std::size_t rep = members[p];
          alpha = std::max(alpha, run / w_[rep]);
          child |= std::uint32_t{1} << rep;
          for (std::size_t q = start; q <= p; ++q) owner[members[q]] = static_cast<std::uint8_t>(rep);
          run = 0;
          start = p + 1;
        }
      }
      consider(alpha, child, child_depth, best, owner);
    }
    // Residue classes mod g, each represented by its heaviest member.
    for (std::size_t g = 2; g < s; ++g) {
      double alpha = 0;
      std::uint32_t child = 0;
      for (std::size_t t = 0; t < g; ++t) {
        double sum = 0;
        std::size_t last = t;
        for (std::size_t p = t; p < s; p += g) {
          sum += w_[members[p]];
          last = p;
        }
        const std::size_t rep = members[last];
        alpha = std::max(alpha, sum / w_[rep]);
        child |= std::uint32_t{1} << rep;
        for (std::size_t p = t; p < s; p += g) owner[members[p]] = static_cast<std::uint8_t>(rep);
      }
      consider(alpha, child, child_depth, best, owner);
    }
  }

  void exhaustive_red1(std::uint32_t mask, std::span<const std::size_t> members, double total, Node& best) {
    for (std::uint32_t reps = (mask - 1) & mask; reps != 0; reps = (reps - 1) & mask) {
      double rep_total = 0;
      for (std::size_t a : members) {
        if (reps >> a & 1U) rep_total += w_[a];
      }
      const double floor = total / rep_total;  // no grouping beats the average
      if (floor >= best.value) continue;
      const double child_value = solve(reps, max_depth_);
      if (floor * child_value >= best.value) continue;
      std::array<std::uint8_t, kMaxBoundAgents> owner{};
      const double alpha = min_alpha(members, reps, best.value / child_value, owner);
      if (alpha * child_value < best.value) {
        best.value = alpha * child_value;
        best.rule = Rule::red1;
        best.child = reps;
        best.child_depth = max_depth_;
        best.owner = owner;
      }
    }
  }

  // Smallest alpha over assignments of `members` onto the representatives
  // in `reps` that leave no representative without a group; kInf when
  // nothing beats `cap`.
  double min_alpha(std::span<const std::size_t> members, std::uint32_t reps, double cap,
                   std::array<std::uint8_t, kMaxBoundAgents>& owner_out) {
    MinAlpha state{w_, {}, {}, {}, {}, 0, cap, kInf, {}};
    for (std::size_t p = members.size(); p-- > 0;) state.order[state.count_agents++] = members[p];
    for (std::size_t a : members) {
      if (reps >> a & 1U) state.reps[state.count_reps++] = a;
    }
    state.dfs(0, 0.0, state.count_reps);
    if (state.found < kInf) owner_out = state.best_owner;
    return state.found;
  }

  struct MinAlpha {
    const std::vector<double>& w;
    std::array<std::size_t, kMaxBoundAgents> order;
    std::array<std::size_t, kMaxBoundAgents> reps;
    std::array<double, kMaxBoundAgents> load;
    std::array<std::uint8_t, kMaxBoundAgents> owner;
    std::size_t count_agents = 0;
    double cap;
    double found;
    std::array<std::uint8_t, kMaxBoundAgents> best_owner;
    std::size_t count_reps = 0;

    void dfs(std::size_t pos, double current, std::size_t empty) {
      if (pos == count_agents) {
        found = current;
        cap = current;
        best_owner = owner;
        return;
      }
      if (empty > count_agents - pos) return;
      const std::size_t a = order[pos];
      for (std::size_t r = 0; r < count_reps; ++r) {
        // Empty representatives of equal weight are interchangeable.
        if (load[r] == 0 && r > 0 && load[r - 1] == 0 && w[reps[r]] == w[reps[r - 1]]) continue;
        const double next = std::max(current, (load[r] + w[a]) / w[reps[r]]);
        if (next >= cap) continue;
        const bool was_empty = load[r] == 0;
        load[r] += w[a];
        owner[a] = static_cast<std::uint8_t>(reps[r]);
        dfs(pos + 1, next, empty - (was_empty ? 1 : 0));
        load[r] -= w[a];
        if (was_empty) load[r] = 0;
      }
    }
  };

  const std::vector<double>& w_;
  std::size_t n_;
  int max_depth_;
  std::size_t exhaustive_limit_ = 0;
  std::uint32_t stamp_ = 0;
};

std::string format_weights(const std::vector<double>& w) {
  std::ostringstream out;
  out.precision(6);
  out << '<';
  for (std::size_t i = 0; i < w.size(); ++i) out << (i ? ", " : "") << w[i];
  out << '>';
  return out.str();
}

void describe_into(const Derivation& d, int indent, std::ostringstream& out) {
  out << std::string(static_cast<std::size_t>(indent) * 2, ' ');
  out.precision(8);
  switch (d.rule) {
    case Rule::base:
      out << "base " << d.base_name << " = " << d.constant << " on " << format_weights(d.weights) << '\n';
      return;
    case Rule::red2:
      out << "red2 " << d.ratio << " * " << d.constant << " = " << d.value << " on "
          << format_weights(d.weights) << '\n';
      return;
    case Rule::red1:
      out << "red1 alpha " << d.alpha << " -> " << d.value << " on " << format_weights(d.weights) << " groups";
      for (std::size_t g = 0; g < d.groups.size(); ++g) {
        out << " {";
        for (std::size_t k = 0; k < d.groups[g].size(); ++k) out << (k ? "," : "") << 'a' << d.groups[g][k] + 1;
        out << "}:a" << d.representatives[g] + 1;
      }
      out << '\n';
      describe_into(*d.child, indent + 1, out);
      return;
  }
}

}  // namespace

double two_agent_constant() { return (std::sqrt(3.0) + 1.0) / 2.0; }

double symmetric_constant(std::size_t n) {
  if (n <= 2) return 1.0;
  if (n == 3) return 15.0 / 13.0;
  if (n <= 7) return 20.0 / 17.0;
  return 13.0 / 11.0;
}

std::optional<BaseCase> base_f(std::span<const double> weights) {
  if (weights.size() == 1) return BaseCase{"single", 1.0};
  const bool uniform = all_equal(weights);
  if (weights.size() == 2) {
    return uniform ? BaseCase{"two_equal", 1.0} : BaseCase{"two_agent", two_agent_constant()};
  }
  if (!uniform) return std::nullopt;
  const std::size_t n = weights.size();
  if (n == 3) return BaseCase{"uniform_3", symmetric_constant(3)};
  if (n <= 7) return BaseCase{"uniform_4_7", symmetric_constant(n)};
  return BaseCase{"uniform_8_plus", symmetric_constant(n)};
}

const char* to_string(Rule rule) {
  switch (rule) {
    case Rule::base: return "base";
    case Rule::red1: return "red1";
    case Rule::red2: return "red2";
  }
  return "unknown";
}

double evaluate(const Derivation& d) {
  switch (d.rule) {
    case Rule::base:
      return d.constant;
    case Rule::red2: {
      const auto [lo, hi] = std::minmax_element(d.weights.begin(), d.weights.end());
      return *hi / *lo * d.constant;
    }
    case Rule::red1:
      return grouping_alpha(d.weights, Grouping{d.groups, d.representatives}) * evaluate(*d.child);
  }
  return kInf;
}

double grouping_alpha(std::span<const double> weights, const Grouping& grouping) {
  const std::size_t n = weights.size();
  if (grouping.groups.size() != grouping.representatives.size() || grouping.groups.empty()) {
    throw InvalidGrouping("need one representative per group");
  }
  std::vector<int> seen(n, 0);
  std::vector<int> rep_seen(n, 0);
  double alpha = 0;
  for (std::size_t g = 0; g < grouping.groups.size(); ++g) {
    const std::size_t rep = grouping.representatives[g];
    if (rep >= n || rep_seen[rep]++) throw InvalidGrouping("representatives must be distinct agents");
    if (grouping.groups[g].empty()) throw InvalidGrouping("groups must be nonempty");
    double sum = 0;
    for (std::size_t a : grouping.groups[g]) {
      if (a >= n || seen[a]++) throw InvalidGrouping("groups must partition the agents");
      sum += weights[a];
    }
    alpha = std::max(alpha, sum / weights[rep]);
  }
  if (std::count(seen.begin(), seen.end(), 1) != static_cast<long>(n)) {
    throw InvalidGrouping("groups must cover every agent");
  }
  return alpha;
}

BoundResult red1_bound(std::span<const double> weights, const Grouping& grouping, const BoundFn& child) {
  grouping_alpha(weights, grouping);  // validates
  const std::size_t n = weights.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return weights[a] < weights[b]; });
  std::vector<std::size_t> position(n);
  for (std::size_t p = 0; p < n; ++p) position[order[p]] = p;

  std::vector<double> sorted;
  for (std::size_t a : order) sorted.push_back(weights[a]);
  sorted = normalize(std::move(sorted));

  // Groups listed by ascending representative weight.
  std::vector<std::size_t> by_rep(grouping.groups.size());
  std::iota(by_rep.begin(), by_rep.end(), std::size_t{0});
  std::stable_sort(by_rep.begin(), by_rep.end(), [&](std::size_t a, std::size_t b) {
    return position[grouping.representatives[a]] < position[grouping.representatives[b]];
  });
  Grouping local;
  std::vector<double> reps;
  for (std::size_t g : by_rep) {
    std::vector<std::size_t> group;
    for (std::size_t a : grouping.groups[g]) group.push_back(position[a]);
    std::sort(group.begin(), group.end());
    local.groups.push_back(std::move(group));
    local.representatives.push_back(position[grouping.representatives[g]]);
    reps.push_back(sorted[position[grouping.representatives[g]]]);
  }
  BoundResult sub = child(normalize(std::move(reps)));
  return result_of(red1_node(std::move(sorted), std::move(local), sub.derivation));
}

BoundResult red2_bound(std::span<const double> weights) {
  if (weights.size() < 2) throw InvalidWeights("red2 needs at least two agents");
  return result_of(red2_node(normalized_sorted(weights)));
}

const char* to_string(GroupingFamily family) {
  switch (family) {
    case GroupingFamily::three_agent: return "three_agent";
    case GroupingFamily::four_agent: return "four_agent";
    case GroupingFamily::exhaustive: return "exhaustive";
    case GroupingFamily::heuristic: return "heuristic";
    case GroupingFamily::automatic: return "automatic";
  }
  return "unknown";
}

std::optional<GroupingFamily> parse_family(const std::string& text) {
  for (auto f : {GroupingFamily::three_agent, GroupingFamily::four_agent, GroupingFamily::exhaustive,
                 GroupingFamily::heuristic, GroupingFamily::automatic}) {
    if (text == to_string(f)) return f;
  }
  return std::nullopt;
}

namespace {

std::shared_ptr<const Derivation> two_agent_base(std::vector<double> w) {
  return base_node(std::move(w), BaseCase{"two_agent", two_agent_constant()});
}

BoundResult three_agent_bound(const std::vector<double>& w) {
  if (w.size() != 3) throw InvalidWeights("the three_agent family needs exactly three agents");
  auto pair = red1_node(w, Grouping{{{1}, {0, 2}}, {1, 2}}, two_agent_base(normalize({w[1], w[2]})));
  auto sym = red2_node(w);
  return result_of(sym->value <= pair->value ? std::shared_ptr<const Derivation>(sym) : pair);
}

BoundResult four_agent_bound(const std::vector<double>& w) {
  if (w.size() != 4) throw InvalidWeights("the four_agent family needs exactly four agents");
  std::vector<std::shared_ptr<const Derivation>> options;
  options.push_back(red1_node(w, Grouping{{{0, 1, 2, 3}}, {3}}, base_node({1.0}, BaseCase{"single", 1.0})));
  const std::vector<double> reps = normalize({w[2], w[3]});
  auto k_child = two_agent_base(reps);
  auto ratio_child = red2_node(reps);
  std::shared_ptr<const Derivation> child =
      ratio_child->value < k_child->value ? std::shared_ptr<const Derivation>(ratio_child) : k_child;
  options.push_back(red1_node(w, Grouping{{{0, 2}, {1, 3}}, {2, 3}}, child));
  options.push_back(red2_node(w));
  return result_of(*std::min_element(options.begin(), options.end(),
                                     [](const auto& a, const auto& b) { return a->value < b->value; }));
}

}  // namespace

BoundResult best_bound(std::span<const double> weights, const SearchConfig& config) {
  const std::vector<double> w = normalized_sorted(weights);
  if (config.family == GroupingFamily::three_agent) return three_agent_bound(w);
  if (config.family == GroupingFamily::four_agent) return four_agent_bound(w);
  Search search(w, config);
  const std::uint32_t all = (std::uint32_t{1} << w.size()) - 1;
  return result_of(search.build(all, 0));
}

ThreeAgentBounds three_agent_bounds(std::span<const double> weights) {
  const std::vector<double> w = normalized_sorted(weights);
  if (w.size() != 3) throw InvalidWeights("three weights expected");
  return {(w[0] + w[2]) * two_agent_constant() / w[2], 15.0 * w[2] / (13.0 * w[0])};
}

FourAgentBounds four_agent_bounds(std::span<const double> weights) {
  const std::vector<double> w = normalized_sorted(weights);
  if (w.size() != 4) throw InvalidWeights("four weights expected");
  const double alpha = std::max((w[0] + w[2]) / w[2], (w[1] + w[3]) / w[3]);
  return {1.0 / w[3], alpha * std::min(w[3] / w[2], two_agent_constant()), 20.0 * w[3] / (17.0 * w[0]),
          w[0] / w[2] >= w[1] / w[3]};
}

double theorem3_constant() {
  const double r3 = std::sqrt(3.0);
  return (13.0 + 13.0 * r3 + std::sqrt(2236.0 + 1898.0 * r3)) / 52.0;
}

double theorem4_residual(double x) {
  const double k = two_agent_constant();
  return 1.0 / x + 20.0 / (17.0 * x * x) + 40.0 / (17.0 * x * x * (x / k - 1.0)) - 1.0;
}

double theorem4_constant() {
  // Decreasing on (k, inf): +inf at k, negative at 10.
  double lo = two_agent_constant();
  double hi = 10.0;
  for (int i = 0; i < 200 && hi - lo > 0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (theorem4_residual(mid) > 0 ? lo : hi) = mid;
  }
  return std::abs(theorem4_residual(lo)) < std::abs(theorem4_residual(hi)) ? lo : hi;
}

double logn_baseline(std::size_t n) { return std::log2(static_cast<double>(n)) + 1.0; }

std::string describe(const Derivation& derivation) {
  std::ostringstream out;
  describe_into(derivation, 0, out);
  return out.str();
}

}  // namespace chorediv
