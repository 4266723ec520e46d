#include "chorediv/generator.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "chorediv/errors.hpp"

namespace chorediv {

namespace {

std::vector<Rational> draw_weights(const GenSpec& spec, std::mt19937_64& rng) {
  const std::size_t n = spec.n;
  std::vector<Rational> w;
  switch (spec.weight_mode) {
    case WeightMode::uniform:
      w.assign(n, Rational(1, static_cast<unsigned long>(n)));
      break;
    case WeightMode::dirichlet_unit: {
      const std::uint64_t denom = 1000 * static_cast<std::uint64_t>(n);
      std::set<std::uint64_t> cuts;
      while (cuts.size() + 1 < n) cuts.insert(1 + uniform_below(rng, denom - 1));
      std::uint64_t prev = 0;
      for (std::uint64_t c : cuts) {
        w.emplace_back(static_cast<unsigned long>(c - prev), static_cast<unsigned long>(denom));
        prev = c;
      }
      w.emplace_back(static_cast<unsigned long>(denom - prev), static_cast<unsigned long>(denom));
      break;
    }
    case WeightMode::power_of_two: {
      std::vector<unsigned long> raw;
      unsigned long total = 0;
      for (std::size_t i = 0; i < n; ++i) {
        raw.push_back(1UL << uniform_below(rng, 4));
        total += raw.back();
      }
      for (unsigned long r : raw) w.emplace_back(r, total);
      break;
    }
    case WeightMode::fixed:
      if (spec.fixed_weights.size() != n) throw DimensionMismatch("fixed weights do not match n");
      w = spec.fixed_weights;
      break;
  }
  for (auto& x : w) x.canonicalize();
  return w;
}

CostRow integer_row(std::size_t m, std::uint64_t max_cost, std::mt19937_64& rng) {
  CostRow row;
  for (std::size_t c = 0; c < m; ++c) {
    row.emplace_back(static_cast<unsigned long>(uniform_below(rng, max_cost + 1)));
  }
  return row;
}

CostRow planted_row(std::size_t m, const std::vector<Rational>& w, std::uint64_t max_cost,
                    std::mt19937_64& rng) {
  const std::size_t n = w.size();
  std::vector<std::size_t> owner(m);
  std::vector<unsigned long> share(m);
  std::vector<unsigned long> total(n, 0);
  // Every bundle gets a chore when m >= n, so each one sums to its weight.
  for (std::size_t c = 0; c < m; ++c) owner[c] = c < n ? c : uniform_below(rng, n);
  for (std::size_t c = m; c > 1; --c) std::swap(owner[c - 1], owner[uniform_below(rng, c)]);
  for (std::size_t c = 0; c < m; ++c) {
    share[c] = 1 + static_cast<unsigned long>(uniform_below(rng, std::max<std::uint64_t>(max_cost, 1)));
    total[owner[c]] += share[c];
  }
  CostRow row;
  for (std::size_t c = 0; c < m; ++c) {
    Rational v = w[owner[c]] * Rational(share[c], total[owner[c]]);
    v.canonicalize();
    row.push_back(v);
  }
  return row;
}

}  // namespace

const char* to_string(WeightMode mode) {
  switch (mode) {
    case WeightMode::uniform: return "uniform";
    case WeightMode::dirichlet_unit: return "dirichlet_unit";
    case WeightMode::power_of_two: return "power_of_two";
    case WeightMode::fixed: return "fixed";
  }
  return "unknown";
}

const char* to_string(CostMode mode) {
  switch (mode) {
    case CostMode::iid_uniform_integer: return "iid_uniform_integer";
    case CostMode::identical_agents: return "identical_agents";
    case CostMode::correlated: return "correlated";
    case CostMode::planted: return "planted";
  }
  return "unknown";
}

std::optional<WeightMode> parse_weight_mode(const std::string& text) {
  for (auto m : {WeightMode::uniform, WeightMode::dirichlet_unit, WeightMode::power_of_two, WeightMode::fixed}) {
    if (text == to_string(m)) return m;
  }
  return std::nullopt;
}

std::optional<CostMode> parse_cost_mode(const std::string& text) {
  for (auto m : {CostMode::iid_uniform_integer, CostMode::identical_agents, CostMode::correlated,
                 CostMode::planted}) {
    if (text == to_string(m)) return m;
  }
  return std::nullopt;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below needs a positive bound");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  for (;;) {
    const std::uint64_t x = rng();
    if (x < limit) return x % bound;
  }
}

Instance generate(const GenSpec& spec) {
  if (spec.n == 0) throw std::invalid_argument("n must be at least 1");
  std::mt19937_64 rng(spec.seed);
  std::vector<Rational> w = draw_weights(spec, rng);
  std::vector<CostRow> costs;
  switch (spec.cost_mode) {
    case CostMode::iid_uniform_integer:
      for (std::size_t i = 0; i < spec.n; ++i) costs.push_back(integer_row(spec.m, spec.max_cost, rng));
      break;
    case CostMode::identical_agents:
      costs.assign(spec.n, integer_row(spec.m, spec.max_cost, rng));
      break;
    case CostMode::correlated: {
      CostRow base = integer_row(spec.m, spec.max_cost, rng);
      for (std::size_t i = 0; i < spec.n; ++i) {
        CostRow row;
        for (const auto& b : base) row.push_back(4 * b + static_cast<unsigned long>(uniform_below(rng, 4)));
        costs.push_back(std::move(row));
      }
      break;
    }
    case CostMode::planted:
      for (std::size_t i = 0; i < spec.n; ++i) costs.push_back(planted_row(spec.m, w, spec.max_cost, rng));
      break;
  }
  return Instance::from_input(std::move(w), std::move(costs));
}

}  // namespace chorediv
