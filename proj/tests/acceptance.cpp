// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// on any failure; with --allow-documented, the known conflicts listed in
// kDocumented may fail without failing the run (their lines still say FAIL).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "chorediv/bounds.hpp"
#include "chorediv/generator.hpp"
#include "chorediv/io.hpp"
#include "chorediv/knife.hpp"
#include "chorediv/oracle.hpp"
#include "chorediv/reductions.hpp"
#include "chorediv/simplex.hpp"
#include "../tools/cli.hpp"

using namespace chorediv;
namespace fs = std::filesystem;

namespace {

const std::set<std::string> kDocumented = {"6.closed_form", "8.no_exceed_small_n"};

struct Outcome {
  std::vector<std::string> failed;  // sub-check ids
  std::string detail;

  void require(bool ok, const std::string& id, const std::string& note = {}) {
    if (!ok) failed.push_back(id + (note.empty() ? "" : " (" + note + ")"));
  }
};

std::string fmt(double v, int digits = 7) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

Instance make_instance(std::size_t n, std::size_t m, std::uint64_t seed, WeightMode wm, CostMode cm) {
  GenSpec spec;
  spec.n = n;
  spec.m = m;
  spec.seed = seed;
  spec.weight_mode = wm;
  spec.cost_mode = cm;
  spec.max_cost = 20;
  return generate(spec);
}

WeightMode weight_mode_for(std::uint64_t s) {
  switch (s % 3) {
    case 0: return WeightMode::uniform;
    case 1: return WeightMode::dirichlet_unit;
    default: return WeightMode::power_of_two;
  }
}

CostMode cost_mode_for(std::uint64_t s) {
  switch (s % 4) {
    case 0: return CostMode::iid_uniform_integer;
    case 1: return CostMode::correlated;
    case 2: return CostMode::planted;
    default: return CostMode::identical_agents;
  }
}

int run_cli_args(std::vector<std::string> args, std::string* out_text = nullptr) {
  args.insert(args.begin(), "chorediv");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (code != 0) std::cerr << err.str();
  return code;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(read_text_file(path));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

Outcome criterion1() {
  Outcome o;
  std::size_t uniform = 0;
  for (std::uint64_t s = 0; s < 500; ++s) {
    const std::size_t n = 1 + s % 3;
    const std::size_t m = 1 + (s / 3) % 7;
    auto inst = make_instance(n, m, 10000 + s, weight_mode_for(s / 21), CostMode::iid_uniform_integer);
    const bool equal = inst.weight(0) == inst.weight(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      auto fast = wmms_with_witness(inst, i);
      auto slow = reference::wmms_by_enumeration(inst, i);
      o.require(fast.value == slow.value, "1.strategies_agree", "seed " + std::to_string(10000 + s));
      o.require(wmms_objective(inst, i, fast.witness) == fast.value, "1.witness");
      if (equal) {
        o.require(slow.value == reference::mms_by_enumeration(inst, i).value, "1.uniform_wmms_mms");
        o.require(fast.value == mms(inst, i), "1.uniform_wmms_mms");
      }
    }
    if (equal) ++uniform;
  }
  o.detail = "500 instances, " + std::to_string(uniform) + " with equal entitlements";
  return o;
}

Outcome criterion2() {
  Outcome o;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const std::size_t n = 1 + s % 3;
    const std::size_t m = 1 + (s / 3) % 8;
    auto inst = make_instance(n, m, 20000 + s, weight_mode_for(s), cost_mode_for(s / 3));
    auto red = to_sorted(inst);
    for (std::size_t i = 0; i < n; ++i) {
      o.require(wmms(inst, i) == wmms(red.sorted_instance, i), "2.sorting_preserves_wmms");
    }
    std::mt19937_64 rng(s);
    for (int t = 0; t < 5; ++t) {
      std::vector<std::size_t> owners(m);
      for (auto& x : owners) x = uniform_below(rng, n);
      auto sorted_assignment = assignment_from_owners(owners, n);
      auto mapped = map_back(sorted_assignment, red, inst);
      validate_assignment(mapped, n, m);
      for (std::size_t i = 0; i < n; ++i) {
        o.require(inst.bundle_cost(i, mapped.bundles[i]) <=
                      red.sorted_instance.bundle_cost(i, sorted_assignment.bundles[i]),
                  "2.map_back_dominates");
      }
    }
  }
  o.detail = "200 instances, 5 assignments each";
  return o;
}

Outcome criterion3() {
  Outcome o;
  Rational worst_ratio = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    auto inst = make_instance(2 + s % 7, 1, 30000 + s, WeightMode::dirichlet_unit, CostMode::iid_uniform_integer);
    auto rounded = round_entitlements(inst).rounded_instance;
    const auto& w = inst.entitlements().sorted();
    const auto& r = rounded.entitlements().sorted();
    for (std::size_t i = 0; i < w.size(); ++i) {
      for (std::size_t j = 0; j < w.size(); ++j) {
        o.require(is_power_of_two(r[i] / r[j]), "3.power_of_two_ratios");
        o.require(r[i] / r[j] <= 2 * w[i] / w[j], "3.ratio_at_most_doubled");
      }
    }
  }
  for (std::uint64_t s = 0; s < 100; ++s) {
    const std::size_t n = 2 + s % 3;
    const std::size_t m = 2 + (s / 3) % 6;
    auto inst = make_instance(n, m, 31000 + s, WeightMode::dirichlet_unit, cost_mode_for(s));
    auto rounded = round_entitlements(inst).rounded_instance;
    for (std::size_t i = 0; i < n; ++i) {
      const Rational before = wmms(inst, i);
      const Rational after = wmms(rounded, i);
      o.require(after <= 2 * before, "3.wmms_at_most_doubled");
      if (before > 0) worst_ratio = std::max(worst_ratio, Rational(after / before));
    }
  }
  o.detail = "200 weight vectors, 100 instances, worst WMMS'/WMMS = " + to_string(worst_ratio);
  return o;
}

struct EndToEnd {
  std::vector<std::pair<Instance, KnifeTrace>> runs;  // knife instance and trace
  Rational max_ratio = 0;
};

Outcome criterion4(EndToEnd& e2e) {
  Outcome o;
  std::size_t safety_checks = 0;
  for (std::uint64_t s = 0; s < 300; ++s) {
    const std::size_t n = 1 + s % 4;
    const std::size_t m = 1 + (s / 4) % 10;
    auto inst = make_instance(n, m, 40000 + s, weight_mode_for(s / 4), cost_mode_for(s / 12));
    try {
      auto r = solve(inst);
      for (const auto& ev : r.trace.events) {
        if (const auto* c = std::get_if<SafetyCheck>(&ev)) {
          ++safety_checks;
          o.require(c->ok, "4.safety_checks");
        }
      }
      o.require(verify_trace(r.trace, r.knife_instance).empty(), "4.trace_replay");
      // The report is against the oracle's profile of the original instance;
      // recheck each ratio against an independent enumeration.
      for (std::size_t i = 0; i < n; ++i) {
        const Rational share = reference::wmms_by_enumeration(inst, i).value;
        const Rational cost = inst.bundle_cost(i, r.assignment.bundles[i]);
        if (share == 0) {
          o.require(cost == 0, "4.ratio_at_most_20", "positive cost against share 0");
          continue;
        }
        const Rational ratio = cost / share;
        o.require(ratio <= 20, "4.ratio_at_most_20");
        e2e.max_ratio = std::max(e2e.max_ratio, ratio);
      }
      const Instance& k = r.knife_instance;
      for (std::size_t i = 0; i < n; ++i) {
        o.require(k.bundle_cost(i, r.knife_assignment.bundles[i]) <= 10 * k.weight(i), "4.knife_cost_10w");
      }
      e2e.runs.emplace_back(k, r.trace);
    } catch (const SafetyViolation& v) {
      o.require(false, "4.safety_checks", v.what());
    }
  }
  o.detail = "300 instances, " + std::to_string(safety_checks) + " safety checks, empirical max ratio " +
             to_string(e2e.max_ratio) + " = " + fmt(to_double(e2e.max_ratio));
  return o;
}

Outcome criterion5(const EndToEnd& e2e) {
  Outcome o;
  std::size_t rounds = 0;
  for (const auto& [k, trace] : e2e.runs) {
    for (const auto& state : round_start_states(trace, k.agents())) {
      ++rounds;
      for (const auto& v : lemma3_bound_check(state, k)) o.require(false, "5.lemma3", v.detail);
    }
    for (const auto& v : lemma4_check(trace, k)) o.require(false, "5.lemma4", v.check + ": " + v.detail);
  }
  o.require(e2e.runs.size() == 300, "5.all_traces", std::to_string(e2e.runs.size()) + " traces");

  // With at most four agents the heaviest layer usually absorbs everything
  // in one round, so also replay many-agent planted runs, which take
  // several rounds. Planted rows keep every share at most w_i.
  std::size_t extra_rounds = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    auto inst = to_sorted(make_instance(10 + s % 11, 20 + s % 41, 50000 + s,
                                        s % 2 ? WeightMode::power_of_two : WeightMode::uniform,
                                        CostMode::planted))
                    .sorted_instance;
    try {
      auto r = run_layered(inst);
      for (const auto& state : round_start_states(r.trace, inst.agents())) {
        ++extra_rounds;
        for (const auto& v : lemma3_bound_check(state, inst)) o.require(false, "5.lemma3_many_agents", v.detail);
      }
      for (const auto& v : lemma4_check(r.trace, inst)) o.require(false, "5.lemma4_many_agents", v.detail);
      o.require(verify_trace(r.trace, inst).empty(), "5.replay_many_agents");
    } catch (const SafetyViolation& v) {
      o.require(false, "5.safety_many_agents", v.what());
    }
  }
  o.detail = std::to_string(e2e.runs.size()) + " traces, " + std::to_string(rounds) +
             " rounds; plus 100 planted runs with 10-20 agents, " + std::to_string(extra_rounds) + " rounds";
  return o;
}

Outcome criterion6() {
  Outcome o;
  const double c = theorem3_constant();
  o.require(std::abs(c - 2.11222) <= 5e-6, "6.closed_form", "|" + fmt(c, 10) + " - 2.11222| > 5e-6");
  const int N = 1000;
  double best = 0;
  for (int i = 1; i <= N; ++i) {
    for (int j = i; i + j <= N; ++j) {
      const int l = N - i - j;
      if (l < j) break;
      const std::vector<double> w = {double(i) / N, double(j) / N, double(l) / N};
      const auto b = three_agent_bounds(w);
      best = std::max(best, std::min(b.red1_two_agent, b.red2_symmetric));
    }
  }
  o.require(std::abs(best - c) <= 1e-3, "6.grid_max", fmt(best, 10));
  o.require(std::abs(best - 2.11222) <= 1e-3, "6.grid_max_table", fmt(best, 10));
  o.require(best <= c + 1e-9, "6.grid_below_constant", fmt(best, 10));
  o.detail = "closed form " + fmt(c, 10) + ", grid max (step 1e-3) " + fmt(best, 10);
  return o;
}

Outcome criterion7() {
  Outcome o;
  const double c = theorem4_constant();
  const double residual = std::abs(theorem4_residual(c));
  o.require(std::abs(c - 2.5404) <= 1e-4, "7.constant", fmt(c, 10));
  o.require(residual < 1e-12, "7.residual", fmt(residual, 3));
  const int N = 1000;
  double best = 0;
  double best_case_two = 0;
  for (int a = 1; a <= N; ++a) {
    for (int b = a; a + 2 * b <= N; ++b) {
      for (int d = b; a + b + 2 * d <= N; ++d) {
        const int e = N - a - b - d;
        const std::vector<double> w = {double(a) / N, double(b) / N, double(d) / N, double(e) / N};
        const auto fb = four_agent_bounds(w);
        const double v = std::min({fb.heaviest_absorbs, fb.paired, fb.red2_symmetric});
        best = std::max(best, v);
        if (!fb.case_one) best_case_two = std::max(best_case_two, v);
      }
    }
  }
  o.require(best <= c + 1e-9, "7.grid_below_constant", fmt(best, 10));
  o.require(best_case_two <= 2.5, "7.case_two_below_2.5", fmt(best_case_two, 10));
  o.detail = "constant " + fmt(c, 10) + ", residual " + fmt(residual, 3) + ", grid max (step 1/" +
             std::to_string(N) + ") " + fmt(best, 10) + ", second case max " + fmt(best_case_two, 10);
  return o;
}

Outcome criterion8(const fs::path& out_dir) {
  Outcome o;
  const std::vector<double> table = {2.11222, 2.52756, 2.73205, 3.04882, 3.2842, 3.5134, 3.72934, 4.0352};
  std::ostringstream detail;
  for (std::size_t n = 3; n <= 10; ++n) {
    const double target = table[n - 3];
    const fs::path dir = out_dir / ("sample_n" + std::to_string(n));
    const int code = run_cli_args({"sample", "--n", std::to_string(n), "--samples", "1000000", "--seed", "1",
                                   "--refine", "100", "--out-dir", dir.string()});
    o.require(code == 0, "8.cli", "n=" + std::to_string(n));
    if (code != 0) continue;
    const auto rows = read_csv(dir / ("sampling_n" + std::to_string(n) + ".csv"));
    const double v = std::stod(rows.at(1).at(4));
    fs::copy_file(dir / ("sampling_n" + std::to_string(n) + ".csv"),
                  out_dir / ("sampling_n" + std::to_string(n) + ".csv"), fs::copy_options::overwrite_existing);
    const double rel = v / target - 1.0;
    if (n <= 4) {
      o.require(std::abs(rel) <= 0.01, "8.within_1pct", "n=" + std::to_string(n));
    } else {
      o.require(std::abs(rel) <= 0.05, "8.within_5pct", "n=" + std::to_string(n));
    }
    if (n <= 5) {
      o.require(v <= target + 1e-6, "8.no_exceed_small_n",
                "n=" + std::to_string(n) + ": " + fmt(v, 10) + " > " + fmt(target, 6));
    }
    detail << (n > 3 ? ", " : "") << "n=" << n << " " << fmt(v, 8) << " (" << (rel >= 0 ? "+" : "")
           << fmt(100 * rel, 3) << "%)";
  }
  o.detail = detail.str();
  return o;
}

Outcome criterion9(const fs::path& out_dir) {
  Outcome o;
  const fs::path dir = out_dir / "heatmap";
  const int code = run_cli_args({"heatmap", "--step", "0.01", "--out-dir", dir.string()});
  o.require(code == 0, "9.cli");
  if (code != 0) return o;
  const auto rows = read_csv(dir / "heatmap.csv");
  o.require(!rows.empty() && rows[0] == std::vector<std::string>{"w1", "w2", "w3", "value", "dominating_rule"},
            "9.header");
  double best = 0;
  double centroid_dist = 1e9;
  std::string centroid_rule;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double w1 = std::stod(rows[i][0]), w2 = std::stod(rows[i][1]), w3 = std::stod(rows[i][2]);
    best = std::max(best, std::stod(rows[i][3]));
    const double c = 1.0 / 3;
    const double d = (w1 - c) * (w1 - c) + (w2 - c) * (w2 - c) + (w3 - c) * (w3 - c);
    if (d < centroid_dist) {
      centroid_dist = d;
      centroid_rule = rows[i][4];
    }
  }
  fs::copy_file(dir / "heatmap.csv", out_dir / "heatmap.csv", fs::copy_options::overwrite_existing);
  o.require(std::abs(best - 2.11222) <= 0.02, "9.grid_max", fmt(best, 10));
  o.require(centroid_rule == "red2_symmetric", "9.centroid_rule", centroid_rule);
  o.detail = std::to_string(rows.size() - 1) + " rows, max " + fmt(best, 10) + ", centroid rule " + centroid_rule;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  bool allow_documented = false;
  fs::path out_dir = fs::current_path() / "acceptance_out";
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--allow-documented") {
      allow_documented = true;
    } else if (a == "--out-dir" && i + 1 < argc) {
      out_dir = argv[++i];
    } else if (a == "--only" && i + 1 < argc) {
      only.insert(std::stoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--allow-documented] [--out-dir DIR] [--only N]...\n";
      return 2;
    }
  }
  fs::create_directories(out_dir);

  EndToEnd e2e;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"oracle soundness", criterion1},
      {"sorted-instance reduction", criterion2},
      {"entitlement rounding", criterion3},
      {"end-to-end 20-WMMS", [&] { return criterion4(e2e); }},
      {"knife trace lemmas", [&] { return criterion5(e2e); }},
      {"three-agent constant", criterion6},
      {"four-agent constant", criterion7},
      {"bound table by sampling", [&] { return criterion8(out_dir); }},
      {"three-agent heatmap", [&] { return criterion9(out_dir); }},
  };

  bool ok = true;
  for (std::size_t c = 0; c < criteria.size(); ++c) {
    const int id = static_cast<int>(c + 1);
    if (!only.empty() && !only.count(id) && !(id == 4 && only.count(5))) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[c].second();
    } catch (const std::exception& e) {
      outcome.failed.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!only.empty() && !only.count(id)) continue;

    std::set<std::string> unique;
    bool documented_only = !outcome.failed.empty();
    for (const auto& f : outcome.failed) {
      const std::string key = f.substr(0, f.find(' '));
      unique.insert(f);
      if (!kDocumented.count(key)) documented_only = false;
    }
    std::cout << (outcome.failed.empty() ? "PASS" : "FAIL") << " criterion " << id << " " << criteria[c].first
              << " [" << fmt(secs, 3) << " s]: " << outcome.detail;
    if (!outcome.failed.empty()) {
      std::cout << " | failed:";
      std::size_t shown = 0;
      for (const auto& f : unique) {
        if (shown++ == 5) {
          std::cout << " ...";
          break;
        }
        std::cout << " " << f;
      }
      if (documented_only) std::cout << " | documented conflict";
    }
    std::cout << std::endl;
    if (!outcome.failed.empty() && !(allow_documented && documented_only)) ok = false;
  }
  return ok ? 0 : 1;
}
