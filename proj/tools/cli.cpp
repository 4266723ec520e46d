#include "cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "chorediv/bounds.hpp"
#include "chorediv/errors.hpp"
#include "chorediv/generator.hpp"
#include "chorediv/io.hpp"
#include "chorediv/knife.hpp"
#include "chorediv/oracle.hpp"
#include "chorediv/simplex.hpp"
#include "chorediv/trace.hpp"

#ifndef CHOREDIV_VERSION
#define CHOREDIV_VERSION "dev"
#endif

namespace chorediv {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 failed");
  }
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

// Collects what a run read and wrote; written last as manifest.json.
class Manifest {
 public:
  Manifest(std::string command, std::optional<fs::path> dir) : command_(std::move(command)), dir_(std::move(dir)) {}

  json& parameters() { return parameters_; }
  void set_seed(std::uint64_t seed) { seed_ = seed; }

  std::string read_input(const fs::path& path) {
    std::string text = read_text_file(path);
    inputs_[path.filename().string()] = sha256_hex(text);
    return text;
  }

  /// Writes into the output directory and records the file name.
  void write(const std::string& name, const std::string& text) {
    write_text_file(*dir_ / name, text);
    outputs_.push_back(name);
  }
  /// A file written outside the output directory.
  void note_output(const fs::path& path) { outputs_.push_back(path.string()); }

  bool has_dir() const { return dir_.has_value(); }

  void finish() {
    if (!dir_) return;
    json doc = {{"command", command_},
                {"parameters", parameters_},
                {"seed", seed_ ? json(*seed_) : json(nullptr)},
                {"input_sha256", inputs_},
                {"tool_version", CHOREDIV_VERSION},
                {"outputs", outputs_}};
    write_text_file(*dir_ / "manifest.json", doc.dump(2) + "\n");
  }

 private:
  std::string command_;
  std::optional<fs::path> dir_;
  json parameters_ = json::object();
  std::optional<std::uint64_t> seed_;
  std::map<std::string, std::string> inputs_;
  std::vector<std::string> outputs_;
};

std::optional<fs::path> out_dir_of(const std::string& flag) {
  if (flag.empty()) return std::nullopt;
  fs::create_directories(flag);
  return fs::path(flag);
}

Instance load_instance(Manifest& manifest, const std::string& path) {
  return instance_from_json(parse_exact_json(manifest.read_input(path)));
}

Rational parse_alpha(const std::string& text) {
  Rational alpha = parse_rational(text);
  if (alpha < 0) throw UsageError("--alpha must be nonnegative");
  return alpha;
}

struct Options {
  // gen
  std::size_t n = 2;
  std::size_t m = 4;
  std::uint64_t seed = 1;
  std::string weight_mode = "uniform";
  std::string cost_mode = "iid_uniform_integer";
  std::uint64_t max_cost = 20;
  std::vector<std::string> fixed_weights;
  std::string out;
  // solve / wmms / verify
  std::string instance;
  std::string assignment;
  std::string profile;
  std::string wmms_file;
  std::string trace;
  std::string alpha = "20";
  std::string minp_rule = "prefix_cover";
  std::uint64_t max_assignments = OracleConfig{}.max_assignments;
  // bound / sample / heatmap
  std::vector<std::string> weights;
  std::string family = "automatic";
  int depth = 3;
  std::uint64_t samples = 1000000;
  std::size_t refine = 100;
  std::string method = "sample";
  double step = 0.01;
  std::size_t restarts = 100;
  std::string out_dir;
};

SearchConfig search_config(const Options& o) {
  auto family = parse_family(o.family);
  if (!family) throw UsageError("unknown --family '" + o.family + "'");
  return SearchConfig{*family, o.depth};
}

int cmd_gen(const Options& o, std::ostream& out) {
  if (o.n == 0) throw UsageError("--n must be at least 1");
  GenSpec spec;
  spec.n = o.n;
  spec.m = o.m;
  spec.seed = o.seed;
  spec.max_cost = o.max_cost;
  auto wm = parse_weight_mode(o.weight_mode);
  auto cm = parse_cost_mode(o.cost_mode);
  if (!wm) throw UsageError("unknown --weights '" + o.weight_mode + "'");
  if (!cm) throw UsageError("unknown --costs '" + o.cost_mode + "'");
  spec.weight_mode = *wm;
  spec.cost_mode = *cm;
  if (!o.fixed_weights.empty()) {
    spec.weight_mode = WeightMode::fixed;
    for (const auto& w : o.fixed_weights) spec.fixed_weights.push_back(parse_rational(w));
    spec.n = spec.fixed_weights.size();
  }
  const std::string text = instance_to_json(generate(spec)).dump(2) + "\n";

  Manifest manifest("gen", out_dir_of(o.out_dir));
  manifest.set_seed(o.seed);
  manifest.parameters() = {{"n", spec.n},           {"m", spec.m},
                           {"weights", to_string(spec.weight_mode)},
                           {"costs", to_string(spec.cost_mode)},
                           {"max_cost", spec.max_cost}, {"fixed_weights", o.fixed_weights}};
  if (manifest.has_dir()) {
    manifest.write("instance.json", text);
  }
  if (!o.out.empty()) {
    write_text_file(o.out, text);
    manifest.note_output(o.out);
  }
  if (!manifest.has_dir() && o.out.empty()) out << text;
  manifest.finish();
  return kExitOk;
}

int cmd_solve(const Options& o, std::ostream& out, std::ostream& err) {
  Manifest manifest("solve", out_dir_of(o.out_dir));
  const Instance instance = load_instance(manifest, o.instance);
  manifest.parameters() = {{"instance", o.instance}, {"wmms_file", o.wmms_file}, {"alpha", o.alpha},
                           {"minp_rule", o.minp_rule}, {"max_assignments", o.max_assignments}};
  const Rational alpha = parse_alpha(o.alpha);

  std::optional<WmmsProfile> supplied;
  if (!o.wmms_file.empty()) {
    supplied = profile_from_json(instance, parse_exact_json(manifest.read_input(o.wmms_file)));
  }
  SolveOptions options;
  options.oracle.max_assignments = o.max_assignments;
  if (o.minp_rule == "literal") {
    options.knife.minp_rule = MinpRule::literal;
  } else if (o.minp_rule != "prefix_cover") {
    throw UsageError("unknown --minp-rule '" + o.minp_rule + "'");
  }

  auto write_trace_file = [&](const KnifeTrace& trace) {
    const std::string jsonl = trace_to_jsonl(trace);
    if (!o.trace.empty()) {
      write_text_file(o.trace, jsonl);
      manifest.note_output(o.trace);
    } else if (manifest.has_dir()) {
      manifest.write("trace.jsonl", jsonl);
    }
  };

  std::optional<SolveResult> solved;
  try {
    solved.emplace(solve(instance, supplied, options));
  } catch (const SafetyViolation& e) {
    write_trace_file(e.trace());
    manifest.finish();
    err << "safety violation: " << e.what() << "\n";
    return kExitViolation;
  }
  const SolveResult& result = *solved;
  write_trace_file(result.trace);
  const json assignment = assignment_to_json(instance, result.assignment);
  json report = report_to_json(instance, result.report);
  report["alpha"] = to_string(alpha);
  report["within_alpha"] = result.report.within(alpha);
  report["profile_source"] = result.supplied_profile ? "supplied" : "oracle";
  if (manifest.has_dir()) {
    manifest.write("assignment.json", assignment.dump(2) + "\n");
    manifest.write("report.json", report.dump(2) + "\n");
  } else {
    out << json{{"assignment", assignment}, {"report", report}}.dump(2) << "\n";
  }
  manifest.finish();
  if (!result.report.within(alpha)) {
    err << "max ratio " << to_string(result.report.max_ratio) << " exceeds alpha " << to_string(alpha) << "\n";
    return kExitViolation;
  }
  return kExitOk;
}

int cmd_wmms(const Options& o, std::ostream& out) {
  Manifest manifest("wmms", out_dir_of(o.out_dir));
  const Instance instance = load_instance(manifest, o.instance);
  manifest.parameters() = {{"instance", o.instance}, {"max_assignments", o.max_assignments}};
  OracleConfig config;
  config.max_assignments = o.max_assignments;
  const std::string text = profile_to_json(instance, wmms_profile(instance, config)).dump(2) + "\n";
  if (manifest.has_dir()) manifest.write("profile.json", text);
  if (!o.out.empty()) {
    write_text_file(o.out, text);
    manifest.note_output(o.out);
  }
  if (!manifest.has_dir() && o.out.empty()) out << text;
  manifest.finish();
  return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  Manifest manifest("verify", out_dir_of(o.out_dir));
  const Instance instance = load_instance(manifest, o.instance);
  manifest.parameters() = {{"instance", o.instance}, {"assignment", o.assignment}, {"profile", o.profile},
                           {"alpha", o.alpha}};
  const Rational alpha = parse_alpha(o.alpha);
  const Assignment assignment = assignment_from_json(instance, parse_exact_json(manifest.read_input(o.assignment)));
  const WmmsProfile profile = profile_from_json(instance, parse_exact_json(manifest.read_input(o.profile)));
  const RatioReport report = ratio_report(instance, assignment, profile);
  json doc = report_to_json(instance, report);
  doc["alpha"] = to_string(alpha);
  doc["within_alpha"] = report.within(alpha);
  const std::string text = doc.dump(2) + "\n";
  if (manifest.has_dir()) {
    manifest.write("report.json", text);
  } else {
    out << text;
  }
  manifest.finish();
  return report.within(alpha) ? kExitOk : kExitViolation;
}

int cmd_bound(const Options& o, std::ostream& out) {
  std::vector<double> w;
  for (const auto& text : o.weights) {
    const Rational r = parse_rational(text);
    if (r <= 0) throw UsageError("weights must be positive");
    w.push_back(to_double(r));
  }
  const BoundResult result = best_bound(w, search_config(o));
  out << format_real(result.value) << "\n" << describe(*result.derivation);
  return kExitOk;
}

int cmd_sample(const Options& o, std::ostream& out) {
  SimplexMethod method;
  if (o.method == "sample") {
    method = SimplexMethod::sample;
  } else if (o.method == "local") {
    method = SimplexMethod::local;
  } else if (o.method == "grid") {
    method = SimplexMethod::grid;
  } else {
    throw UsageError("unknown --method '" + o.method + "'");
  }
  if (o.n < 2 || o.n > kMaxBoundAgents) {
    throw UsageError("--n must lie in [2, " + std::to_string(kMaxBoundAgents) + "]");
  }
  SimplexParams params;
  params.samples = o.samples;
  params.seed = o.seed;
  params.refine_top = o.refine;
  params.restarts = o.restarts;
  params.step = o.step;
  params.search = search_config(o);
  const SimplexMax result = simplex_max(o.n, method, params);
  std::ostringstream csv;
  write_sampling_csv(csv, o.n, method, params, result);

  Manifest manifest("sample", out_dir_of(o.out_dir));
  manifest.set_seed(o.seed);
  manifest.parameters() = {{"n", o.n},         {"method", o.method}, {"samples", o.samples},
                           {"refine", o.refine}, {"restarts", o.restarts}, {"step", o.step},
                           {"family", o.family}, {"depth", o.depth}};
  if (manifest.has_dir()) {
    manifest.write("sampling_n" + std::to_string(o.n) + ".csv", csv.str());
  } else {
    out << csv.str();
  }
  manifest.finish();
  return kExitOk;
}

int cmd_heatmap(const Options& o, std::ostream& out) {
  if (!(o.step > 0 && o.step < 1)) throw UsageError("--step must lie in (0, 1)");
  std::ostringstream csv;
  write_heatmap_csv(csv, heatmap_grid(o.step));
  Manifest manifest("heatmap", out_dir_of(o.out_dir));
  manifest.parameters() = {{"step", o.step}};
  if (manifest.has_dir()) {
    manifest.write("heatmap.csv", csv.str());
  } else {
    out << csv.str();
  }
  manifest.finish();
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Asymmetric chore division: layered moving knife, exact WMMS oracle, chore-oblivious bounds",
               "chorediv"};
  app.require_subcommand(1);
  app.set_version_flag("--version", CHOREDIV_VERSION);

  auto* gen = app.add_subcommand("gen", "Generate a random instance");
  gen->add_option("--n", o.n, "Agents");
  gen->add_option("--m", o.m, "Chores");
  gen->add_option("--seed", o.seed, "Seed");
  gen->add_option("--weights", o.weight_mode, "uniform | dirichlet_unit | power_of_two");
  gen->add_option("--costs", o.cost_mode, "iid_uniform_integer | identical_agents | correlated | planted");
  gen->add_option("--max-cost", o.max_cost, "Largest integer cost");
  gen->add_option("--fixed-weights", o.fixed_weights, "Explicit weights (sets n)");
  gen->add_option("--out", o.out, "Instance file");
  gen->add_option("--out-dir", o.out_dir, "Output directory (with manifest)");

  auto* solve_cmd = app.add_subcommand("solve", "Run the 20-WMMS pipeline");
  solve_cmd->add_option("instance", o.instance, "Instance JSON")->required();
  solve_cmd->add_option("--wmms-file", o.wmms_file, "Profile JSON to use instead of the oracle");
  solve_cmd->add_option("--trace", o.trace, "Trace JSONL path");
  solve_cmd->add_option("--alpha", o.alpha, "Ratio to enforce (exit 1 above it)");
  solve_cmd->add_option("--minp-rule", o.minp_rule, "prefix_cover | literal");
  solve_cmd->add_option("--max-assignments", o.max_assignments, "Oracle enumeration cap n^m");
  solve_cmd->add_option("--out-dir", o.out_dir, "Output directory (with manifest)");

  auto* wmms_cmd = app.add_subcommand("wmms", "Exact WMMS profile with witnesses");
  wmms_cmd->add_option("instance", o.instance, "Instance JSON")->required();
  wmms_cmd->add_option("--max-assignments", o.max_assignments, "Oracle enumeration cap n^m");
  wmms_cmd->add_option("--out", o.out, "Profile file");
  wmms_cmd->add_option("--out-dir", o.out_dir, "Output directory (with manifest)");

  auto* verify = app.add_subcommand("verify", "Ratio report of an assignment against a profile");
  verify->add_option("instance", o.instance, "Instance JSON")->required();
  verify->add_option("assignment", o.assignment, "Assignment JSON")->required();
  verify->add_option("profile", o.profile, "Profile JSON")->required();
  verify->add_option("--alpha", o.alpha, "Exit 0 iff every ratio is at most this");
  verify->add_option("--out-dir", o.out_dir, "Output directory (with manifest)");

  auto* bound = app.add_subcommand("bound", "Chore-oblivious upper bound for given entitlements");
  bound->add_option("weights", o.weights, "Entitlements, e.g. 1/3 1/3 1/3 or 0.2 0.8")->required();
  bound->add_option("--family", o.family, "three_agent | four_agent | exhaustive | heuristic | automatic");
  bound->add_option("--depth", o.depth, "red1 nesting cap");

  auto* sample = app.add_subcommand("sample", "Maximize the bound over the simplex");
  sample->add_option("--n", o.n, "Agents")->required();
  sample->add_option("--samples", o.samples, "Uniform samples");
  sample->add_option("--seed", o.seed, "Seed");
  sample->add_option("--refine", o.refine, "Hill-climb from this many best samples");
  sample->add_option("--method", o.method, "sample | local | grid");
  sample->add_option("--restarts", o.restarts, "Starting points for --method local");
  sample->add_option("--step", o.step, "Grid step for --method grid");
  sample->add_option("--family", o.family, "three_agent | four_agent | exhaustive | heuristic | automatic");
  sample->add_option("--depth", o.depth, "red1 nesting cap");
  sample->add_option("--out-dir", o.out_dir, "Output directory (with manifest)");

  auto* heatmap = app.add_subcommand("heatmap", "Three-agent bound heatmap");
  heatmap->add_option("--step", o.step, "Grid step");
  heatmap->add_option("--out-dir", o.out_dir, "Output directory (with manifest)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << CHOREDIV_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(o, out);
    if (solve_cmd->parsed()) return cmd_solve(o, out, err);
    if (wmms_cmd->parsed()) return cmd_wmms(o, out);
    if (verify->parsed()) return cmd_verify(o, out);
    if (bound->parsed()) return cmd_bound(o, out);
    if (sample->parsed()) return cmd_sample(o, out);
    if (heatmap->parsed()) return cmd_heatmap(o, out);
  } catch (const SizeLimitExceeded& e) {
    err << "SizeLimitExceeded: " << e.what() << "\n";
    return kExitResource;
  } catch (const SafetyViolation& e) {
    err << "safety violation: " << e.what() << "\n";
    return kExitViolation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace chorediv
