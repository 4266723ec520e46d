#include "chorediv/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "chorediv/errors.hpp"

namespace chorediv {

using nlohmann::json;

namespace {

// Forwards to the stock DOM builder but keeps float literals as text.
class ExactSax {
 public:
  explicit ExactSax(json& root) : dom_(root, false) {}

  bool null() { return dom_.null(); }
  bool boolean(bool v) { return dom_.boolean(v); }
  bool number_integer(json::number_integer_t v) { return dom_.number_integer(v); }
  bool number_unsigned(json::number_unsigned_t v) { return dom_.number_unsigned(v); }
  bool number_float(json::number_float_t, const json::string_t& text) {
    json::string_t copy = text;
    return dom_.string(copy);
  }
  bool string(json::string_t& v) { return dom_.string(v); }
  bool binary(json::binary_t& v) { return dom_.binary(v); }
  bool start_object(std::size_t n) { return dom_.start_object(n); }
  bool key(json::string_t& v) { return dom_.key(v); }
  bool end_object() { return dom_.end_object(); }
  bool start_array(std::size_t n) { return dom_.start_array(n); }
  bool end_array() { return dom_.end_array(); }
  bool parse_error(std::size_t pos, const std::string& token, const nlohmann::detail::exception& e) {
    throw ParseError("JSON error at byte " + std::to_string(pos) + " near '" + token + "': " + e.what());
  }

 private:
  nlohmann::detail::json_sax_dom_parser<json> dom_;
};

Rational exact_value(const json& v, const std::string& what) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(std::to_string(v.get<long long>()));
  if (v.is_number_unsigned()) return Rational(std::to_string(v.get<unsigned long long>()));
  throw ParseError(what + " must be a number or a rational string");
}

std::vector<std::string> string_list(const json& doc, const char* key) {
  if (!doc.contains(key)) return {};
  return doc.at(key).get<std::vector<std::string>>();
}

// Input position k <-> sorted position.
std::vector<std::size_t> sorted_position_of_input(const Instance& instance) {
  const auto& perm = instance.entitlements().permutation();
  std::vector<std::size_t> pos(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) pos[perm[k]] = k;
  return pos;
}

std::map<std::string, std::size_t> index_by_label(const std::vector<std::string>& labels,
                                                   const char* what) {
  std::map<std::string, std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!out.emplace(labels[i], i).second) {
      throw InvalidInstance(std::string("duplicate ") + what + " label '" + labels[i] + "'");
    }
  }
  return out;
}

json chore_labels_of(const Instance& instance, const std::vector<std::size_t>& bundle) {
  json out = json::array();
  for (std::size_t c : bundle) out.push_back(instance.chore_label(c));
  return out;
}

std::vector<std::size_t> chores_from_labels(const json& labels,
                                            const std::map<std::string, std::size_t>& chores) {
  std::vector<std::size_t> out;
  for (const auto& l : labels) {
    auto it = chores.find(l.get<std::string>());
    if (it == chores.end()) throw DimensionMismatch("unknown chore label '" + l.get<std::string>() + "'");
    out.push_back(it->second);
  }
  return out;
}

}  // namespace

json parse_exact_json(const std::string& text) {
  json root;
  ExactSax sax(root);
  try {
    json::sax_parse(text, &sax);
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
  return root;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

Instance instance_from_json(const json& doc) {
  try {
    if (!doc.is_object() || !doc.contains("weights") || !doc.contains("costs")) {
      throw ParseError("instance needs \"weights\" and \"costs\"");
    }
    std::vector<Rational> weights;
    for (const auto& w : doc.at("weights")) weights.push_back(exact_value(w, "weight"));
    std::vector<CostRow> costs;
    for (const auto& row : doc.at("costs")) {
      CostRow r;
      for (const auto& c : row) r.push_back(exact_value(c, "cost"));
      costs.push_back(std::move(r));
    }
    return Instance::from_input(std::move(weights), std::move(costs), string_list(doc, "agent_labels"),
                                string_list(doc, "chore_labels"));
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed instance: ") + e.what());
  }
}

json instance_to_json(const Instance& instance) {
  const std::size_t n = instance.agents();
  json weights = json::array(), costs = json::array(), agents = json::array();
  std::vector<std::size_t> pos = sorted_position_of_input(instance);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t s = pos[k];
    weights.push_back(to_string(instance.weight(s)));
    json row = json::array();
    for (const auto& c : instance.row(s)) row.push_back(to_string(c));
    costs.push_back(std::move(row));
    agents.push_back(instance.agent_label(s));
  }
  return {{"weights", weights}, {"costs", costs}, {"agent_labels", agents},
          {"chore_labels", instance.chore_labels()}};
}

Instance read_instance(const std::filesystem::path& path) {
  return instance_from_json(parse_exact_json(read_text_file(path)));
}

json assignment_to_json(const Instance& instance, const Assignment& assignment) {
  validate_assignment(assignment, instance.agents(), instance.chores());
  json bundles = json::array();
  for (std::size_t s : sorted_position_of_input(instance)) {
    bundles.push_back({{"agent", instance.agent_label(s)},
                       {"chores", chore_labels_of(instance, assignment.bundles[s])}});
  }
  return {{"bundles", bundles}};
}

Assignment assignment_from_json(const Instance& instance, const json& doc) {
  try {
    const auto agents = index_by_label(instance.agent_labels(), "agent");
    const auto chores = index_by_label(instance.chore_labels(), "chore");
    Assignment out;
    out.bundles.resize(instance.agents());
    std::vector<bool> seen(instance.agents(), false);
    for (const auto& b : doc.at("bundles")) {
      auto it = agents.find(b.at("agent").get<std::string>());
      if (it == agents.end()) {
        throw DimensionMismatch("unknown agent label '" + b.at("agent").get<std::string>() + "'");
      }
      if (seen[it->second]) throw DimensionMismatch("agent '" + it->first + "' listed twice");
      seen[it->second] = true;
      out.bundles[it->second] = chores_from_labels(b.at("chores"), chores);
    }
    validate_assignment(out, instance.agents(), instance.chores());
    return out;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed assignment: ") + e.what());
  }
}

json profile_to_json(const Instance& instance, const WmmsProfile& profile) {
  const auto pos = sorted_position_of_input(instance);
  json agents = json::array();
  for (std::size_t s : pos) {
    json entry = {{"agent", instance.agent_label(s)}, {"wmms", to_string(profile.values.at(s))}};
    if (s < profile.witnesses.size()) {
      json witness = json::array();
      for (std::size_t t : pos) witness.push_back(chore_labels_of(instance, profile.witnesses[s].bundles[t]));
      entry["witness"] = std::move(witness);
    }
    agents.push_back(std::move(entry));
  }
  return {{"agents", agents}};
}

WmmsProfile profile_from_json(const Instance& instance, const json& doc) {
  try {
    const auto agents = index_by_label(instance.agent_labels(), "agent");
    const auto chores = index_by_label(instance.chore_labels(), "chore");
    const auto pos = sorted_position_of_input(instance);
    const std::size_t n = instance.agents();
    WmmsProfile out;
    out.values.assign(n, Rational(-1));
    std::vector<Assignment> witnesses(n);
    bool all_witnesses = true;
    for (const auto& e : doc.at("agents")) {
      auto it = agents.find(e.at("agent").get<std::string>());
      if (it == agents.end()) {
        throw DimensionMismatch("unknown agent label '" + e.at("agent").get<std::string>() + "'");
      }
      const std::size_t s = it->second;
      if (out.values[s] >= 0) throw DimensionMismatch("agent '" + it->first + "' listed twice");
      out.values[s] = exact_value(e.at("wmms"), "wmms");
      if (out.values[s] < 0) throw InvalidInstance("negative WMMS value for '" + it->first + "'");
      if (e.contains("witness") && e.at("witness").size() == n) {
        witnesses[s].bundles.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
          witnesses[s].bundles[pos[k]] = chores_from_labels(e.at("witness")[k], chores);
        }
      } else {
        all_witnesses = false;
      }
    }
    for (std::size_t s = 0; s < n; ++s) {
      if (out.values[s] < 0) throw DimensionMismatch("no WMMS value for agent '" + instance.agent_label(s) + "'");
    }
    if (all_witnesses) out.witnesses = std::move(witnesses);
    return out;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed WMMS profile: ") + e.what());
  }
}

json report_to_json(const Instance& instance, const RatioReport& report) {
  json agents = json::array();
  for (std::size_t s : sorted_position_of_input(instance)) {
    const auto& a = report.per_agent.at(s);
    agents.push_back({{"agent", instance.agent_label(s)},
                      {"weight", to_string(instance.weight(s))},
                      {"cost", to_string(a.cost)},
                      {"wmms", to_string(a.wmms)},
                      {"ratio", to_string(a.ratio)},
                      {"ratio_decimal", to_double(a.ratio)},
                      {"unbounded", a.unbounded}});
  }
  return {{"agents", agents},
          {"max_ratio", to_string(report.max_ratio)},
          {"max_ratio_decimal", to_double(report.max_ratio)},
          {"unbounded", report.unbounded}};
}

}  // namespace chorediv
