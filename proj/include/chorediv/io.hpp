#pragma once

// JSON documents. Agents appear in input order and are matched by label;
// exact values are written as "p/q" strings. Reading accepts either strings
// or plain JSON numbers, and numbers are taken as exact decimals.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "chorediv/instance.hpp"
#include "chorediv/oracle.hpp"

namespace chorediv {

/// Parses JSON text keeping every float literal as its source text, so
/// 0.1 stays exactly 1/10. Throws ParseError.
nlohmann::json parse_exact_json(const std::string& text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

Instance instance_from_json(const nlohmann::json& doc);
nlohmann::json instance_to_json(const Instance& instance);
Instance read_instance(const std::filesystem::path& path);

/// {"bundles": [{"agent": label, "chores": [labels]}, ...]}
nlohmann::json assignment_to_json(const Instance& instance, const Assignment& assignment);
Assignment assignment_from_json(const Instance& instance, const nlohmann::json& doc);

/// {"agents": [{"agent", "wmms", "witness": [[chore labels per input agent]]}]}
nlohmann::json profile_to_json(const Instance& instance, const WmmsProfile& profile);
WmmsProfile profile_from_json(const Instance& instance, const nlohmann::json& doc);

nlohmann::json report_to_json(const Instance& instance, const RatioReport& report);

}  // namespace chorediv
