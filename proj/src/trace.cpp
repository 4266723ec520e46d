#include "chorediv/trace.hpp"

#include <json.hpp>
#include <sstream>

namespace chorediv {

namespace {

using nlohmann::json;

json encode(const TraceEvent& event) {
  return std::visit(
      [](const auto& e) -> json {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, RoundStart>) {
          return {{"event", "round_start"}, {"round", e.round},         {"minp", e.minp},
                  {"dead_begin", e.dead_begin}, {"remaining", e.remaining}, {"copies", e.copies}};
        } else if constexpr (std::is_same_v<T, BagAssigned>) {
          return {{"event", "bag"},   {"round", e.round}, {"agent", e.agent},
                  {"first", e.first}, {"last", e.last},   {"cost", to_string(e.cost)}};
        } else if constexpr (std::is_same_v<T, SafetyCheck>) {
          return {{"event", "safety_check"},    {"round", e.round},
                  {"kind", to_string(e.kind)},   {"lhs", to_string(e.lhs)},
                  {"rhs", to_string(e.rhs)},     {"ok", e.ok}};
        } else {
          return {{"event", "round_end"},         {"round", e.round},
                  {"next_minp", e.next_minp},     {"final_round", e.final_round},
                  {"remaining", e.remaining},     {"copies_exhausted", e.copies_exhausted}};
        }
      },
      event);
}

SafetyKind parse_kind(const std::string& s) {
  for (auto k : {SafetyKind::progress_covers_dead, SafetyKind::enough_chores_assigned,
                 SafetyKind::final_round_exhausts}) {
    if (s == to_string(k)) return k;
  }
  throw ParseError("unknown safety check kind '" + s + "'");
}

TraceEvent decode(const json& j) {
  const std::string kind = j.at("event").get<std::string>();
  if (kind == "round_start") {
    return RoundStart{j.at("round"), j.at("minp"), j.at("dead_begin"), j.at("remaining"),
                      j.at("copies").get<std::vector<std::uint64_t>>()};
  }
  if (kind == "bag") {
    return BagAssigned{j.at("round"), j.at("agent"), j.at("first"), j.at("last"),
                       parse_rational(j.at("cost").get<std::string>())};
  }
  if (kind == "safety_check") {
    return SafetyCheck{j.at("round"), parse_kind(j.at("kind")),
                       parse_rational(j.at("lhs").get<std::string>()),
                       parse_rational(j.at("rhs").get<std::string>()), j.at("ok")};
  }
  if (kind == "round_end") {
    return RoundEnd{j.at("round"), j.at("next_minp"), j.at("final_round"), j.at("remaining"),
                    j.at("copies_exhausted")};
  }
  throw ParseError("unknown trace event '" + kind + "'");
}

}  // namespace

void write_trace(std::ostream& out, const KnifeTrace& trace) {
  for (const auto& e : trace.events) out << encode(e).dump() << '\n';
}

std::string trace_to_jsonl(const KnifeTrace& trace) {
  std::ostringstream out;
  write_trace(out, trace);
  return out.str();
}

KnifeTrace parse_trace(std::istream& in) {
  KnifeTrace trace;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      trace.events.push_back(decode(json::parse(line)));
    } catch (const json::exception& e) {
      throw ParseError("trace line " + std::to_string(number) + ": " + e.what());
    }
  }
  return trace;
}

KnifeTrace parse_trace(const std::string& jsonl) {
  std::istringstream in(jsonl);
  return parse_trace(in);
}

}  // namespace chorediv
