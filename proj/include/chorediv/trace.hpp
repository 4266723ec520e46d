#pragma once

// Line-delimited JSON for knife traces. One event per line, keyed by
// "event"; agent and chore indices refer to the knife's sorted instance
// (0-based), rationals are written as "p/q" strings.

#include <istream>
#include <ostream>
#include <string>

#include "chorediv/knife.hpp"

namespace chorediv {

std::string trace_to_jsonl(const KnifeTrace& trace);
void write_trace(std::ostream& out, const KnifeTrace& trace);

/// Throws ParseError on a malformed line or unknown event.
KnifeTrace parse_trace(std::istream& in);
KnifeTrace parse_trace(const std::string& jsonl);

}  // namespace chorediv
