#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace vpe {

// Machine-readable outcome of one query.  For relation checks `relation` is
// the spectrum name ("bisim", "sim-pre", ...) and left/right are the two
// configurations as written; for regularity queries `relation` is
// "regularity" and `right` is empty.
struct Verdict {
  bool holds = true;
  std::string relation;
  std::string left, right;
  // attacker strategy fragment; present only when holds is false and the
  // caller asked for it
  std::optional<std::string> witness;
  uint64_t positions = 0;    // game positions materialized
  uint64_t transitions = 0;  // saturation transitions added
  double wall_ms = 0.0;

  bool operator==(const Verdict&) const = default;
};

// Round-trip pair: verdict_from_json(to_json(v)) == v for every verdict.
std::string to_json(const Verdict& v);
Verdict verdict_from_json(const std::string& text);  // throws std::invalid_argument

// Human-readable one-liner plus stats, for the plain CLI output.
std::string verdict_text(const Verdict& v);

}  // namespace vpe
