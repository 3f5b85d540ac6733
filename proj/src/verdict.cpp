#include "vpe/verdict.hpp"

#include <json.hpp>
#include <sstream>

namespace vpe {

std::string to_json(const Verdict& v) {
  nlohmann::json j{
      {"holds", v.holds},
      {"relation", v.relation},
      {"left", v.left},
      {"right", v.right},
      {"stats",
       {{"positions", v.positions}, {"transitions", v.transitions}, {"wall_ms", v.wall_ms}}},
  };
  if (v.witness) j["witness"] = *v.witness;
  return j.dump(2);
}

Verdict verdict_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("bad verdict json: ") + e.what());
  }
  try {
    Verdict v;
    v.holds = j.at("holds").get<bool>();
    v.relation = j.at("relation").get<std::string>();
    v.left = j.at("left").get<std::string>();
    v.right = j.at("right").get<std::string>();
    if (auto it = j.find("witness"); it != j.end()) v.witness = it->get<std::string>();
    const nlohmann::json& s = j.at("stats");
    v.positions = s.at("positions").get<uint64_t>();
    v.transitions = s.at("transitions").get<uint64_t>();
    v.wall_ms = s.at("wall_ms").get<double>();
    return v;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad verdict json: ") + e.what());
  }
}

std::string verdict_text(const Verdict& v) {
  std::ostringstream out;
  if (v.relation == "regularity") {
    out << v.left << (v.holds ? " is regular" : " is not regular");
  } else {
    out << v.left << (v.holds ? "  satisfies  " : "  does not satisfy  ") << v.relation << "  "
        << v.right;
  }
  out << "\n[" << v.positions << " positions, " << v.transitions << " transitions, " << v.wall_ms
      << " ms]";
  if (v.witness) out << "\n" << *v.witness;
  return out.str();
}

}  // namespace vpe
