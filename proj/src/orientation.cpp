#include "goeritz/orientation.hpp"

#include <sstream>

#include "json.hpp"

namespace goeritz {
namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Orientation parse_orientation(const std::string& text) {
  Orientation o;
  auto b = text.find_first_not_of(" \t\r\n");
  if (b != std::string::npos && text[b] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw DiagramError(std::string("bad JSON: ") + e.what());
    }
    if (!j.is_object() || (j.contains("reverse") && !j["reverse"].is_array()))
      throw DiagramError("expected {\"reverse\": [components...]}");
    if (j.contains("reverse"))
      for (const auto& e : j["reverse"]) {
        if (e.is_number_integer())
          o.reversed.insert(std::to_string(e.get<long>()));
        else if (e.is_string())
          o.reversed.insert(e.get<std::string>());
        else
          throw DiagramError("components must be names or arc numbers");
      }
    return o;
  }
  std::istringstream is(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream toks(line);
    std::string head, name, extra;
    toks >> head;
    if (head != "reverse" || !(toks >> name) || (toks >> extra))
      throw DiagramError("line " + std::to_string(lineno) +
                         ": expected 'reverse <component>'");
    o.reversed.insert(name);
  }
  return o;
}

std::string orientation_to_text(const Orientation& o) {
  std::ostringstream os;
  for (const auto& name : o.reversed) os << "reverse " << name << "\n";
  return os.str();
}

std::string orientation_to_json(const Orientation& o) {
  nlohmann::ordered_json j;
  j["reverse"] = nlohmann::json::array();
  for (const auto& name : o.reversed) j["reverse"].push_back(name);
  return j.dump(2) + "\n";
}

std::map<ArcId, Dart> arc_heads(const DiagramAnalysis& an, const Orientation& o) {
  for (const auto& name : o.reversed) an.component_by_name(name);  // validate
  std::map<ArcId, Dart> heads;
  for (const auto& comp : an.components()) {
    if (comp.arcs.empty()) continue;
    ArcId a0 = comp.arcs.front();
    const auto& ends = an.arc_ends(a0);
    bool reversed = o.reversed.count(comp.name) > 0;
    Dart head = reversed ? ends[0] : ends[1];
    ArcId a = a0;
    do {
      heads[a] = head;
      Dart exit{head.c, (head.slot + 2) % 4};
      a = an.arc_at(exit);
      const auto& e = an.arc_ends(a);
      head = (e[0] == exit) ? e[1] : e[0];
    } while (a != a0);
  }
  return heads;
}

namespace {

/// Entry slots (under, over) of the strands at crossing c.
std::pair<int, int> entry_slots(const DiagramAnalysis& an,
                                const std::map<ArcId, Dart>& heads,
                                CrossingId c) {
  auto arrives = [&](int slot) {
    return heads.at(an.arc_at({c, slot})) == Dart{c, slot};
  };
  int u = arrives(0) ? 0 : 2;
  int v = arrives(1) ? 1 : 3;
  if (arrives(u == 0 ? 2 : 0) || arrives(v == 1 ? 3 : 1))
    throw DiagramError("inconsistent orientation at crossing " +
                       std::to_string(c));
  return {u, v};
}

}  // namespace

int crossing_writhe(const DiagramAnalysis& an, const Orientation& o,
                    CrossingId c) {
  auto heads = arc_heads(an, o);
  auto [u, v] = entry_slots(an, heads, c);
  return v == (u + 3) % 4 ? +1 : -1;
}

int total_writhe(const Diagram& d, const Orientation& o) {
  DiagramAnalysis an(d);
  auto heads = arc_heads(an, o);
  int w = 0;
  for (const auto& [cid, cr] : d.crossings) {
    auto [u, v] = entry_slots(an, heads, cid);
    w += (v == (u + 3) % 4) ? +1 : -1;
  }
  return w;
}

GaussianInt checkerboard_writhe(const DiagramAnalysis& an, const Shading& s,
                                const Orientation& o, CrossingId c) {
  int eta = an.goeritz_index(s, c);
  int w = crossing_writhe(an, o, c);
  if (eta == w) return GaussianInt(eta);
  return GaussianInt(eta) * kImaginaryUnit;
}

Orientation reverse_components(const DiagramAnalysis& an, Orientation o,
                               const std::vector<std::string>& names) {
  for (const auto& name : names) {
    an.component_by_name(name);  // validate
    auto [it, inserted] = o.reversed.insert(name);
    if (!inserted) o.reversed.erase(it);
  }
  return o;
}

}  // namespace goeritz
