#pragma once

#include <map>
#include <set>
#include <string>

#include "goeritz/diagram.hpp"
#include "goeritz/gaussian_int.hpp"

namespace goeritz {

/// An orientation assigns a direction to every link component.  It is stored
/// as the set of components running against their default direction; the
/// default traverses each component's least arc away from its lexicographically
/// smaller endpoint.
struct Orientation {
  std::set<std::string> reversed;  // canonical component names
  friend bool operator==(const Orientation&, const Orientation&) = default;
};

/// Parses "reverse <component>" lines or the JSON {"reverse": [...]}.
Orientation parse_orientation(const std::string& text);
std::string orientation_to_text(const Orientation& o);
std::string orientation_to_json(const Orientation& o);

/// Head dart of every arc: the endpoint the strand arrives at.  Throws
/// DiagramError when `o` names an unknown component.
std::map<ArcId, Dart> arc_heads(const DiagramAnalysis& an, const Orientation& o);

/// Writhe of one crossing: +1 when the over strand enters at the slot
/// three steps counterclockwise of the under entry slot.
int crossing_writhe(const DiagramAnalysis& an, const Orientation& o, CrossingId c);

int total_writhe(const Diagram& d, const Orientation& o);

/// Checkerboard writhe: the Goeritz index when it agrees with the writhe,
/// otherwise the Goeritz index times the imaginary unit.
GaussianInt checkerboard_writhe(const DiagramAnalysis& an, const Shading& s,
                                const Orientation& o, CrossingId c);

/// Toggles the named components (arcs components by least-arc name, circles
/// by "o<k>").  Throws DiagramError for unknown names.
Orientation reverse_components(const DiagramAnalysis& an, Orientation o,
                               const std::vector<std::string>& names);

}  // namespace goeritz
