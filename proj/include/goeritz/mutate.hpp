#pragma once

#include <array>
#include <set>
#include <vector>

#include "goeritz/diagram.hpp"
#include "goeritz/orientation.hpp"

namespace goeritz {

/// A disk tangle named by its four boundary arcs in the cyclic corner order
/// (NE, NW, SW, SE) — counterclockwise as seen from inside the disk.  A spec
/// whose corners read clockwise around one side selects the other side.
struct TangleSpec {
  std::array<ArcId, 4> corners{};
  friend auto operator<=>(const TangleSpec&, const TangleSpec&) = default;
};

/// Resolved tangle: the crossings inside the disk, the inner endpoint of
/// each corner arc, and the four side faces in the order N, W, S, E
/// (N lies between the NE and NW corners, and so on around).
struct TangleInfo {
  std::set<CrossingId> inside;
  std::array<Dart, 4> inner;
  std::array<int, 4> side_faces;
};

/// Validates the spec against the diagram; throws PreconditionError when the
/// four arcs are not a disk cut in the stated cyclic order.
TangleInfo resolve_tangle(const DiagramAnalysis& an, const TangleSpec& t);

/// All tangles with a connected inside of at most max_size crossings, with
/// canonical corner order (least boundary arc first, walked from inside).
std::vector<TangleSpec> find_tangles(const Diagram& d, int max_size);

/// Elementary mutation: rotate the inside of the tangle by pi about the
/// horizontal axis (kind 1), the vertical axis (kind 2), or in the plane
/// (kind 3).  Kinds 1 and 2 mirror the inside and swap over/under strands;
/// kind 3 leaves the inside untouched.  Boundary arcs keep their ids.
Diagram mutate(const Diagram& d, const TangleSpec& t, int kind);

struct OrientedMutation {
  Diagram diagram;
  Orientation orientation;
  bool reversed_tangle = false;  // in-tangle orientations were reversed
};

/// Mutation carrying orientations along; in-tangle orientations are reversed
/// exactly when the rotated endpoints would otherwise clash with the
/// orientations outside the tangle.
OrientedMutation mutate_oriented(const Diagram& d, const Orientation& o,
                                 const TangleSpec& t, int kind);

/// Reverses the named components; they must form a union of detached
/// sublinks (throws PreconditionError otherwise).
Orientation reverse_detached(const Diagram& d, const Orientation& o,
                             const std::vector<std::string>& components);

}  // namespace goeritz
