#pragma once

#include <map>

#include "goeritz/diagram.hpp"

namespace goeritz::detail {

/// Pieces and faces of a diagram, computed from crossings and circles alone
/// (merges and the outer anchor are ignored).  Used by DiagramAnalysis and by
/// the PD parser, which must resolve face names before merges are assembled.
struct Skeleton {
  std::map<ArcId, std::array<Dart, 2>> arc_ends;
  std::vector<PieceInfo> pieces;
  std::vector<FaceInfo> faces;
  std::map<Dart, int> face_of_dart;
  std::map<CrossingId, int> piece_of_crossing;
  std::map<CircleId, int> piece_of_circle;

  int face_of_quad(const QuadKey& q) const;            // throws DiagramError
  int piece_by_name(const std::string& name) const;    // throws DiagramError
  int face_by_name(int piece, const std::string& name) const;
};

/// Validates arc pairing and per-piece sphericity; throws DiagramError.
Skeleton trace_skeleton(const Diagram& d);

}  // namespace goeritz::detail
