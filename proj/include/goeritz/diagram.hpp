#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace goeritz {

/// Raised for malformed or non-spherical diagrams (parse/validation errors).
struct DiagramError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when an operation's precondition fails on a structurally valid
/// diagram (e.g. extracting a graph from a non-normal diagram).
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using ArcId = std::int32_t;
using CrossingId = std::int32_t;
using CircleId = std::int32_t;

/// One end of an arc: crossing id + slot index (0..3, counterclockwise).
struct Dart {
  CrossingId c = 0;
  int slot = 0;
  friend auto operator<=>(const Dart&, const Dart&) = default;
};

/// A crossing stores the arc attached at each of its four slots in
/// counterclockwise order.  The under-strand always occupies slots {0,2}
/// (storage is canonicalized; see canonicalize_slots).
struct Crossing {
  std::array<ArcId, 4> slots{};
  friend bool operator==(const Crossing&, const Crossing&) = default;
};

/// Anchor naming a face of a piece: a quadrant of a crossing (corner between
/// slots q and q+1) or one side of a crossing-free circle.
struct QuadKey {
  bool circle = false;
  std::int32_t id = 0;  // crossing id or circle id
  int q = 0;            // quadrant 0..3, or circle side 0..1
  friend auto operator<=>(const QuadKey&, const QuadKey&) = default;
};

/// Link diagram on the sphere: a disjoint union of connected 4-valent map
/// pieces and crossing-free circles, glued by face merges.  Each merge pair
/// declares that the two named faces lie in a common complementary region;
/// for a valid diagram the piece/region incidence graph must be a tree.
/// `outer` anchors the unbounded region (defaults to the region with the
/// least canonical label).
struct Diagram {
  std::map<CrossingId, Crossing> crossings;
  std::set<CircleId> circles;
  std::vector<std::pair<QuadKey, QuadKey>> merges;
  std::optional<QuadKey> outer;

  friend bool operator==(const Diagram&, const Diagram&) = default;
};

/// A checkerboard shading is determined by which of the two face classes is
/// shaded; we key that on the outer region's color.
struct Shading {
  bool outer_shaded = true;
  friend bool operator==(const Shading&, const Shading&) = default;
};

/// Both shadings: (sigma_s, sigma_u) per the outer-shaded convention.
inline std::pair<Shading, Shading> checkerboard_shadings() {
  return {Shading{true}, Shading{false}};
}

struct FaceInfo {
  int piece = 0;
  std::vector<Dart> darts;      // phi-orbit order; empty for circle faces
  std::vector<QuadKey> quads;   // covered quadrants (or the circle side)
  std::vector<ArcId> arcs;      // sorted distinct boundary arcs
  std::optional<CircleId> circle;  // set for circle faces
  std::string name;             // piece-local face name, e.g. "{1,4}"
  bool parity = false;          // in-piece checkerboard class
};

struct PieceInfo {
  bool is_circle = false;
  std::int32_t key = 0;  // min crossing id, or circle id
  std::string name;      // "x<key>" or "o<key>"
  std::vector<CrossingId> crossings;
  std::vector<int> faces;
};

struct RegionInfo {
  std::vector<int> faces;        // member face indices
  std::string label;             // canonical region label, e.g. "{2,5,o1}"
  std::vector<ArcId> arcs;       // sorted boundary arcs
  std::vector<CircleId> circles; // sorted boundary circles
};

/// Full combinatorial analysis of a diagram.  Construction validates the
/// diagram (arc pairing, per-piece sphericity, merge tree, anchors) and
/// throws DiagramError on any defect.
class DiagramAnalysis {
 public:
  explicit DiagramAnalysis(const Diagram& d);

  const Diagram& diagram() const { return *d_; }

  // -- map structure ------------------------------------------------------
  Dart alpha(Dart d) const;              // other end of the dart's arc
  static Dart sigma(Dart d) { return {d.c, (d.slot + 1) % 4}; }
  Dart phi(Dart d) const { return sigma(alpha(d)); }  // face successor
  ArcId arc_at(Dart d) const;
  const std::array<Dart, 2>& arc_ends(ArcId a) const;  // sorted
  const std::map<ArcId, std::array<Dart, 2>>& arcs() const { return arc_ends_; }

  // -- faces / pieces / regions -------------------------------------------
  int num_faces() const { return static_cast<int>(faces_.size()); }
  const FaceInfo& face(int f) const { return faces_.at(f); }
  int face_of_dart(Dart d) const;
  int face_of_quad(const QuadKey& q) const;
  int num_pieces() const { return static_cast<int>(pieces_.size()); }
  const PieceInfo& piece(int p) const { return pieces_.at(p); }
  int piece_by_name(const std::string& name) const;  // throws
  int piece_of_crossing(CrossingId c) const { return piece_of_crossing_.at(c); }
  int piece_of_circle(CircleId k) const { return piece_of_circle_.at(k); }
  int num_regions() const { return static_cast<int>(regions_.size()); }
  const RegionInfo& region(int r) const { return regions_.at(r); }
  int region_of_face(int f) const { return region_of_face_.at(f); }
  int region_of_quad(const QuadKey& q) const { return region_of_face(face_of_quad(q)); }
  int region_by_label(const std::string& label) const;  // throws
  int outer_region() const { return outer_region_; }
  /// Region this piece nests in (the neighbor region toward the outer root);
  /// for pieces bounding the outer region this is the outer region itself.
  int parent_region(int piece) const { return parent_region_.at(piece); }
  /// The face of the piece that borders its parent region.
  int outward_face(int piece) const { return outward_face_.at(piece); }
  /// Piece through which this region connects toward the outer root
  /// (-1 for the outer region itself).
  int region_parent_piece(int r) const { return region_parent_piece_.at(r); }

  // -- shading -------------------------------------------------------------
  bool region_shaded(const Shading& s, int r) const;
  std::vector<int> regions_of_color(const Shading& s, bool shaded) const;
  /// Goeritz index: +1 when the quadrant counterclockwise of the
  /// under-strand slot is unshaded, else -1.
  int goeritz_index(const Shading& s, CrossingId c) const;
  /// Regions at the two unshaded corners of the crossing (unordered pair).
  std::pair<int, int> unshaded_corner_regions(const Shading& s, CrossingId c) const;
  std::pair<int, int> shaded_corner_regions(const Shading& s, CrossingId c) const;

  // -- link components -----------------------------------------------------
  int mu() const { return static_cast<int>(components_.size()); }
  /// Components in canonical order; each is (sorted arcs, sorted circles)
  /// where exactly one of the two lists is nonempty.
  struct Component {
    std::vector<ArcId> arcs;
    std::vector<CircleId> circles;
    std::string name;  // least arc id as string, or "o<k>"
  };
  const std::vector<Component>& components() const { return components_; }
  int component_of_arc(ArcId a) const;
  int component_of_circle(CircleId c) const;
  int component_by_name(const std::string& name) const;  // throws
  /// Partition of components into detached sublinks (no crossing joins two
  /// classes); classes and members in canonical order.
  std::vector<std::vector<int>> detached_sublinks() const;

 private:
  const Diagram* d_;
  std::map<ArcId, std::array<Dart, 2>> arc_ends_;
  std::vector<FaceInfo> faces_;
  std::map<Dart, int> face_of_dart_;
  std::vector<PieceInfo> pieces_;
  std::map<CrossingId, int> piece_of_crossing_;
  std::map<CircleId, int> piece_of_circle_;
  std::vector<int> region_of_face_;
  std::vector<RegionInfo> regions_;
  std::map<std::string, int> region_index_by_label_;
  int outer_region_ = 0;
  std::vector<int> parent_region_;       // per piece
  std::vector<int> outward_face_;        // per piece
  std::vector<int> region_parent_piece_; // per region, -1 at the root
  std::vector<bool> region_color_;       // raw 2-coloring; outer has color 0
  std::vector<Component> components_;
  std::map<ArcId, int> component_of_arc_;
  std::map<CircleId, int> component_of_circle_;
  std::map<CrossingId, std::pair<int, int>> crossing_components_;
};

// -- construction / normalization -------------------------------------------

/// Rotates each crossing's slot array so the under axis is {0,2} and the
/// array is the lexicographically smaller of its two valid rotations,
/// remapping merge/outer anchors.  `under_parity[c]` gives the current under
/// axis parity of crossing c (0 or 1); omit for diagrams already on axis
/// {0,2} that only need the lex rule applied.
void canonicalize_slots(Diagram& d,
                        const std::map<CrossingId, int>* under_parity = nullptr,
                        std::map<CrossingId, int>* rotation_out = nullptr);

/// Result of re-anchoring the outer region.  Regions and labels are
/// untouched, so both correspondences are identity on region labels.
struct SetOuterResult {
  Diagram diagram;
  std::map<std::string, std::string> forward;   // old label -> new label
  std::map<std::string, std::string> backward;  // new label -> old label
};

/// Declares the region with the given label to be the unbounded one.
SetOuterResult set_outer_face(const Diagram& d, const std::string& region_label);

// -- PD I/O -------------------------------------------------------------------

/// Parses PD text (X/O/nest/outer lines) or the JSON equivalent (detected by
/// a leading '{').  Throws DiagramError.
Diagram parse_pd(const std::string& text);

/// Deterministic PD text.  Crossings and circles are renumbered
/// consecutively in id order; arc ids are preserved.
std::string to_pd_text(const Diagram& d);

/// JSON form of the same data.
std::string to_pd_json(const Diagram& d);

/// Value equality up to the canonical renumbering applied by to_pd_text.
bool diagram_equal(const Diagram& a, const Diagram& b);

// -- convenience wrappers used by the CLI and tests ---------------------------

/// Sorted labels of all regions ("trace_regions").
std::vector<std::string> region_labels(const Diagram& d);

std::vector<std::string> detached_sublink_names(const Diagram& d);

int component_count(const Diagram& d);

}  // namespace goeritz
