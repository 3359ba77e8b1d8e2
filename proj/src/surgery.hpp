#pragma once

#include <map>
#include <set>
#include <vector>

#include "goeritz/diagram.hpp"

namespace goeritz::detail {

/// Shared rewrite engine for moves that delete crossings by splicing their
/// strands straight through (slot 0 joined to slot 2, slot 1 to slot 3),
/// optionally mirroring a set of crossings in place.  The engine rebuilds
/// arcs under min-id naming, turns strand chains that close up into fresh
/// circles, and re-homes merge/outer anchors stranded on deleted crossings.
class SpliceSurgery {
 public:
  explicit SpliceSurgery(const DiagramAnalysis& an) : an_(&an) {}

  /// Marks a crossing for removal by through-splicing.
  void splice(CrossingId c) { spliced_.insert(c); }

  /// Marks a crossing for removal by smoothing: the arcs in slots p and p+1
  /// join, as do those in slots p+2 and p+3, so the quadrants at parities
  /// p+1 and p+3 merge into one region.  Unlike a through-splice this keeps
  /// the strands uncrossed, which lets a composite move absorb the strand
  /// transposition an odd number of through-splices would leave behind.
  void smooth(CrossingId c, int join_parity) {
    smoothed_[c] = ((join_parity % 4) + 4) % 4;
  }

  /// Marks crossings whose slot arrays are reversed (j -> 3-j): the
  /// combinatorial mirror of rotating a disk's contents out of the plane.
  void mirror(const std::set<CrossingId>& cs) {
    mirrored_.insert(cs.begin(), cs.end());
  }

  /// Declares that two faces end up in one region after the move; used to
  /// re-home anchors whose own face disappears with the spliced crossings.
  void partner(int f1, int f2) { partners_.emplace_back(f1, f2); }

  /// Performs the rewrite.  The result is raw: neither canonicalized nor
  /// validated, since intermediate states of composite moves may be
  /// non-spherical.  Callers canonicalize and validate the finished diagram.
  ///
  /// A strand chain that closes up into a circle is glued back into the
  /// plane between two of the old faces that flanked the chain.  Which pair
  /// survives the splice is not determined locally, so the candidate pairs
  /// (one per end dart of the chain) are enumerated: apply(v) for
  /// 0 <= v < flank_variant_count() realizes each assignment, and callers
  /// keep the first variant that validates.  Variant 0 uses each chain's
  /// least end dart.
  Diagram apply(int flank_variant = 0);

  /// Valid after apply(): number of flank assignments enumerable via
  /// apply(v).  Always >= 1 and independent of the variant applied.
  int flank_variant_count() const { return flank_variant_count_; }

  /// Valid after apply(): surviving name of every old arc.
  const std::map<ArcId, ArcId>& arc_names() const { return arc_name_; }

  /// Valid after apply(): circles created from closed strand chains.
  const std::vector<CircleId>& new_circles() const { return new_circles_; }

 private:
  bool removed(CrossingId c) const {
    return spliced_.count(c) > 0 || smoothed_.count(c) > 0;
  }

  const DiagramAnalysis* an_;
  std::set<CrossingId> spliced_;
  std::map<CrossingId, int> smoothed_;
  std::set<CrossingId> mirrored_;
  std::vector<std::pair<int, int>> partners_;
  std::map<ArcId, ArcId> arc_name_;
  std::vector<CircleId> new_circles_;
  int flank_variant_count_ = 1;
};

/// Everything nested through the given faces of `piece`: the crossings and
/// circles of every other piece whose path in the nesting tree enters the
/// disk bounded by those faces.
struct NestedContent {
  std::set<CrossingId> crossings;
  std::set<CircleId> circles;
};
NestedContent collect_nested(const DiagramAnalysis& an, int piece,
                             const std::set<int>& interior_faces);

/// Least anchor key of the region (a quadrant or circle side), skipping the
/// faces of `skip_piece`.  Throws DiagramError if the region has none.
QuadKey region_anchor(const DiagramAnalysis& an, int region,
                      int skip_piece = -1);

}  // namespace goeritz::detail
