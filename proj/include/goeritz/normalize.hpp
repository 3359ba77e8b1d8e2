#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "goeritz/diagram.hpp"
#include "goeritz/matrix.hpp"

namespace goeritz {

/// Result of testing a shaded diagram against the five strong-normality
/// conditions.  Each flag is true when its condition holds; when a flag is
/// false the matching witness field identifies an offender.
struct NormalityReport {
  bool outer_shaded = false;      ///< 1: the outer region is shaded
  bool shaded_connected = false;  ///< 2: the shaded regions form one block
  bool no_self_pairs = false;     ///< 3: no crossing meets one unshaded region twice
  bool signs_consistent = false;  ///< 4: each crossing class carries one sign
  bool braided = false;           ///< 5: each class sits along one twist chain

  int beta = 0;  ///< number of shaded blocks (condition 2 checks beta == 1)

  std::string outer_witness;  ///< label of the outer region when unshaded
  std::optional<CrossingId> self_pair_witness;
  std::optional<std::pair<CrossingId, CrossingId>> sign_witness;
  std::optional<std::pair<CrossingId, CrossingId>> braid_witness;

  bool strongly_normal() const {
    return outer_shaded && shaded_connected && no_self_pairs &&
           signs_consistent && braided;
  }
};

/// Evaluates all five strong-normality conditions for (d, s).
NormalityReport check_strongly_normal(const Diagram& d, const Shading& s);

/// A diagram paired with the checkerboard shading the rewrites act on.
struct ShadedDiagram {
  Diagram diagram;
  Shading shading;
};

/// Cancels two opposite-sign crossings that are adjacent along a shaded
/// bigon and share their unshaded region pair.  Throws PreconditionError
/// when the pair does not qualify.
ShadedDiagram omega2_cancel(const Diagram& d, const Shading& s, CrossingId c1,
                            CrossingId c2);

/// Removes a crossing whose two unshaded corners lie in one region by
/// rotating the hanging one-tangle out of the twist.  Throws
/// PreconditionError when the crossing is not of that kind.
ShadedDiagram omega4_unwind(const Diagram& d, const Shading& s, CrossingId c);

/// Slides the twist chain ending at c1 through the diagram and reattaches
/// it beside c2, so that c1 and c2 become adjacent along a shaded bigon.
/// Requires c1 and c2 to share an unshaded region pair, to lie in distinct
/// chains, and c1 to be an end of its chain.
ShadedDiagram omega5_consolidate(const Diagram& d, const Shading& s,
                                 CrossingId c1, CrossingId c2);

/// Performs one shaded-block reduction: either relocates a crossing-free
/// circle cluster into a shaded region, or forms the connected sum of two
/// boundary elements and leaves a crossing-free circle behind.  The block
/// count strictly decreases and the adjusted matrix is preserved up to
/// relabeling.  When step_kind is non-null it receives "circle-relocation"
/// or "β-reduction".  Throws PreconditionError when only one block exists.
ShadedDiagram reduce_beta(const Diagram& d, const Shading& s,
                          std::string* step_kind = nullptr);

/// One rewrite applied during normalization, with the adjusted matrices on
/// both sides (always bijection-equal) and the diagram state after the
/// step.
struct MoveStep {
  std::string kind;    ///< set_outer_face | β-reduction | circle-relocation
                       ///< | Ω.2 | Ω.4 | Ω.5+mutation
  std::string detail;  ///< human-readable operands
  LabeledSymMatrix before;
  LabeledSymMatrix after;
  Diagram diagram;  ///< diagram after this step
  Shading shading;  ///< shading after this step
};

/// Ordered record of the rewrites applied by normalize().
struct MoveTrace {
  std::vector<MoveStep> steps;

  /// One line per step: kind, detail, and a short fingerprint of the
  /// adjusted matrices before and after.
  std::string to_text() const;
};

struct NormalizeResult {
  Diagram diagram;
  Shading shading;
  MoveTrace trace;
};

/// Rewrites (d, s) into a diagram whose shading is strongly normal while
/// preserving the adjusted matrix up to relabeling and the component count.
/// Every applied step strictly decreases a lexicographic measure, so the
/// loop always terminates; a step that fails to decrease it throws
/// DiagramError.
NormalizeResult normalize(const Diagram& d, const Shading& s);

/// True when every unshaded region's boundary forms a single closed walk,
/// i.e. the region has exactly one member face.
bool unshaded_regions_simply_connected(const Diagram& d, const Shading& s);

}  // namespace goeritz
