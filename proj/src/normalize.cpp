#include "goeritz/normalize.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <deque>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>

#include "goeritz/tait.hpp"
#include "surgery.hpp"

namespace goeritz {
namespace {

/// Diagnostics for rewrite-candidate searches, enabled by setting
/// GOERITZ_NORMALIZE_DEBUG in the environment.
bool rewrite_debug() {
  static bool on = std::getenv("GOERITZ_NORMALIZE_DEBUG") != nullptr;
  return on;
}

struct IntUF {
  std::vector<int> up;
  explicit IntUF(int n) : up(n) {
    for (int i = 0; i < n; ++i) up[i] = i;
  }
  int find(int x) { return up[x] == x ? x : up[x] = find(up[x]); }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) up[std::max(a, b)] = std::min(a, b);
  }
};

int quad_face(const DiagramAnalysis& an, CrossingId c, int q) {
  return an.face_of_quad(QuadKey{false, c, (q % 4 + 4) % 4});
}

/// Quadrant index of the first unshaded corner; the unshaded corners are
/// q0 and q0+2, the shaded ones q0+1 and q0+3.
int unshaded_base(const DiagramAnalysis& an, const Shading& s, CrossingId c) {
  return an.goeritz_index(s, c) > 0 ? 0 : 1;
}

/// Crossings sharing a pair of distinct unshaded corner regions, keyed by
/// that pair.  Crossings whose corners repeat one region are excluded (they
/// are condition-3 business).
std::map<std::pair<int, int>, std::vector<CrossingId>> crossing_classes(
    const DiagramAnalysis& an, const Shading& s) {
  std::map<std::pair<int, int>, std::vector<CrossingId>> out;
  for (const auto& [c, cr] : an.diagram().crossings) {
    auto pr = an.unshaded_corner_regions(s, c);
    if (pr.first != pr.second)
      out[std::minmax(pr.first, pr.second)].push_back(c);
  }
  return out;
}

/// Edges of the twist-adjacency graph on a class: two members are adjacent
/// when some shaded face is a bigon joining exactly those two crossings.
std::map<CrossingId, std::set<CrossingId>> bigon_adjacency(
    const DiagramAnalysis& an, const Shading& s,
    const std::vector<CrossingId>& cls) {
  std::set<CrossingId> in(cls.begin(), cls.end());
  std::map<CrossingId, std::set<CrossingId>> adj;
  for (int f = 0; f < an.num_faces(); ++f) {
    const FaceInfo& fi = an.face(f);
    if (fi.darts.size() != 2) continue;
    if (!an.region_shaded(s, an.region_of_face(f))) continue;
    CrossingId a = fi.darts[0].c, b = fi.darts[1].c;
    if (a == b || !in.count(a) || !in.count(b)) continue;
    adj[a].insert(b);
    adj[b].insert(a);
  }
  return adj;
}

struct Chain {
  std::vector<CrossingId> order;  // path order; cycle walk when closed
  bool cycle = false;
};

/// Connected components of the twist-adjacency graph, each laid out along
/// its path (a class member has at most two shaded corners, so components
/// are paths or closed cycles).
std::vector<Chain> chain_split(
    const std::vector<CrossingId>& cls,
    const std::map<CrossingId, std::set<CrossingId>>& adj) {
  std::vector<Chain> chains;
  std::set<CrossingId> seen;
  for (CrossingId c : cls) {
    if (seen.count(c)) continue;
    std::set<CrossingId> comp{c};
    std::deque<CrossingId> bfs{c};
    while (!bfs.empty()) {
      CrossingId x = bfs.front();
      bfs.pop_front();
      auto it = adj.find(x);
      if (it == adj.end()) continue;
      for (CrossingId y : it->second)
        if (comp.insert(y).second) bfs.push_back(y);
    }
    seen.insert(comp.begin(), comp.end());
    std::vector<CrossingId> ends;
    for (CrossingId x : comp) {
      auto it = adj.find(x);
      int deg = it == adj.end() ? 0 : static_cast<int>(it->second.size());
      if (deg <= 1) ends.push_back(x);
    }
    Chain ch;
    ch.cycle = ends.empty() && comp.size() >= 2;
    CrossingId start =
        ends.empty() ? *comp.begin() : *std::min_element(ends.begin(), ends.end());
    ch.order.push_back(start);
    std::set<CrossingId> used{start};
    for (;;) {
      auto it = adj.find(ch.order.back());
      std::optional<CrossingId> nxt;
      if (it != adj.end())
        for (CrossingId y : it->second)
          if (!used.count(y) && (!nxt || y < *nxt)) nxt = y;
      if (!nxt) break;
      ch.order.push_back(*nxt);
      used.insert(*nxt);
    }
    if (ch.order.size() != comp.size())
      throw DiagramError("twist chain is branched");
    chains.push_back(std::move(ch));
  }
  return chains;
}

/// Declares the two shaded corner faces of a crossing about to be spliced
/// as ending up in one region.
void partner_shaded_diagonal(detail::SpliceSurgery& surg,
                             const DiagramAnalysis& an, const Shading& s,
                             CrossingId c) {
  int q0 = unshaded_base(an, s, c);
  surg.partner(quad_face(an, c, q0 + 1), quad_face(an, c, q0 + 3));
}

/// Groups the unshaded corner faces of the given crossings by region and
/// partners faces of a common region, so anchors stranded there re-home
/// within the right region.
void partner_unshaded_by_region(detail::SpliceSurgery& surg,
                                const DiagramAnalysis& an, const Shading& s,
                                const std::vector<CrossingId>& cs) {
  std::map<int, std::vector<int>> by_region;
  for (CrossingId c : cs) {
    int q0 = unshaded_base(an, s, c);
    for (int q : {q0, q0 + 2}) {
      int f = quad_face(an, c, q);
      by_region[an.region_of_face(f)].push_back(f);
    }
  }
  for (const auto& [r, fs] : by_region)
    for (std::size_t i = 1; i < fs.size(); ++i) surg.partner(fs[0], fs[i]);
}

/// Shaded-block structure: union-find of regions joined at shaded corners.
IntUF shaded_blocks(const DiagramAnalysis& an, const Shading& s) {
  IntUF uf(an.num_regions());
  for (const auto& [c, cr] : an.diagram().crossings) {
    auto pr = an.shaded_corner_regions(s, c);
    uf.unite(pr.first, pr.second);
  }
  return uf;
}

std::map<int, std::vector<int>> shaded_block_members(const DiagramAnalysis& an,
                                                     const Shading& s,
                                                     IntUF& uf) {
  std::map<int, std::vector<int>> comps;
  for (int r = 0; r < an.num_regions(); ++r)
    if (an.region_shaded(s, r)) comps[uf.find(r)].push_back(r);
  return comps;
}

/// Least anchor key over a region's faces, skipping faces on the given
/// pieces.  Throws when nothing survives.
QuadKey region_anchor_excluding(const DiagramAnalysis& an, int region,
                                const std::set<int>& skip_pieces) {
  std::optional<QuadKey> best;
  for (int f : an.region(region).faces) {
    if (skip_pieces.count(an.face(f).piece)) continue;
    for (const QuadKey& q : an.face(f).quads)
      if (!best || q < *best) best = q;
  }
  if (!best) throw DiagramError("region has no anchor outside the moved pieces");
  return *best;
}

/// The region across the given arc from `from_region`.
int region_across_arc(const DiagramAnalysis& an, ArcId a, int from_region) {
  Dart e = an.arc_ends(a)[0];
  int r1 = an.region_of_face(an.face_of_dart(e));
  int r2 = an.region_of_face(an.face_of_dart(DiagramAnalysis::sigma(e)));
  if (r1 == from_region) return r2;
  if (r2 == from_region) return r1;
  throw DiagramError("arc does not border the given region");
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string fingerprint(const LabeledSymMatrix& m) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << fnv1a(m.to_json());
  return os.str();
}

using Measure = std::array<long long, 5>;

/// Lexicographic step measure: (outer unshaded?, block count, self-pair
/// crossings, non-adjacent same-pair pairs, opposite-sign adjacent pairs).
/// Every pipeline rewrite strictly decreases it.
Measure step_measure(const Diagram& d, const Shading& s) {
  DiagramAnalysis an(d);
  Measure m{};
  m[0] = an.region_shaded(s, an.outer_region()) ? 0 : 1;
  IntUF uf = shaded_blocks(an, s);
  m[1] = static_cast<long long>(shaded_block_members(an, s, uf).size());
  for (const auto& [c, cr] : d.crossings) {
    auto pr = an.unshaded_corner_regions(s, c);
    if (pr.first == pr.second) ++m[2];
  }
  for (const auto& [pr, cls] : crossing_classes(an, s)) {
    auto adj = bigon_adjacency(an, s, cls);
    long long n = static_cast<long long>(cls.size());
    long long adjacent = 0;
    for (const auto& [c, nbrs] : adj) adjacent += static_cast<long long>(nbrs.size());
    adjacent /= 2;
    m[3] += n * (n - 1) / 2 - adjacent;
    for (const auto& [c, nbrs] : adj)
      for (CrossingId y : nbrs)
        if (c < y && an.goeritz_index(s, c) != an.goeritz_index(s, y)) ++m[4];
  }
  return m;
}

/// Common validation for a finished rewrite: the diagram analyzes, keeps the
/// component count, and keeps the adjusted matrix up to relabeling.  All
/// moves except block reductions also keep the shaded block count.
DiagramAnalysis validate_rewrite(const DiagramAnalysis& an, const Shading& s,
                                 const Diagram& out, const char* what,
                                 bool same_beta = true) {
  DiagramAnalysis an2(out);
  if (an2.mu() != an.mu())
    throw DiagramError(std::string(what) + " changed the component count");
  if (same_beta && beta_s(out, s) != beta_s(an.diagram(), s))
    throw DiagramError(std::string(what) + " changed the shaded block count");
  LabeledSymMatrix before = adjusted_goeritz_matrix(an.diagram(), s);
  LabeledSymMatrix after = adjusted_goeritz_matrix(out, s);
  if (!bijection_equal(before, after)) {
    if (rewrite_debug())
      std::cerr << "[debug] " << what << " matrix mismatch\nbefore:\n"
                << before.to_text() << "after:\n"
                << after.to_text();
    throw DiagramError(std::string(what) + " changed the adjusted matrix");
  }
  return an2;
}

}  // namespace

NormalityReport check_strongly_normal(const Diagram& d, const Shading& s) {
  DiagramAnalysis an(d);
  NormalityReport rep;

  int outer = an.outer_region();
  rep.outer_shaded = an.region_shaded(s, outer);
  if (!rep.outer_shaded) rep.outer_witness = an.region(outer).label;

  IntUF uf = shaded_blocks(an, s);
  rep.beta = static_cast<int>(shaded_block_members(an, s, uf).size());
  rep.shaded_connected = rep.beta == 1;

  rep.no_self_pairs = true;
  for (const auto& [c, cr] : d.crossings) {
    auto pr = an.unshaded_corner_regions(s, c);
    if (pr.first == pr.second) {
      rep.no_self_pairs = false;
      rep.self_pair_witness = c;
      break;
    }
  }

  auto classes = crossing_classes(an, s);

  rep.signs_consistent = true;
  for (const auto& [pr, cls] : classes) {
    std::optional<CrossingId> pos, neg;
    for (CrossingId c : cls)
      (an.goeritz_index(s, c) > 0 ? pos : neg) = c;
    if (pos && neg) {
      rep.signs_consistent = false;
      rep.sign_witness = {*pos, *neg};
      break;
    }
  }

  rep.braided = true;
  for (const auto& [pr, cls] : classes) {
    if (cls.size() < 2) continue;
    auto adj = bigon_adjacency(an, s, cls);
    auto chains = chain_split(cls, adj);
    if (chains.size() > 1) {
      rep.braided = false;
      rep.braid_witness = {chains[0].order.front(), chains[1].order.front()};
      break;
    }
  }
  return rep;
}

bool unshaded_regions_simply_connected(const Diagram& d, const Shading& s) {
  DiagramAnalysis an(d);
  for (int r = 0; r < an.num_regions(); ++r)
    if (!an.region_shaded(s, r) && an.region(r).faces.size() != 1) return false;
  return true;
}

ShadedDiagram omega2_cancel(const Diagram& d, const Shading& s, CrossingId c1,
                            CrossingId c2) {
  if (c1 == c2) throw PreconditionError("the two crossings must be distinct");
  if (!d.crossings.count(c1) || !d.crossings.count(c2))
    throw PreconditionError("no such crossing");
  DiagramAnalysis an(d);
  auto p1 = an.unshaded_corner_regions(s, c1);
  auto p2 = an.unshaded_corner_regions(s, c2);
  if (std::minmax(p1.first, p1.second) != std::minmax(p2.first, p2.second) ||
      p1.first == p1.second)
    throw PreconditionError(
        "crossings do not share a pair of distinct unshaded regions");
  if (an.goeritz_index(s, c1) != -an.goeritz_index(s, c2))
    throw PreconditionError("crossings do not have opposite signs");
  auto adj = bigon_adjacency(an, s, {c1, c2});
  if (!adj.count(c1) || !adj.at(c1).count(c2))
    throw PreconditionError("crossings are not adjacent along a shaded bigon");

  detail::SpliceSurgery surg(an);
  surg.splice(c1);
  surg.splice(c2);
  partner_shaded_diagonal(surg, an, s, c1);
  partner_shaded_diagonal(surg, an, s, c2);
  partner_unshaded_by_region(surg, an, s, {c1, c2});
  std::string failure;
  for (int v = 0; v == 0 || v < surg.flank_variant_count(); ++v) {
    try {
      Diagram out = surg.apply(v);
      canonicalize_slots(out);
      validate_rewrite(an, s, out, "cancellation");
      return {std::move(out), s};
    } catch (const std::runtime_error& e) {
      failure = e.what();
      if (rewrite_debug())
        std::cerr << "[debug] cancellation flank variant " << v << ": "
                  << e.what() << "\n";
    }
  }
  throw DiagramError(failure);
}

ShadedDiagram omega4_unwind(const Diagram& d, const Shading& s, CrossingId c) {
  if (!d.crossings.count(c)) throw PreconditionError("no such crossing");
  DiagramAnalysis an(d);
  auto pr = an.unshaded_corner_regions(s, c);
  if (pr.first != pr.second)
    throw PreconditionError("crossing does not meet one unshaded region twice");
  int q0 = unshaded_base(an, s, c);
  const auto& slots = d.crossings.at(c).slots;

  // The closed curve through the doubled unshaded region splits the other
  // two strand pairs into two candidate hanging sides.
  std::array<std::array<ArcId, 2>, 2> stub{
      {{slots[(q0 + 1) % 4], slots[(q0 + 2) % 4]},
       {{slots[(q0 + 3) % 4], slots[q0]}}}};
  auto side_crossings = [&](const std::array<ArcId, 2>& stubs) {
    std::set<CrossingId> seen;
    std::deque<CrossingId> bfs;
    for (ArcId a : stubs)
      for (const Dart& e : an.arc_ends(a))
        if (e.c != c && seen.insert(e.c).second) bfs.push_back(e.c);
    while (!bfs.empty()) {
      CrossingId x = bfs.front();
      bfs.pop_front();
      for (ArcId a : d.crossings.at(x).slots)
        for (const Dart& e : an.arc_ends(a))
          if (e.c != c && seen.insert(e.c).second) bfs.push_back(e.c);
    }
    return seen;
  };
  std::array<std::set<CrossingId>, 2> side{side_crossings(stub[0]),
                                           side_crossings(stub[1])};
  for (CrossingId x : side[0])
    if (side[1].count(x))
      throw DiagramError("the hanging tangle is not separated at the crossing");

  int pick;
  if (side[0].size() != side[1].size()) {
    pick = side[0].size() < side[1].size() ? 0 : 1;
  } else {
    std::array<ArcId, 2> a0 = stub[0], a1 = stub[1];
    std::sort(a0.begin(), a0.end());
    std::sort(a1.begin(), a1.end());
    pick = a0 > a1 ? 0 : 1;
  }
  int h = (q0 + (pick == 0 ? 1 : 3)) % 4;

  // Faces of the crossing's piece wholly on the hanging side, minus the
  // three doorway corners, bound the disk whose nested content flips too.
  int piece = an.piece_of_crossing(c);
  std::set<int> interior;
  for (int f : an.piece(piece).faces) {
    bool inside = true;
    for (const Dart& e : an.face(f).darts)
      if (e.c != c && !side[pick].count(e.c)) {
        inside = false;
        break;
      }
    if (inside) interior.insert(f);
  }
  interior.erase(quad_face(an, c, q0));
  interior.erase(quad_face(an, c, q0 + 2));
  interior.erase(quad_face(an, c, h + 2));
  detail::NestedContent nested = detail::collect_nested(an, piece, interior);

  std::set<CrossingId> flipped = side[pick];
  flipped.insert(nested.crossings.begin(), nested.crossings.end());

  detail::SpliceSurgery surg(an);
  surg.splice(c);
  surg.mirror(flipped);
  partner_unshaded_by_region(surg, an, s, {c});
  partner_shaded_diagonal(surg, an, s, c);
  std::string failure;
  for (int v = 0; v == 0 || v < surg.flank_variant_count(); ++v) {
    try {
      Diagram out = surg.apply(v);
      canonicalize_slots(out);
      validate_rewrite(an, s, out, "unwinding");
      return {std::move(out), s};
    } catch (const std::runtime_error& e) {
      failure = e.what();
      if (rewrite_debug())
        std::cerr << "[debug] unwinding flank variant " << v << ": "
                  << e.what() << "\n";
    }
  }
  throw DiagramError(failure);
}

ShadedDiagram omega5_consolidate(const Diagram& d, const Shading& s,
                                 CrossingId c1, CrossingId c2) {
  if (c1 == c2) throw PreconditionError("the two crossings must be distinct");
  if (!d.crossings.count(c1) || !d.crossings.count(c2))
    throw PreconditionError("no such crossing");
  DiagramAnalysis an(d);
  auto p1 = an.unshaded_corner_regions(s, c1);
  auto p2 = an.unshaded_corner_regions(s, c2);
  if (std::minmax(p1.first, p1.second) != std::minmax(p2.first, p2.second) ||
      p1.first == p1.second)
    throw PreconditionError(
        "crossings do not share a pair of distinct unshaded regions");
  auto classes = crossing_classes(an, s);
  const std::vector<CrossingId>& cls =
      classes.at(std::minmax(p1.first, p1.second));
  auto adj = bigon_adjacency(an, s, cls);
  if (adj.count(c1) && adj.at(c1).count(c2))
    throw PreconditionError("crossings are already adjacent along a shaded bigon");
  auto chains = chain_split(cls, adj);
  const Chain *src = nullptr, *dst = nullptr;
  for (const Chain& ch : chains) {
    bool has1 = std::count(ch.order.begin(), ch.order.end(), c1) > 0;
    bool has2 = std::count(ch.order.begin(), ch.order.end(), c2) > 0;
    if (has1 && has2)
      throw PreconditionError("crossings already lie in one twist chain");
    if (has1) src = &ch;
    if (has2) dst = &ch;
  }
  if (!src || !dst) throw DiagramError("twist chains could not be located");
  if (src->cycle)
    throw PreconditionError("the sliding chain is closed");
  if (c1 != src->order.front() && c1 != src->order.back())
    throw PreconditionError("crossing is interior to its twist chain");

  // Orient the sliding chain so c1 is last (it will face c2).
  std::vector<CrossingId> block = src->order;
  if (block.front() == c1) std::reverse(block.begin(), block.end());
  std::map<CrossingId, int> old_eta;
  for (CrossingId x : block) old_eta[x] = an.goeritz_index(s, x);

  // Splice the whole chain out.  Through-splices preserve each strand, so a
  // block of odd length would leave one strand transposition behind; in that
  // case one crossing is smoothed instead, sealing its unshaded-corner ports
  // together pairwise, which is the reconnection the rotation performs when
  // the crossing slides along the corridor, and the transposition is
  // absorbed there.  Its shaded corners merge just as for a through-splice.
  bool odd = block.size() % 2 == 1;
  CrossingId smoothed = block.back();
  detail::SpliceSurgery surg(an);
  for (CrossingId x : block) {
    if (odd && x == smoothed)
      surg.smooth(x, unshaded_base(an, s, x));
    else
      surg.splice(x);
    partner_shaded_diagonal(surg, an, s, x);
  }
  partner_unshaded_by_region(surg, an, s, block);

  ArcId next_arc = an.arcs().empty() ? 1 : an.arcs().rbegin()->first + 1;
  int q0 = unshaded_base(an, s, c2);
  LabeledSymMatrix target = adjusted_goeritz_matrix(d, s);
  int beta_before = beta_s(d, s);

  // Rebuild the chain as a braid block beside c2.  Candidates: the flank
  // assignment of any circles split off by the splice, which shaded corner
  // of c2 receives the block, and which strand plays the top; over/under
  // bits are patched per crossing to restore each one's original sign.
  std::string failure = "no candidate embedding was valid";
  for (int v = 0; v == 0 || v < surg.flank_variant_count(); ++v) {
  Diagram base;
  try {
    base = surg.apply(v);
  } catch (const std::runtime_error& e) {
    failure = e.what();
    continue;
  }
  for (int corner = 0; corner < 2; ++corner) {
    int qc = (q0 + (corner == 0 ? 1 : 3)) % 4;
    ArcId vp = base.crossings.at(c2).slots[qc];
    ArcId vq = base.crossings.at(c2).slots[(qc + 1) % 4];
    // attach picks which strand feeds the top of the block; cross picks the
    // block-to-c2 wiring independently, so the pair of flags can absorb the
    // strand transposition a chain of odd length leaves behind.
    for (int attach = 0; attach < 4; ++attach) {
      bool cross = (attach & 2) != 0;
      auto build = [&](const std::map<CrossingId, int>& bits) {
        Diagram out = base;
        int k = static_cast<int>(block.size());
        auto top = [&](int i) {
          return i == 0 ? ((attach & 1) == 0 ? vp : vq) : next_arc + 2 * (i - 1);
        };
        auto bot = [&](int i) {
          return i == 0 ? ((attach & 1) == 0 ? vq : vp) : next_arc + 2 * (i - 1) + 1;
        };
        for (int i = 1; i <= k; ++i) {
          CrossingId id = block[static_cast<std::size_t>(i - 1)];
          ArcId tl = top(i - 1), bl = bot(i - 1), br = bot(i), tr = top(i);
          Crossing cr;
          if (bits.count(id) && bits.at(id))
            cr.slots = {tr, tl, bl, br};
          else
            cr.slots = {tl, bl, br, tr};
          out.crossings[id] = cr;
        }
        if (!cross) {
          out.crossings.at(c2).slots[qc] = top(k);
          out.crossings.at(c2).slots[(qc + 1) % 4] = bot(k);
        } else {
          out.crossings.at(c2).slots[qc] = bot(k);
          out.crossings.at(c2).slots[(qc + 1) % 4] = top(k);
        }
        canonicalize_slots(out);
        return out;
      };
      try {
        Diagram probe = build({});
        DiagramAnalysis an_probe(probe);
        std::map<CrossingId, int> bits;
        for (CrossingId x : block)
          bits[x] = an_probe.goeritz_index(s, x) != old_eta.at(x) ? 1 : 0;
        Diagram out = build(bits);
        DiagramAnalysis an2(out);
        if (an2.mu() != an.mu()) {
          if (rewrite_debug())
            std::cerr << "[debug] mu " << an.mu() << " -> " << an2.mu()
                      << " for\n" << to_pd_text(out);
          throw DiagramError("relocation changed the component count");
        }
        for (CrossingId x : block)
          if (an2.goeritz_index(s, x) != old_eta.at(x))
            throw DiagramError("relocation changed a crossing sign");
        auto adj2 = bigon_adjacency(an2, s, cls);
        if (!adj2.count(c1) || !adj2.at(c1).count(c2))
          throw DiagramError("relocation left the crossings non-adjacent");
        if (beta_s(out, s) != beta_before)
          throw DiagramError("relocation changed the shaded block count");
        if (!bijection_equal(target, adjusted_goeritz_matrix(out, s))) {
          if (rewrite_debug())
            std::cerr << "[debug] relocation matrix mismatch\nbefore:\n"
                      << target.to_text() << "after:\n"
                      << adjusted_goeritz_matrix(out, s).to_text();
          throw DiagramError("relocation changed the adjusted matrix");
        }
        return {std::move(out), s};
      } catch (const std::runtime_error& e) {
        failure = e.what();
        if (rewrite_debug())
          std::cerr << "[debug] omega5 flank=" << v << " corner=" << corner
                    << " attach=" << attach << ": " << failure << "\n";
      }
    }
  }
  }
  throw DiagramError(std::string("chain relocation failed: ") + failure);
}

namespace {

/// One shaded-block reduction attempt against the block rooted at `kroot`.
ShadedDiagram reduce_block(const Diagram& d, const DiagramAnalysis& an,
                           const Shading& s, const std::set<int>& K,
                           int beta_before, std::string* step_kind) {
  // Pieces carrying the block, and the unique one facing outward.
  std::set<int> kpieces;
  for (const auto& [c, cr] : d.crossings) {
    auto pr = an.shaded_corner_regions(s, c);
    if (K.count(pr.first) || K.count(pr.second))
      kpieces.insert(an.piece_of_crossing(c));
  }
  for (CircleId k : d.circles)
    for (int side = 0; side < 2; ++side)
      if (K.count(an.region_of_quad(QuadKey{true, k, side})))
        kpieces.insert(an.piece_of_circle(k));
  std::vector<int> roots;
  for (int p : kpieces)
    if (!K.count(an.parent_region(p))) roots.push_back(p);
  if (roots.size() != 1)
    throw DiagramError("shaded block has no unique outward piece");
  int root = roots[0];
  int Ri = an.parent_region(root);
  if (an.region_shaded(s, Ri))
    throw DiagramError("outward piece faces a shaded region");

  auto in_subtree = [&](int p) {
    while (p != root) {
      int pp = an.region_parent_piece(an.parent_region(p));
      if (pp < 0) return false;
      p = pp;
    }
    return true;
  };
  std::set<int> sub;
  bool sub_has_crossings = false;
  for (int p = 0; p < an.num_pieces(); ++p)
    if (in_subtree(p)) {
      sub.insert(p);
      if (!an.piece(p).is_circle) sub_has_crossings = true;
    }

  // Every branch below re-homes the outer face before surgery: with no
  // explicit anchor the rebuilt diagram would fall back to the default
  // choice, which can land on a different region and flip every shading.
  auto pin_outer = [&](Diagram& out, const std::set<int>& avoid) {
    if (!out.outer)
      out.outer = region_anchor_excluding(an, an.outer_region(), avoid);
  };

  auto finish = [&](Diagram out, const char* kind) {
    canonicalize_slots(out);
    DiagramAnalysis an2 =
        validate_rewrite(an, s, out, "block reduction", /*same_beta=*/false);
    if (beta_s(out, s) >= beta_before)
      throw DiagramError("block reduction failed to decrease the block count");
    (void)an2;
    if (step_kind) *step_kind = kind;
    return ShadedDiagram{std::move(out), s};
  };

  if (!sub_has_crossings) {
    // Relocate the whole circle cluster into the least-labeled shaded region
    // beside the host region.  A cluster with deeper nesting may fail to
    // dissolve its block this way (its inner colors flip with the move); the
    // connected-sum cases below then take over.
    try {
      std::set<CircleId> subcircles;
      for (int p : sub)
        subcircles.insert(static_cast<CircleId>(an.piece(p).key));
      std::optional<std::pair<std::string, int>> best;
      auto consider = [&](int r) {
        if (r == Ri || !an.region_shaded(s, r) || K.count(r)) return;
        const std::string& lbl = an.region(r).label;
        if (!best || lbl < best->first) best = {lbl, r};
      };
      for (ArcId a : an.region(Ri).arcs) consider(region_across_arc(an, a, Ri));
      for (CircleId k : an.region(Ri).circles) {
        if (sub.count(an.piece_of_circle(k))) continue;
        for (int side = 0; side < 2; ++side)
          consider(an.region_of_quad(QuadKey{true, k, side}));
      }
      if (!best) throw DiagramError("no shaded region borders the host region");
      QuadKey anchor = region_anchor_excluding(an, best->second, sub);

      Diagram out = d;
      auto on_sub = [&](const QuadKey& q) {
        return q.circle && subcircles.count(q.id) > 0;
      };
      if (!out.outer || on_sub(*out.outer))
        out.outer = region_anchor_excluding(an, an.outer_region(), sub);
      // Merges internal to the cluster keep its nesting; only the single
      // attachment to the host region moves, anchored on the side of the root
      // circle that already faces outward.
      CircleId rootkey = static_cast<CircleId>(an.piece(root).key);
      int out_side = an.region_of_quad(QuadKey{true, rootkey, 0}) == Ri ? 0 : 1;
      std::erase_if(out.merges, [&](const std::pair<QuadKey, QuadKey>& m) {
        return on_sub(m.first) != on_sub(m.second);
      });
      out.merges.emplace_back(QuadKey{true, rootkey, out_side}, anchor);
      return finish(std::move(out), "circle-relocation");
    } catch (const std::runtime_error& e) {
      if (rewrite_debug())
        std::cerr << "[debug] relocation of cluster at " << an.piece(root).name
                  << ": " << e.what() << "\n";
    }
  }

  // Connected sum of one block-side boundary element with one host-side
  // element of the host region, leaving a crossing-free circle behind.
  bool root_is_circle = an.piece(root).is_circle;
  std::optional<ArcId> host_arc;
  for (ArcId a : an.region(Ri).arcs) {
    Dart e = an.arc_ends(a)[0];
    if (an.piece_of_crossing(e.c) != root) {
      host_arc = a;
      break;
    }
  }
  std::optional<CircleId> host_circle;
  if (!host_arc)
    for (CircleId k : an.region(Ri).circles)
      if (an.piece_of_circle(k) != root) {
        host_circle = k;
        break;
      }
  if (!host_arc && !host_circle)
    throw DiagramError("host region has no boundary element to sum with");

  // Rewrites every merge/outer anchor through the given key map.
  auto rewrite_keys = [&](Diagram& out, const std::map<QuadKey, QuadKey>& map) {
    auto fix = [&](QuadKey& q) {
      auto it = map.find(q);
      if (it != map.end()) q = it->second;
    };
    for (auto& [a, b] : out.merges) {
      fix(a);
      fix(b);
    }
    if (out.outer) fix(*out.outer);
  };

  if (root_is_circle && host_arc) {
    CircleId h = static_cast<CircleId>(an.piece(root).key);
    int outer_side =
        an.region_of_quad(QuadKey{true, h, 0}) == Ri ? 0 : 1;
    int inner_side = 1 - outer_side;
    int Sa = region_across_arc(an, *host_arc, Ri);
    QuadKey sa_anchor = region_anchor_excluding(an, Sa, {root});
    QuadKey ri_anchor = region_anchor_excluding(an, Ri, {root});
    Diagram out = d;
    pin_outer(out, {root});
    rewrite_keys(out, {{QuadKey{true, h, inner_side}, sa_anchor},
                       {QuadKey{true, h, outer_side}, ri_anchor}});
    out.merges.emplace_back(QuadKey{true, h, 0}, sa_anchor);
    return finish(std::move(out), "β-reduction");
  }

  if (root_is_circle && host_circle) {
    CircleId h = static_cast<CircleId>(an.piece(root).key);
    CircleId h2 = *host_circle;
    int h_outer = an.region_of_quad(QuadKey{true, h, 0}) == Ri ? 0 : 1;
    int h2_near = an.region_of_quad(QuadKey{true, h2, 0}) == Ri ? 0 : 1;
    CircleId big = std::min(h, h2), rem = std::max(h, h2);
    Diagram out = d;
    pin_outer(out, {root, an.piece_of_circle(h2)});
    rewrite_keys(out, {{QuadKey{true, h, 1 - h_outer}, QuadKey{true, big, 0}},
                       {QuadKey{true, h, h_outer}, QuadKey{true, big, 1}},
                       {QuadKey{true, h2, 1 - h2_near}, QuadKey{true, big, 0}},
                       {QuadKey{true, h2, h2_near}, QuadKey{true, big, 1}}});
    out.merges.emplace_back(QuadKey{true, rem, 0}, QuadKey{true, big, 0});
    return finish(std::move(out), "β-reduction");
  }

  ArcId b_arc = an.face(an.outward_face(root)).arcs.front();

  if (host_circle) {
    CircleId h2 = *host_circle;
    int near = an.region_of_quad(QuadKey{true, h2, 0}) == Ri ? 0 : 1;
    int Kb = region_across_arc(an, b_arc, Ri);
    QuadKey kb_anchor =
        region_anchor_excluding(an, Kb, {an.piece_of_circle(h2)});
    QuadKey ri_anchor =
        region_anchor_excluding(an, Ri, {an.piece_of_circle(h2)});
    Diagram out = d;
    pin_outer(out, {an.piece_of_circle(h2)});
    rewrite_keys(out, {{QuadKey{true, h2, 1 - near}, kb_anchor},
                       {QuadKey{true, h2, near}, ri_anchor}});
    out.merges.emplace_back(QuadKey{true, h2, 0}, kb_anchor);
    return finish(std::move(out), "β-reduction");
  }

  // Arc-with-arc: cut both strands and cross-join them through the host
  // region; the leftover circle sits in the shaded region beside the host
  // strand.  Exactly one joining orientation yields a spherical diagram.
  ArcId a_arc = *host_arc;
  const auto& ae = an.arc_ends(a_arc);
  const auto& be = an.arc_ends(b_arc);
  ArcId x = std::min(a_arc, b_arc), y = std::max(a_arc, b_arc);
  int Sa = region_across_arc(an, a_arc, Ri);
  QuadKey z_anchor = region_anchor_excluding(an, Sa, {});
  CircleId z = d.circles.empty() ? 1 : *d.circles.rbegin() + 1;
  std::string failure = "no joining orientation was valid";
  for (int orient = 0; orient < 2; ++orient) {
    Diagram out = d;
    pin_outer(out, {});
    const Dart& b0 = be[orient];
    const Dart& b1 = be[1 - orient];
    out.crossings.at(ae[0].c).slots[ae[0].slot] = x;
    out.crossings.at(b0.c).slots[b0.slot] = x;
    out.crossings.at(ae[1].c).slots[ae[1].slot] = y;
    out.crossings.at(b1.c).slots[b1.slot] = y;
    out.circles.insert(z);
    out.merges.emplace_back(QuadKey{true, z, 0}, z_anchor);
    try {
      return finish(std::move(out), "β-reduction");
    } catch (const std::runtime_error& e) {
      failure = e.what();
      if (rewrite_debug())
        std::cerr << "[debug] arc sum a=" << a_arc << " b=" << b_arc
                  << " orient=" << orient << ": " << failure << "\n";
    }
  }
  throw DiagramError(std::string("connected sum failed: ") + failure);
}

}  // namespace

ShadedDiagram reduce_beta(const Diagram& d, const Shading& s,
                          std::string* step_kind) {
  DiagramAnalysis an(d);
  IntUF uf = shaded_blocks(an, s);
  auto comps = shaded_block_members(an, s, uf);
  if (comps.size() <= 1)
    throw PreconditionError("the shaded regions already form one block");
  int outer = an.outer_region();
  int main_root = an.region_shaded(s, outer)
                      ? uf.find(outer)
                      : comps.begin()->first;
  std::string failure = "no block qualified";
  for (const auto& [kroot, regs] : comps) {
    if (kroot == main_root) continue;
    try {
      return reduce_block(d, an, s, std::set<int>(regs.begin(), regs.end()),
                          static_cast<int>(comps.size()), step_kind);
    } catch (const std::runtime_error& e) {
      failure = e.what();
      if (rewrite_debug())
        std::cerr << "[debug] block at " << an.region(kroot).label << ": "
                  << failure << "\n";
    }
  }
  throw DiagramError(std::string("no shaded block could be reduced: ") +
                     failure);
}

std::string MoveTrace::to_text() const {
  std::ostringstream os;
  if (steps.empty()) {
    os << "(no rewrites; shading already strongly normal)\n";
    return os.str();
  }
  int i = 1;
  for (const MoveStep& st : steps) {
    os << i++ << ". " << st.kind;
    if (!st.detail.empty()) os << " (" << st.detail << ")";
    os << "  G^adj " << st.before.size() << "x" << st.before.size() << " "
       << fingerprint(st.before) << " -> " << fingerprint(st.after) << "\n";
  }
  return os.str();
}

NormalizeResult normalize(const Diagram& d0, const Shading& s0) {
  Diagram d = d0;
  Shading s = s0;
  MoveTrace trace;
  std::size_t cap = 1000 + 50 * d.crossings.size();

  for (;;) {
    if (trace.steps.size() > cap)
      throw DiagramError("normalization exceeded its step budget");
    NormalityReport rep = check_strongly_normal(d, s);
    if (rep.strongly_normal()) break;

    Measure before_m = step_measure(d, s);
    LabeledSymMatrix before = adjusted_goeritz_matrix(d, s);
    std::string kind, detail;

    if (!rep.outer_shaded) {
      DiagramAnalysis an(d);
      std::optional<std::string> lbl;
      for (int r : an.regions_of_color(s, true)) {
        const std::string& l = an.region(r).label;
        if (!lbl || l < *lbl) lbl = l;
      }
      if (!lbl) throw DiagramError("no shaded region to move outside");
      d = set_outer_face(d, *lbl).diagram;
      s = Shading{true};
      kind = "set_outer_face";
      detail = "outer := " + *lbl;
    } else if (!rep.shaded_connected) {
      ShadedDiagram sd = reduce_beta(d, s, &kind);
      detail = "blocks " + std::to_string(rep.beta) + " -> " +
               std::to_string(beta_s(sd.diagram, sd.shading));
      d = std::move(sd.diagram);
      s = sd.shading;
    } else if (!rep.no_self_pairs) {
      CrossingId c = *rep.self_pair_witness;
      ShadedDiagram sd = omega4_unwind(d, s, c);
      d = std::move(sd.diagram);
      s = sd.shading;
      kind = "Ω.4";
      detail = "crossing " + std::to_string(c);
    } else if (!rep.braided) {
      DiagramAnalysis an(d);
      auto classes = crossing_classes(an, s);
      bool done = false;
      std::string failure = "no sliding candidate was valid";
      for (const auto& [prr, cls] : classes) {
        if (done) break;
        auto adj = bigon_adjacency(an, s, cls);
        auto chains = chain_split(cls, adj);
        if (chains.size() < 2) continue;
        const Chain* src = &chains[1];
        const Chain* dst = &chains[0];
        if (src->cycle) std::swap(src, dst);
        if (src->cycle) continue;
        std::vector<CrossingId> c1s{src->order.front()};
        if (src->order.back() != src->order.front())
          c1s.push_back(src->order.back());
        std::vector<CrossingId> c2s;
        if (dst->cycle) {
          c2s = dst->order;
          std::sort(c2s.begin(), c2s.end());
        } else {
          c2s.push_back(dst->order.front());
          if (dst->order.back() != dst->order.front())
            c2s.push_back(dst->order.back());
        }
        for (CrossingId a : c1s) {
          for (CrossingId b : c2s) {
            try {
              ShadedDiagram sd = omega5_consolidate(d, s, a, b);
              d = std::move(sd.diagram);
              s = sd.shading;
              kind = "Ω.5+mutation";
              detail = "crossing " + std::to_string(a) + " beside " +
                       std::to_string(b);
              done = true;
            } catch (const std::runtime_error& e) {
              failure = e.what();
              if (rewrite_debug())
                std::cerr << "[debug] consolidate " << a << " beside " << b
                          << ": " << e.what() << "\n";
            }
            if (done) break;
          }
          if (done) break;
        }
      }
      if (!done)
        throw DiagramError(std::string("braid consolidation failed: ") +
                           failure);
    } else {
      DiagramAnalysis an(d);
      auto cls_pair = an.unshaded_corner_regions(s, rep.sign_witness->first);
      auto classes = crossing_classes(an, s);
      const std::vector<CrossingId>& cls =
          classes.at(std::minmax(cls_pair.first, cls_pair.second));
      auto adj = bigon_adjacency(an, s, cls);
      auto chains = chain_split(cls, adj);
      std::optional<std::pair<CrossingId, CrossingId>> pick;
      for (const Chain& ch : chains) {
        std::size_t n = ch.order.size();
        for (std::size_t i = 0; i + 1 < n && !pick; ++i)
          if (an.goeritz_index(s, ch.order[i]) !=
              an.goeritz_index(s, ch.order[i + 1]))
            pick = {ch.order[i], ch.order[i + 1]};
        if (!pick && ch.cycle && an.goeritz_index(s, ch.order.back()) !=
                                     an.goeritz_index(s, ch.order.front()))
          pick = {ch.order.back(), ch.order.front()};
        if (pick) break;
      }
      if (!pick)
        throw DiagramError("mixed signs without an adjacent opposite pair");
      ShadedDiagram sd = omega2_cancel(d, s, pick->first, pick->second);
      d = std::move(sd.diagram);
      s = sd.shading;
      kind = "Ω.2";
      detail = "crossings " + std::to_string(pick->first) + ", " +
               std::to_string(pick->second);
    }

    if (rewrite_debug())
      std::cerr << "[debug] applied " << kind << " (" << detail << ")\n"
                << to_pd_text(d);
    LabeledSymMatrix after = adjusted_goeritz_matrix(d, s);
    if (!bijection_equal(before, after))
      throw DiagramError("rewrite step changed the adjusted matrix");
    Measure after_m = step_measure(d, s);
    if (!(after_m < before_m))
      throw DiagramError("normalization step failed to decrease the measure");
    trace.steps.push_back(
        {std::move(kind), std::move(detail), std::move(before),
         std::move(after), d, s});
  }
  return {std::move(d), s, std::move(trace)};
}

}  // namespace goeritz
