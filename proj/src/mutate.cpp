#include "goeritz/mutate.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <sstream>

namespace goeritz {

namespace {

// Corner permutation of each mutation kind: position p receives the strand
// end that sat at position kPerm[kind-1][p].  kind 1 flips N<->S (NE<->SE,
// NW<->SW), kind 2 flips W<->E (NE<->NW, SE<->SW), kind 3 rotates in the
// plane (NE<->SW, NW<->SE).
constexpr std::array<std::array<int, 4>, 3> kPerm{{
    {3, 2, 1, 0},
    {1, 0, 3, 2},
    {2, 3, 0, 1},
}};

struct UnionFind {
  std::map<CrossingId, CrossingId> parent;
  CrossingId find(CrossingId x) {
    auto it = parent.find(x);
    if (it == parent.end()) {
      parent[x] = x;
      return x;
    }
    while (it->second != x) {
      x = it->second;
      it = parent.find(x);
    }
    return x;
  }
  void unite(CrossingId a, CrossingId b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

/// Next boundary dart after `cur` when walking around the side of the cut
/// that contains cur's crossing.  cur must be an end of a cut arc.
Dart next_cut(const DiagramAnalysis& an, const std::set<ArcId>& cut,
              Dart cur) {
  Dart e = an.sigma(cur);
  while (!cut.count(an.arc_at(e))) e = an.sigma(an.alpha(e));
  return e;
}

/// Walks the boundary on the side containing start; returns the four cut
/// darts in walk order when they form a single cycle through all four arcs.
std::optional<std::array<Dart, 4>> boundary_cycle(const DiagramAnalysis& an,
                                                  const std::set<ArcId>& cut,
                                                  Dart start) {
  std::array<Dart, 4> seq{};
  seq[0] = start;
  std::set<ArcId> seen{an.arc_at(start)};
  Dart cur = start;
  for (int i = 1; i <= 4; ++i) {
    Dart nxt = next_cut(an, cut, cur);
    if (i == 4) {
      if (nxt == start && seen.size() == 4) return seq;
      return std::nullopt;
    }
    if (!seen.insert(an.arc_at(nxt)).second) return std::nullopt;
    seq[i] = nxt;
    cur = nxt;
  }
  return std::nullopt;
}

/// True when `walk` visits the corner arcs in the same cyclic order.
bool cyclic_match(const DiagramAnalysis& an, const std::array<Dart, 4>& walk,
                  const std::array<ArcId, 4>& corners) {
  for (int r = 0; r < 4; ++r) {
    bool ok = true;
    for (int i = 0; i < 4; ++i)
      if (an.arc_at(walk[(r + i) % 4]) != corners[i]) {
        ok = false;
        break;
      }
    if (ok) return true;
  }
  return false;
}

std::string corners_text(const TangleSpec& t) {
  std::ostringstream os;
  os << t.corners[0] << "," << t.corners[1] << "," << t.corners[2] << ","
     << t.corners[3];
  return os.str();
}

/// Everything mutate and mutate_oriented share: the rewired diagram before
/// slot canonicalization, plus the dart bookkeeping needed to transport
/// orientations.
struct MutationBuild {
  Diagram raw;
  std::set<CrossingId> inside_all;   // tangle crossings plus nested pieces
  std::set<CrossingId> mirrored;     // subset with slot map j -> 3-j applied
  std::set<CircleId> inside_circles; // circle pieces nested in the tangle
  std::array<Dart, 4> new_inner{};   // inner end of corners[p] after rewiring
};

MutationBuild build_mutation(const Diagram& d, const DiagramAnalysis& an,
                             const TangleInfo& info, const TangleSpec& t,
                             int kind) {
  MutationBuild b;
  b.raw = d;
  b.inside_all = info.inside;

  // Classify every other piece by the face of the tangle's piece that its
  // path in the nesting tree crosses: pieces reached through a face interior
  // to the tangle are inside the disk and move with it.
  int tangle_piece = an.piece_of_crossing(*info.inside.begin());
  std::set<int> interior_faces;
  for (int f : an.piece(tangle_piece).faces) {
    bool inside = true;
    for (const Dart& dart : an.face(f).darts)
      if (!info.inside.count(dart.c)) {
        inside = false;
        break;
      }
    if (inside) interior_faces.insert(f);
  }
  std::set<int> seen_regions, seen_pieces{tangle_piece};
  std::deque<std::pair<int, bool>> queue;  // (region, via interior face?)
  for (int f : an.piece(tangle_piece).faces) {
    int r = an.region_of_face(f);
    if (seen_regions.insert(r).second)
      queue.emplace_back(r, interior_faces.count(f) > 0);
  }
  while (!queue.empty()) {
    auto [r, inside] = queue.front();
    queue.pop_front();
    for (int p = 0; p < an.num_pieces(); ++p) {
      if (seen_pieces.count(p)) continue;
      bool touches = false;
      for (int f : an.piece(p).faces)
        if (an.region_of_face(f) == r) {
          touches = true;
          break;
        }
      if (!touches) continue;
      seen_pieces.insert(p);
      const PieceInfo& pi = an.piece(p);
      if (inside) {
        if (pi.is_circle)
          b.inside_circles.insert(static_cast<CircleId>(pi.key));
        else
          b.inside_all.insert(pi.crossings.begin(), pi.crossings.end());
      }
      for (int f : pi.faces) {
        int r2 = an.region_of_face(f);
        if (seen_regions.insert(r2).second) queue.emplace_back(r2, inside);
      }
    }
  }

  bool mirror = kind != 3;
  if (mirror) b.mirrored = b.inside_all;

  // Anchors on inside crossings: quads on a side face denote a region that
  // stays outside the disk, so re-anchor them to an outside quad of the same
  // face (the rotation carries the inside stretch of a side face to the
  // opposite side); quads on interior faces move with the tangle.
  std::set<int> side(info.side_faces.begin(), info.side_faces.end());
  auto fix_anchor = [&](QuadKey& q) {
    if (q.circle || !b.inside_all.count(q.id)) return;
    int f = an.face_of_quad(q);
    if (side.count(f)) {
      std::optional<QuadKey> best;
      for (const QuadKey& cand : an.face(f).quads)
        if (!cand.circle && !b.inside_all.count(cand.id))
          if (!best || cand < *best) best = cand;
      if (!best)
        throw DiagramError("cannot re-anchor a nesting merge outside the tangle");
      q = *best;
    } else if (mirror) {
      q.q = (2 - q.q + 4) % 4;
    }
  };
  for (auto& [a, bq] : b.raw.merges) {
    fix_anchor(a);
    fix_anchor(bq);
  }
  if (b.raw.outer) fix_anchor(*b.raw.outer);
  for (CrossingId c : b.mirrored) {
    std::array<ArcId, 4> old = b.raw.crossings.at(c).slots;
    for (int j = 0; j < 4; ++j) b.raw.crossings.at(c).slots[j] = old[3 - j];
  }

  const std::array<int, 4>& perm = kPerm[kind - 1];
  for (int p = 0; p < 4; ++p) {
    Dart src = info.inner[perm[p]];
    Dart dst = mirror ? Dart{src.c, 3 - src.slot} : src;
    b.raw.crossings.at(dst.c).slots[dst.slot] = t.corners[p];
    b.new_inner[p] = dst;
  }
  return b;
}

}  // namespace

TangleInfo resolve_tangle(const DiagramAnalysis& an, const TangleSpec& t) {
  std::set<ArcId> cut(t.corners.begin(), t.corners.end());
  if (cut.size() != 4)
    throw PreconditionError("tangle corners " + corners_text(t) +
                            " are not four distinct arcs");
  int piece = -1;
  for (ArcId a : cut) {
    const std::array<Dart, 2>& ends = an.arc_ends(a);
    if (ends[0].c == ends[1].c)
      throw PreconditionError("tangle corner arc " + std::to_string(a) +
                              " is a loop at one crossing");
    for (const Dart& e : ends) {
      int p = an.piece_of_crossing(e.c);
      if (piece == -1) piece = p;
      if (p != piece)
        throw PreconditionError("tangle corners " + corners_text(t) +
                                " span more than one piece");
    }
  }

  // Connectivity of the piece once the corner arcs are removed.
  UnionFind uf;
  for (CrossingId c : an.piece(piece).crossings) uf.find(c);
  for (const auto& [a, ends] : an.arcs())
    if (!cut.count(a) && an.piece_of_crossing(ends[0].c) == piece)
      uf.unite(ends[0].c, ends[1].c);

  const std::array<Dart, 2>& first = an.arc_ends(t.corners[0]);
  for (int side = 0; side < 2; ++side) {
    CrossingId rep = uf.find(first[side].c);
    bool is_cut = true;
    for (ArcId a : cut) {
      const std::array<Dart, 2>& ends = an.arc_ends(a);
      if ((uf.find(ends[0].c) == rep) == (uf.find(ends[1].c) == rep)) {
        is_cut = false;
        break;
      }
    }
    if (!is_cut) continue;
    std::optional<std::array<Dart, 4>> walk =
        boundary_cycle(an, cut, first[side]);
    if (!walk) continue;

    TangleInfo info;
    if (cyclic_match(an, *walk, t.corners)) {
      // The walked side is the inside of the disk.
      for (CrossingId c : an.piece(piece).crossings)
        if (uf.find(c) == rep) info.inside.insert(c);
      std::map<ArcId, Dart> on_side;
      for (const Dart& w : *walk) on_side[an.arc_at(w)] = w;
      for (int p = 0; p < 4; ++p) {
        info.inner[p] = on_side.at(t.corners[p]);
        info.side_faces[p] = an.face_of_dart(an.sigma(info.inner[p]));
      }
      return info;
    }
    std::array<ArcId, 4> reversed{t.corners[0], t.corners[3], t.corners[2],
                                  t.corners[1]};
    if (cyclic_match(an, *walk, reversed)) {
      // The walked side is the outside; everything else is the inside
      // (possibly several components hanging into the disk).
      for (CrossingId c : an.piece(piece).crossings)
        if (uf.find(c) != rep) info.inside.insert(c);
      std::map<ArcId, Dart> on_side;
      for (const Dart& w : *walk) on_side[an.arc_at(w)] = w;
      for (int p = 0; p < 4; ++p) {
        const std::array<Dart, 2>& ends = an.arc_ends(t.corners[p]);
        Dart outer = on_side.at(t.corners[p]);
        info.inner[p] = ends[0] == outer ? ends[1] : ends[0];
        // The outside walk step leaving corner p traverses the side face
        // between corners p-1 and p.
        info.side_faces[(p + 3) % 4] = an.face_of_dart(an.sigma(outer));
      }
      return info;
    }
  }
  throw PreconditionError("tangle corners " + corners_text(t) +
                          " do not cut off a disk in this cyclic order");
}

std::vector<TangleSpec> find_tangles(const Diagram& d, int max_size) {
  if (max_size < 1)
    throw PreconditionError("tangle size bound must be positive");
  DiagramAnalysis an(d);
  std::map<CrossingId, std::set<CrossingId>> adj;
  for (const auto& [c, cr] : d.crossings) adj[c];
  for (const auto& [a, ends] : an.arcs())
    if (ends[0].c != ends[1].c) {
      adj[ends[0].c].insert(ends[1].c);
      adj[ends[1].c].insert(ends[0].c);
    }

  std::set<std::set<CrossingId>> seen;
  std::deque<std::set<CrossingId>> queue;
  for (const auto& [c, nbrs] : adj) {
    std::set<CrossingId> seed{c};
    if (seen.insert(seed).second) queue.push_back(seed);
  }
  std::set<std::array<ArcId, 4>> emitted;
  std::vector<TangleSpec> out;
  while (!queue.empty()) {
    std::set<CrossingId> s = queue.front();
    queue.pop_front();
    std::vector<ArcId> cut_list;
    for (const auto& [a, ends] : an.arcs()) {
      int k = (s.count(ends[0].c) ? 1 : 0) + (s.count(ends[1].c) ? 1 : 0);
      if (k == 1) cut_list.push_back(a);
    }
    if (cut_list.size() == 4) {
      std::set<ArcId> cut(cut_list.begin(), cut_list.end());
      ArcId least = *std::min_element(cut.begin(), cut.end());
      const std::array<Dart, 2>& ends = an.arc_ends(least);
      Dart start = s.count(ends[0].c) ? ends[0] : ends[1];
      std::optional<std::array<Dart, 4>> walk = boundary_cycle(an, cut, start);
      if (walk) {
        TangleSpec spec;
        for (int i = 0; i < 4; ++i) spec.corners[i] = an.arc_at((*walk)[i]);
        if (emitted.insert(spec.corners).second) out.push_back(spec);
      }
    }
    if (static_cast<int>(s.size()) < max_size)
      for (CrossingId c : s)
        for (CrossingId n : adj[c])
          if (!s.count(n)) {
            std::set<CrossingId> grown = s;
            grown.insert(n);
            if (seen.insert(grown).second) queue.push_back(grown);
          }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Diagram mutate(const Diagram& d, const TangleSpec& t, int kind) {
  if (kind < 1 || kind > 3)
    throw PreconditionError("mutation kind must be 1, 2 or 3");
  DiagramAnalysis an(d);
  TangleInfo info = resolve_tangle(an, t);
  MutationBuild b = build_mutation(d, an, info, t, kind);
  canonicalize_slots(b.raw);
  DiagramAnalysis validate(b.raw);
  return b.raw;
}

OrientedMutation mutate_oriented(const Diagram& d, const Orientation& o,
                                 const TangleSpec& t, int kind) {
  if (kind < 1 || kind > 3)
    throw PreconditionError("mutation kind must be 1, 2 or 3");
  DiagramAnalysis an(d);
  TangleInfo info = resolve_tangle(an, t);
  std::map<ArcId, Dart> heads = arc_heads(an, o);
  MutationBuild b = build_mutation(d, an, info, t, kind);

  // The corner strands land on positions of matching direction, or all four
  // clash at once; in the latter case every in-tangle orientation reverses.
  const std::array<int, 4>& perm = kPerm[kind - 1];
  std::array<bool, 4> points_in{};
  for (int p = 0; p < 4; ++p)
    points_in[p] = heads.at(t.corners[p]) == info.inner[p];
  int agree = 0;
  for (int p = 0; p < 4; ++p)
    if (points_in[perm[p]] == points_in[p]) ++agree;
  if (agree != 0 && agree != 4)
    throw DiagramError("mutation endpoints cannot be oriented consistently");
  bool reverse = agree == 0;

  auto moved_dart = [&](Dart x) {
    return b.mirrored.count(x.c) ? Dart{x.c, 3 - x.slot} : x;
  };
  std::set<ArcId> cut(t.corners.begin(), t.corners.end());
  std::map<ArcId, Dart> desired;  // head of every arc, in raw coordinates
  for (const auto& [a, h] : heads) {
    if (cut.count(a)) continue;
    if (!b.inside_all.count(h.c)) {
      desired[a] = h;
      continue;
    }
    Dart want = reverse ? an.alpha(h) : h;
    desired[a] = moved_dart(want);
  }
  for (int p = 0; p < 4; ++p) {
    ArcId a = t.corners[p];
    desired[a] = points_in[p] ? b.new_inner[p] : heads.at(a);
  }

  std::map<CrossingId, int> rot;
  canonicalize_slots(b.raw, nullptr, &rot);
  for (auto& [a, h] : desired) h.slot = (h.slot - rot.at(h.c) + 8) % 4;

  DiagramAnalysis an2(b.raw);
  Orientation out;
  for (const DiagramAnalysis::Component& comp : an2.components()) {
    if (comp.arcs.empty()) {
      bool was = o.reversed.count(comp.name) > 0;
      bool flip = reverse && b.inside_circles.count(comp.circles.front()) > 0;
      if (was != flip) out.reversed.insert(comp.name);
      continue;
    }
    ArcId a0 = comp.arcs.front();
    const std::array<Dart, 2>& ends = an2.arc_ends(a0);
    if (desired.at(a0) == ends[0]) out.reversed.insert(comp.name);
  }
  std::map<ArcId, Dart> heads2 = arc_heads(an2, out);
  for (const auto& [a, h] : desired)
    if (!(heads2.at(a) == h))
      throw DiagramError("mutation produced inconsistent orientations");
  return {b.raw, out, reverse};
}

Orientation reverse_detached(const Diagram& d, const Orientation& o,
                             const std::vector<std::string>& components) {
  DiagramAnalysis an(d);
  std::set<std::string> names(components.begin(), components.end());
  for (const std::string& n : names) an.component_by_name(n);
  for (const std::vector<int>& cls : an.detached_sublinks()) {
    int hit = 0;
    for (int idx : cls)
      if (names.count(an.components()[idx].name)) ++hit;
    if (hit != 0 && hit != static_cast<int>(cls.size())) {
      std::vector<std::string> members;
      for (int idx : cls) members.push_back(an.components()[idx].name);
      std::string joined;
      for (const std::string& m : members)
        joined += (joined.empty() ? "" : "+") + m;
      throw PreconditionError(
          "components do not form a detached sublink: class " + joined +
          " is only partly selected");
    }
  }
  return reverse_components(an, o,
                            std::vector<std::string>(names.begin(), names.end()));
}

}  // namespace goeritz
