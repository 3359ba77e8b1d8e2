#include "surgery.hpp"

#include <algorithm>
#include <deque>
#include <optional>

namespace goeritz::detail {
namespace {

struct MinUF {
  std::map<ArcId, ArcId> up;
  ArcId find(ArcId a) {
    auto it = up.find(a);
    if (it == up.end()) {
      up[a] = a;
      return a;
    }
    if (it->second == a) return a;
    return it->second = find(it->second);
  }
  void unite(ArcId a, ArcId b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    up[b] = a;
  }
};

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

}  // namespace

Diagram SpliceSurgery::apply(int flank_variant) {
  const DiagramAnalysis& an = *an_;
  const Diagram& d = an.diagram();
  arc_name_.clear();
  new_circles_.clear();
  flank_variant_count_ = 1;

  // Strand classes joined by the splices: at a spliced crossing the arc in
  // slot 0 continues into the arc in slot 2, and slot 1 into slot 3.
  MinUF uf;
  for (const auto& [a, ends] : an.arcs()) uf.find(a);
  for (CrossingId c : spliced_) {
    const auto& s = d.crossings.at(c).slots;
    uf.unite(s[0], s[2]);
    uf.unite(s[1], s[3]);
  }
  for (const auto& [c, p] : smoothed_) {
    const auto& s = d.crossings.at(c).slots;
    uf.unite(s[p], s[(p + 1) % 4]);
    uf.unite(s[(p + 2) % 4], s[(p + 3) % 4]);
  }
  std::map<ArcId, std::vector<ArcId>> members;
  for (const auto& [a, ends] : an.arcs()) {
    arc_name_[a] = uf.find(a);
    members[uf.find(a)].push_back(a);
  }

  // Surviving end darts per class: two ends make an arc, none a circle.
  std::map<ArcId, std::vector<Dart>> class_ends;
  for (const auto& [cls, arcs] : members) {
    auto& ends = class_ends[cls];
    for (ArcId a : arcs)
      for (const Dart& dart : an.arc_ends(a))
        if (!removed(dart.c)) ends.push_back(dart);
  }

  Diagram raw;
  raw.circles = d.circles;
  auto remap_quad = [&](QuadKey q) {
    if (!q.circle && mirrored_.count(q.id)) q.q = (2 - q.q + 4) % 4;
    return q;
  };
  for (const auto& [c, cr] : d.crossings) {
    if (removed(c)) continue;
    Crossing nc;
    for (int j = 0; j < 4; ++j) {
      int src = mirrored_.count(c) ? 3 - j : j;
      nc.slots[j] = uf.find(cr.slots[src]);
    }
    raw.crossings[c] = nc;
  }

  // Closed classes become circles.  Each end dart of the chain names a pair
  // of old faces that flanked it there; the requested variant picks, per
  // circle, which pair the circle's sides are glued between.
  CircleId next_circle = d.circles.empty() ? 1 : *d.circles.rbegin() + 1;
  std::map<CircleId, std::vector<std::array<int, 2>>> flank_options;
  std::map<ArcId, CircleId> circle_of_class;
  for (const auto& [cls, ends] : class_ends) {
    if (ends.size() == 2) continue;
    if (!ends.empty())
      throw DiagramError("splice produced a dangling strand");
    std::vector<Dart> darts;
    for (ArcId a : members.at(cls))
      for (const Dart& dart : an.arc_ends(a)) darts.push_back(dart);
    if (darts.empty()) throw DiagramError("splice produced an empty strand class");
    std::sort(darts.begin(), darts.end());
    CircleId k = next_circle++;
    raw.circles.insert(k);
    circle_of_class[cls] = k;
    new_circles_.push_back(k);
    auto& opts = flank_options[k];
    for (const Dart& dt : darts) {
      std::array<int, 2> pr{an.face_of_dart(dt),
                            an.face_of_dart(DiagramAnalysis::sigma(dt))};
      bool dup = false;
      for (const auto& o : opts)
        dup = dup || o == pr || (o[0] == pr[1] && o[1] == pr[0]);
      if (!dup) opts.push_back(pr);
    }
  }

  // Mixed-radix decode of the variant over the per-circle option lists.
  long long total = 1;
  for (const auto& [k, opts] : flank_options)
    total = std::min<long long>(total * static_cast<long long>(opts.size()),
                                4096);
  flank_variant_count_ = static_cast<int>(total);
  if (flank_variant < 0 || flank_variant >= flank_variant_count_)
    throw DiagramError("flank variant out of range");
  std::map<CircleId, std::array<int, 2>> flanks;
  int fv = flank_variant;
  for (CircleId k : new_circles_) {
    const auto& opts = flank_options.at(k);
    flanks[k] = opts[static_cast<std::size_t>(fv) % opts.size()];
    fv /= static_cast<int>(opts.size());
  }

  // Face components: partner declarations plus each new circle's flanks.
  // Node f < num_faces() is an old face; node num_faces()+2*i+s is side s of
  // new_circles_[i].
  int nf = an.num_faces();
  IntUF faces(nf + 2 * static_cast<int>(new_circles_.size()));
  for (const auto& [f1, f2] : partners_) faces.unite(f1, f2);
  for (int i = 0; i < static_cast<int>(new_circles_.size()); ++i) {
    const auto& fl = flanks.at(new_circles_[i]);
    faces.unite(nf + 2 * i, fl[0]);
    faces.unite(nf + 2 * i + 1, fl[1]);
  }

  // Least surviving anchor key per face and per component.  Quadrants of
  // live crossings and sides of pre-existing circles both qualify; QuadKey
  // ordering prefers quadrants.  An anchor re-homes within its own face when
  // possible and only then falls back to the partnered component.
  std::map<int, QuadKey> best_in_face, best_key;
  for (int f = 0; f < nf; ++f) {
    int comp = faces.find(f);
    for (const QuadKey& q : an.face(f).quads) {
      if (!q.circle && removed(q.id)) continue;
      QuadKey cand = remap_quad(q);
      auto fit = best_in_face.find(f);
      if (fit == best_in_face.end() || cand < fit->second)
        best_in_face[f] = cand;
      auto it = best_key.find(comp);
      if (it == best_key.end() || cand < it->second) best_key[comp] = cand;
    }
  }
  std::map<int, std::vector<QuadKey>> comp_sides;
  for (int i = 0; i < static_cast<int>(new_circles_.size()); ++i)
    for (int s = 0; s < 2; ++s)
      comp_sides[faces.find(nf + 2 * i + s)].push_back(
          QuadKey{true, new_circles_[i], s});

  auto resolve = [&](QuadKey q) {
    if (q.circle) return q;
    if (!removed(q.id)) return remap_quad(q);
    int f = an.face_of_quad(q);
    auto fit = best_in_face.find(f);
    if (fit != best_in_face.end()) return fit->second;
    int comp = faces.find(f);
    auto it = best_key.find(comp);
    if (it != best_key.end()) return it->second;
    auto sides = comp_sides.find(comp);
    if (sides != comp_sides.end())
      return *std::min_element(sides->second.begin(), sides->second.end());
    throw DiagramError("cannot re-home an anchor after the splice");
  };

  for (const auto& [a, b] : d.merges)
    raw.merges.emplace_back(resolve(a), resolve(b));
  if (d.outer) {
    raw.outer = resolve(*d.outer);
  } else {
    // The implicit outer region must also survive the splice: anchor it
    // explicitly so rebuilding the result cannot re-root the sphere.
    std::optional<QuadKey> anchor;
    for (int f : an.region(an.outer_region()).faces)
      for (const QuadKey& q : an.face(f).quads)
        if (!anchor || q < *anchor) anchor = q;
    if (anchor) raw.outer = resolve(*anchor);
  }

  // Glue each new circle into its component's region; without a surviving
  // anchor the component's sides are chained to each other.
  for (const auto& [comp, sides] : comp_sides) {
    auto it = best_key.find(comp);
    if (it != best_key.end()) {
      for (const QuadKey& s : sides) raw.merges.emplace_back(s, it->second);
    } else {
      for (std::size_t i = 1; i < sides.size(); ++i)
        raw.merges.emplace_back(sides[i - 1], sides[i]);
    }
  }
  return raw;
}

NestedContent collect_nested(const DiagramAnalysis& an, int piece,
                             const std::set<int>& interior_faces) {
  NestedContent out;
  std::set<int> seen_regions, seen_pieces{piece};
  std::deque<std::pair<int, bool>> queue;  // (region, via interior face?)
  for (int f : an.piece(piece).faces) {
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
          out.circles.insert(static_cast<CircleId>(pi.key));
        else
          out.crossings.insert(pi.crossings.begin(), pi.crossings.end());
      }
      for (int f : pi.faces) {
        int r2 = an.region_of_face(f);
        if (seen_regions.insert(r2).second) queue.emplace_back(r2, inside);
      }
    }
  }
  return out;
}

QuadKey region_anchor(const DiagramAnalysis& an, int region, int skip_piece) {
  std::optional<QuadKey> best;
  for (int f : an.region(region).faces) {
    if (an.face(f).piece == skip_piece) continue;
    for (const QuadKey& q : an.face(f).quads)
      if (!best || q < *best) best = q;
  }
  if (!best) throw DiagramError("region has no anchor besides the given piece");
  return *best;
}

}  // namespace goeritz::detail
