#include "goeritz/diagram.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "skeleton.hpp"

namespace goeritz {
namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  // Keeps the smaller index as the class representative.
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

std::string boundary_label(const std::vector<ArcId>& arcs,
                           const std::vector<CircleId>& circles) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (ArcId a : arcs) {
    if (!first) os << ',';
    os << a;
    first = false;
  }
  for (CircleId c : circles) {
    if (!first) os << ',';
    os << 'o' << c;
    first = false;
  }
  os << '}';
  return os.str();
}

}  // namespace

namespace detail {

int Skeleton::face_of_quad(const QuadKey& q) const {
  if (q.circle) {
    auto it = piece_of_circle.find(q.id);
    if (it == piece_of_circle.end() || q.q < 0 || q.q > 1)
      throw DiagramError("invalid circle-side anchor o" + std::to_string(q.id) +
                         ":" + std::to_string(q.q));
    return pieces[it->second].faces[q.q];
  }
  auto it = face_of_dart.find({q.id, (q.q + 1) % 4});
  if (it == face_of_dart.end() || q.q < 0 || q.q > 3)
    throw DiagramError("invalid quadrant anchor at crossing " +
                       std::to_string(q.id));
  return it->second;
}

int Skeleton::piece_by_name(const std::string& name) const {
  for (int p = 0; p < static_cast<int>(pieces.size()); ++p)
    if (pieces[p].name == name) return p;
  throw DiagramError("unknown piece '" + name + "'");
}

int Skeleton::face_by_name(int piece, const std::string& name) const {
  for (int f : pieces.at(piece).faces)
    if (faces[f].name == name) return f;
  throw DiagramError("piece " + pieces.at(piece).name + " has no face '" +
                     name + "'");
}

Skeleton trace_skeleton(const Diagram& d) {
  Skeleton sk;
  for (const auto& [cid, cr] : d.crossings) {
    if (cid <= 0) throw DiagramError("crossing ids must be positive");
    for (int j = 0; j < 4; ++j)
      if (cr.slots[j] <= 0) throw DiagramError("arc ids must be positive");
  }
  for (CircleId oid : d.circles)
    if (oid <= 0) throw DiagramError("circle ids must be positive");
  if (d.crossings.empty() && d.circles.empty())
    throw DiagramError("diagram has no pieces");

  // Arc endpoints.
  std::map<ArcId, std::vector<Dart>> ends;
  for (const auto& [cid, cr] : d.crossings)
    for (int j = 0; j < 4; ++j) ends[cr.slots[j]].push_back({cid, j});
  for (auto& [a, v] : ends) {
    if (v.size() != 2)
      throw DiagramError("arc " + std::to_string(a) + " has " +
                         std::to_string(v.size()) + " endpoint(s); expected 2");
    std::sort(v.begin(), v.end());
    sk.arc_ends[a] = {v[0], v[1]};
  }

  // Pieces: connected components of crossings under shared arcs.
  std::vector<CrossingId> cids;
  std::map<CrossingId, int> cidx;
  for (const auto& [cid, cr] : d.crossings) {
    cidx[cid] = static_cast<int>(cids.size());
    cids.push_back(cid);
  }
  UnionFind uf(static_cast<int>(cids.size()));
  for (const auto& [a, e] : sk.arc_ends) uf.unite(cidx[e[0].c], cidx[e[1].c]);
  std::map<int, std::vector<CrossingId>> classes;
  for (int i = 0; i < static_cast<int>(cids.size()); ++i)
    classes[uf.find(i)].push_back(cids[i]);
  for (auto& [root, members] : classes) {
    PieceInfo p;
    p.is_circle = false;
    p.key = members.front();  // members are in id order; front is the min
    p.name = "x" + std::to_string(p.key);
    p.crossings = members;
    int pi = static_cast<int>(sk.pieces.size());
    for (CrossingId c : members) sk.piece_of_crossing[c] = pi;
    sk.pieces.push_back(std::move(p));
  }
  for (CircleId oid : d.circles) {
    PieceInfo p;
    p.is_circle = true;
    p.key = oid;
    p.name = "o" + std::to_string(oid);
    sk.piece_of_circle[oid] = static_cast<int>(sk.pieces.size());
    sk.pieces.push_back(std::move(p));
  }

  // Faces: phi-orbits of darts (phi = sigma after alpha), plus circle sides.
  auto arc_at = [&](Dart t) { return d.crossings.at(t.c).slots[t.slot]; };
  auto alpha = [&](Dart t) {
    const auto& e = sk.arc_ends.at(arc_at(t));
    return e[0] == t ? e[1] : e[0];
  };
  for (auto& piece : sk.pieces) {
    if (piece.is_circle) {
      for (int side = 0; side < 2; ++side) {
        FaceInfo f;
        f.piece = static_cast<int>(&piece - sk.pieces.data());
        f.quads = {QuadKey{true, piece.key, side}};
        f.circle = piece.key;
        f.name = "{o" + std::to_string(piece.key) + "}#" +
                 std::to_string(side + 1);
        f.parity = (side == 1);
        piece.faces.push_back(static_cast<int>(sk.faces.size()));
        sk.faces.push_back(std::move(f));
      }
      continue;
    }
    int pi = static_cast<int>(&piece - sk.pieces.data());
    for (CrossingId c : piece.crossings) {
      for (int j = 0; j < 4; ++j) {
        Dart start{c, j};
        if (sk.face_of_dart.count(start)) continue;
        FaceInfo f;
        f.piece = pi;
        int fi = static_cast<int>(sk.faces.size());
        Dart t = start;
        do {
          sk.face_of_dart[t] = fi;
          f.darts.push_back(t);
          f.quads.push_back(QuadKey{false, t.c, (t.slot + 3) % 4});
          f.arcs.push_back(arc_at(t));
          t = Dart{alpha(t).c, (alpha(t).slot + 1) % 4};
        } while (!(t == start));
        std::sort(f.quads.begin(), f.quads.end());
        std::sort(f.arcs.begin(), f.arcs.end());
        f.arcs.erase(std::unique(f.arcs.begin(), f.arcs.end()), f.arcs.end());
        piece.faces.push_back(fi);
        sk.faces.push_back(std::move(f));
      }
    }
    // Sphericity: V - E + F must be 2.
    long v = static_cast<long>(piece.crossings.size());
    long e = 2 * v;  // each crossing contributes 4 darts, 2 per arc
    long fcount = static_cast<long>(piece.faces.size());
    if (v - e + fcount != 2)
      throw DiagramError("piece " + piece.name +
                         " does not embed in the sphere (V-E+F = " +
                         std::to_string(v - e + fcount) + ")");
    // Face names, disambiguated within the piece.
    std::map<std::string, int> trace_count;
    for (int fi : piece.faces)
      trace_count[boundary_label(sk.faces[fi].arcs, {})]++;
    std::map<std::string, int> seen;
    for (int fi : piece.faces) {
      std::string t = boundary_label(sk.faces[fi].arcs, {});
      int k = ++seen[t];
      sk.faces[fi].name = trace_count[t] > 1 ? t + "#" + std::to_string(k) : t;
    }
    // In-piece checkerboard classes: faces across an arc alternate.
    std::deque<int> queue{piece.faces.front()};
    std::map<int, bool> color{{piece.faces.front(), false}};
    while (!queue.empty()) {
      int fi = queue.front();
      queue.pop_front();
      for (Dart t : sk.faces[fi].darts) {
        int other = sk.face_of_dart.at(alpha(t));
        bool want = !color[fi];
        auto it = color.find(other);
        if (it == color.end()) {
          color[other] = want;
          queue.push_back(other);
        } else if (it->second != want) {
          throw DiagramError("piece " + piece.name +
                             " is not checkerboard-colourable");
        }
      }
    }
    if (color.size() != piece.faces.size())
      throw DiagramError("piece " + piece.name + " has disconnected faces");
    for (int fi : piece.faces) sk.faces[fi].parity = color[fi];
  }
  return sk;
}

}  // namespace detail

DiagramAnalysis::DiagramAnalysis(const Diagram& d) : d_(&d) {
  detail::Skeleton sk = detail::trace_skeleton(d);
  arc_ends_ = std::move(sk.arc_ends);
  faces_ = std::move(sk.faces);
  face_of_dart_ = std::move(sk.face_of_dart);
  pieces_ = std::move(sk.pieces);
  piece_of_crossing_ = std::move(sk.piece_of_crossing);
  piece_of_circle_ = std::move(sk.piece_of_circle);

  // Regions: faces identified by the merge pairs.
  int nf = static_cast<int>(faces_.size());
  UnionFind uf(nf);
  for (const auto& [qa, qb] : d.merges)
    uf.unite(face_of_quad(qa), face_of_quad(qb));
  std::map<int, std::vector<int>> classes;
  for (int f = 0; f < nf; ++f) classes[uf.find(f)].push_back(f);

  struct RawRegion {
    std::vector<std::pair<int, std::int32_t>> key;  // (0,arc) then (1,circle)
    int min_face;
    RegionInfo info;
  };
  std::vector<RawRegion> raw;
  for (auto& [root, members] : classes) {
    RawRegion r;
    r.min_face = members.front();
    r.info.faces = members;
    std::set<ArcId> arcs;
    std::set<CircleId> circles;
    for (int f : members) {
      arcs.insert(faces_[f].arcs.begin(), faces_[f].arcs.end());
      if (faces_[f].circle) circles.insert(*faces_[f].circle);
    }
    r.info.arcs.assign(arcs.begin(), arcs.end());
    r.info.circles.assign(circles.begin(), circles.end());
    for (ArcId a : r.info.arcs) r.key.emplace_back(0, a);
    for (CircleId c : r.info.circles) r.key.emplace_back(1, c);
    raw.push_back(std::move(r));
  }
  std::sort(raw.begin(), raw.end(), [](const RawRegion& a, const RawRegion& b) {
    return std::tie(a.key, a.min_face) < std::tie(b.key, b.min_face);
  });
  region_of_face_.assign(nf, -1);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    bool ambiguous = (i > 0 && raw[i - 1].key == raw[i].key) ||
                     (i + 1 < raw.size() && raw[i + 1].key == raw[i].key);
    std::string label = boundary_label(raw[i].info.arcs, raw[i].info.circles);
    if (ambiguous) {
      int k = 1;
      for (std::size_t j = 0; j < i; ++j)
        if (raw[j].key == raw[i].key) ++k;
      label += "#" + std::to_string(k);
    }
    raw[i].info.label = label;
    for (int f : raw[i].info.faces)
      region_of_face_[f] = static_cast<int>(i);
    region_index_by_label_[label] = static_cast<int>(i);
    regions_.push_back(std::move(raw[i].info));
  }

  // The piece/region incidence graph (one edge per face) must be a tree.
  int np = static_cast<int>(pieces_.size());
  int nr = static_cast<int>(regions_.size());
  if (nf != np + nr - 1)
    throw DiagramError("nesting merges do not form a tree (" +
                       std::to_string(nf) + " faces, " + std::to_string(np) +
                       " pieces, " + std::to_string(nr) + " regions)");

  // Outer region.
  if (d.outer)
    outer_region_ = region_of_face_[face_of_quad(*d.outer)];
  else
    outer_region_ = 0;  // least canonical label

  // Colors, nesting parents: breadth-first over the piece/region tree.
  region_color_.assign(nr, false);
  parent_region_.assign(np, -1);
  outward_face_.assign(np, -1);
  region_parent_piece_.assign(nr, -1);
  std::vector<char> region_seen(nr, 0), piece_seen(np, 0);
  std::deque<int> queue{outer_region_};
  region_seen[outer_region_] = 1;
  while (!queue.empty()) {
    int r = queue.front();
    queue.pop_front();
    for (int f : regions_[r].faces) {
      int p = faces_[f].piece;
      if (piece_seen[p]) continue;
      piece_seen[p] = 1;
      parent_region_[p] = r;
      outward_face_[p] = f;
      bool flip = region_color_[r] ^ faces_[f].parity;
      for (int g : pieces_[p].faces) {
        int r2 = region_of_face_[g];
        bool col = flip ^ faces_[g].parity;
        if (!region_seen[r2]) {
          region_seen[r2] = 1;
          region_color_[r2] = col;
          region_parent_piece_[r2] = p;
          queue.push_back(r2);
        } else if (region_color_[r2] != col) {
          throw DiagramError("inconsistent checkerboard colouring");
        }
      }
    }
  }
  for (char s : region_seen)
    if (!s) throw DiagramError("nesting structure is disconnected");
  for (char s : piece_seen)
    if (!s) throw DiagramError("nesting structure is disconnected");

  // Link components: strands through crossings, plus crossing-free circles.
  std::vector<ArcId> arcs;
  std::map<ArcId, int> aidx;
  for (const auto& [a, e] : arc_ends_) {
    aidx[a] = static_cast<int>(arcs.size());
    arcs.push_back(a);
  }
  UnionFind cuf(static_cast<int>(arcs.size()));
  for (const auto& [cid, cr] : d.crossings) {
    cuf.unite(aidx[cr.slots[0]], aidx[cr.slots[2]]);
    cuf.unite(aidx[cr.slots[1]], aidx[cr.slots[3]]);
  }
  std::map<int, Component> arc_comps;
  for (int i = 0; i < static_cast<int>(arcs.size()); ++i)
    arc_comps[cuf.find(i)].arcs.push_back(arcs[i]);
  for (auto& [root, comp] : arc_comps) {
    comp.name = std::to_string(comp.arcs.front());
    int ci = static_cast<int>(components_.size());
    for (ArcId a : comp.arcs) component_of_arc_[a] = ci;
    components_.push_back(std::move(comp));
  }
  for (CircleId oid : d.circles) {
    Component comp;
    comp.circles = {oid};
    comp.name = "o" + std::to_string(oid);
    component_of_circle_[oid] = static_cast<int>(components_.size());
    components_.push_back(std::move(comp));
  }
  for (const auto& [cid, cr] : d.crossings)
    crossing_components_[cid] = {component_of_arc_.at(cr.slots[0]),
                                 component_of_arc_.at(cr.slots[1])};
}

Dart DiagramAnalysis::alpha(Dart t) const {
  const auto& e = arc_ends(arc_at(t));
  return e[0] == t ? e[1] : e[0];
}

ArcId DiagramAnalysis::arc_at(Dart t) const {
  auto it = d_->crossings.find(t.c);
  if (it == d_->crossings.end() || t.slot < 0 || t.slot > 3)
    throw DiagramError("no such dart");
  return it->second.slots[t.slot];
}

const std::array<Dart, 2>& DiagramAnalysis::arc_ends(ArcId a) const {
  auto it = arc_ends_.find(a);
  if (it == arc_ends_.end())
    throw DiagramError("unknown arc " + std::to_string(a));
  return it->second;
}

int DiagramAnalysis::face_of_dart(Dart t) const {
  auto it = face_of_dart_.find(t);
  if (it == face_of_dart_.end()) throw DiagramError("no such dart");
  return it->second;
}

int DiagramAnalysis::face_of_quad(const QuadKey& q) const {
  if (q.circle) {
    auto it = piece_of_circle_.find(q.id);
    if (it == piece_of_circle_.end() || q.q < 0 || q.q > 1)
      throw DiagramError("invalid circle-side anchor o" + std::to_string(q.id) +
                         ":" + std::to_string(q.q));
    return pieces_[it->second].faces[q.q];
  }
  if (q.q < 0 || q.q > 3)
    throw DiagramError("invalid quadrant anchor at crossing " +
                       std::to_string(q.id));
  return face_of_dart({q.id, (q.q + 1) % 4});
}

int DiagramAnalysis::piece_by_name(const std::string& name) const {
  for (int p = 0; p < num_pieces(); ++p)
    if (pieces_[p].name == name) return p;
  throw DiagramError("unknown piece '" + name + "'");
}

int DiagramAnalysis::region_by_label(const std::string& label) const {
  auto it = region_index_by_label_.find(label);
  if (it == region_index_by_label_.end())
    throw DiagramError("unknown region '" + label + "'");
  return it->second;
}

bool DiagramAnalysis::region_shaded(const Shading& s, int r) const {
  bool same_class_as_outer = !region_color_.at(r);
  return same_class_as_outer ? s.outer_shaded : !s.outer_shaded;
}

std::vector<int> DiagramAnalysis::regions_of_color(const Shading& s,
                                                   bool shaded) const {
  std::vector<int> out;
  for (int r = 0; r < num_regions(); ++r)
    if (region_shaded(s, r) == shaded) out.push_back(r);
  return out;
}

int DiagramAnalysis::goeritz_index(const Shading& s, CrossingId c) const {
  return region_shaded(s, region_of_quad(QuadKey{false, c, 0})) ? -1 : +1;
}

std::pair<int, int> DiagramAnalysis::unshaded_corner_regions(
    const Shading& s, CrossingId c) const {
  int q0 = goeritz_index(s, c) > 0 ? 0 : 1;
  return {region_of_quad(QuadKey{false, c, q0}),
          region_of_quad(QuadKey{false, c, q0 + 2})};
}

std::pair<int, int> DiagramAnalysis::shaded_corner_regions(const Shading& s,
                                                           CrossingId c) const {
  int q0 = goeritz_index(s, c) > 0 ? 1 : 0;
  return {region_of_quad(QuadKey{false, c, q0}),
          region_of_quad(QuadKey{false, c, q0 + 2})};
}

int DiagramAnalysis::component_of_arc(ArcId a) const {
  auto it = component_of_arc_.find(a);
  if (it == component_of_arc_.end())
    throw DiagramError("unknown arc " + std::to_string(a));
  return it->second;
}

int DiagramAnalysis::component_of_circle(CircleId c) const {
  auto it = component_of_circle_.find(c);
  if (it == component_of_circle_.end())
    throw DiagramError("unknown circle o" + std::to_string(c));
  return it->second;
}

int DiagramAnalysis::component_by_name(const std::string& name) const {
  for (int i = 0; i < mu(); ++i)
    if (components_[i].name == name) return i;
  throw DiagramError("unknown component '" + name + "'");
}

std::vector<std::vector<int>> DiagramAnalysis::detached_sublinks() const {
  UnionFind uf(mu());
  for (const auto& [cid, pr] : crossing_components_)
    uf.unite(pr.first, pr.second);
  std::map<int, std::vector<int>> classes;
  for (int i = 0; i < mu(); ++i) classes[uf.find(i)].push_back(i);
  std::vector<std::vector<int>> out;
  for (auto& [root, members] : classes) out.push_back(members);
  return out;
}

void canonicalize_slots(Diagram& d,
                        const std::map<CrossingId, int>* under_parity,
                        std::map<CrossingId, int>* rotation_out) {
  std::map<CrossingId, int> rot;
  for (auto& [cid, cr] : d.crossings) {
    int base = 0;
    if (under_parity) {
      auto it = under_parity->find(cid);
      if (it != under_parity->end()) base = it->second & 1;
    }
    auto rotated = [&](int r) {
      std::array<ArcId, 4> a{};
      for (int k = 0; k < 4; ++k) a[k] = cr.slots[(k + r) % 4];
      return a;
    };
    std::array<ArcId, 4> a0 = rotated(base), a1 = rotated(base + 2);
    int r = (a1 < a0) ? base + 2 : base;
    cr.slots = (a1 < a0) ? a1 : a0;
    rot[cid] = r % 4;
  }
  auto remap = [&](QuadKey& q) {
    if (q.circle) return;
    auto it = rot.find(q.id);
    if (it != rot.end()) q.q = (q.q - it->second + 8) % 4;
  };
  for (auto& m : d.merges) {
    remap(m.first);
    remap(m.second);
  }
  if (d.outer) remap(*d.outer);
  if (rotation_out) *rotation_out = std::move(rot);
}

SetOuterResult set_outer_face(const Diagram& d, const std::string& region_label) {
  DiagramAnalysis an(d);
  int r = an.region_by_label(region_label);
  QuadKey anchor = an.face(an.region(r).faces.front()).quads.front();
  for (int f : an.region(r).faces)
    anchor = std::min(anchor, an.face(f).quads.front());
  SetOuterResult res;
  res.diagram = d;
  res.diagram.outer = anchor;
  for (int i = 0; i < an.num_regions(); ++i) {
    const std::string& label = an.region(i).label;
    res.forward[label] = label;
    res.backward[label] = label;
  }
  return res;
}

std::vector<std::string> region_labels(const Diagram& d) {
  DiagramAnalysis an(d);
  std::vector<std::string> out;
  for (int r = 0; r < an.num_regions(); ++r) out.push_back(an.region(r).label);
  return out;
}

std::vector<std::string> detached_sublink_names(const Diagram& d) {
  DiagramAnalysis an(d);
  std::vector<std::string> out;
  for (const auto& cls : an.detached_sublinks()) {
    std::string s;
    for (int ci : cls) {
      if (!s.empty()) s += "+";
      s += an.components()[ci].name;
    }
    out.push_back(std::move(s));
  }
  return out;
}

int component_count(const Diagram& d) { return DiagramAnalysis(d).mu(); }

}  // namespace goeritz
