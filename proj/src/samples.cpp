#include "goeritz/samples.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "surgery.hpp"

namespace goeritz {
namespace {

int pick(std::mt19937_64& rng, int n) { return static_cast<int>(rng() % n); }

CrossingId max_crossing(const Diagram& d) {
  return d.crossings.empty() ? 0 : d.crossings.rbegin()->first;
}

CircleId max_circle(const Diagram& d) {
  return d.circles.empty() ? 0 : *d.circles.rbegin();
}

ArcId max_arc(const Diagram& d) {
  ArcId m = 0;
  for (const auto& [c, cr] : d.crossings)
    for (ArcId a : cr.slots) m = std::max(m, a);
  return m;
}

/// Twists a small loop into one arc (a first Reidemeister kink).  Always
/// planar, so no retry is needed.
Diagram with_kink(const Diagram& d, const DiagramAnalysis& an,
                  std::mt19937_64& rng) {
  std::vector<ArcId> arcs;
  for (const auto& [a, ends] : an.arcs()) arcs.push_back(a);
  ArcId a = arcs[pick(rng, static_cast<int>(arcs.size()))];
  Dart cut = an.arc_ends(a)[pick(rng, 2)];

  Diagram out = d;
  CrossingId c = max_crossing(d) + 1;
  ArcId n = max_arc(d) + 1, loop = max_arc(d) + 2;
  out.crossings.at(cut.c).slots[cut.slot] = n;
  static const int kPattern[8][4] = {
      // 0 = through-in, 1 = through-out, 2 = loop
      {0, 2, 2, 1}, {1, 2, 2, 0}, {0, 1, 2, 2}, {1, 0, 2, 2},
      {2, 0, 1, 2}, {2, 1, 0, 2}, {2, 2, 0, 1}, {2, 2, 1, 0}};
  const int* pat = kPattern[pick(rng, 8)];
  Crossing nc;
  for (int j = 0; j < 4; ++j)
    nc.slots[j] = pat[j] == 0 ? a : (pat[j] == 1 ? n : loop);
  out.crossings[c] = nc;
  return out;
}

/// Clasps two strands bounding a common face with two new crossings.  The
/// relative orientation of the strands along the face is not known up front,
/// so both attachments are tried and the one producing a valid diagram wins.
Diagram with_clasp(const Diagram& d, const DiagramAnalysis& an,
                   std::mt19937_64& rng) {
  std::vector<int> candidates;
  for (int f = 0; f < an.num_faces(); ++f)
    if (an.face(f).arcs.size() >= 2) candidates.push_back(f);
  if (candidates.empty()) return d;
  const FaceInfo& face = an.face(candidates[pick(rng, static_cast<int>(candidates.size()))]);
  int ia = pick(rng, static_cast<int>(face.arcs.size()));
  int ib = pick(rng, static_cast<int>(face.arcs.size() - 1));
  if (ib >= ia) ++ib;
  ArcId a = face.arcs[ia], b = face.arcs[ib];
  bool same_sign = pick(rng, 2) == 0;
  int first_swap = pick(rng, 2);

  for (int attempt = 0; attempt < 2; ++attempt) {
    bool swap_b = (attempt ^ first_swap) != 0;
    Diagram out = d;
    CrossingId c1 = max_crossing(d) + 1, c2 = max_crossing(d) + 2;
    ArcId na = max_arc(d) + 1, nb = max_arc(d) + 2;
    ArcId m1 = max_arc(d) + 3, m2 = max_arc(d) + 4;
    Dart a2 = an.arc_ends(a)[1];
    Dart b2 = an.arc_ends(b)[swap_b ? 0 : 1];
    out.crossings.at(a2.c).slots[a2.slot] = na;
    out.crossings.at(b2.c).slots[b2.slot] = nb;
    out.crossings[c1] = Crossing{{a, m2, m1, b}};
    out.crossings[c2] = same_sign ? Crossing{{na, nb, m1, m2}}
                                  : Crossing{{m2, na, nb, m1}};
    try {
      DiagramAnalysis check(out);
      return out;
    } catch (const DiagramError&) {
    }
  }
  return d;
}

/// Drops a fresh crossing-free circle into a random face.
Diagram with_circle(const Diagram& d, const DiagramAnalysis& an,
                    std::mt19937_64& rng) {
  Diagram out = d;
  CircleId k = max_circle(d) + 1;
  const FaceInfo& face = an.face(pick(rng, an.num_faces()));
  QuadKey anchor = *std::min_element(face.quads.begin(), face.quads.end());
  out.circles.insert(k);
  out.merges.emplace_back(QuadKey{true, k, 0}, anchor);
  return out;
}

/// Grafts an independently grown diagram into a random face of the host.
Diagram with_nested(const Diagram& d, const DiagramAnalysis& an,
                    std::mt19937_64& rng, int sub_ops) {
  Diagram sub = random_diagram(rng, sub_ops);
  DiagramAnalysis sub_an(sub);
  QuadKey sub_anchor =
      detail::region_anchor(sub_an, sub_an.outer_region());

  CrossingId coff = max_crossing(d);
  CircleId koff = max_circle(d);
  ArcId aoff = max_arc(d);
  auto shift = [&](QuadKey q) {
    q.id += q.circle ? koff : coff;
    return q;
  };
  Diagram out = d;
  for (const auto& [c, cr] : sub.crossings) {
    Crossing nc;
    for (int j = 0; j < 4; ++j) nc.slots[j] = cr.slots[j] + aoff;
    out.crossings[c + coff] = nc;
  }
  for (CircleId k : sub.circles) out.circles.insert(k + koff);
  for (const auto& [x, y] : sub.merges)
    out.merges.emplace_back(shift(x), shift(y));

  const FaceInfo& face = an.face(pick(rng, an.num_faces()));
  QuadKey host_anchor = *std::min_element(face.quads.begin(), face.quads.end());
  out.merges.emplace_back(shift(sub_anchor), host_anchor);
  return out;
}

}  // namespace

std::uint64_t sample_seed() {
  if (const char* env = std::getenv("GOERITZ_SEED")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && end != env) return v;
  }
  return 20260815ull;
}

Diagram random_diagram(std::mt19937_64& rng, int ops) {
  static const char* kBases[] = {
      "X(1,2,2,1)\n",                                  // kink
      "X(1,1,2,2)\n",                                  // mirror kink
      "X(1,4,2,3)\nX(3,2,4,1)\n",                      // clasped pair
      "X(1,4,2,5)\nX(3,6,4,1)\nX(5,2,6,3)\n",          // trefoil
  };
  Diagram d = parse_pd(kBases[pick(rng, 4)]);
  for (int i = 0; i < ops; ++i) {
    DiagramAnalysis an(d);
    switch (pick(rng, 20)) {
      case 0: case 1: case 2: case 3: case 4: case 5:
        d = with_kink(d, an, rng);
        break;
      case 6: case 7: case 8: case 9: case 10: case 11: case 12:
        d = with_clasp(d, an, rng);
        break;
      case 13: case 14: case 15: case 16:
        d = with_circle(d, an, rng);
        break;
      default:
        if (ops > 2) d = with_nested(d, an, rng, ops / 2);
        break;
    }
  }
  canonicalize_slots(d);
  DiagramAnalysis check(d);
  return d;
}

std::vector<Diagram> sample_corpus(int count, int ops, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Diagram> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(random_diagram(rng, ops));
  return out;
}

}  // namespace goeritz
