#include "goeritz/tait.hpp"

#include <algorithm>
#include <map>

namespace goeritz {
namespace {

int vertex_index(const Multigraph& g, const std::string& label) {
  auto it = std::find(g.vertices.begin(), g.vertices.end(), label);
  if (it == g.vertices.end())
    throw PreconditionError("unknown vertex '" + label + "'");
  return static_cast<int>(it - g.vertices.begin());
}

}  // namespace

int graph_components(const Multigraph& g) {
  int n = static_cast<int>(g.vertices.size());
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : g.edges) {
    int a = find(vertex_index(g, e.a)), b = find(vertex_index(g, e.b));
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  int count = 0;
  for (int i = 0; i < n; ++i)
    if (find(i) == i) ++count;
  return count;
}

TaitGraph tait_graph(const Diagram& d, const Shading& s, bool shaded) {
  DiagramAnalysis an(d);
  TaitGraph out;
  for (int r : an.regions_of_color(s, shaded))
    out.graph.vertices.push_back(an.region(r).label);
  for (const auto& [cid, cr] : d.crossings) {
    auto [r1, r2] = shaded ? an.shaded_corner_regions(s, cid)
                           : an.unshaded_corner_regions(s, cid);
    // Weight by the Goeritz index of the shading whose unshaded class hosts
    // the vertices, so that the shaded graph of one shading equals the
    // unshaded graph of the other.
    int sign = shaded ? -1 : +1;
    out.graph.edges.push_back({an.region(r1).label, an.region(r2).label,
                               std::to_string(cid),
                               sign * an.goeritz_index(s, cid)});
  }
  out.beta = graph_components(out.graph);
  return out;
}

int beta_s(const Diagram& d, const Shading& s) {
  return tait_graph(d, s, true).beta;
}

Multigraph whitney_twist(const Multigraph& g, const WhitneyTwistSpec& spec) {
  vertex_index(g, spec.v);
  vertex_index(g, spec.w);
  for (std::size_t i : spec.side_edges)
    if (i >= g.edges.size())
      throw PreconditionError("edge index " + std::to_string(i) +
                              " out of range");
  // The two edge sets may share vertices only in {v, w}.
  std::set<std::string> inner1, inner2;
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    auto& target = spec.side_edges.count(i) ? inner2 : inner1;
    for (const std::string* end : {&g.edges[i].a, &g.edges[i].b})
      if (*end != spec.v && *end != spec.w) target.insert(*end);
  }
  for (const auto& x : inner2)
    if (inner1.count(x))
      throw PreconditionError("vertex '" + x +
                              "' crosses the two-vertex decomposition");
  Multigraph out = g;
  for (std::size_t i : spec.side_edges) {
    for (std::string* end : {&out.edges[i].a, &out.edges[i].b}) {
      if (*end == spec.v)
        *end = spec.w;
      else if (*end == spec.w)
        *end = spec.v;
    }
  }
  return out;
}

namespace {

LabeledSymMatrix build_goeritz(const Diagram& d, const Shading& s,
                               bool oriented, const Orientation& o) {
  DiagramAnalysis an(d);
  std::vector<std::string> labels;
  for (int r : an.regions_of_color(s, false))
    labels.push_back(an.region(r).label);
  LabeledSymMatrix m(labels);
  for (const auto& [cid, cr] : d.crossings) {
    auto [r1, r2] = an.unshaded_corner_regions(s, cid);
    if (r1 == r2) continue;  // self-touching crossing: diagonal-only
    GaussianInt eta = oriented ? checkerboard_writhe(an, s, o, cid)
                               : GaussianInt(an.goeritz_index(s, cid));
    m.add(an.region(r1).label, an.region(r2).label, -eta);
  }
  m.enforce_zero_row_sums();
  return m;
}

}  // namespace

LabeledSymMatrix goeritz_matrix(const Diagram& d, const Shading& s) {
  return build_goeritz(d, s, false, Orientation{});
}

LabeledSymMatrix adjusted_goeritz_matrix(const Diagram& d, const Shading& s) {
  return goeritz_matrix(d, s).adjust(beta_s(d, s));
}

LabeledSymMatrix oriented_goeritz_matrix(const Diagram& d, const Orientation& o,
                                         const Shading& s) {
  return build_goeritz(d, s, true, o);
}

LabeledSymMatrix adjusted_oriented_goeritz_matrix(const Diagram& d,
                                                  const Orientation& o,
                                                  const Shading& s) {
  return oriented_goeritz_matrix(d, o, s).adjust(beta_s(d, s));
}

}  // namespace goeritz
