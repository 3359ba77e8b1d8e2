#pragma once

#include <set>
#include <string>
#include <vector>

#include "goeritz/diagram.hpp"
#include "goeritz/matrix.hpp"
#include "goeritz/orientation.hpp"

namespace goeritz {

/// Abstract multigraph with loops over string-labeled vertices.  Shared by
/// the checkerboard graphs and the plane-graph correspondence.
struct Multigraph {
  struct Edge {
    std::string a, b;  // endpoint labels; a == b for loops
    std::string name;  // e.g. the crossing id
    int weight = 1;
    friend bool operator==(const Edge&, const Edge&) = default;
  };
  std::vector<std::string> vertices;
  std::vector<Edge> edges;
  friend bool operator==(const Multigraph&, const Multigraph&) = default;
};

int graph_components(const Multigraph& g);

/// Checkerboard graph on the regions of one color: one edge per crossing
/// whose corners of that color it joins, weighted by the Goeritz index.
struct TaitGraph {
  Multigraph graph;
  int beta = 0;  // connected components
};

TaitGraph tait_graph(const Diagram& d, const Shading& s, bool shaded);

/// Components of the shaded checkerboard graph.
int beta_s(const Diagram& d, const Shading& s);

/// A Whitney twist decomposes the graph into edge-disjoint subgraphs meeting
/// exactly in {v, w} and exchanges the v/w incidences on one side.
struct WhitneyTwistSpec {
  std::string v, w;                   // v == w permitted (vacuous twist)
  std::set<std::size_t> side_edges;   // edge indices of the twisted side
};

/// Throws PreconditionError when the spec is not a valid decomposition.
Multigraph whitney_twist(const Multigraph& g, const WhitneyTwistSpec& spec);

// -- Goeritz matrices ---------------------------------------------------------

/// Unreduced Goeritz matrix: rows/columns are the unshaded regions;
/// off-diagonal (i,j) sums -eta over crossings joining R_i and R_j; the
/// diagonal makes every row sum to zero.
LabeledSymMatrix goeritz_matrix(const Diagram& d, const Shading& s);

/// goeritz_matrix padded with beta_s - 1 zero rows/columns.
LabeledSymMatrix adjusted_goeritz_matrix(const Diagram& d, const Shading& s);

/// Same shape with eta replaced by the checkerboard writhe.
LabeledSymMatrix oriented_goeritz_matrix(const Diagram& d, const Orientation& o,
                                         const Shading& s);

LabeledSymMatrix adjusted_oriented_goeritz_matrix(const Diagram& d,
                                                  const Orientation& o,
                                                  const Shading& s);

}  // namespace goeritz
