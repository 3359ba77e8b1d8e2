#include <random>

#include "doctest.h"
#include "goeritz/tait.hpp"
#include "test_support.hpp"

using namespace goeritz;
using goeritz::testing::make_matrix;

TEST_SUITE_BEGIN("tait");

namespace {

const char* kTrefoil = "X(1,4,2,5)\nX(3,6,4,1)\nX(5,2,6,3)\n";
const char* kHopf = "X(1,4,2,3)\nX(3,2,4,1)\n";
const char* kKink = "X(1,2,2,1)\n";
// Trefoil with a Hopf link nested inside its {1,4} face.
const char* kTrefoilWithHopf =
    "X(1,4,2,5)\nX(3,6,4,1)\nX(5,2,6,3)\nX(7,10,8,9)\nX(9,8,10,7)\n"
    "nest x4 in x1:{1,4}\n";

}  // namespace

TEST_CASE("goeritz matrices of the frozen fixtures") {
  auto [ss, su] = checkerboard_shadings();

  Diagram trefoil = parse_pd(kTrefoil);
  CHECK(goeritz_matrix(trefoil, ss) ==
        make_matrix({"{1,4}", "{2,5}", "{3,6}"},
                    {{2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}}));
  CHECK(goeritz_matrix(trefoil, su) ==
        make_matrix({"{1,3,5}", "{2,4,6}"}, {{-3, 3}, {3, -3}}));

  Diagram hopf = parse_pd(kHopf);
  CHECK(goeritz_matrix(hopf, ss) ==
        make_matrix({"{1,4}", "{2,3}"}, {{2, -2}, {-2, 2}}));
  CHECK(goeritz_matrix(hopf, su) ==
        make_matrix({"{1,3}", "{2,4}"}, {{-2, 2}, {2, -2}}));

  Diagram kink = parse_pd(kKink);
  CHECK(goeritz_matrix(kink, ss) == make_matrix({"{1,2}"}, {{0}}));
  CHECK(goeritz_matrix(kink, su) ==
        make_matrix({"{1}", "{2}"}, {{-1, 1}, {1, -1}}));

  CHECK(goeritz_matrix(parse_pd("O\n"), ss) == make_matrix({"{o1}#2"}, {{0}}));
}

TEST_CASE("beta and adjusted matrices") {
  auto [ss, su] = checkerboard_shadings();

  Diagram trefoil = parse_pd(kTrefoil);
  CHECK(beta_s(trefoil, ss) == 1);
  CHECK(beta_s(trefoil, su) == 1);
  CHECK(adjusted_goeritz_matrix(trefoil, ss) == goeritz_matrix(trefoil, ss));

  // Two circles side by side, seen from the region between them.
  Diagram circles =
      parse_pd("O\nO\nnest o2:{o2}#1 in o1:{o1}#1\nouter {o1,o2}\n");
  CHECK(goeritz_matrix(circles, su) == make_matrix({"{o1,o2}"}, {{0}}));
  CHECK(beta_s(circles, su) == 2);
  LabeledSymMatrix adj = adjusted_goeritz_matrix(circles, su);
  CHECK(adj.size() == 2);
  CHECK(bijection_equal(adj, make_matrix({"a", "b"}, {{0, 0}, {0, 0}}))
            .has_value());

  TaitGraph shaded = tait_graph(circles, su, true);
  CHECK(shaded.graph.vertices == std::vector<std::string>{"{o1}", "{o2}"});
  CHECK(shaded.graph.edges.empty());
  CHECK(shaded.beta == 2);
}

TEST_CASE("tait graph shapes") {
  auto [ss, su] = checkerboard_shadings();
  Diagram trefoil = parse_pd(kTrefoil);

  TaitGraph tri = tait_graph(trefoil, su, true);
  CHECK(tri.graph.vertices ==
        std::vector<std::string>{"{1,4}", "{2,5}", "{3,6}"});
  CHECK(tri.graph.edges.size() == 3);
  CHECK(tri.beta == 1);
  for (const auto& e : tri.graph.edges) {
    CHECK(e.a != e.b);
    CHECK(e.weight == +1);
  }

  TaitGraph banded = tait_graph(trefoil, ss, true);
  CHECK(banded.graph.vertices ==
        std::vector<std::string>{"{1,3,5}", "{2,4,6}"});
  CHECK(banded.graph.edges.size() == 3);
  CHECK(banded.beta == 1);

  // The shaded graph of one shading is the unshaded graph of the other.
  CHECK(tait_graph(trefoil, ss, true).graph ==
        tait_graph(trefoil, su, false).graph);
  CHECK(tait_graph(trefoil, su, true).graph ==
        tait_graph(trefoil, ss, false).graph);

  TaitGraph lone = tait_graph(parse_pd("O\n"), ss, false);
  CHECK(lone.graph.vertices == std::vector<std::string>{"{o1}#2"});
  CHECK(lone.beta == 1);

  // A self-touching crossing becomes a loop edge.
  TaitGraph loop = tait_graph(parse_pd(kKink), ss, false);
  REQUIRE(loop.graph.edges.size() == 1);
  CHECK(loop.graph.edges[0].a == loop.graph.edges[0].b);
  CHECK(loop.beta == 1);
}

TEST_CASE("whitney twists") {
  SUBCASE("single edge moves its endpoint") {
    Multigraph g{{"u", "v", "w"}, {{"u", "v", "e", 1}}};
    Multigraph t = whitney_twist(g, {"v", "w", {0}});
    CHECK(t.edges[0].a == "u");
    CHECK(t.edges[0].b == "w");
    CHECK(graph_components(g) == graph_components(t));
  }
  SUBCASE("equal hinge vertices make the twist vacuous") {
    Multigraph g{{"v", "x"}, {{"v", "x", "e", 1}, {"x", "x", "f", 1}}};
    CHECK(whitney_twist(g, {"v", "v", {0, 1}}) == g);
  }
  SUBCASE("a twist can raise the maximum degree to four") {
    Multigraph g{{"v", "w", "x", "y"},
                 {{"v", "x", "e1", 1},
                  {"v", "x", "e2", 1},
                  {"x", "w", "e3", 1},
                  {"w", "y", "e4", 1},
                  {"w", "y", "e5", 1}}};
    auto degree = [](const Multigraph& h, const std::string& vtx) {
      int d = 0;
      for (const auto& e : h.edges) d += (e.a == vtx) + (e.b == vtx);
      return d;
    };
    for (const auto& vtx : g.vertices) CHECK(degree(g, vtx) <= 3);
    Multigraph t = whitney_twist(g, {"v", "w", {0, 1, 2}});
    CHECK(degree(t, "w") == 4);
    CHECK(graph_components(t) == graph_components(g));
  }
  SUBCASE("decomposition sharing an inner vertex is rejected") {
    Multigraph g{{"v", "w", "x", "y"},
                 {{"v", "x", "e1", 1}, {"x", "w", "e2", 1}, {"x", "y", "e3", 1}}};
    CHECK_THROWS_AS(whitney_twist(g, {"v", "w", {0}}), PreconditionError);
    CHECK_THROWS_AS(whitney_twist(g, {"v", "w", {9}}), PreconditionError);
    CHECK_THROWS_AS(whitney_twist(g, {"v", "zz", {0}}), PreconditionError);
  }
  SUBCASE("component count is preserved on random decompositions") {
    std::mt19937_64 rng(2026);
    auto rnd = [&](int lo, int hi) {
      return lo + static_cast<int>(rng() % (hi - lo + 1));
    };
    for (int trial = 0; trial < 300; ++trial) {
      Multigraph g;
      bool hinge_equal = rnd(0, 4) == 0;
      g.vertices = {"v"};
      if (!hinge_equal) g.vertices.push_back("w");
      std::string w = hinge_equal ? "v" : "w";
      int na = rnd(0, 4), nb = rnd(0, 4);
      std::vector<std::string> sideA{"v", w}, sideB{"v", w};
      for (int i = 0; i < na; ++i) {
        g.vertices.push_back("a" + std::to_string(i));
        sideA.push_back(g.vertices.back());
      }
      for (int i = 0; i < nb; ++i) {
        g.vertices.push_back("b" + std::to_string(i));
        sideB.push_back(g.vertices.back());
      }
      WhitneyTwistSpec spec{"v", w, {}};
      for (int i = 0; i < rnd(0, 6); ++i)
        g.edges.push_back({sideA[rng() % sideA.size()],
                           sideA[rng() % sideA.size()],
                           "p" + std::to_string(i), 1});
      for (int i = 0; i < rnd(0, 6); ++i) {
        spec.side_edges.insert(g.edges.size());
        g.edges.push_back({sideB[rng() % sideB.size()],
                           sideB[rng() % sideB.size()],
                           "q" + std::to_string(i), 1});
      }
      Multigraph t = whitney_twist(g, spec);
      CHECK(graph_components(t) == graph_components(g));
    }
  }
}

TEST_CASE("oriented goeritz matrices") {
  auto [ss, su] = checkerboard_shadings();
  Orientation none;

  Diagram hopf = parse_pd(kHopf);
  CHECK(oriented_goeritz_matrix(hopf, none, ss) ==
        make_matrix({"{1,4}", "{2,3}"}, {{2, -2}, {-2, 2}}));
  DiagramAnalysis hopf_an(hopf);
  Orientation anti = reverse_components(hopf_an, none, {"3"});
  GaussianInt i = kImaginaryUnit;
  CHECK(oriented_goeritz_matrix(hopf, anti, ss) ==
        goeritz::testing::make_matrix_g(
            {"{1,4}", "{2,3}"},
            {{i * GaussianInt(2), i * GaussianInt(-2)},
             {i * GaussianInt(-2), i * GaussianInt(2)}}));

  Diagram trefoil = parse_pd(kTrefoil);
  LabeledSymMatrix g = goeritz_matrix(trefoil, ss);
  LabeledSymMatrix gor = oriented_goeritz_matrix(trefoil, none, ss);
  for (const auto& a : g.labels())
    for (const auto& b : g.labels())
      CHECK(gor.at(a, b) == i * g.at(a, b));

  // Crossing-level collapse: eta equals re + im of the checkerboard writhe.
  DiagramAnalysis an(trefoil);
  for (CrossingId c : {1, 2, 3}) {
    GaussianInt eo = checkerboard_writhe(an, ss, none, c);
    CHECK(an.goeritz_index(ss, c) == eo.re + eo.im);
  }
}

TEST_CASE("detached sublink reversal fixes the oriented matrix") {
  auto [ss, su] = checkerboard_shadings();
  Orientation none;
  Diagram d = parse_pd(kTrefoilWithHopf);
  DiagramAnalysis an(d);
  CHECK(detached_sublink_names(d) == std::vector<std::string>{"1", "7+9"});

  CHECK(goeritz_matrix(d, ss) ==
        make_matrix({"{1,4,7,10}", "{2,5}", "{3,6}", "{8,9}"},
                    {{4, -1, -1, -2},
                     {-1, 2, -1, 0},
                     {-1, -1, 2, 0},
                     {-2, 0, 0, 2}}));
  CHECK(beta_s(d, ss) == 2);
  CHECK(adjusted_goeritz_matrix(d, ss).size() == 5);

  GaussianInt i = kImaginaryUnit;
  LabeledSymMatrix gor = oriented_goeritz_matrix(d, none, ss);
  CHECK(gor.at("{1,4,7,10}", "{2,5}") == -i);
  CHECK(gor.at("{1,4,7,10}", "{8,9}") == GaussianInt(-2));
  CHECK(gor.at("{1,4,7,10}", "{1,4,7,10}") == GaussianInt(2, 2));
  CHECK(gor.at("{2,5}", "{2,5}") == GaussianInt(0, 2));

  // Reversing the whole detached Hopf sublink changes nothing.
  Orientation flip_all = reverse_components(an, none, {"7", "9"});
  CHECK(oriented_goeritz_matrix(d, flip_all, ss) == gor);

  // Reversing only one of its components does.
  Orientation flip_one = reverse_components(an, none, {"9"});
  LabeledSymMatrix gor2 = oriented_goeritz_matrix(d, flip_one, ss);
  CHECK(gor2.at("{1,4,7,10}", "{8,9}") == GaussianInt(0, -2));
  CHECK(gor2.at("{1,4,7,10}", "{2,5}") == -i);
}

TEST_SUITE_END();
