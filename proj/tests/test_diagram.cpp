#include <algorithm>

#include "doctest.h"
#include "goeritz/diagram.hpp"

using namespace goeritz;

TEST_SUITE_BEGIN("diagram");

namespace {

const char* kTrefoil = "X(1,4,2,5)\nX(3,6,4,1)\nX(5,2,6,3)\n";
const char* kHopf = "X(1,4,2,3)\nX(3,2,4,1)\n";
const char* kKink = "X(1,2,2,1)\n";
const char* kNestedCircles = "O\nO\nnest o2:{o2}#1 in o1:{o1}#2\n";

std::vector<std::string> labels_of(const DiagramAnalysis& an,
                                   const std::vector<int>& regions) {
  std::vector<std::string> out;
  for (int r : regions) out.push_back(an.region(r).label);
  return out;
}

}  // namespace

TEST_CASE("trefoil faces, regions and components") {
  Diagram d = parse_pd(kTrefoil);
  DiagramAnalysis an(d);

  CHECK(an.num_pieces() == 1);
  CHECK(an.piece(0).name == "x1");
  CHECK(an.num_faces() == 5);
  CHECK(an.num_regions() == 5);
  CHECK(region_labels(d) == std::vector<std::string>{"{1,3,5}", "{1,4}",
                                                     "{2,4,6}", "{2,5}",
                                                     "{3,6}"});
  CHECK(an.outer_region() == 0);
  CHECK(an.region(an.outer_region()).label == "{1,3,5}");

  // Quadrant coverage around crossing 1 (slots carry arcs 1,4,2,5).
  CHECK(an.region(an.region_of_quad({false, 1, 0})).label == "{1,4}");
  CHECK(an.region(an.region_of_quad({false, 1, 1})).label == "{2,4,6}");
  CHECK(an.region(an.region_of_quad({false, 1, 2})).label == "{2,5}");
  CHECK(an.region(an.region_of_quad({false, 1, 3})).label == "{1,3,5}");

  // Map involutions.
  Dart t{2, 1};
  CHECK(an.alpha(an.alpha(t)) == t);
  CHECK(an.face_of_dart(an.phi(t)) == an.face_of_dart(t));
  CHECK(an.arc_at({2, 1}) == 6);
  CHECK(an.arc_ends(6) == std::array<Dart, 2>{Dart{2, 1}, Dart{3, 2}});

  CHECK(an.mu() == 1);
  CHECK(an.components()[0].arcs == std::vector<ArcId>{1, 2, 3, 4, 5, 6});
  CHECK(an.components()[0].name == "1");
  CHECK(an.detached_sublinks() == std::vector<std::vector<int>>{{0}});
}

TEST_CASE("trefoil shadings and goeritz indices") {
  Diagram d = parse_pd(kTrefoil);
  DiagramAnalysis an(d);
  auto [ss, su] = checkerboard_shadings();

  CHECK(labels_of(an, an.regions_of_color(ss, true)) ==
        std::vector<std::string>{"{1,3,5}", "{2,4,6}"});
  CHECK(labels_of(an, an.regions_of_color(ss, false)) ==
        std::vector<std::string>{"{1,4}", "{2,5}", "{3,6}"});
  CHECK(labels_of(an, an.regions_of_color(su, true)) ==
        std::vector<std::string>{"{1,4}", "{2,5}", "{3,6}"});

  for (CrossingId c : {1, 2, 3}) {
    CHECK(an.goeritz_index(ss, c) == +1);
    CHECK(an.goeritz_index(su, c) == -1);
  }
  CHECK(an.unshaded_corner_regions(ss, 1) == std::pair<int, int>{1, 3});
  CHECK(an.unshaded_corner_regions(ss, 2) == std::pair<int, int>{4, 1});
  CHECK(an.unshaded_corner_regions(ss, 3) == std::pair<int, int>{3, 4});
  CHECK(an.shaded_corner_regions(ss, 1) == std::pair<int, int>{2, 0});

  SUBCASE("moving the outer anchor within a class keeps the classes") {
    Diagram d2 = set_outer_face(d, "{2,4,6}").diagram;
    DiagramAnalysis an2(d2);
    CHECK(an2.region(an2.outer_region()).label == "{2,4,6}");
    for (CrossingId c : {1, 2, 3}) CHECK(an2.goeritz_index(ss, c) == +1);
  }
  SUBCASE("moving it across swaps the classes") {
    Diagram d2 = set_outer_face(d, "{1,4}").diagram;
    DiagramAnalysis an2(d2);
    for (CrossingId c : {1, 2, 3}) CHECK(an2.goeritz_index(ss, c) == -1);
    CHECK(labels_of(an2, an2.regions_of_color(ss, false)) ==
          std::vector<std::string>{"{1,3,5}", "{2,4,6}"});
  }
}

TEST_CASE("hopf link structure") {
  Diagram d = parse_pd(kHopf);
  DiagramAnalysis an(d);
  auto [ss, su] = checkerboard_shadings();

  CHECK(region_labels(d) ==
        std::vector<std::string>{"{1,3}", "{1,4}", "{2,3}", "{2,4}"});
  CHECK(labels_of(an, an.regions_of_color(ss, true)) ==
        std::vector<std::string>{"{1,3}", "{2,4}"});
  CHECK(an.goeritz_index(ss, 1) == +1);
  CHECK(an.goeritz_index(ss, 2) == +1);
  CHECK(an.unshaded_corner_regions(ss, 1) == std::pair<int, int>{1, 2});
  CHECK(an.unshaded_corner_regions(ss, 2) == std::pair<int, int>{2, 1});

  CHECK(an.mu() == 2);
  CHECK(an.components()[0].name == "1");
  CHECK(an.components()[1].name == "3");
  CHECK(an.detached_sublinks() == std::vector<std::vector<int>>{{0, 1}});
}

TEST_CASE("kink: one-crossing unknot") {
  Diagram d = parse_pd(kKink);
  DiagramAnalysis an(d);
  auto [ss, su] = checkerboard_shadings();

  CHECK(region_labels(d) == std::vector<std::string>{"{1}", "{1,2}", "{2}"});
  CHECK(an.region(an.outer_region()).label == "{1}");
  CHECK(labels_of(an, an.regions_of_color(ss, false)) ==
        std::vector<std::string>{"{1,2}"});
  CHECK(an.goeritz_index(ss, 1) == +1);
  // Both unshaded corners land in the same region: a self-touching pair.
  CHECK(an.unshaded_corner_regions(ss, 1) == std::pair<int, int>{1, 1});
  CHECK(an.mu() == 1);

  SUBCASE("with the two-arc region outside, the kink region classes swap") {
    Diagram d2 = set_outer_face(d, "{1,2}").diagram;
    DiagramAnalysis an2(d2);
    CHECK(an2.goeritz_index(ss, 1) == -1);
    CHECK(labels_of(an2, an2.regions_of_color(ss, false)) ==
          std::vector<std::string>{"{1}", "{2}"});
  }
}

TEST_CASE("crossing-free circles") {
  SUBCASE("single circle") {
    Diagram d = parse_pd("O\n");
    DiagramAnalysis an(d);
    CHECK(region_labels(d) == std::vector<std::string>{"{o1}#1", "{o1}#2"});
    CHECK(an.mu() == 1);
    CHECK(an.components()[0].name == "o1");
    CHECK(to_pd_text(d) == "O\n");
  }
  SUBCASE("nested pair") {
    Diagram d = parse_pd(kNestedCircles);
    DiagramAnalysis an(d);
    auto [ss, su] = checkerboard_shadings();
    CHECK(region_labels(d) ==
          std::vector<std::string>{"{o1}", "{o1,o2}", "{o2}"});
    CHECK(an.region(an.outer_region()).label == "{o1}");
    CHECK(labels_of(an, an.regions_of_color(ss, false)) ==
          std::vector<std::string>{"{o1,o2}"});
    CHECK(an.mu() == 2);
    CHECK(an.detached_sublinks() ==
          std::vector<std::vector<int>>{{0}, {1}});
    CHECK(to_pd_text(d) == kNestedCircles);

    SetOuterResult res = set_outer_face(d, "{o1,o2}");
    DiagramAnalysis an2(res.diagram);
    CHECK(labels_of(an2, an2.regions_of_color(ss, false)) ==
          std::vector<std::string>{"{o1}", "{o2}"});
    CHECK(res.forward.at("{o2}") == "{o2}");
    std::string text = to_pd_text(res.diagram);
    CHECK(text.find("outer {o1,o2}") != std::string::npos);
    CHECK(diagram_equal(parse_pd(text), res.diagram));
  }
  SUBCASE("default nest target is the first circle side") {
    CHECK(diagram_equal(parse_pd("O\nO\nnest o2 in o1:{o1}#2\n"),
                        parse_pd(kNestedCircles)));
  }
}

TEST_CASE("circle nested inside a trefoil face") {
  std::string text = std::string(kTrefoil) + "O\nnest o1 in x1:{1,4}\n";
  Diagram d = parse_pd(text);
  DiagramAnalysis an(d);

  CHECK(region_labels(d) ==
        std::vector<std::string>{"{1,3,5}", "{1,4,o1}", "{2,4,6}", "{2,5}",
                                 "{3,6}", "{o1}"});
  CHECK(an.mu() == 2);
  CHECK(detached_sublink_names(d) == std::vector<std::string>{"1", "o1"});

  auto [ss, su] = checkerboard_shadings();
  // The circle sits in an unshaded region, so its inner disk is shaded.
  CHECK(an.region_shaded(ss, an.region_by_label("{1,4,o1}")) == false);
  CHECK(an.region_shaded(ss, an.region_by_label("{o1}")) == true);
  CHECK(an.parent_region(an.piece_by_name("o1")) ==
        an.region_by_label("{1,4,o1}"));

  CHECK(diagram_equal(parse_pd(to_pd_text(d)), d));
  CHECK(diagram_equal(parse_pd(to_pd_json(d)), d));
}

TEST_CASE("slot canonicalization and crossing renumbering") {
  SUBCASE("rotated slots normalize to the lexicographically least form") {
    Diagram d;
    d.crossings[1] = Crossing{{2, 5, 1, 4}};  // trefoil crossing 1, rotated
    d.crossings[2] = Crossing{{3, 6, 4, 1}};
    d.crossings[3] = Crossing{{5, 2, 6, 3}};
    d.outer = QuadKey{false, 1, 1};  // same corner as quadrant 3 after rotation
    std::map<CrossingId, int> rot;
    canonicalize_slots(d, nullptr, &rot);
    CHECK(d.crossings[1].slots == std::array<ArcId, 4>{1, 4, 2, 5});
    CHECK(rot.at(1) == 2);
    CHECK(rot.at(2) == 0);
    CHECK(d.outer == QuadKey{false, 1, 3});
    CHECK(diagram_equal(d, parse_pd(kTrefoil)));
  }
  SUBCASE("serialization renumbers sparse crossing ids") {
    Diagram d;
    d.crossings[2] = Crossing{{1, 4, 2, 5}};
    d.crossings[5] = Crossing{{3, 6, 4, 1}};
    d.crossings[9] = Crossing{{5, 2, 6, 3}};
    CHECK(to_pd_text(d) == kTrefoil);
    CHECK(diagram_equal(d, parse_pd(kTrefoil)));
  }
}

TEST_CASE("pd parsing errors") {
  CHECK_THROWS_AS(parse_pd("X(1,2,3,4)\n"), DiagramError);         // open arcs
  CHECK_THROWS_AS(parse_pd("X(1,2,1,2)\n"), DiagramError);         // not spherical
  CHECK_THROWS_AS(parse_pd(std::string(kTrefoil) + "O\n"), DiagramError);
  CHECK_THROWS_AS(parse_pd("O\nnest o2 in o1:{o1}#2\n"), DiagramError);
  CHECK_THROWS_AS(parse_pd("O\nO\nnest o2 in o1\n"), DiagramError);
  CHECK_THROWS_AS(parse_pd("O\nO\nnest o2 in o1:{o1}#9\n"), DiagramError);
  CHECK_THROWS_AS(parse_pd(std::string(kKink) + "outer {7}\n"), DiagramError);
  CHECK_THROWS_AS(parse_pd(std::string(kKink) + "outer {1}\nouter {2}\n"),
                  DiagramError);
  CHECK_THROWS_AS(parse_pd("X(1,2,2)\n"), DiagramError);
  CHECK_THROWS_AS(parse_pd("X(1,2,2,0)\n"), DiagramError);
  CHECK_THROWS_AS(parse_pd("O trailing\n"), DiagramError);
  CHECK_THROWS_AS(parse_pd("hello\n"), DiagramError);
  CHECK_THROWS_AS(parse_pd(""), DiagramError);
  CHECK_THROWS_AS(parse_pd("{\"crossings\": [[1,2,2]]}"), DiagramError);
  CHECK_THROWS_AS(parse_pd("{ not json"), DiagramError);
}

TEST_CASE("pd text round trips and comments") {
  for (const char* text : {kTrefoil, kHopf, kKink}) {
    Diagram d = parse_pd(text);
    CHECK(to_pd_text(d) == text);
    CHECK(diagram_equal(parse_pd(to_pd_json(d)), d));
  }
  Diagram commented = parse_pd("# figure: a one-crossing kink\nX(1,2,2,1)\n");
  CHECK(diagram_equal(commented, parse_pd(kKink)));
}

TEST_SUITE_END();
