#include <algorithm>
#include <vector>

#include "doctest.h"
#include "goeritz/mutate.hpp"
#include "goeritz/tait.hpp"
#include "test_support.hpp"

using namespace goeritz;

namespace {

const char* kTrefoil = "X(1,4,2,5)\nX(3,6,4,1)\nX(5,2,6,3)\n";
const char* kHopf = "X(1,4,2,3)\nX(3,2,4,1)\n";
const char* kFig8 = "X(4,2,5,1)\nX(8,6,1,5)\nX(6,3,7,4)\nX(2,7,3,8)\n";
// Hopf link with a kink on one component: the tangle cut off by arcs
// 1,4,5,3 holds a crossing plus the kink, so flipping it moves the kink.
const char* kHopfKink = "X(1,4,2,3)\nX(3,5,4,1)\nX(2,6,6,5)\n";
const char* kTrefoilWithHopf =
    "X(1,4,2,5)\nX(3,6,4,1)\nX(5,2,6,3)\n"
    "X(7,10,8,9)\nX(9,8,10,7)\n"
    "nest x4 in x1:{1,4}\n";
const char* kTrefoilCircleInner =
    "X(1,4,2,5)\nX(3,6,4,1)\nX(5,2,6,3)\nO\nnest o1 in x1:{3,6}\n";
const char* kTrefoilNestedTrefoil =
    "X(1,4,2,5)\nX(3,6,4,1)\nX(5,2,6,3)\n"
    "X(7,10,8,11)\nX(9,12,10,7)\nX(11,8,12,9)\n"
    "nest x4 in x1:{3,6}\n";

std::string side_label(const DiagramAnalysis& an, const TangleInfo& info,
                       int side) {
  return an.region(an.region_of_face(info.side_faces[side])).label;
}

/// The shading under which the given face's region is shaded.
Shading shading_with_face_shaded(const DiagramAnalysis& an, int face) {
  auto [ss, su] = checkerboard_shadings();
  return an.region_shaded(ss, an.region_of_face(face)) ? ss : su;
}

const std::vector<const char*>& corpus() {
  static const std::vector<const char*> all{
      kTrefoil,       kHopf,
      kFig8,          kHopfKink,
      kTrefoilWithHopf, kTrefoilCircleInner,
      kTrefoilNestedTrefoil};
  return all;
}

}  // namespace

TEST_SUITE_BEGIN("mutate");

TEST_CASE("tangle enumeration lists every disk cut once") {
  std::vector<TangleSpec> trefoil = find_tangles(parse_pd(kTrefoil), 3);
  std::vector<TangleSpec> expected{
      {{1, 3, 6, 4}}, {{1, 4, 2, 5}}, {{1, 4, 6, 3}},
      {{1, 5, 2, 4}}, {{2, 5, 3, 6}}, {{2, 6, 3, 5}},
  };
  CHECK(trefoil == expected);

  std::vector<TangleSpec> singles = find_tangles(parse_pd(kTrefoil), 1);
  std::vector<TangleSpec> expected_singles{
      {{1, 3, 6, 4}}, {{1, 4, 2, 5}}, {{2, 6, 3, 5}}};
  CHECK(singles == expected_singles);

  // The hopf pair tangles; the two-crossing subset has no boundary arcs.
  std::vector<TangleSpec> hopf = find_tangles(parse_pd(kHopf), 2);
  std::vector<TangleSpec> expected_hopf{{{1, 3, 2, 4}}, {{1, 4, 2, 3}}};
  CHECK(hopf == expected_hopf);

  CHECK(find_tangles(parse_pd(kFig8), 4).size() == 10);
  CHECK_THROWS_AS(find_tangles(parse_pd(kHopf), 0), PreconditionError);
}

TEST_CASE("tangle resolution fixes the inside and the side faces") {
  Diagram d = parse_pd(kTrefoil);
  DiagramAnalysis an(d);

  SUBCASE("single crossing, corners as stored") {
    TangleInfo info = resolve_tangle(an, TangleSpec{{1, 4, 2, 5}});
    CHECK(info.inside == std::set<CrossingId>{1});
    CHECK(side_label(an, info, 0) == "{1,4}");    // N
    CHECK(side_label(an, info, 1) == "{2,4,6}");  // W
    CHECK(side_label(an, info, 2) == "{2,5}");    // S
    CHECK(side_label(an, info, 3) == "{1,3,5}");  // E
  }
  SUBCASE("reversed corner order selects the complement") {
    TangleInfo info = resolve_tangle(an, TangleSpec{{1, 5, 2, 4}});
    CHECK(info.inside == std::set<CrossingId>{2, 3});
    CHECK(side_label(an, info, 0) == "{1,3,5}");
    CHECK(side_label(an, info, 1) == "{2,5}");
    CHECK(side_label(an, info, 2) == "{2,4,6}");
    CHECK(side_label(an, info, 3) == "{1,4}");
  }
  SUBCASE("invalid specs are rejected") {
    CHECK_THROWS_AS(resolve_tangle(an, TangleSpec{{1, 4, 2, 2}}),
                    PreconditionError);
    CHECK_THROWS_AS(resolve_tangle(an, TangleSpec{{1, 4, 2, 6}}),
                    PreconditionError);  // arcs 3,5 keep one side connected
    DiagramAnalysis hopf(parse_pd(kHopf));
    CHECK_THROWS_AS(resolve_tangle(hopf, TangleSpec{{1, 2, 3, 4}}),
                    PreconditionError);  // wrong cyclic order
    DiagramAnalysis kinked(parse_pd(kHopfKink));
    CHECK_THROWS_AS(resolve_tangle(kinked, TangleSpec{{6, 1, 4, 3}}),
                    PreconditionError);  // arc 6 is a loop
  }
}

TEST_CASE("mutating a single crossing is the identity") {
  Diagram d = parse_pd(kTrefoil);
  for (int kind : {1, 2, 3})
    CHECK(diagram_equal(mutate(d, TangleSpec{{1, 4, 2, 5}}, kind), d));
  CHECK_THROWS_AS(mutate(d, TangleSpec{{1, 4, 2, 5}}, 4), PreconditionError);
}

TEST_CASE("flipping a one-sided tangle moves its kink") {
  Diagram d = parse_pd(kHopfKink);
  DiagramAnalysis an(d);
  TangleSpec t{{1, 4, 5, 3}};
  TangleInfo info = resolve_tangle(an, t);
  CHECK(info.inside == std::set<CrossingId>{1, 3});
  CHECK(side_label(an, info, 0) == "{1,4}");
  CHECK(side_label(an, info, 1) == "{2,4,5,6}");
  CHECK(side_label(an, info, 2) == "{2,3,5}");
  CHECK(side_label(an, info, 3) == "{1,3}");

  Diagram flipped = mutate(d, t, 1);
  CHECK(to_pd_text(flipped) == "X(1,2,5,3)\nX(3,5,4,1)\nX(4,6,6,2)\n");
  CHECK(!diagram_equal(flipped, d));
  CHECK(diagram_equal(mutate(flipped, t, 1), d));
}

TEST_CASE("kind 3 equals the two flips composed") {
  for (const char* text : corpus()) {
    Diagram d = parse_pd(text);
    for (const TangleSpec& t : find_tangles(d, 3)) {
      CAPTURE(text);
      CAPTURE(t.corners[0]);
      Diagram rotated = mutate(d, t, 3);
      CHECK(diagram_equal(rotated, mutate(mutate(d, t, 1), t, 2)));
      CHECK(diagram_equal(rotated, mutate(mutate(d, t, 2), t, 1)));
    }
  }
}

TEST_CASE("mutations are involutions and preserve component count") {
  for (const char* text : corpus()) {
    Diagram d = parse_pd(text);
    int mu = component_count(d);
    for (const TangleSpec& t : find_tangles(d, 3))
      for (int kind : {1, 2, 3}) {
        CAPTURE(text);
        CAPTURE(t.corners[0]);
        CAPTURE(kind);
        Diagram m = mutate(d, t, kind);
        CHECK(component_count(m) == mu);
        CHECK(diagram_equal(mutate(m, t, kind), d));
      }
  }
}

TEST_CASE("flips preserve the adjusted Goeritz matrix of the matched shading") {
  for (const char* text : corpus()) {
    Diagram d = parse_pd(text);
    DiagramAnalysis an(d);
    for (const TangleSpec& t : find_tangles(d, 3)) {
      TangleInfo info = resolve_tangle(an, t);
      for (int kind : {1, 2}) {
        CAPTURE(text);
        CAPTURE(t.corners[0]);
        CAPTURE(kind);
        // Kind 1 keeps the matrix of the shading with N and S shaded,
        // kind 2 the one with W and E shaded.
        int face = kind == 1 ? info.side_faces[0] : info.side_faces[1];
        Shading s = shading_with_face_shaded(an, face);
        Diagram m = mutate(d, t, kind);
        DiagramAnalysis man(m);
        TangleInfo minfo = resolve_tangle(man, t);
        int mface = kind == 1 ? minfo.side_faces[0] : minfo.side_faces[1];
        Shading ms = shading_with_face_shaded(man, mface);
        CHECK(bijection_equal(adjusted_goeritz_matrix(d, s),
                              adjusted_goeritz_matrix(m, ms))
                  .has_value());
      }
    }
  }
}

TEST_CASE("opposite side faces share a color") {
  for (const char* text : corpus()) {
    Diagram d = parse_pd(text);
    DiagramAnalysis an(d);
    auto [ss, su] = checkerboard_shadings();
    for (const TangleSpec& t : find_tangles(d, 3)) {
      TangleInfo info = resolve_tangle(an, t);
      CHECK(an.region_shaded(ss, an.region_of_face(info.side_faces[0])) ==
            an.region_shaded(ss, an.region_of_face(info.side_faces[2])));
      CHECK(an.region_shaded(su, an.region_of_face(info.side_faces[1])) ==
            an.region_shaded(su, an.region_of_face(info.side_faces[3])));
      CHECK(an.region_shaded(ss, an.region_of_face(info.side_faces[0])) !=
            an.region_shaded(ss, an.region_of_face(info.side_faces[1])));
    }
  }
}

TEST_CASE("oriented mutation reverses the tangle exactly on a clash") {
  Diagram d = parse_pd(kHopfKink);
  TangleSpec t{{1, 4, 5, 3}};
  Orientation none;
  OrientedMutation flip = mutate_oriented(d, none, t, 1);
  CHECK(!flip.reversed_tangle);
  CHECK(diagram_equal(flip.diagram, mutate(d, t, 1)));
  OrientedMutation swing = mutate_oriented(d, none, t, 2);
  CHECK(swing.reversed_tangle);
  OrientedMutation spin = mutate_oriented(d, none, t, 3);
  CHECK(spin.reversed_tangle);
}

TEST_CASE("oriented mutation never changes a checkerboard writhe") {
  for (const char* text : corpus()) {
    Diagram d = parse_pd(text);
    DiagramAnalysis an(d);
    std::vector<Orientation> orientations{Orientation{}};
    orientations.push_back(Orientation{{an.components().front().name}});
    for (const TangleSpec& t : find_tangles(d, 3)) {
      TangleInfo info = resolve_tangle(an, t);
      for (int kind : {1, 2, 3})
        for (const Orientation& o : orientations) {
          CAPTURE(text);
          CAPTURE(t.corners[0]);
          CAPTURE(kind);
          OrientedMutation om = mutate_oriented(d, o, t, kind);
          DiagramAnalysis man(om.diagram);
          TangleInfo minfo = resolve_tangle(man, t);
          for (int side : {0, 1}) {
            Shading s = shading_with_face_shaded(an, info.side_faces[side]);
            Shading ms =
                shading_with_face_shaded(man, minfo.side_faces[side]);
            for (const auto& [c, cr] : d.crossings)
              CHECK(checkerboard_writhe(an, s, o, c) ==
                    checkerboard_writhe(man, ms, om.orientation, c));
          }
        }
    }
  }
}

TEST_CASE("side-face nesting stays outside the rotated disk") {
  // Anchor the circle merge on a quadrant of crossing 3, which sits inside
  // the tangle {2,3}; the region it names (the W side) must survive.
  Diagram d = parse_pd(kTrefoil);
  d.circles.insert(1);
  d.merges.push_back({QuadKey{false, 3, 0}, QuadKey{true, 1, 0}});
  DiagramAnalysis an(d);
  int piece = an.piece_by_name("o1");
  CHECK(an.region(an.parent_region(piece)).label == "{2,5,o1}");

  TangleSpec t{{1, 5, 2, 4}};
  for (int kind : {1, 2, 3}) {
    Diagram m = mutate(d, t, kind);
    DiagramAnalysis man(m);
    CHECK(man.region(man.parent_region(man.piece_by_name("o1"))).label ==
          "{2,5,o1}");
  }
}

TEST_CASE("a circle nested inside the tangle follows the reversal") {
  Diagram d = parse_pd(kTrefoilCircleInner);
  TangleSpec t{{1, 5, 2, 4}};  // inside {2,3}, circle in its interior face
  for (int kind : {1, 2, 3}) {
    OrientedMutation om = mutate_oriented(d, Orientation{}, t, kind);
    CHECK(om.orientation.reversed.count("o1") ==
          (om.reversed_tangle ? 1u : 0u));
  }
}

TEST_CASE("reverse_detached accepts unions of detached sublinks only") {
  Diagram hopf = parse_pd(kHopf);
  CHECK_THROWS_AS(reverse_detached(hopf, Orientation{}, {"1"}),
                  PreconditionError);
  CHECK(reverse_detached(hopf, Orientation{}, {"1", "3"}).reversed ==
        std::set<std::string>{"1", "3"});

  Diagram d = parse_pd(kTrefoilWithHopf);
  CHECK(reverse_detached(d, Orientation{}, {"7", "9"}).reversed ==
        std::set<std::string>{"7", "9"});
  CHECK(reverse_detached(d, Orientation{}, {"1"}).reversed ==
        std::set<std::string>{"1"});
  CHECK_THROWS_AS(reverse_detached(d, Orientation{}, {"9"}),
                  PreconditionError);
  CHECK_THROWS_AS(reverse_detached(d, Orientation{}, {"5"}), DiagramError);
  // Toggling twice restores the original orientation.
  Orientation once = reverse_detached(d, Orientation{}, {"7", "9"});
  CHECK(reverse_detached(d, once, {"7", "9"}) == Orientation{});
}

TEST_SUITE_END();
