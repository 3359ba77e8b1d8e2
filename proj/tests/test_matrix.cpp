#include "doctest.h"

#include <map>

#include "goeritz/matrix.hpp"
#include "test_support.hpp"

using namespace goeritz;
using goeritz::testing::make_matrix;
using goeritz::testing::make_matrix_g;

TEST_SUITE_BEGIN("matrix");

namespace {

// 5x5 fixtures used throughout: a congruent pair of zero-row-sum matrices
// with a known unimodular witness, frozen as expected values.
const std::vector<std::string> kV{"1", "2", "3", "4", "5"};

LabeledSymMatrix fixture_m() {
  return make_matrix(kV, {{0, 0, 1, 0, -1},
                          {0, 1, -1, 0, 0},
                          {1, -1, 0, 0, 0},
                          {0, 0, 0, -1, 1},
                          {-1, 0, 0, 1, 0}});
}

LabeledSymMatrix fixture_r() {
  return make_matrix(kV, {{0, 2, -5, -2, 5},
                          {2, 1, -3, 0, 0},
                          {-5, -3, 8, 0, 0},
                          {-2, 0, 0, -1, 3},
                          {5, 0, 0, 3, -8}});
}

IntMatrix fixture_u() {
  return {{1, 2, 0, 2, 0},
          {0, 1, 0, 0, 0},
          {0, -2, 1, 0, 0},
          {0, 0, 0, 1, 0},
          {0, 0, 0, -2, 1}};
}

LabeledSymMatrix trefoil_matrix() {
  return make_matrix({"a", "b", "c"}, {{2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}});
}

}  // namespace

TEST_CASE("gaussian integer arithmetic and text round trip") {
  GaussianInt a{1, 2}, b{0, -1};
  CHECK((a * b) == GaussianInt{2, -1});
  CHECK((a + b) == GaussianInt{1, 1});
  CHECK((-a) == GaussianInt{-1, -2});
  CHECK(GaussianInt{0, 1}.is_unit());
  CHECK(GaussianInt{-1, 0}.is_unit());
  CHECK_FALSE(GaussianInt{1, 1}.is_unit());

  for (std::int64_t re : {-3, -1, 0, 1, 2})
    for (std::int64_t im : {-2, -1, 0, 1, 5}) {
      GaussianInt v{re, im};
      CHECK(GaussianInt::parse(v.str()) == v);
    }
  CHECK(GaussianInt::parse("i") == GaussianInt{0, 1});
  CHECK(GaussianInt::parse("-i") == GaussianInt{0, -1});
  CHECK_THROWS_AS(GaussianInt::parse("2+"), std::invalid_argument);
  CHECK_THROWS_AS(GaussianInt::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(GaussianInt::parse("1+2j"), std::invalid_argument);
}

TEST_CASE("labels are sorted and entries stay symmetric") {
  auto m = make_matrix({"r2", "r1"}, {{4, 7}, {7, -1}});
  CHECK(m.labels() == std::vector<std::string>{"r1", "r2"});
  CHECK(m.at("r1", "r2") == GaussianInt{7});
  CHECK(m.at("r2", "r1") == GaussianInt{7});
  CHECK(m.at("r2", "r2") == GaussianInt{4});
  CHECK_THROWS_AS(m.at("nope", "r1"), std::out_of_range);
  CHECK_THROWS_AS(LabeledSymMatrix({"x", "x"}), std::invalid_argument);
}

TEST_CASE("congruence witness verifies the frozen pair") {
  auto M = fixture_m();
  auto R = fixture_r();
  auto U = fixture_u();
  CHECK(int_determinant(U) == 1);
  CHECK(congruence_verify(U, M, R));

  SUBCASE("perturbed target fails") {
    auto R2 = R;
    R2.set("1", "2", GaussianInt{3});
    CHECK_FALSE(congruence_verify(U, M, R2));
  }
  SUBCASE("non-unimodular witness fails") {
    auto U2 = U;
    U2[0][0] = 2;
    CHECK_FALSE(congruence_verify(U2, M, R));
  }
  SUBCASE("dimension mismatch throws") {
    CHECK_THROWS_AS(congruence_verify(U, M, trefoil_matrix()), std::invalid_argument);
  }
}

TEST_CASE("determinants: full, reduced, and conventions") {
  auto M = fixture_m();
  auto R = fixture_r();
  CHECK(determinant(M) == GaussianInt{0});  // zero row sums
  CHECK(determinant(R) == GaussianInt{0});
  // Weighted spanning-tree counts of the underlying graphs are both 1.
  CHECK(reduced_determinant(M) == GaussianInt{1});
  CHECK(reduced_determinant(R) == GaussianInt{1});
  CHECK(reduced_determinant(trefoil_matrix()) == GaussianInt{3});

  // 1x1 zero matrix reduces to the empty matrix, whose determinant is 1.
  auto unknot = make_matrix({"r"}, {{0}});
  CHECK(reduced_determinant(unknot) == GaussianInt{1});
  CHECK(determinant(LabeledSymMatrix{}) == GaussianInt{1});
  CHECK_THROWS_AS(reduced_determinant(LabeledSymMatrix{}), std::invalid_argument);
}

TEST_CASE("gf2 nullity") {
  CHECK(gf2_nullity(trefoil_matrix()) == 1);
  CHECK(gf2_nullity(make_matrix({"a", "b"}, {{2, -2}, {-2, 2}})) == 2);  // hopf
  CHECK(gf2_nullity(make_matrix({"r"}, {{0}})) == 1);                    // unknot
  CHECK(gf2_nullity(fixture_m()) == 1);
  CHECK(gf2_nullity(fixture_r()) == 1);
  CHECK(gf2_nullity(LabeledSymMatrix{}) == 0);
  auto imag = make_matrix_g({"a"}, {{GaussianInt{0, 2}}});
  CHECK_THROWS_AS(gf2_nullity(imag), std::invalid_argument);
}

TEST_CASE("bijection equality finds a witness") {
  auto a = trefoil_matrix();
  auto b = make_matrix({"x", "y", "z"}, {{2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}});
  auto w = bijection_equal(a, b);
  REQUIRE(w.has_value());
  // Witness must actually transport entries.
  for (const auto& la : a.labels())
    for (const auto& lb : a.labels())
      CHECK(a.at(la, lb) == b.at(w->at(la), w->at(lb)));

  SUBCASE("asymmetric example needs the right pairing") {
    auto p = make_matrix({"a", "b", "c"}, {{5, -1, 0}, {-1, 3, -2}, {0, -2, 5}});
    auto q = make_matrix({"u", "v", "w"}, {{3, -2, -1}, {-2, 5, 0}, {-1, 0, 5}});
    auto w2 = bijection_equal(p, q);
    REQUIRE(w2.has_value());
    CHECK(w2->at("b") == "u");
    for (const auto& la : p.labels())
      for (const auto& lb : p.labels())
        CHECK(p.at(la, lb) == q.at(w2->at(la), w2->at(lb)));
  }
  SUBCASE("different matrices are rejected") {
    auto c = make_matrix({"x", "y", "z"}, {{2, -1, -1}, {-1, 2, -1}, {-1, -1, 3}});
    CHECK_FALSE(bijection_equal(a, c).has_value());
    CHECK_FALSE(bijection_equal(a, make_matrix({"x"}, {{2}})).has_value());
  }
  SUBCASE("zero padding blocks are interchangeable") {
    auto p = trefoil_matrix().adjust(4);
    auto q = make_matrix({"p", "q", "r"}, {{2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}}).adjust(4);
    CHECK(p.size() == 6);
    CHECK(bijection_equal(p, q).has_value());
    CHECK_FALSE(bijection_equal(p, trefoil_matrix().adjust(3)).has_value());
  }
  SUBCASE("gaussian entries participate") {
    auto p = make_matrix_g({"a", "b"},
                           {{GaussianInt{0, 2}, GaussianInt{0, -2}},
                            {GaussianInt{0, -2}, GaussianInt{0, 2}}});
    auto q = make_matrix_g({"s", "t"},
                           {{GaussianInt{0, 2}, GaussianInt{0, -2}},
                            {GaussianInt{0, -2}, GaussianInt{0, 2}}});
    CHECK(bijection_equal(p, q).has_value());
    auto r = make_matrix_g({"s", "t"},
                           {{GaussianInt{0, 2}, GaussianInt{2, 0}},
                            {GaussianInt{2, 0}, GaussianInt{0, 2}}});
    CHECK_FALSE(bijection_equal(p, r).has_value());
  }
}

TEST_CASE("reduce and adjust") {
  auto t = trefoil_matrix();
  auto r = t.reduce("a");
  CHECK(r.labels() == std::vector<std::string>{"b", "c"});
  CHECK(r.at("b", "b") == GaussianInt{2});
  CHECK(r.at("b", "c") == GaussianInt{-1});
  CHECK_THROWS_AS(t.reduce("nope"), std::out_of_range);

  auto adj = t.adjust(3);
  CHECK(adj.size() == 5);
  CHECK(adj.at("_z1", "_z1") == GaussianInt{0});
  CHECK(adj.at("_z1", "a") == GaussianInt{0});
  CHECK(adj.at("a", "b") == GaussianInt{-1});
  CHECK(t.adjust(1) == t);
  CHECK_THROWS_AS(t.adjust(0), std::invalid_argument);

  auto z = t;
  z.set("a", "a", GaussianInt{99});
  z.enforce_zero_row_sums();
  CHECK(z.at("a", "a") == GaussianInt{2});
}

TEST_CASE("json round trip") {
  auto m = make_matrix_g({"r1", "r2"},
                         {{GaussianInt{2, 0}, GaussianInt{0, -2}},
                          {GaussianInt{0, -2}, GaussianInt{-1, 1}}});
  auto back = LabeledSymMatrix::from_json(m.to_json());
  CHECK(back == m);
  CHECK_THROWS_AS(LabeledSymMatrix::from_json("{"), std::invalid_argument);
  CHECK_THROWS_AS(LabeledSymMatrix::from_json("{\"labels\":[\"a\"]}"),
                  std::invalid_argument);

  auto u = int_matrix_from_json("{\"rows\": [[1, 2], [0, -1]]}");
  CHECK(u == IntMatrix{{1, 2}, {0, -1}});
  CHECK(int_determinant(u) == -1);
}

TEST_SUITE_END();
