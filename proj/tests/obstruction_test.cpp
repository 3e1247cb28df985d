#include <gtest/gtest.h>

#include "support.hpp"

using namespace polyreal;

namespace {

// Direct restatement of the pierceability rule on vertex sets.
bool pierceable_by_count(const SurfaceComplex& c, int i, int j) {
  const Triangle& a = c.triangle(i);
  const Triangle& b = c.triangle(j);
  if (shared_vertex_count(a, b) != 0) return false;
  int enclosed = 0;
  for (int t = 0; t < c.triangle_count(); ++t) {
    if (t == i || t == j) continue;
    const Triangle& n = c.triangle(t);
    const bool adjacent = shared_vertex_count(n, a) == 2 || shared_vertex_count(n, b) == 2;
    const bool inside = std::all_of(n.begin(), n.end(), [&](Vertex v) { return contains(a, v) || contains(b, v); });
    if (adjacent && inside) enclosed += (shared_vertex_count(n, a) == 2) + (shared_vertex_count(n, b) == 2);
  }
  return enclosed <= 4;
}

}  // namespace

TEST(Obstruction, ApplicabilityFollowsOrientabilityAndParity) {
  EXPECT_FALSE(triple_point_feasible(fixtures::parse(fixtures::kTorus7)).applicable);
  EXPECT_FALSE(triple_point_feasible(fixtures::parse(fixtures::kTetrahedron)).applicable);
  EXPECT_TRUE(triple_point_feasible(fixtures::parse(fixtures::kProjectivePlane6)).applicable);
  for (const auto& e : fixtures::corpus("8_N2.txt").entries)
    ASSERT_FALSE(triple_point_feasible(e.complex).applicable);
  for (const auto& e : fixtures::corpus("9_N3.txt").entries)
    ASSERT_TRUE(triple_point_feasible(e.complex).applicable);
}

TEST(Obstruction, SixVertexProjectivePlaneIsObstructed) {
  const auto verdict = triple_point_feasible(fixtures::parse(fixtures::kProjectivePlane6));
  EXPECT_TRUE(verdict.proves_non_realizable());
  EXPECT_FALSE(verdict.witness.has_value());
}

TEST(Obstruction, NineVertexProjectivePlanes) {
  const auto corpus = fixtures::corpus("9_N1.txt");
  ASSERT_EQ(corpus.entries.size(), 134u);
  int infeasible = 0;
  for (const auto& e : corpus.entries) infeasible += triple_point_feasible(e.complex).proves_non_realizable();
  EXPECT_GE(infeasible, 46);
  EXPECT_LT(infeasible, 134);
}

TEST(ObstructionProperty, PierceabilityMatchesDirectCount) {
  for (const char* name : {"7_N1.txt", "8_N1.txt", "9_N3.txt"})
    for (const auto& e : fixtures::corpus(name).entries) {
      const auto& c = e.complex;
      for (int i = 0; i < c.triangle_count(); ++i)
        for (int j = 0; j < c.triangle_count(); ++j) {
          if (i == j) continue;
          ASSERT_EQ(pair_pierceable(i, j, c), pierceable_by_count(c, i, j)) << name << ":" << e.id.line;
          ASSERT_EQ(pair_pierceable(i, j, c), pair_pierceable(j, i, c));
        }
    }
}

TEST(ObstructionProperty, WitnessIsFirstFeasibleTriple) {
  for (const auto& e : fixtures::corpus("9_N1.txt").entries) {
    const auto& c = e.complex;
    const auto verdict = triple_point_feasible(c);
    ASSERT_EQ(verdict.feasible_triples_exist, verdict.witness.has_value());
    if (!verdict.witness) continue;
    const auto [i, j, k] = *verdict.witness;
    ASSERT_TRUE(i < j && j < k);
    ASSERT_TRUE(pair_pierceable(i, j, c) && pair_pierceable(i, k, c) && pair_pierceable(j, k, c));
    // nothing lexicographically smaller qualifies
    for (int a = 0; a <= i; ++a)
      for (int b = a + 1; b < c.triangle_count(); ++b)
        for (int d = b + 1; d < c.triangle_count(); ++d) {
          if (std::array<int, 3>{a, b, d} >= std::array<int, 3>{i, j, k}) break;
          ASSERT_FALSE(pair_pierceable(a, b, c) && pair_pierceable(a, d, c) && pair_pierceable(b, d, c));
        }
  }
}

TEST(ObstructionProperty, PairwiseIntersectingTrianglesAreAlwaysInfeasible) {
  for (const char* name : {"6_N1.txt", "7_N1.txt"})
    for (const auto& e : fixtures::corpus(name).entries) {
      const auto& c = e.complex;
      bool all_share = true;
      for (int i = 0; i < c.triangle_count() && all_share; ++i)
        for (int j = i + 1; j < c.triangle_count(); ++j)
          if (shared_vertex_count(c.triangle(i), c.triangle(j)) == 0) {
            all_share = false;
            break;
          }
      if (all_share) { ASSERT_TRUE(triple_point_feasible(c).proves_non_realizable()); }
    }
}
