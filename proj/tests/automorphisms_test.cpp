#include <set>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "support.hpp"

using namespace polyreal;

namespace {

std::set<Permutation> images(const std::vector<Automorphism>& group) {
  std::set<Permutation> out;
  for (const auto& a : group) out.insert(a.image);
  return out;
}

// +1/-1 per triangle of the cyclic order it receives from the coherent
// orientation, checked on every triangle rather than one.
bool preserves_orientation_everywhere(const SurfaceComplex& c, const Permutation& p) {
  const auto& orient = *c.orientation();
  auto cycle = [&](int i) {
    const Triangle& t = c.triangle(i);
    return orient[i] > 0 ? std::array<int, 3>{t[0], t[1], t[2]} : std::array<int, 3>{t[0], t[2], t[1]};
  };
  auto same = [](std::array<int, 3> a, std::array<int, 3> b) {
    for (int r = 0; r < 3; ++r) {
      if (a == b) return true;
      std::rotate(b.begin(), b.begin() + 1, b.end());
    }
    return false;
  };
  int agree = 0;
  for (int i = 0; i < c.triangle_count(); ++i) {
    const auto src = cycle(i);
    const std::array<int, 3> mapped{p[src[0]], p[src[1]], p[src[2]]};
    agree += same(mapped, cycle(c.triangle_index(mapped[0], mapped[1], mapped[2]))) ? 1 : -1;
  }
  EXPECT_EQ(std::abs(agree), c.triangle_count());
  return agree > 0;
}

}  // namespace

TEST(Automorphisms, KnownGroupOrders) {
  EXPECT_EQ(enumerate_automorphisms(fixtures::parse(fixtures::kTetrahedron)).size(), 24u);
  EXPECT_EQ(enumerate_automorphisms(fixtures::parse(fixtures::kProjectivePlane6)).size(), 60u);
  EXPECT_EQ(enumerate_automorphisms(fixtures::parse(fixtures::kTorus7)).size(), 42u);
  EXPECT_EQ(enumerate_automorphisms(fixtures::parse(fixtures::kOctahedron)).size(), 48u);
}

TEST(Automorphisms, IdentityFirstThenLexicographic) {
  const auto group = enumerate_automorphisms(fixtures::parse(fixtures::kTorus7));
  EXPECT_TRUE(group.front().is_identity());
  for (std::size_t i = 2; i < group.size(); ++i) EXPECT_LT(group[i - 1].image, group[i].image);
}

TEST(Automorphisms, MatchBruteForceOnCorpus) {
  int checked = 0;
  for (const char* name : {"7_M1.txt", "7_N1.txt", "8_N1.txt", "8_N2.txt", "6_N1.txt", "4_S2.txt"})
    for (const auto& e : fixtures::corpus(name).entries) {
      const auto brute = oracle::brute_force_automorphisms(e.complex);
      ASSERT_EQ(images(enumerate_automorphisms(e.complex)),
                std::set<Permutation>(brute.begin(), brute.end()))
          << name << ":" << e.id.line;
      ++checked;
    }
  EXPECT_GT(checked, 20);
}

TEST(Automorphisms, FixedElementReport) {
  const auto c = fixtures::parse(fixtures::kProjectivePlane6);
  for (const Automorphism& a : enumerate_automorphisms(c)) {
    ASSERT_EQ(a.order, permutation_order(a.image));
    ASSERT_FALSE(a.orientation_preserving.has_value());
    std::size_t fixed = 0;
    for (Vertex v = 0; v < c.vertex_count(); ++v) fixed += a(v) == v;
    ASSERT_EQ(a.fixed_vertices.size(), fixed);
    for (const Edge& e : a.fixed_edges) ASSERT_EQ(make_edge(a(e[0]), a(e[1])), e);
    for (int t : a.fixed_triangles) {
      const Triangle& tri = c.triangle(t);
      ASSERT_EQ(make_triangle(a(tri[0]), a(tri[1]), a(tri[2])), tri);
    }
  }
}

TEST(Automorphisms, OrientationBehaviour) {
  // the 7-vertex torus is a chiral map: every automorphism keeps orientation
  for (const char* text : {fixtures::kTetrahedron, fixtures::kTorus7, fixtures::kOctahedron}) {
    const auto c = fixtures::parse(text);
    const auto group = enumerate_automorphisms(c);
    std::size_t preserving = 0;
    for (const Automorphism& a : group) {
      ASSERT_TRUE(a.orientation_preserving.has_value());
      ASSERT_EQ(*a.orientation_preserving, preserves_orientation_everywhere(c, a.image));
      preserving += *a.orientation_preserving;
    }
    EXPECT_EQ(text == fixtures::kTorus7 ? preserving : 2 * preserving, group.size());
  }
}

TEST(AutomorphismsProperty, GroupAxioms) {
  for (const auto& e : fixtures::corpus("8_M1.txt").entries) {
    const auto group = enumerate_automorphisms(e.complex);
    const auto set = images(group);
    for (const auto& a : group) {
      ASSERT_TRUE(set.count(inverse(a.image)));
      for (const auto& b : group) ASSERT_TRUE(set.count(compose(a.image, b.image)));
    }
    const auto gens = generating_set(group);
    ASSERT_EQ(generated_group(gens, e.complex.vertex_count()).size(), group.size());
  }
}

TEST(Automorphisms, InvalidPermutationRejected) {
  const auto c = fixtures::parse(fixtures::kTorus7);
  EXPECT_FALSE(is_automorphism(c, {1, 0, 2, 3, 4, 5, 6}));
  EXPECT_FALSE(is_automorphism(c, {0, 0, 2, 3, 4, 5, 6}));
  EXPECT_THROW(make_automorphism(c, {1, 0, 2, 3, 4, 5, 6}), std::invalid_argument);
}

TEST(Automorphisms, CycleNotation) {
  const Permutation p{1, 2, 0, 4, 3, 5};
  EXPECT_EQ(cycle_notation(p), "(1 2 3)(4 5)");
  EXPECT_EQ(parse_cycle_notation("(1 2 3)(4 5)", 6), p);
  EXPECT_EQ(cycle_notation(identity_permutation(4)), "()");
  EXPECT_EQ(parse_cycle_notation("()", 4), identity_permutation(4));
  EXPECT_THROW(parse_cycle_notation("(1 2)(2 3)", 4), std::invalid_argument);
  EXPECT_THROW(parse_cycle_notation("(1 9)", 4), std::invalid_argument);
  EXPECT_THROW(parse_cycle_notation("(1 2", 4), std::invalid_argument);
  const auto group = enumerate_automorphisms(fixtures::parse(fixtures::kProjectivePlane6));
  for (const auto& a : group) ASSERT_EQ(parse_cycle_notation(cycle_notation(a.image), 6), a.image);
}

TEST(Automorphisms, VertexOrbits) {
  const Permutation gens[1] = {{1, 2, 0, 4, 3, 5}};
  const auto orbits = vertex_orbits(gens, 6);
  ASSERT_EQ(orbits.size(), 3u);
  EXPECT_EQ(orbits[0], (std::vector<Vertex>{0, 1, 2}));
  EXPECT_EQ(orbits[1], (std::vector<Vertex>{3, 4}));
  EXPECT_EQ(orbits[2], (std::vector<Vertex>{5}));
}
