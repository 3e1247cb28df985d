#pragma once

#include <array>
#include <optional>
#include <vector>

#include "polyreal/complex.hpp"

namespace polyreal {

/// Combinatorial triple-point test. A polyhedral immersion of a surface with
/// odd Euler characteristic has a triple point, which needs three pairwise
/// vertex-disjoint triangles that can pairwise pierce each other.
struct ObstructionVerdict {
  bool applicable = false;  // non-orientable with odd Euler characteristic
  bool feasible_triples_exist = false;
  std::optional<std::array<int, 3>> witness;  // triangle indices

  /// True when the triangulation has been shown to admit no immersion.
  bool proves_non_realizable() const { return applicable && !feasible_triples_exist; }
};

namespace detail {

// Triangles sharing an edge with t.
inline std::array<int, 3> edge_neighbours(const SurfaceComplex& c, int t) {
  const Triangle& tri = c.triangle(t);
  return {c.opposite_triangle(t, tri[0], tri[1]), c.opposite_triangle(t, tri[1], tri[2]),
          c.opposite_triangle(t, tri[0], tri[2])};
}

}  // namespace detail

/// Whether vertex-disjoint triangles t1, t2 could meet in a non-degenerate
/// way in an immersion: at most 4 of the 6 triangles edge-adjacent to them
/// may have all vertices among their 6 vertices. Triangles sharing a vertex
/// are never pierceable.
inline bool pair_pierceable(int t1, int t2, const SurfaceComplex& c) {
  const Triangle& a = c.triangle(t1);
  const Triangle& b = c.triangle(t2);
  if (shared_vertex_count(a, b) > 0) return false;
  auto in_union = [&](Vertex v) { return contains(a, v) || contains(b, v); };
  int enclosed = 0;
  for (int t : {t1, t2})
    for (int nb : detail::edge_neighbours(c, t)) {
      const Triangle& n = c.triangle(nb);
      if (in_union(n[0]) && in_union(n[1]) && in_union(n[2])) ++enclosed;
    }
  return enclosed <= 4;
}

/// Scans for three pairwise pierceable triangles; the first witness in
/// lexicographic order of triangle indices is reported.
inline ObstructionVerdict triple_point_feasible(const SurfaceComplex& c) {
  ObstructionVerdict verdict;
  verdict.applicable = !c.orientable() && (c.euler_characteristic() % 2 != 0);
  if (!verdict.applicable) return verdict;
  const int f2 = c.triangle_count();
  std::vector<std::vector<char>> ok(f2, std::vector<char>(f2, 0));
  for (int i = 0; i < f2; ++i)
    for (int j = i + 1; j < f2; ++j) ok[i][j] = ok[j][i] = pair_pierceable(i, j, c) ? 1 : 0;
  for (int i = 0; i < f2; ++i)
    for (int j = i + 1; j < f2; ++j) {
      if (!ok[i][j]) continue;
      for (int k = j + 1; k < f2; ++k)
        if (ok[i][k] && ok[j][k]) {
          verdict.feasible_triples_exist = true;
          verdict.witness = std::array<int, 3>{i, j, k};
          return verdict;
        }
    }
  return verdict;
}

}  // namespace polyreal
