#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "polyreal/complex.hpp"

namespace polyreal {

/// A vertex permutation mapping every triangle to a triangle, with its fixed
/// elements. Fixed edges and triangles are fixed setwise.
struct Automorphism {
  std::vector<Vertex> image;
  int order = 1;
  std::vector<Vertex> fixed_vertices;
  std::vector<Edge> fixed_edges;
  std::vector<int> fixed_triangles;
  /// Empty for non-orientable complexes.
  std::optional<bool> orientation_preserving;

  Vertex operator()(Vertex v) const { return image[v]; }
  bool is_identity() const { return order == 1; }
  bool operator==(const Automorphism& other) const { return image == other.image; }
};

using Permutation = std::vector<Vertex>;

inline Permutation identity_permutation(int n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

/// (a ∘ b)(v) = a(b(v))
inline Permutation compose(const Permutation& a, const Permutation& b) {
  Permutation out(b.size());
  for (std::size_t v = 0; v < b.size(); ++v) out[v] = a[b[v]];
  return out;
}

inline Permutation inverse(const Permutation& a) {
  Permutation out(a.size());
  for (std::size_t v = 0; v < a.size(); ++v) out[a[v]] = static_cast<Vertex>(v);
  return out;
}

inline int permutation_order(const Permutation& p) {
  const Permutation id = identity_permutation(static_cast<int>(p.size()));
  Permutation cur = p;
  int k = 1;
  while (cur != id) {
    cur = compose(p, cur);
    ++k;
  }
  return k;
}

inline bool is_automorphism(const SurfaceComplex& c, const Permutation& p) {
  if (static_cast<int>(p.size()) != c.vertex_count()) return false;
  std::vector<bool> hit(p.size(), false);
  for (Vertex v : p) {
    if (v < 0 || v >= c.vertex_count() || hit[v]) return false;
    hit[v] = true;
  }
  for (const Triangle& t : c.triangles())
    if (c.triangle_index(p[t[0]], p[t[1]], p[t[2]]) < 0) return false;
  return true;
}

namespace detail {

// Oriented vertex cycle of triangle i under the coherent orientation.
inline Triangle oriented_cycle(const SurfaceComplex& c, int i) {
  const Triangle& t = c.triangle(i);
  return (*c.orientation())[i] > 0 ? t : Triangle{t[0], t[2], t[1]};
}

inline bool same_cyclic_order(const Triangle& a, const Triangle& b) {
  for (int r = 0; r < 3; ++r)
    if (a[0] == b[r] && a[1] == b[(r + 1) % 3] && a[2] == b[(r + 2) % 3]) return true;
  return false;
}

}  // namespace detail

/// Fixed vertices, setwise fixed edges and triangles, and (orientable
/// complexes only) whether the coherent orientation is preserved.
inline Automorphism make_automorphism(const SurfaceComplex& c, Permutation image) {
  if (!is_automorphism(c, image)) throw std::invalid_argument("permutation is not an automorphism");
  Automorphism a;
  a.order = permutation_order(image);
  for (Vertex v = 0; v < c.vertex_count(); ++v)
    if (image[v] == v) a.fixed_vertices.push_back(v);
  for (const Edge& e : c.edges())
    if (make_edge(image[e[0]], image[e[1]]) == e) a.fixed_edges.push_back(e);
  for (int i = 0; i < c.triangle_count(); ++i) {
    const Triangle& t = c.triangle(i);
    if (make_triangle(image[t[0]], image[t[1]], image[t[2]]) == t) a.fixed_triangles.push_back(i);
  }
  if (c.orientable()) {
    const Triangle src = detail::oriented_cycle(c, 0);
    const Triangle mapped{image[src[0]], image[src[1]], image[src[2]]};
    const int target = c.triangle_index(mapped[0], mapped[1], mapped[2]);
    a.orientation_preserving = detail::same_cyclic_order(mapped, detail::oriented_cycle(c, target));
  }
  a.image = std::move(image);
  return a;
}

namespace detail {

// Extends base[k] -> target[k] across edge adjacencies. Returns the vertex map
// if it extends consistently to a bijection preserving all triangles.
inline std::optional<Permutation> propagate_flag(const SurfaceComplex& c, int base_index,
                                                 const Triangle& base, int target_index,
                                                 const Triangle& target) {
  const int n = c.vertex_count();
  Permutation map(n, -1), inv(n, -1);
  auto assign = [&](Vertex from, Vertex to) {
    if (map[from] == to) return true;
    if (map[from] >= 0 || inv[to] >= 0) return false;
    map[from] = to;
    inv[to] = from;
    return true;
  };
  for (int k = 0; k < 3; ++k)
    if (!assign(base[k], target[k])) return std::nullopt;
  std::vector<int> image_of(c.triangle_count(), -1);
  image_of[base_index] = target_index;
  std::vector<int> queue{base_index};
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const int ti = queue[q];
    const Triangle& t = c.triangle(ti);
    for (int k = 0; k < 3; ++k) {
      const Vertex a = t[k], b = t[(k + 1) % 3];
      const int nb = c.opposite_triangle(ti, a, b);
      const int nb_image = c.opposite_triangle(image_of[ti], map[a], map[b]);
      const Triangle& src = c.triangle(nb);
      const Triangle& dst = c.triangle(nb_image);
      const Vertex x = src[0] + src[1] + src[2] - a - b;
      const Vertex y = dst[0] + dst[1] + dst[2] - map[a] - map[b];
      if (!assign(x, y)) return std::nullopt;
      if (image_of[nb] < 0) {
        image_of[nb] = nb_image;
        queue.push_back(nb);
      } else if (image_of[nb] != nb_image) {
        return std::nullopt;
      }
    }
  }
  for (Vertex v = 0; v < n; ++v)
    if (map[v] < 0) return std::nullopt;
  return map;
}

}  // namespace detail

/// The full automorphism group, identity first, then in lexicographic order of
/// the vertex images. A fixed base triangle is mapped onto every triangle in
/// all six ways and each such flag map is propagated across the surface.
inline std::vector<Automorphism> enumerate_automorphisms(const SurfaceComplex& c) {
  const Triangle base = c.triangle(0);
  std::set<Permutation> found;
  for (int ti = 0; ti < c.triangle_count(); ++ti) {
    Triangle target = c.triangle(ti);
    do {
      if (auto map = detail::propagate_flag(c, 0, base, ti, target)) found.insert(*map);
    } while (std::next_permutation(target.begin(), target.end()));
  }
  std::vector<Automorphism> out;
  const Permutation id = identity_permutation(c.vertex_count());
  out.push_back(make_automorphism(c, id));
  for (const Permutation& p : found)
    if (p != id) out.push_back(make_automorphism(c, p));
  return out;
}

/// Orbits of the group generated by `generators`, each sorted, ordered by
/// their smallest vertex.
inline std::vector<std::vector<Vertex>> vertex_orbits(std::span<const Permutation> generators,
                                                      int vertex_count) {
  std::vector<int> orbit_of(vertex_count, -1);
  std::vector<std::vector<Vertex>> orbits;
  for (Vertex v = 0; v < vertex_count; ++v) {
    if (orbit_of[v] >= 0) continue;
    const int id = static_cast<int>(orbits.size());
    std::vector<Vertex> orbit{v};
    orbit_of[v] = id;
    for (std::size_t q = 0; q < orbit.size(); ++q)
      for (const Permutation& g : generators) {
        const Vertex w = g[orbit[q]];
        if (orbit_of[w] < 0) {
          orbit_of[w] = id;
          orbit.push_back(w);
        }
      }
    std::sort(orbit.begin(), orbit.end());
    orbits.push_back(std::move(orbit));
  }
  return orbits;
}

inline std::vector<std::vector<Vertex>> vertex_orbits(const Automorphism& a,
                                                      const SurfaceComplex& c) {
  const Permutation gens[1] = {a.image};
  return vertex_orbits(gens, c.vertex_count());
}

/// Cycle notation with 1-based labels, fixed points omitted; "()" for the
/// identity.
inline std::string cycle_notation(const Permutation& p) {
  std::string out;
  std::vector<bool> seen(p.size(), false);
  for (std::size_t v = 0; v < p.size(); ++v) {
    if (seen[v] || p[v] == static_cast<Vertex>(v)) continue;
    out += '(';
    std::size_t w = v;
    bool first = true;
    while (!seen[w]) {
      seen[w] = true;
      if (!first) out += ' ';
      out += std::to_string(w + 1);
      first = false;
      w = static_cast<std::size_t>(p[w]);
    }
    out += ')';
  }
  return out.empty() ? "()" : out;
}

/// Inverse of cycle_notation for a permutation of `n` vertices.
inline Permutation parse_cycle_notation(const std::string& text, int n) {
  Permutation p = identity_permutation(n);
  std::vector<Vertex> cycle;
  std::string num;
  auto flush_num = [&] {
    if (num.empty()) return;
    const int v = std::stoi(num) - 1;
    if (v < 0 || v >= n) throw std::invalid_argument("cycle label out of range");
    cycle.push_back(v);
    num.clear();
  };
  bool open = false;
  for (char ch : text) {
    if (ch == '(') {
      if (open) throw std::invalid_argument("nested cycle");
      open = true;
      cycle.clear();
    } else if (ch == ')') {
      if (!open) throw std::invalid_argument("unbalanced cycle");
      flush_num();
      for (std::size_t i = 0; i < cycle.size(); ++i) p[cycle[i]] = cycle[(i + 1) % cycle.size()];
      open = false;
    } else if (ch >= '0' && ch <= '9') {
      num += ch;
    } else if (ch == ' ' || ch == ',') {
      flush_num();
    } else {
      throw std::invalid_argument(std::string("unexpected character in cycle notation: ") + ch);
    }
  }
  if (open) throw std::invalid_argument("unterminated cycle");
  std::vector<bool> hit(n, false);
  for (Vertex v : p) {
    if (hit[v]) throw std::invalid_argument("cycles are not disjoint");
    hit[v] = true;
  }
  return p;
}

/// All elements of the group generated by `generators`.
inline std::vector<Permutation> generated_group(std::span<const Permutation> generators, int n) {
  std::set<Permutation> group{identity_permutation(n)};
  std::vector<Permutation> frontier{identity_permutation(n)};
  while (!frontier.empty()) {
    std::vector<Permutation> next;
    for (const Permutation& g : frontier)
      for (const Permutation& s : generators) {
        Permutation h = compose(s, g);
        if (group.insert(h).second) next.push_back(std::move(h));
      }
    frontier = std::move(next);
  }
  return {group.begin(), group.end()};
}

/// A small generating set of the whole group, picked greedily in enumeration
/// order.
inline std::vector<Permutation> generating_set(const std::vector<Automorphism>& group) {
  if (group.empty()) return {};
  const int n = static_cast<int>(group.front().image.size());
  std::vector<Permutation> gens;
  std::set<Permutation> span{identity_permutation(n)};
  for (const Automorphism& a : group) {
    if (span.count(a.image)) continue;
    gens.push_back(a.image);
    const auto g = generated_group(gens, n);
    span = std::set<Permutation>(g.begin(), g.end());
  }
  return gens;
}

}  // namespace polyreal
