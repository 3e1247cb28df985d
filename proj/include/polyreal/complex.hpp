#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace polyreal {

// Vertices are 0-based internally; all text I/O uses 1-based labels.
using Vertex = int;
using Triangle = std::array<Vertex, 3>;  // ascending
using Edge = std::array<Vertex, 2>;      // ascending

class ComplexError : public std::runtime_error {
 public:
  enum class Kind {
    Syntax,
    NonContiguousLabels,
    DegenerateTriangle,
    DuplicateTriangle,
    NotClosedSurface,
    Disconnected,
  };

  ComplexError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

inline Triangle make_triangle(Vertex a, Vertex b, Vertex c) {
  Triangle t{a, b, c};
  std::sort(t.begin(), t.end());
  return t;
}

inline Edge make_edge(Vertex a, Vertex b) { return a < b ? Edge{a, b} : Edge{b, a}; }

inline bool contains(const Triangle& t, Vertex v) { return t[0] == v || t[1] == v || t[2] == v; }

inline int shared_vertex_count(const Triangle& s, const Triangle& t) {
  int count = 0;
  for (Vertex v : s) count += contains(t, v) ? 1 : 0;
  return count;
}

struct Classification {
  bool orientable = false;
  int genus = 0;  // g for M_g, h for N_h

  bool operator==(const Classification&) const = default;
};

/// A triangulated closed connected surface. Immutable once constructed; the
/// constructor validates the closed-surface condition (every edge in exactly
/// two triangles, every vertex link a single cycle) and connectivity.
class SurfaceComplex {
 public:
  /// Triangles use 0-based labels covering 0..vertex_count-1.
  SurfaceComplex(int vertex_count, std::vector<Triangle> triangles);

  int vertex_count() const { return vertex_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int triangle_count() const { return static_cast<int>(triangles_.size()); }

  const std::vector<Triangle>& triangles() const { return triangles_; }
  const Triangle& triangle(int index) const { return triangles_[index]; }
  const std::vector<Edge>& edges() const { return edges_; }

  std::array<int, 3> f_vector() const { return {vertex_count(), edge_count(), triangle_count()}; }
  int euler_characteristic() const { return vertex_count() - edge_count() + triangle_count(); }
  bool orientable() const { return orientation_.has_value(); }
  int genus() const {
    int chi = euler_characteristic();
    return orientable() ? (2 - chi) / 2 : 2 - chi;
  }
  /// "M0" for the sphere, "M<g>" orientable, "N<h>" non-orientable.
  std::string surface_name() const {
    return (orientable() ? "M" : "N") + std::to_string(genus());
  }

  /// Edge id, or -1 if a and b are not joined.
  int edge_id(Vertex a, Vertex b) const { return edge_lookup_[a * vertex_count_ + b]; }
  bool has_edge(Vertex a, Vertex b) const { return a != b && edge_id(a, b) >= 0; }

  /// The two triangles incident to an existing edge.
  const std::array<int, 2>& edge_triangles(Vertex a, Vertex b) const {
    return edge_triangles_[edge_id(a, b)];
  }
  /// The triangle across edge {a, b} from triangle `from`.
  int opposite_triangle(int from, Vertex a, Vertex b) const {
    const auto& pair = edge_triangles(a, b);
    return pair[0] == from ? pair[1] : pair[0];
  }

  /// Index of the triangle {a, b, c}, or -1.
  int triangle_index(Vertex a, Vertex b, Vertex c) const {
    auto it = triangle_lookup_.find(make_triangle(a, b, c));
    return it == triangle_lookup_.end() ? -1 : it->second;
  }

  /// Incident triangles of v in cyclic order around v.
  const std::vector<int>& vertex_star(Vertex v) const { return stars_[v]; }
  /// Neighbours of v in the same cyclic order as the star.
  const std::vector<Vertex>& vertex_link(Vertex v) const { return links_[v]; }
  int degree(Vertex v) const { return static_cast<int>(links_[v].size()); }

  bool adjacent(int t1, int t2) const {
    return t1 != t2 && shared_vertex_count(triangles_[t1], triangles_[t2]) == 2;
  }

  /// Coherent orientation (+1: ascending order t0->t1->t2 is positive, -1:
  /// reversed), present iff the surface is orientable.
  const std::optional<std::vector<int>>& orientation() const { return orientation_; }

  bool operator==(const SurfaceComplex& other) const {
    return vertex_count_ == other.vertex_count_ && triangles_ == other.triangles_;
  }

 private:
  int vertex_count_;
  std::vector<Triangle> triangles_;
  std::vector<Edge> edges_;
  std::vector<int> edge_lookup_;
  std::vector<std::array<int, 2>> edge_triangles_;
  std::map<Triangle, int> triangle_lookup_;
  std::vector<std::vector<int>> stars_;
  std::vector<std::vector<Vertex>> links_;
  std::optional<std::vector<int>> orientation_;
};

namespace detail {

// +1 if the directed edge a->b follows the ascending cyclic order of t.
inline int edge_direction(const Triangle& t, Vertex a, Vertex b) {
  for (int k = 0; k < 3; ++k)
    if (t[k] == a && t[(k + 1) % 3] == b) return 1;
  return -1;
}

}  // namespace detail

/// Attempts a coherent orientation by breadth-first propagation from `seed`
/// across shared edges. Returns nullopt when some edge is traversed
/// inconsistently, i.e. the surface is non-orientable.
inline std::optional<std::vector<int>> propagate_orientation(const SurfaceComplex& c, int seed) {
  std::vector<int> orient(c.triangle_count(), 0);
  orient[seed] = 1;
  std::vector<int> queue{seed};
  for (std::size_t q = 0; q < queue.size(); ++q) {
    int i = queue[q];
    const Triangle& t = c.triangle(i);
    for (int k = 0; k < 3; ++k) {
      Vertex a = t[k], b = t[(k + 1) % 3];
      int j = c.opposite_triangle(i, a, b);
      // neighbours must traverse the shared edge in opposite directions
      int want = -orient[i] * detail::edge_direction(t, a, b) *
                 detail::edge_direction(c.triangle(j), a, b);
      if (orient[j] == 0) {
        orient[j] = want;
        queue.push_back(j);
      } else if (orient[j] != want) {
        return std::nullopt;
      }
    }
  }
  return orient;
}

inline SurfaceComplex::SurfaceComplex(int vertex_count, std::vector<Triangle> triangles)
    : vertex_count_(vertex_count), triangles_(std::move(triangles)) {
  using Kind = ComplexError::Kind;
  if (vertex_count_ <= 0) throw ComplexError(Kind::NonContiguousLabels, "no vertices");
  std::vector<bool> used(vertex_count_, false);
  for (Triangle& t : triangles_) {
    for (Vertex v : t) {
      if (v < 0 || v >= vertex_count_)
        throw ComplexError(Kind::NonContiguousLabels, "vertex label out of range");
      used[v] = true;
    }
    std::sort(t.begin(), t.end());
    if (t[0] == t[1] || t[1] == t[2])
      throw ComplexError(Kind::DegenerateTriangle, "triangle with repeated vertex");
  }
  if (std::find(used.begin(), used.end(), false) != used.end())
    throw ComplexError(Kind::NonContiguousLabels, "vertex labels are not contiguous");
  std::sort(triangles_.begin(), triangles_.end());
  if (std::adjacent_find(triangles_.begin(), triangles_.end()) != triangles_.end())
    throw ComplexError(Kind::DuplicateTriangle, "duplicate triangle");
  if (triangles_.empty()) throw ComplexError(Kind::NotClosedSurface, "no triangles");

  for (int i = 0; i < triangle_count(); ++i) triangle_lookup_.emplace(triangles_[i], i);

  // edges with their incident triangles
  std::map<Edge, std::vector<int>> incidence;
  for (int i = 0; i < triangle_count(); ++i) {
    const Triangle& t = triangles_[i];
    incidence[{t[0], t[1]}].push_back(i);
    incidence[{t[0], t[2]}].push_back(i);
    incidence[{t[1], t[2]}].push_back(i);
  }
  edge_lookup_.assign(static_cast<std::size_t>(vertex_count_) * vertex_count_, -1);
  for (const auto& [edge, tris] : incidence) {
    if (tris.size() != 2)
      throw ComplexError(Kind::NotClosedSurface,
                         "edge [" + std::to_string(edge[0] + 1) + "," + std::to_string(edge[1] + 1) +
                             "] lies in " + std::to_string(tris.size()) + " triangle(s)");
    int id = static_cast<int>(edges_.size());
    edges_.push_back(edge);
    edge_triangles_.push_back({tris[0], tris[1]});
    edge_lookup_[edge[0] * vertex_count_ + edge[1]] = id;
    edge_lookup_[edge[1] * vertex_count_ + edge[0]] = id;
  }

  // vertex stars: walk around each vertex; the walk must visit every
  // incident triangle exactly once (single closed cycle in the link)
  std::vector<std::vector<int>> incident(vertex_count_);
  for (int i = 0; i < triangle_count(); ++i)
    for (Vertex v : triangles_[i]) incident[v].push_back(i);
  stars_.resize(vertex_count_);
  links_.resize(vertex_count_);
  for (Vertex v = 0; v < vertex_count_; ++v) {
    int start = incident[v].front();
    int cur = start;
    const Triangle& first = triangles_[start];
    Vertex pivot = first[0] == v ? first[1] : first[0];
    do {
      stars_[v].push_back(cur);
      links_[v].push_back(pivot);
      const Triangle& t = triangles_[cur];
      Vertex other = t[0] + t[1] + t[2] - v - pivot;
      cur = opposite_triangle(cur, v, other);
      pivot = other;
    } while (cur != start);
    if (stars_[v].size() != incident[v].size())
      throw ComplexError(Kind::NotClosedSurface,
                         "link of vertex " + std::to_string(v + 1) + " is not a single cycle");
  }

  // connectivity over edge adjacency
  std::vector<bool> seen(triangle_count(), false);
  std::vector<int> queue{0};
  seen[0] = true;
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const Triangle& t = triangles_[queue[q]];
    for (int k = 0; k < 3; ++k) {
      int j = opposite_triangle(queue[q], t[k], t[(k + 1) % 3]);
      if (!seen[j]) {
        seen[j] = true;
        queue.push_back(j);
      }
    }
  }
  if (static_cast<int>(queue.size()) != triangle_count())
    throw ComplexError(Kind::Disconnected, "triangulation is disconnected");

  orientation_ = propagate_orientation(*this, 0);
}

inline Classification classify(const SurfaceComplex& c) { return {c.orientable(), c.genus()}; }

/// Minimum vertex count of a triangulation with Euler characteristic chi:
/// the least n with 2n - 7 >= sqrt(49 - 24 chi), evaluated in integers.
inline int heawood_minimum(int chi) {
  if (chi > 2) throw std::invalid_argument("euler characteristic of a closed surface is at most 2");
  const long long disc = 49 - 24LL * chi;
  int n = 4;
  while (2LL * n - 7 < 0 || (2LL * n - 7) * (2LL * n - 7) < disc) ++n;
  return n;
}

/// Parses one triangulation in nested-list form, e.g. "[[1,2,3],[1,2,4],...]".
inline SurfaceComplex parse_triangulation(std::string_view text) {
  using Kind = ComplexError::Kind;
  std::size_t pos = 0;
  auto fail = [&](const std::string& msg) -> ComplexError {
    return ComplexError(Kind::Syntax, msg + " at column " + std::to_string(pos + 1));
  };
  auto skip_ws = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\r' ||
                                 text[pos] == '\n'))
      ++pos;
  };
  auto expect = [&](char ch) {
    skip_ws();
    if (pos >= text.size() || text[pos] != ch) throw fail(std::string("expected '") + ch + "'");
    ++pos;
  };
  auto number = [&] {
    skip_ws();
    std::size_t start = pos;
    long long value = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      value = value * 10 + (text[pos] - '0');
      if (value > 1'000'000) throw fail("vertex label too large");
      ++pos;
    }
    if (pos == start) throw fail("expected vertex label");
    return static_cast<int>(value);
  };

  std::vector<std::array<int, 3>> raw;
  expect('[');
  skip_ws();
  if (pos < text.size() && text[pos] == ']') throw fail("empty triangle list");
  while (true) {
    expect('[');
    std::array<int, 3> t{};
    for (int k = 0; k < 3; ++k) {
      if (k) expect(',');
      t[k] = number();
    }
    expect(']');
    raw.push_back(t);
    skip_ws();
    if (pos < text.size() && text[pos] == ',') {
      ++pos;
      continue;
    }
    break;
  }
  expect(']');
  skip_ws();
  if (pos != text.size()) throw fail("trailing characters");

  int max_label = 0;
  for (const auto& t : raw)
    for (int v : t) {
      if (v < 1) throw ComplexError(Kind::NonContiguousLabels, "vertex labels start at 1");
      max_label = std::max(max_label, v);
    }
  std::vector<Triangle> tris;
  tris.reserve(raw.size());
  for (const auto& t : raw) tris.push_back({t[0] - 1, t[1] - 1, t[2] - 1});
  return SurfaceComplex(max_label, std::move(tris));
}

/// Canonical 1-based list form; parse_triangulation(to_list_string(c)) == c.
inline std::string to_list_string(const SurfaceComplex& c) {
  std::string out = "[";
  for (int i = 0; i < c.triangle_count(); ++i) {
    const Triangle& t = c.triangle(i);
    if (i) out += ',';
    out += '[' + std::to_string(t[0] + 1) + ',' + std::to_string(t[1] + 1) + ',' +
           std::to_string(t[2] + 1) + ']';
  }
  out += ']';
  return out;
}

/// The same complex with vertex v renamed to relabel[v].
inline SurfaceComplex relabeled(const SurfaceComplex& c, const std::vector<Vertex>& relabel) {
  std::vector<Triangle> tris;
  tris.reserve(c.triangle_count());
  for (const Triangle& t : c.triangles())
    tris.push_back(make_triangle(relabel[t[0]], relabel[t[1]], relabel[t[2]]));
  return SurfaceComplex(c.vertex_count(), std::move(tris));
}

}  // namespace polyreal
