#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "polyreal/complex.hpp"

namespace polyreal {

// Exact arithmetic bounds. Orientation determinants are evaluated in signed
// 128-bit integers, which is exact for |coordinate| <= 2^20 (|det| < 6 * 2^63).
// Intersection segments carry rational points whose numerators grow to about
// 96 * C^4 and whose squared lengths are formed in 256-bit integers; both are
// exact for |coordinate| <= 2^16.
inline constexpr std::int64_t kPredicateCoordinateBound = std::int64_t{1} << 20;
inline constexpr std::int64_t kIntersectionCoordinateBound = std::int64_t{1} << 16;

using int128 = __int128;
using int256 = boost::multiprecision::int256_t;
using int512 = boost::multiprecision::int512_t;

struct LatticePoint {
  std::int64_t x = 0, y = 0, z = 0;

  constexpr std::int64_t operator[](int k) const { return k == 0 ? x : (k == 1 ? y : z); }
  constexpr LatticePoint operator+(const LatticePoint& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr LatticePoint operator-(const LatticePoint& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr LatticePoint operator-() const { return {-x, -y, -z}; }
  constexpr LatticePoint operator*(std::int64_t s) const { return {x * s, y * s, z * s}; }
  constexpr auto operator<=>(const LatticePoint&) const = default;

  constexpr std::int64_t max_abs() const {
    const std::int64_t ax = x < 0 ? -x : x, ay = y < 0 ? -y : y, az = z < 0 ? -z : z;
    return ax > ay ? (ax > az ? ax : az) : (ay > az ? ay : az);
  }
};

using TrianglePoints = std::array<LatticePoint, 3>;

inline constexpr LatticePoint cross(const LatticePoint& a, const LatticePoint& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline constexpr std::int64_t dot(const LatticePoint& a, const LatticePoint& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline int sign(int128 v) { return (v > 0) - (v < 0); }

/// det(b - a, c - a, d - a) in exact 128-bit arithmetic.
inline int128 orientation_det(const LatticePoint& a, const LatticePoint& b, const LatticePoint& c,
                              const LatticePoint& d) {
  assert(a.max_abs() <= kPredicateCoordinateBound && b.max_abs() <= kPredicateCoordinateBound &&
         c.max_abs() <= kPredicateCoordinateBound && d.max_abs() <= kPredicateCoordinateBound);
  auto det = [&]<typename Int>(Int) {
    const Int bx = b.x - a.x, by = b.y - a.y, bz = b.z - a.z;
    const Int cx = c.x - a.x, cy = c.y - a.y, cz = c.z - a.z;
    const Int dx = d.x - a.x, dy = d.y - a.y, dz = d.z - a.z;
    return int128(bx * (cy * dz - cz * dy) - by * (cx * dz - cz * dx) + bz * (cx * dy - cy * dx));
  };
  // differences below 2^17 keep every term below 2^54
  constexpr std::int64_t small = kIntersectionCoordinateBound;
  if (a.max_abs() <= small && b.max_abs() <= small && c.max_abs() <= small && d.max_abs() <= small)
    return det(std::int64_t{});
  return det(int128{});
}

/// Sign of det(b - a, c - a, d - a); zero iff the four points are coplanar.
inline int orientation(const LatticePoint& a, const LatticePoint& b, const LatticePoint& c,
                       const LatticePoint& d) {
  return sign(orientation_det(a, b, c, d));
}

namespace detail {

// Index of the coordinate to drop when projecting a plane with normal n.
inline int dominant_axis(const LatticePoint& n) {
  const std::int64_t ax = std::llabs(n.x), ay = std::llabs(n.y), az = std::llabs(n.z);
  if (ax >= ay && ax >= az) return 0;
  return ay >= az ? 1 : 2;
}

struct P2 {
  std::int64_t u, v;
};

inline P2 project(const LatticePoint& p, int drop) {
  switch (drop) {
    case 0:
      return {p.y, p.z};
    case 1:
      return {p.z, p.x};
    default:
      return {p.x, p.y};
  }
}

inline int orient2d(P2 a, P2 b, P2 c) {
  const int128 d = int128(b.u - a.u) * (c.v - a.v) - int128(b.v - a.v) * (c.u - a.u);
  return sign(d);
}

// p on closed segment [a, b], all collinear in the projection.
inline bool on_segment_2d(P2 a, P2 b, P2 p) {
  return std::min(a.u, b.u) <= p.u && p.u <= std::max(a.u, b.u) && std::min(a.v, b.v) <= p.v &&
         p.v <= std::max(a.v, b.v);
}

inline bool segments_meet_2d(P2 p, P2 q, P2 r, P2 s) {
  const int o1 = orient2d(p, q, r), o2 = orient2d(p, q, s);
  const int o3 = orient2d(r, s, p), o4 = orient2d(r, s, q);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 == 0 && on_segment_2d(p, q, r)) return true;
  if (o2 == 0 && on_segment_2d(p, q, s)) return true;
  if (o3 == 0 && on_segment_2d(r, s, p)) return true;
  if (o4 == 0 && on_segment_2d(r, s, q)) return true;
  return false;
}

inline bool point_in_triangle_2d(P2 p, P2 a, P2 b, P2 c) {
  const int s1 = orient2d(a, b, p), s2 = orient2d(b, c, p), s3 = orient2d(c, a, p);
  return !((s1 < 0 || s2 < 0 || s3 < 0) && (s1 > 0 || s2 > 0 || s3 > 0));
}

inline bool collinear(const LatticePoint& a, const LatticePoint& b, const LatticePoint& c) {
  return cross(b - a, c - a) == LatticePoint{};
}

// Axis to drop for a set of coplanar points that may all be collinear; for a
// collinear set the chosen axis keeps the line's projection non-degenerate.
inline int projection_axis(std::span<const LatticePoint> pts) {
  for (std::size_t i = 1; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const LatticePoint n = cross(pts[i] - pts[0], pts[j] - pts[0]);
      if (n != LatticePoint{}) return dominant_axis(n);
    }
  // collinear (or coincident): drop an axis orthogonal to the dominant
  // direction so that the line projects injectively
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const LatticePoint d = pts[i] - pts[0];
    if (d != LatticePoint{}) {
      const int keep = dominant_axis(d);
      return (keep + 1) % 3;
    }
  }
  return 2;
}

}  // namespace detail

/// Closed point-on-segment test.
inline bool point_on_segment(const LatticePoint& p, const LatticePoint& a, const LatticePoint& b) {
  if (!detail::collinear(a, b, p)) return false;
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y) && std::min(a.z, b.z) <= p.z && p.z <= std::max(a.z, b.z);
}

/// Closed point-in-triangle test; degenerate triangles are treated as the
/// union of their edges.
inline bool point_in_triangle(const LatticePoint& p, const LatticePoint& a, const LatticePoint& b,
                              const LatticePoint& c) {
  const LatticePoint n = cross(b - a, c - a);
  if (n == LatticePoint{})
    return point_on_segment(p, a, b) || point_on_segment(p, b, c) || point_on_segment(p, a, c);
  if (orientation(a, b, c, p) != 0) return false;
  const int drop = detail::dominant_axis(n);
  return detail::point_in_triangle_2d(detail::project(p, drop), detail::project(a, drop),
                                      detail::project(b, drop), detail::project(c, drop));
}

/// Closed segment-segment intersection test in 3-space.
inline bool segments_intersect(const LatticePoint& p, const LatticePoint& q, const LatticePoint& r,
                               const LatticePoint& s) {
  if (orientation(p, q, r, s) != 0) return false;
  const std::array<LatticePoint, 4> pts{p, q, r, s};
  const int drop = detail::projection_axis(pts);
  return detail::segments_meet_2d(detail::project(p, drop), detail::project(q, drop),
                                  detail::project(r, drop), detail::project(s, drop));
}

/// Closed segment-triangle intersection test in 3-space.
inline bool segment_meets_triangle(const LatticePoint& p, const LatticePoint& q,
                                   const LatticePoint& a, const LatticePoint& b,
                                   const LatticePoint& c) {
  const int sp = orientation(a, b, c, p), sq = orientation(a, b, c, q);
  if (sp * sq > 0) return false;
  if (sp == 0 && sq == 0) {
    return point_in_triangle(p, a, b, c) || point_in_triangle(q, a, b, c) ||
           segments_intersect(p, q, a, b) || segments_intersect(p, q, b, c) ||
           segments_intersect(p, q, a, c);
  }
  if (detail::collinear(a, b, c))
    return segments_intersect(p, q, a, b) || segments_intersect(p, q, b, c) ||
           segments_intersect(p, q, a, c);
  // the segment crosses (or touches) the plane in exactly one point; it lies
  // in the closed triangle iff line pq sees the edges with consistent signs
  const int s1 = orientation(p, q, a, b), s2 = orientation(p, q, b, c), s3 = orientation(p, q, c, a);
  return !((s1 < 0 || s2 < 0 || s3 < 0) && (s1 > 0 || s2 > 0 || s3 > 0));
}

/// True iff the points are pairwise distinct and no four are coplanar.
inline bool in_general_position(std::span<const LatticePoint> pts) {
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (pts[i] == pts[j]) return false;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        for (std::size_t l = k + 1; l < n; ++l)
          if (orientation(pts[i], pts[j], pts[k], pts[l]) == 0) return false;
  return true;
}

/// General position restricted to the quadruples and pairs that involve at
/// least one of the `moved` indices (all other quadruples are assumed fine).
inline bool general_position_after_move(std::span<const LatticePoint> pts,
                                        std::span<const Vertex> moved) {
  const int n = static_cast<int>(pts.size());
  std::vector<char> is_moved(n, 0);
  for (Vertex v : moved) is_moved[v] = 1;
  for (Vertex v : moved)
    for (int w = 0; w < n; ++w)
      if (w != v && pts[w] == pts[v]) return false;
  // every quadruple containing a moved vertex, visited once via its first
  // moved member
  for (Vertex v : moved) {
    for (int i = 0; i < n; ++i) {
      if (i == v || (is_moved[i] && i < v)) continue;
      for (int j = i + 1; j < n; ++j) {
        if (j == v || (is_moved[j] && j < v)) continue;
        for (int k = j + 1; k < n; ++k) {
          if (k == v || (is_moved[k] && k < v)) continue;
          if (orientation(pts[v], pts[i], pts[j], pts[k]) == 0) return false;
        }
      }
    }
  }
  return true;
}

namespace detail {

inline bool vertex_avoids_triangles(const SurfaceComplex& c, std::span<const LatticePoint> pts,
                                    Vertex v) {
  for (const Triangle& t : c.triangles()) {
    if (contains(t, v)) continue;
    if (point_in_triangle(pts[v], pts[t[0]], pts[t[1]], pts[t[2]])) return false;
  }
  return true;
}

inline bool triangle_avoids_vertices(const SurfaceComplex& c, std::span<const LatticePoint> pts,
                                     const Triangle& t) {
  for (Vertex v = 0; v < c.vertex_count(); ++v) {
    if (contains(t, v)) continue;
    if (point_in_triangle(pts[v], pts[t[0]], pts[t[1]], pts[t[2]])) return false;
  }
  return true;
}

inline bool edge_avoids_edges(const SurfaceComplex& c, std::span<const LatticePoint> pts,
                              const Edge& e) {
  for (const Edge& f : c.edges()) {
    if (f[0] == e[0] || f[0] == e[1] || f[1] == e[0] || f[1] == e[1]) continue;
    if (segments_intersect(pts[e[0]], pts[e[1]], pts[f[0]], pts[f[1]])) return false;
  }
  return true;
}

}  // namespace detail

/// Injectivity, no vertex on a triangle not containing it, and no two
/// vertex-disjoint edges meeting. All tests exact.
inline bool in_relaxed_general_position(const SurfaceComplex& c,
                                        std::span<const LatticePoint> pts) {
  const int n = c.vertex_count();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (pts[i] == pts[j]) return false;
  for (Vertex v = 0; v < n; ++v)
    if (!detail::vertex_avoids_triangles(c, pts, v)) return false;
  const auto& edges = c.edges();
  for (std::size_t i = 0; i < edges.size(); ++i)
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      const Edge& e = edges[i];
      const Edge& f = edges[j];
      if (f[0] == e[0] || f[0] == e[1] || f[1] == e[0] || f[1] == e[1]) continue;
      if (segments_intersect(pts[e[0]], pts[e[1]], pts[f[0]], pts[f[1]])) return false;
    }
  return true;
}

/// Relaxed general position restricted to incidences involving a moved vertex.
inline bool relaxed_general_position_after_move(const SurfaceComplex& c,
                                                std::span<const LatticePoint> pts,
                                                std::span<const Vertex> moved) {
  const int n = c.vertex_count();
  for (Vertex v : moved)
    for (int w = 0; w < n; ++w)
      if (w != v && pts[w] == pts[v]) return false;
  for (Vertex v : moved) {
    if (!detail::vertex_avoids_triangles(c, pts, v)) return false;
    for (int ti : c.vertex_star(v))
      if (!detail::triangle_avoids_vertices(c, pts, c.triangle(ti))) return false;
    for (Vertex w : c.vertex_link(v))
      if (!detail::edge_avoids_edges(c, pts, make_edge(v, w))) return false;
  }
  return true;
}

/// Raised when an intersection computation meets a configuration that the
/// active position requirement should have excluded.
class DegenerateConfiguration : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact non-negative rational.
struct ExactRational {
  int256 num = 0;
  int256 den = 1;  // > 0

  friend bool operator==(const ExactRational& a, const ExactRational& b) {
    return int512(a.num) * int512(b.den) == int512(b.num) * int512(a.den);
  }
  friend std::strong_ordering operator<=>(const ExactRational& a, const ExactRational& b) {
    const int512 l = int512(a.num) * int512(b.den);
    const int512 r = int512(b.num) * int512(a.den);
    if (l < r) return std::strong_ordering::less;
    if (l > r) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Point with rational coordinates (x, y, z) / den, den > 0.
struct RationalPoint {
  int128 x = 0, y = 0, z = 0;
  int128 den = 1;

  static RationalPoint from(const LatticePoint& p) { return {p.x, p.y, p.z, 1}; }
  int128 coord(int k) const { return k == 0 ? x : (k == 1 ? y : z); }

  friend bool operator==(const RationalPoint& a, const RationalPoint& b) {
    return a.x * b.den == b.x * a.den && a.y * b.den == b.y * a.den && a.z * b.den == b.z * a.den;
  }
};

struct IntersectionSegment {
  RationalPoint first;
  RationalPoint second;
  double length = 0.0;

  /// |second - first|^2, exact.
  ExactRational squared_length() const {
    const int256 d1 = int256(first.den), d2 = int256(second.den);
    int256 num = 0;
    for (int k = 0; k < 3; ++k) {
      const int256 diff = int256(second.coord(k)) * d1 - int256(first.coord(k)) * d2;
      num += diff * diff;
    }
    const int256 den = d1 * d2;
    return {num, den * den};
  }
};

namespace detail {

// Contact of triangle `t` with a plane, as at most two points; `s` holds the
// exact signed volumes of t's vertices against that plane.
struct Chord {
  int count = 0;
  std::array<RationalPoint, 2> pts;
};

inline Chord plane_chord(const TrianglePoints& t, const std::array<int128, 3>& s) {
  Chord chord;
  auto push = [&](const RationalPoint& p) {
    if (chord.count < 2) chord.pts[chord.count++] = p;
  };
  for (int i = 0; i < 3; ++i)
    if (s[i] == 0) push(RationalPoint::from(t[i]));
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    if ((s[i] > 0 && s[j] < 0) || (s[i] < 0 && s[j] > 0)) {
      // t_i + s_i / (s_i - s_j) * (t_j - t_i)
      int128 den = s[i] - s[j];
      int128 nx = s[i] * t[j].x - s[j] * t[i].x;
      int128 ny = s[i] * t[j].y - s[j] * t[i].y;
      int128 nz = s[i] * t[j].z - s[j] * t[i].z;
      if (den < 0) {
        den = -den;
        nx = -nx;
        ny = -ny;
        nz = -nz;
      }
      push({nx, ny, nz, den});
    }
  }
  return chord;
}

// Coordinate along which the direction n1 x n2 is largest in magnitude
// (128-bit: normals reach 8 C^2).
inline int line_axis(const LatticePoint& n1, const LatticePoint& n2) {
  const int128 dx = int128(n1.y) * n2.z - int128(n1.z) * n2.y;
  const int128 dy = int128(n1.z) * n2.x - int128(n1.x) * n2.z;
  const int128 dz = int128(n1.x) * n2.y - int128(n1.y) * n2.x;
  const int128 ax = dx < 0 ? -dx : dx, ay = dy < 0 ? -dy : dy, az = dz < 0 ? -dz : dz;
  if (ax >= ay && ax >= az) return 0;
  return ay >= az ? 1 : 2;
}

// a.coord(k) <=> b.coord(k) as rationals
inline int compare_coord(const RationalPoint& a, const RationalPoint& b, int k) {
  const int128 l = a.coord(k) * b.den, r = b.coord(k) * a.den;
  return (l > r) - (l < r);
}

inline long double to_ld(int128 v) { return static_cast<long double>(v); }

inline double segment_length(const RationalPoint& a, const RationalPoint& b) {
  const long double den = to_ld(a.den) * to_ld(b.den);
  std::array<long double, 3> sq{};
  for (int k = 0; k < 3; ++k) {
    const int128 diff = b.coord(k) * a.den - a.coord(k) * b.den;
    const long double d = to_ld(diff) / den;
    sq[k] = d * d;
  }
  std::sort(sq.begin(), sq.end());
  return static_cast<double>(std::sqrt(sq[0] + sq[1] + sq[2]));
}

inline bool coplanar_overlap(const TrianglePoints& t1, const TrianglePoints& t2) {
  for (const LatticePoint& p : t1) {
    if (p == t2[0] || p == t2[1] || p == t2[2]) continue;
    if (point_in_triangle(p, t2[0], t2[1], t2[2])) return true;
  }
  for (const LatticePoint& p : t2) {
    if (p == t1[0] || p == t1[1] || p == t1[2]) continue;
    if (point_in_triangle(p, t1[0], t1[1], t1[2])) return true;
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const LatticePoint &a = t1[i], &b = t1[(i + 1) % 3];
      const LatticePoint &c = t2[j], &d = t2[(j + 1) % 3];
      if (a == c || a == d || b == c || b == d) continue;
      if (segments_intersect(a, b, c, d)) return true;
    }
  return false;
}

}  // namespace detail

/// Intersection of two closed triangles that do not share an edge, as a
/// segment of positive length, or nullopt. Contact in a single point (the
/// common vertex of two triangles sharing one) does not count as a segment.
///
/// Both triangles meet the line through the two planes in a chord; the
/// intersection of the triangles is the overlap of the two chords. Throws
/// DegenerateConfiguration on contacts that need four coplanar vertices or a
/// vertex touching the other triangle.
inline std::optional<IntersectionSegment> triangle_pair_intersection(const TrianglePoints& t1,
                                                                     const TrianglePoints& t2) {
  for (const auto* t : {&t1, &t2})
    for (const LatticePoint& p : *t)
      if (p.max_abs() > kIntersectionCoordinateBound)
        throw std::out_of_range("coordinate exceeds the exact intersection bound");

  // the normals stay below 2^35, so the signed volumes fit in 64 bits
  const LatticePoint n1 = cross(t1[1] - t1[0], t1[2] - t1[0]);
  const LatticePoint n2 = cross(t2[1] - t2[0], t2[2] - t2[0]);
  if (n1 == LatticePoint{} || n2 == LatticePoint{})
    throw DegenerateConfiguration("collinear triangle");
  // a triangle on one side of the other's plane, touching it only at a common
  // vertex, meets the other triangle in that vertex at most
  auto one_sided = [](const std::array<int128, 3>& sv, const TrianglePoints& t,
                      const TrianglePoints& other) {
    int pos = 0, neg = 0, zero = -1, zeros = 0;
    for (int i = 0; i < 3; ++i) {
      if (sv[i] > 0) ++pos;
      else if (sv[i] < 0) ++neg;
      else zero = i, ++zeros;
    }
    if (pos == 3 || neg == 3) return true;
    if (zeros != 1 || (pos && neg)) return false;
    return t[zero] == other[0] || t[zero] == other[1] || t[zero] == other[2];
  };
  std::array<int128, 3> s2{}, s1{};
  for (int i = 0; i < 3; ++i) s2[i] = dot(n1, t2[i] - t1[0]);
  if (one_sided(s2, t2, t1)) return std::nullopt;
  if (s2[0] == 0 && s2[1] == 0 && s2[2] == 0) {
    if (detail::coplanar_overlap(t1, t2))
      throw DegenerateConfiguration("overlapping coplanar triangles");
    return std::nullopt;
  }
  for (int i = 0; i < 3; ++i) s1[i] = dot(n2, t1[i] - t2[0]);
  if (one_sided(s1, t1, t2)) return std::nullopt;

  const detail::Chord c1 = detail::plane_chord(t1, s1);  // t1 ∩ plane(t2)
  const detail::Chord c2 = detail::plane_chord(t2, s2);  // t2 ∩ plane(t1)
  if (c1.count == 0 || c2.count == 0) return std::nullopt;

  // both chords lie on the line of the two planes; parametrize it by the
  // coordinate along which the line direction is largest
  const int axis = detail::line_axis(n1, n2);

  auto ordered = [&](const detail::Chord& ch) {
    std::array<RationalPoint, 2> e{ch.pts[0], ch.count == 2 ? ch.pts[1] : ch.pts[0]};
    if (detail::compare_coord(e[0], e[1], axis) > 0) std::swap(e[0], e[1]);
    return e;
  };
  const auto e1 = ordered(c1);
  const auto e2 = ordered(c2);
  const RationalPoint& lo = detail::compare_coord(e1[0], e2[0], axis) >= 0 ? e1[0] : e2[0];
  const RationalPoint& hi = detail::compare_coord(e1[1], e2[1], axis) <= 0 ? e1[1] : e2[1];
  const int cmp = detail::compare_coord(lo, hi, axis);
  if (cmp > 0) return std::nullopt;
  if (cmp == 0) {
    for (const LatticePoint& p : t1)
      if (lo == RationalPoint::from(p) && (p == t2[0] || p == t2[1] || p == t2[2]))
        return std::nullopt;
    throw DegenerateConfiguration("triangles touch in a single point");
  }
  return IntersectionSegment{lo, hi, detail::segment_length(lo, hi)};
}

}  // namespace polyreal
