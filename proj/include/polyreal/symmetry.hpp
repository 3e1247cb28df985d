#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "polyreal/automorphisms.hpp"
#include "polyreal/complex.hpp"
#include "polyreal/exactgeom.hpp"

namespace polyreal {

/// Integer 3x3 matrix acting on column vectors.
struct Matrix3 {
  std::array<std::array<int, 3>, 3> m{};

  static constexpr Matrix3 identity() { return {{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}}; }

  LatticePoint apply(const LatticePoint& p) const {
    return {m[0][0] * p.x + m[0][1] * p.y + m[0][2] * p.z,
            m[1][0] * p.x + m[1][1] * p.y + m[1][2] * p.z,
            m[2][0] * p.x + m[2][1] * p.y + m[2][2] * p.z};
  }
  Matrix3 operator*(const Matrix3& o) const {
    Matrix3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) r.m[i][j] += m[i][k] * o.m[k][j];
    return r;
  }
  Matrix3 transpose() const {
    Matrix3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
    return r;
  }
  Matrix3 power(int k) const {
    Matrix3 r = identity();
    for (int i = 0; i < k; ++i) r = r * *this;
    return r;
  }
  int determinant() const {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  }
  bool operator==(const Matrix3&) const = default;
};

enum class IsometryKind { Mirror, Rot2, Rot3, Rot4, Inversion, RotRef4, RotRef6, D2 };

inline std::string_view kind_name(IsometryKind kind) {
  switch (kind) {
    case IsometryKind::Mirror: return "MIRROR";
    case IsometryKind::Rot2: return "ROT2";
    case IsometryKind::Rot3: return "ROT3";
    case IsometryKind::Rot4: return "ROT4";
    case IsometryKind::Inversion: return "INVERSION";
    case IsometryKind::RotRef4: return "ROTREF4";
    case IsometryKind::RotRef6: return "ROTREF6";
    case IsometryKind::D2: return "D2";
  }
  return "?";
}

inline std::optional<IsometryKind> parse_kind(std::string_view text) {
  std::string upper(text);
  for (char& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  for (auto kind : {IsometryKind::Mirror, IsometryKind::Rot2, IsometryKind::Rot3, IsometryKind::Rot4,
                    IsometryKind::Inversion, IsometryKind::RotRef4, IsometryKind::RotRef6,
                    IsometryKind::D2})
    if (kind_name(kind) == upper) return kind;
  return std::nullopt;
}

/// An isometry of R^3 preserving Z^3 (or, for D2, the pair of commuting
/// half-turns generating the group).
struct LatticeIsometry {
  IsometryKind kind;
  std::vector<Matrix3> matrices;
  int order;
  std::string fixed_set;

  int determinant() const { return matrices.front().determinant(); }
  bool is_rotation() const {
    return kind == IsometryKind::Rot2 || kind == IsometryKind::Rot3 || kind == IsometryKind::Rot4;
  }
};

/// The lattice-compatible symmetry types with their canonical matrices.
/// Three-fold types use the body diagonal (1,1,1).
inline const std::vector<LatticeIsometry>& isometry_catalog() {
  static const std::vector<LatticeIsometry> catalog = [] {
    auto mat = [](std::array<std::array<int, 3>, 3> rows) { return Matrix3{rows}; };
    std::vector<LatticeIsometry> c;
    c.push_back({IsometryKind::Mirror, {mat({{{1, 0, 0}, {0, 1, 0}, {0, 0, -1}}})}, 2, "plane z=0"});
    c.push_back({IsometryKind::Rot2, {mat({{{-1, 0, 0}, {0, -1, 0}, {0, 0, 1}}})}, 2, "z axis"});
    c.push_back({IsometryKind::Rot3, {mat({{{0, 0, 1}, {1, 0, 0}, {0, 1, 0}}})}, 3, "axis (1,1,1)"});
    c.push_back({IsometryKind::Rot4, {mat({{{0, -1, 0}, {1, 0, 0}, {0, 0, 1}}})}, 4, "z axis"});
    c.push_back({IsometryKind::Inversion, {mat({{{-1, 0, 0}, {0, -1, 0}, {0, 0, -1}}})}, 2, "origin"});
    c.push_back({IsometryKind::RotRef4, {mat({{{0, 1, 0}, {-1, 0, 0}, {0, 0, -1}}})}, 4, "origin"});
    c.push_back({IsometryKind::RotRef6, {mat({{{0, 0, -1}, {-1, 0, 0}, {0, -1, 0}}})}, 6, "origin"});
    c.push_back({IsometryKind::D2,
                 {mat({{{1, 0, 0}, {0, -1, 0}, {0, 0, -1}}}), mat({{{-1, 0, 0}, {0, 1, 0}, {0, 0, -1}}})},
                 2,
                 "x, y and z axes"});
    return c;
  }();
  return catalog;
}

inline const LatticeIsometry& catalog_isometry(IsometryKind kind) {
  for (const LatticeIsometry& iso : isometry_catalog())
    if (iso.kind == kind) return iso;
  throw std::invalid_argument("unknown isometry kind");
}

struct CompatibilityOptions {
  // Rejects ROT2/ROT4 on the projective plane (odd triple-point count
  // argument). Off by default: it fails when an axis passes through a
  // triple point.
  bool exclude_even_rotations_on_projective_plane = false;
};

namespace detail {

inline bool fixes_a_triangle_pointwise(const Permutation& p, const SurfaceComplex& c) {
  for (const Triangle& t : c.triangles())
    if (p[t[0]] == t[0] && p[t[1]] == t[1] && p[t[2]] == t[2]) return true;
  return false;
}

// Three pairwise adjacent fixed vertices cannot lie on one line: the middle
// one would lie on the edge joining the outer two.
inline bool fixed_vertices_fit_a_line(const Permutation& p, const SurfaceComplex& c) {
  std::vector<Vertex> fixed;
  for (Vertex v = 0; v < c.vertex_count(); ++v)
    if (p[v] == v) fixed.push_back(v);
  for (std::size_t i = 0; i < fixed.size(); ++i)
    for (std::size_t j = i + 1; j < fixed.size(); ++j) {
      if (!c.has_edge(fixed[i], fixed[j])) continue;
      for (std::size_t k = j + 1; k < fixed.size(); ++k)
        if (c.has_edge(fixed[i], fixed[k]) && c.has_edge(fixed[j], fixed[k])) return false;
    }
  return true;
}

inline int fixed_count(const Permutation& p) {
  int n = 0;
  for (std::size_t v = 0; v < p.size(); ++v) n += p[v] == static_cast<Vertex>(v) ? 1 : 0;
  return n;
}

}  // namespace detail

/// Catalog isometries (D2 excluded) that pass the necessary conditions for
/// realizing `a` as a geometric symmetry: equal order, no pointwise fixed
/// triangle, fixed vertices placeable on a rotation axis, at most one fixed
/// vertex when the fixed set is the origin, and on orientable surfaces the
/// determinant sign matching orientation behaviour.
inline std::vector<LatticeIsometry> compatible_isometries(const Automorphism& a,
                                                          const SurfaceComplex& c,
                                                          CompatibilityOptions options = {}) {
  std::vector<LatticeIsometry> out;
  if (a.is_identity()) return out;
  if (detail::fixes_a_triangle_pointwise(a.image, c)) return out;
  for (const LatticeIsometry& iso : isometry_catalog()) {
    if (iso.kind == IsometryKind::D2 || iso.order != a.order) continue;
    if (iso.is_rotation() && !detail::fixed_vertices_fit_a_line(a.image, c)) continue;
    if (iso.fixed_set == "origin" && a.fixed_vertices.size() > 1) continue;
    if (c.orientable() && a.orientation_preserving != (iso.determinant() > 0)) continue;
    if (options.exclude_even_rotations_on_projective_plane && !c.orientable() && c.genus() == 1 &&
        (iso.kind == IsometryKind::Rot2 || iso.kind == IsometryKind::Rot4))
      continue;
    out.push_back(iso);
  }
  return out;
}

/// Pairs (i, j) of indices into `group` generating a Klein four-group that
/// can be bound to D2; one pair per subgroup.
inline std::vector<std::array<int, 2>> d2_generator_pairs(const std::vector<Automorphism>& group,
                                                          const SurfaceComplex& c) {
  auto usable = [&](const Permutation& p) {
    if (detail::fixes_a_triangle_pointwise(p, c)) return false;
    if (!detail::fixed_vertices_fit_a_line(p, c)) return false;
    if (c.orientable()) return make_automorphism(c, p).orientation_preserving.value_or(false);
    return true;
  };
  std::vector<std::array<int, 2>> out;
  std::set<std::set<Permutation>> seen;
  for (int i = 0; i < static_cast<int>(group.size()); ++i) {
    if (group[i].order != 2) continue;
    for (int j = i + 1; j < static_cast<int>(group.size()); ++j) {
      if (group[j].order != 2) continue;
      const Permutation ab = compose(group[i].image, group[j].image);
      if (ab != compose(group[j].image, group[i].image)) continue;
      std::set<Permutation> subgroup{group[i].image, group[j].image, ab};
      if (seen.count(subgroup)) continue;
      if (!usable(group[i].image) || !usable(group[j].image) || !usable(ab)) continue;
      seen.insert(subgroup);
      out.push_back({i, j});
    }
  }
  return out;
}

/// Indices of non-identity automorphisms, one per cyclic subgroup (the first
/// generator in enumeration order).
inline std::vector<int> cyclic_subgroup_representatives(const std::vector<Automorphism>& group) {
  std::vector<int> out;
  std::set<std::set<Permutation>> seen;
  for (int i = 0; i < static_cast<int>(group.size()); ++i) {
    if (group[i].is_identity()) continue;
    const Permutation gens[1] = {group[i].image};
    const auto elems = generated_group(gens, static_cast<int>(group[i].image.size()));
    std::set<Permutation> key(elems.begin(), elems.end());
    if (seen.insert(key).second) out.push_back(i);
  }
  return out;
}

class SymmetryConstraintError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A unit move of one vertex (with its orbit following under symmetry).
struct Move {
  Vertex vertex;
  LatticePoint step;
  bool operator==(const Move&) const = default;
};

/// Ties an automorphism (or a D2 generator pair) to a lattice isometry:
/// psi(g(v)) = M_g psi(v) for every group element g. Each orbit is driven by
/// its lowest-labelled vertex; a representative whose stabilizer is
/// non-trivial is confined to the common fixed set of the stabilizer's
/// matrices.
class SymmetryBinding {
 public:
  SymmetryBinding(const SurfaceComplex& c, const Automorphism& a, const LatticeIsometry& iso)
      : isometry_(iso), generators_{a.image} {
    if (iso.kind == IsometryKind::D2)
      throw std::invalid_argument("D2 needs two generating automorphisms");
    if (a.order != iso.order)
      throw std::invalid_argument("automorphism order does not match isometry order");
    Permutation g = identity_permutation(c.vertex_count());
    for (int k = 0; k < iso.order; ++k) {
      elements_.push_back(g);
      matrices_.push_back(iso.matrices[0].power(k));
      g = compose(a.image, g);
    }
    build(c.vertex_count());
  }

  SymmetryBinding(const SurfaceComplex& c, const Automorphism& a, const Automorphism& b,
                  const LatticeIsometry& iso)
      : isometry_(iso), generators_{a.image, b.image} {
    if (iso.kind != IsometryKind::D2) throw std::invalid_argument("generator pair needs D2");
    const Permutation ab = compose(a.image, b.image);
    if (a.order != 2 || b.order != 2 || a.image == b.image || ab != compose(b.image, a.image))
      throw std::invalid_argument("D2 generators must be distinct commuting involutions");
    const Matrix3 &A = iso.matrices[0], &B = iso.matrices[1];
    elements_ = {identity_permutation(c.vertex_count()), a.image, b.image, ab};
    matrices_ = {Matrix3::identity(), A, B, A * B};
    build(c.vertex_count());
  }

  const LatticeIsometry& isometry() const { return isometry_; }
  const std::vector<Permutation>& generators() const { return generators_; }
  const std::vector<Vertex>& representatives() const { return representatives_; }
  Vertex representative_of(Vertex v) const { return rep_of_[v]; }
  bool is_representative(Vertex v) const { return rep_of_[v] == v; }
  const std::vector<Vertex>& orbit(Vertex rep) const { return orbits_[orbit_index_[rep]]; }

  /// Lattice basis of the set a representative is confined to: three unit
  /// vectors for a free orbit, none when pinned to the origin.
  const std::vector<LatticePoint>& fixed_basis(Vertex rep) const {
    return bases_[orbit_index_[rep]];
  }
  bool is_free(Vertex rep) const { return fixed_basis(rep).size() == 3 && stabilizer_trivial(rep); }

  /// Whether p lies in the fixed set of rep's stabilizer.
  bool in_fixed_set(Vertex rep, const LatticePoint& p) const {
    for (int g : stabilizers_[orbit_index_[rep]])
      if (matrices_[g].apply(p) != p) return false;
    return true;
  }

  /// Rewrites the orbit of `moved` from its (new) position. Throws
  /// SymmetryConstraintError if that position leaves the fixed set.
  void adapt(std::span<LatticePoint> coords, Vertex moved) const {
    if (!is_representative(moved))
      throw std::invalid_argument("adapt expects an orbit representative");
    if (!in_fixed_set(moved, coords[moved]))
      throw SymmetryConstraintError("vertex " + std::to_string(moved + 1) +
                                    " left the fixed set of its stabilizer");
    for (Vertex w : orbit(moved)) coords[w] = matrices_[via_[w]].apply(coords[moved]);
  }

  void adapt_all(std::span<LatticePoint> coords) const {
    for (Vertex r : representatives_) adapt(coords, r);
  }

  /// psi(g(v)) == M_g psi(v) for every generator, bit-exact.
  bool satisfied_by(std::span<const LatticePoint> coords) const {
    for (std::size_t gi = 0; gi < generators_.size(); ++gi) {
      const Matrix3& m = isometry_.matrices[gi];
      for (std::size_t v = 0; v < coords.size(); ++v)
        if (coords[generators_[gi][v]] != m.apply(coords[v])) return false;
    }
    return true;
  }

  /// Admissible generator moves: +-1 along each fixed-set basis vector of every
  /// representative.
  std::vector<Move> move_set() const {
    std::vector<Move> moves;
    for (Vertex r : representatives_)
      for (const LatticePoint& b : fixed_basis(r)) {
        moves.push_back({r, b});
        moves.push_back({r, -b});
      }
    return moves;
  }

  /// False when the orbit structure forces two vertices onto one point for
  /// every choice of coordinates (e.g. two vertices pinned to the origin).
  bool orbits_injective() const {
    int pinned = 0;
    for (std::size_t o = 0; o < orbits_.size(); ++o) {
      const auto& basis = bases_[o];
      if (basis.empty()) {
        pinned += static_cast<int>(orbits_[o].size());
        continue;
      }
      // a generic point of the fixed set must have distinct images
      LatticePoint p{};
      const std::int64_t coeff[3] = {1, 7919, 104729};
      for (std::size_t k = 0; k < basis.size(); ++k) p = p + basis[k] * coeff[k];
      std::set<LatticePoint> images;
      for (Vertex w : orbits_[o]) images.insert(matrices_[via_[w]].apply(p));
      if (images.size() != orbits_[o].size()) return false;
    }
    return pinned <= 1;
  }

  /// "ROT3:(1 2 3)(4 5 6)"; D2 generators separated by '|'.
  std::string descriptor() const {
    std::string out(kind_name(isometry_.kind));
    out += ':';
    for (std::size_t i = 0; i < generators_.size(); ++i) {
      if (i) out += '|';
      out += cycle_notation(generators_[i]);
    }
    return out;
  }

 private:
  bool stabilizer_trivial(Vertex rep) const { return stabilizers_[orbit_index_[rep]].size() == 1; }

  void build(int n) {
    rep_of_.assign(n, -1);
    via_.assign(n, 0);
    orbit_index_.assign(n, -1);
    for (Vertex v = 0; v < n; ++v) {
      if (rep_of_[v] >= 0) continue;
      std::vector<Vertex> orbit;
      std::vector<int> stab;
      for (int g = 0; g < static_cast<int>(elements_.size()); ++g) {
        const Vertex w = elements_[g][v];
        if (w == v) stab.push_back(g);
        if (rep_of_[w] < 0) {
          rep_of_[w] = v;
          via_[w] = g;
          orbit.push_back(w);
        }
      }
      std::sort(orbit.begin(), orbit.end());
      orbit_index_[v] = static_cast<int>(orbits_.size());
      representatives_.push_back(v);
      orbits_.push_back(std::move(orbit));
      stabilizers_.push_back(stab);
      bases_.push_back(fixed_space_basis(stab));
    }
  }

  // Lattice basis of {p : M_g p = p for all g in stab}.
  std::vector<LatticePoint> fixed_space_basis(const std::vector<int>& stab) const {
    std::vector<LatticePoint> rows;
    for (int g : stab) {
      const Matrix3& m = matrices_[g];
      for (int i = 0; i < 3; ++i) {
        LatticePoint r{m.m[i][0] - (i == 0), m.m[i][1] - (i == 1), m.m[i][2] - (i == 2)};
        if (r != LatticePoint{}) rows.push_back(r);
      }
    }
    auto primitive = [](LatticePoint p) {
      const std::int64_t g = std::gcd(std::gcd(std::llabs(p.x), std::llabs(p.y)), std::llabs(p.z));
      return g > 1 ? LatticePoint{p.x / g, p.y / g, p.z / g} : p;
    };
    if (rows.empty()) return {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    // rank of the row set
    std::optional<LatticePoint> second_dir;
    for (std::size_t i = 0; i < rows.size() && !second_dir; ++i)
      for (std::size_t j = i + 1; j < rows.size(); ++j) {
        const LatticePoint d = cross(rows[i], rows[j]);
        if (d != LatticePoint{}) {
          second_dir = d;
          break;
        }
      }
    if (!second_dir) {
      // rank 1: the plane orthogonal to rows[0]
      const LatticePoint n = rows[0];
      std::vector<LatticePoint> basis;
      for (const LatticePoint& e : {LatticePoint{1, 0, 0}, LatticePoint{0, 1, 0}, LatticePoint{0, 0, 1}}) {
        const LatticePoint d = cross(n, e);
        if (d == LatticePoint{}) continue;
        const LatticePoint pd = primitive(d);
        if (basis.empty() || cross(basis[0], pd) != LatticePoint{}) basis.push_back(pd);
        if (basis.size() == 2) break;
      }
      return basis;
    }
    // rank 2 or 3: a line unless some row leaves the candidate direction
    const LatticePoint dir = primitive(*second_dir);
    for (const LatticePoint& r : rows)
      if (dot(r, dir) != 0) return {};
    return {dir};
  }

  LatticeIsometry isometry_;
  std::vector<Permutation> generators_;
  std::vector<Permutation> elements_;
  std::vector<Matrix3> matrices_;
  std::vector<Vertex> rep_of_;
  std::vector<int> via_;
  std::vector<int> orbit_index_;
  std::vector<Vertex> representatives_;
  std::vector<std::vector<Vertex>> orbits_;
  std::vector<std::vector<int>> stabilizers_;
  std::vector<std::vector<LatticePoint>> bases_;
};

}  // namespace polyreal
