#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "polyreal/complex.hpp"
#include "polyreal/exactgeom.hpp"

namespace polyreal {

enum class Mode { Embed, Immerse };

inline const char* mode_name(Mode mode) { return mode == Mode::Embed ? "embed" : "immerse"; }

/// Triangle pairs whose intersection counts towards the objective. Embedding:
/// every pair not sharing an edge. Immersion: only those that share a vertex.
struct PairSchedule {
  Mode mode = Mode::Embed;
  std::vector<Triangle> triangles;
  std::vector<std::array<int, 2>> pairs;
  /// For each vertex, indices into `pairs` of the pairs with a triangle
  /// incident to it.
  std::vector<std::vector<int>> pairs_at_vertex;
};

inline PairSchedule build_pair_schedule(const SurfaceComplex& c, Mode mode) {
  PairSchedule s;
  s.mode = mode;
  s.triangles = c.triangles();
  s.pairs_at_vertex.resize(c.vertex_count());
  for (int i = 0; i < c.triangle_count(); ++i)
    for (int j = i + 1; j < c.triangle_count(); ++j) {
      const int shared = shared_vertex_count(c.triangle(i), c.triangle(j));
      if (shared >= 2) continue;
      if (mode == Mode::Immerse && shared == 0) continue;
      const int id = static_cast<int>(s.pairs.size());
      s.pairs.push_back({i, j});
      std::vector<Vertex> touched(c.triangle(i).begin(), c.triangle(i).end());
      touched.insert(touched.end(), c.triangle(j).begin(), c.triangle(j).end());
      std::sort(touched.begin(), touched.end());
      touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
      for (Vertex v : touched) s.pairs_at_vertex[v].push_back(id);
    }
  return s;
}

struct ContributingPair {
  std::array<int, 2> triangles;
  double length;
};

/// Sum of intersection segment lengths over a schedule.
struct ObjectiveValue {
  double total = 0.0;
  std::vector<ContributingPair> contributing_pairs;
};

namespace detail {

inline TrianglePoints triangle_points(const Triangle& t, std::span<const LatticePoint> coords) {
  return {coords[t[0]], coords[t[1]], coords[t[2]]};
}

inline std::optional<IntersectionSegment> pair_segment(const PairSchedule& s, int pair,
                                                       std::span<const LatticePoint> coords) {
  const auto& [i, j] = s.pairs[pair];
  return triangle_pair_intersection(triangle_points(s.triangles[i], coords),
                                    triangle_points(s.triangles[j], coords));
}

}  // namespace detail

/// Full evaluation. A zero total certifies an embedding (Embed) or an
/// immersion (Immerse) for coordinates in the active position requirement.
inline ObjectiveValue evaluate(const PairSchedule& s, std::span<const LatticePoint> coords) {
  ObjectiveValue value;
  for (int p = 0; p < static_cast<int>(s.pairs.size()); ++p) {
    if (auto seg = detail::pair_segment(s, p, coords)) {
      value.total += seg->length;
      value.contributing_pairs.push_back({s.pairs[p], seg->length});
    }
  }
  return value;
}

/// Objective with a per-pair cache, so a move only recomputes the pairs that
/// touch moved vertices. Totals are summed over all pairs in schedule order,
/// which makes them bit-identical to evaluate().
class IncrementalObjective {
 public:
  struct Candidate {
    double total = 0.0;
    std::vector<std::pair<int, std::optional<IntersectionSegment>>> changed;
  };

  explicit IncrementalObjective(const PairSchedule& schedule) : schedule_(&schedule) {}

  const PairSchedule& schedule() const { return *schedule_; }
  bool has_baseline() const { return has_baseline_; }
  double total() const { return total_; }

  /// Full evaluation; replaces the cache.
  void rebase(std::span<const LatticePoint> coords) {
    segments_.assign(schedule_->pairs.size(), std::nullopt);
    for (int p = 0; p < static_cast<int>(schedule_->pairs.size()); ++p)
      segments_[p] = detail::pair_segment(*schedule_, p, coords);
    total_ = sum();
    has_baseline_ = true;
  }

  /// Objective for `coords`, which differ from the cached state only at the
  /// `moved` vertices. Leaves the cache untouched.
  Candidate propose(std::span<const LatticePoint> coords, std::span<const Vertex> moved) const {
    if (!has_baseline_) throw std::logic_error("incremental objective has no cached baseline");
    Candidate cand;
    mark_.assign(schedule_->pairs.size(), 0);
    std::size_t touched = 0;
    for (Vertex v : moved)
      if (v >= 0 && v < static_cast<int>(schedule_->pairs_at_vertex.size()))
        touched += schedule_->pairs_at_vertex[v].size();
    cand.changed.reserve(touched);
    for (Vertex v : moved) {
      if (v < 0 || v >= static_cast<int>(schedule_->pairs_at_vertex.size()))
        throw std::out_of_range("moved vertex is not a vertex of the complex");
      for (int p : schedule_->pairs_at_vertex[v]) {
        if (mark_[p]) continue;
        mark_[p] = 1;
        cand.changed.emplace_back(p, detail::pair_segment(*schedule_, p, coords));
      }
    }
    scratch_.resize(segments_.size());
    for (std::size_t p = 0; p < segments_.size(); ++p)
      scratch_[p] = segments_[p] ? segments_[p]->length : 0.0;
    for (const auto& [p, seg] : cand.changed) scratch_[p] = seg ? seg->length : 0.0;
    double t = 0.0;
    for (double len : scratch_) t += len;
    cand.total = t;
    return cand;
  }

  void commit(Candidate cand) {
    for (auto& [p, seg] : cand.changed) segments_[p] = std::move(seg);
    total_ = cand.total;
  }

  /// propose + commit for a single moved vertex; returns the full value.
  ObjectiveValue evaluate_delta(std::span<const LatticePoint> coords, Vertex moved) {
    const Vertex mv[1] = {moved};
    commit(propose(coords, mv));
    return value();
  }

  ObjectiveValue value() const {
    ObjectiveValue v;
    v.total = total_;
    for (std::size_t p = 0; p < segments_.size(); ++p)
      if (segments_[p]) v.contributing_pairs.push_back({schedule_->pairs[p], segments_[p]->length});
    return v;
  }

  /// Candidate strictly below the cached objective. A candidate total at most
  /// 1e-9 below the cached one is confirmed exactly: the changed pairs'
  /// squared lengths, sorted in decreasing order, must compare
  /// lexicographically smaller. A larger floating total never improves.
  bool improves(const Candidate& cand) const {
    constexpr double kTieWindow = 1e-9;
    if (cand.total < total_ - kTieWindow) return true;
    if (cand.total > total_) return false;
    std::vector<ExactRational> before, after;
    for (const auto& [p, seg] : cand.changed) {
      if (segments_[p]) before.push_back(segments_[p]->squared_length());
      if (seg) after.push_back(seg->squared_length());
    }
    auto desc = [](const ExactRational& a, const ExactRational& b) { return a > b; };
    std::sort(before.begin(), before.end(), desc);
    std::sort(after.begin(), after.end(), desc);
    return std::lexicographical_compare(after.begin(), after.end(), before.begin(), before.end());
  }

 private:
  double sum() const {
    double t = 0.0;
    for (const auto& seg : segments_) t += seg ? seg->length : 0.0;
    return t;
  }

  const PairSchedule* schedule_;
  std::vector<std::optional<IntersectionSegment>> segments_;
  double total_ = 0.0;
  bool has_baseline_ = false;
  mutable std::vector<char> mark_;
  mutable std::vector<double> scratch_;
};

/// Schedule-free exact check that the coordinates realize the complex:
/// relaxed general position, and no two triangles (not sharing an edge; in
/// Immerse mode, sharing a vertex) meet anywhere beyond their common vertex.
/// Uses segment/triangle incidence tests only.
inline bool verify_realization(const SurfaceComplex& c, std::span<const LatticePoint> coords,
                               Mode mode) {
  if (static_cast<int>(coords.size()) != c.vertex_count()) return false;
  if (!in_relaxed_general_position(c, coords)) return false;
  for (int i = 0; i < c.triangle_count(); ++i)
    for (int j = i + 1; j < c.triangle_count(); ++j) {
      const Triangle& s = c.triangle(i);
      const Triangle& t = c.triangle(j);
      const int shared = shared_vertex_count(s, t);
      if (shared >= 2) continue;
      if (mode == Mode::Immerse && shared == 0) continue;
      const auto sp = detail::triangle_points(s, coords);
      const auto tp = detail::triangle_points(t, coords);
      if (shared == 0) {
        for (int k = 0; k < 3; ++k) {
          if (segment_meets_triangle(sp[k], sp[(k + 1) % 3], tp[0], tp[1], tp[2])) return false;
          if (segment_meets_triangle(tp[k], tp[(k + 1) % 3], sp[0], sp[1], sp[2])) return false;
        }
      } else {
        // with a common vertex v the triangles meet beyond v iff the edge
        // opposite v in one of them meets the other triangle
        auto opposite = [](const Triangle& tri, const Triangle& other) {
          std::array<Vertex, 2> e{};
          int k = 0;
          for (Vertex v : tri)
            if (!contains(other, v)) e[k++] = v;
          return e;
        };
        const auto es = opposite(s, t);
        const auto et = opposite(t, s);
        if (segment_meets_triangle(coords[es[0]], coords[es[1]], tp[0], tp[1], tp[2])) return false;
        if (segment_meets_triangle(coords[et[0]], coords[et[1]], sp[0], sp[1], sp[2])) return false;
      }
    }
  return true;
}

}  // namespace polyreal
