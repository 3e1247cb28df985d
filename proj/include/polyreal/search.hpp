#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "polyreal/complex.hpp"
#include "polyreal/exactgeom.hpp"
#include "polyreal/objective.hpp"
#include "polyreal/obstruction.hpp"
#include "polyreal/rng.hpp"
#include "polyreal/symmetry.hpp"

namespace polyreal {

/// Vertex coordinates psi with the two bounding boxes. A box of side length s
/// is the cube [-s/2, s/2]^3 centred at the origin (rounded down for odd s).
struct CoordinateAssignment {
  std::vector<LatticePoint> coords;
  int inner_box = 40;
  int outer_box = 80;

  static bool within(const LatticePoint& p, int box) { return p.max_abs() <= box / 2; }
  bool within_outer() const {
    for (const LatticePoint& p : coords)
      if (!within(p, outer_box)) return false;
    return true;
  }
};

enum class SearchStatus { Realized, StepBudgetExhausted, InitFailed, Obstructed };

inline const char* status_name(SearchStatus s) {
  switch (s) {
    case SearchStatus::Realized: return "REALIZED";
    case SearchStatus::StepBudgetExhausted: return "STEP_BUDGET_EXHAUSTED";
    case SearchStatus::InitFailed: return "INIT_FAILED";
    case SearchStatus::Obstructed: return "OBSTRUCTED";
  }
  return "?";
}

inline std::optional<SearchStatus> parse_status(const std::string& s) {
  for (auto st : {SearchStatus::Realized, SearchStatus::StepBudgetExhausted, SearchStatus::InitFailed,
                  SearchStatus::Obstructed})
    if (s == status_name(st)) return st;
  return std::nullopt;
}

/// Decrease: a strictly improving move was taken. Plateau: no move improved
/// and the saved first admissible move was taken. Restart: coordinates were
/// re-initialized.
enum class StepKind { Decrease, Plateau, Restart };

struct StepEvent {
  std::uint64_t step;  // counter value after the step
  StepKind kind;
  double objective;    // after the step
};

struct SearchConfig {
  Mode mode = Mode::Immerse;
  std::uint64_t max_steps = 2'000'000;
  int inner_box = 40;
  int outer_box = 80;
  double restart_ratio = 0.01;
  std::uint64_t seed = 1;
  std::optional<SymmetryBinding> symmetry;
  int max_init_attempts = 10'000;
#ifdef NDEBUG
  bool check_every_step = false;
#else
  bool check_every_step = true;
#endif
  std::function<void(const StepEvent&)> observer;

  void validate() const {
    if (max_steps == 0) throw std::invalid_argument("max_steps must be positive");
    if (inner_box < 0 || outer_box < 0 || inner_box > outer_box)
      throw std::invalid_argument("bounding boxes must satisfy 0 <= inner <= outer");
    if (outer_box / 2 > kIntersectionCoordinateBound)
      throw std::invalid_argument("outer box exceeds the exact arithmetic bound");
    if (!(restart_ratio >= 0.0 && restart_ratio <= 1.0))
      throw std::invalid_argument("restart_ratio must lie in [0, 1]");
  }
};

/// Mode, boxes and step budget used for the surface families of the
/// published experiments; 40/80 boxes and 2,000,000 steps elsewhere.
inline SearchConfig default_config_for(const SurfaceComplex& c, bool symmetric) {
  SearchConfig cfg;
  cfg.mode = c.orientable() ? Mode::Embed : Mode::Immerse;
  const int n = c.vertex_count();
  const std::string name = c.surface_name();
  const bool small_boxes = (n <= 9 && name != "N3" && name != "N4") ||
                           (n == 10 && (name == "M2" || name == "M3"));
  cfg.inner_box = small_boxes ? 40 : 60;
  cfg.outer_box = small_boxes ? 80 : 120;
  if (n == 9 && name == "N3") cfg.max_steps = 8'000'000;
  if (n == 11 && name == "M4") cfg.max_steps = 4'000'000;
  if (n == 9 && name == "N4" && !symmetric) cfg.max_steps = 10'000'000;
  return cfg;
}

struct SearchOutcome {
  SearchStatus status = SearchStatus::StepBudgetExhausted;
  CoordinateAssignment coordinates;
  std::uint64_t steps_used = 0;
  std::uint64_t restarts = 0;
  bool verified = false;
  double objective = 0.0;
  /// Steps after which the position requirement or the symmetry relation
  /// failed (only counted with check_every_step).
  std::uint64_t invariant_violations = 0;
};

/// One instance of the descent-step heuristic. Single-threaded; owns its
/// coordinates, objective cache and random stream.
class DescentSearch {
 public:
  DescentSearch(const SurfaceComplex& c, SearchConfig config)
      : complex_(&c),
        config_(std::move(config)),
        schedule_(build_pair_schedule(c, config_.mode)),
        objective_(schedule_),
        rng_(config_.seed) {
    config_.validate();
    assignment_.inner_box = config_.inner_box;
    assignment_.outer_box = config_.outer_box;
    assignment_.coords.assign(c.vertex_count(), LatticePoint{});
    if (config_.symmetry) {
      moves_ = config_.symmetry->move_set();
    } else {
      for (Vertex v = 0; v < c.vertex_count(); ++v)
        for (int axis = 0; axis < 3; ++axis)
          for (int dir : {1, -1}) {
            LatticePoint step{};
            (axis == 0 ? step.x : axis == 1 ? step.y : step.z) = dir;
            moves_.push_back({v, step});
          }
    }
  }

  DescentSearch(const DescentSearch&) = delete;
  DescentSearch& operator=(const DescentSearch&) = delete;

  const SurfaceComplex& complex() const { return *complex_; }
  const SearchConfig& config() const { return config_; }
  const CoordinateAssignment& assignment() const { return assignment_; }
  const std::vector<Move>& moves() const { return moves_; }
  double objective() const { return objective_.total(); }
  const IncrementalObjective& objective_cache() const { return objective_; }
  std::uint64_t steps() const { return steps_; }
  std::uint64_t restarts() const { return restarts_; }
  bool uses_relaxed_position() const { return config_.symmetry.has_value(); }

  /// Random coordinates in the inner box satisfying the position requirement
  /// (and the symmetry relation), by rejection sampling. Returns false after
  /// max_init_attempts failures.
  bool initialize() {
    const auto& sym = config_.symmetry;
    if (sym && !sym->orbits_injective()) return false;
    const std::int64_t h = config_.inner_box / 2;
    std::vector<LatticePoint> pts(complex_->vertex_count());
    for (int attempt = 0; attempt < config_.max_init_attempts; ++attempt) {
      if (!sym) {
        for (LatticePoint& p : pts)
          p = {rng_.uniform_int(-h, h), rng_.uniform_int(-h, h), rng_.uniform_int(-h, h)};
      } else {
        for (Vertex r : sym->representatives()) pts[r] = random_in_fixed_set(*sym, r, h);
        sym->adapt_all(pts);
      }
      if (position_requirement(pts)) {
        assignment_.coords = pts;
        trial_ = pts;
        objective_.rebase(assignment_.coords);
        return true;
      }
    }
    return false;
  }

  /// Whether the unit move keeps every (adapted) vertex inside the outer box
  /// and preserves the position requirement.
  bool is_admissible(const Move& move) {
    moved_.clear();
    const bool ok = stage(move);
    unstage();
    return ok;
  }

  /// One descent step: scan the moves in a fresh random order and take the
  /// first strictly improving admissible one; otherwise restart with
  /// probability restart_ratio or take the first admissible move found.
  /// Returns nullopt on a dead end (no admissible move and the restart
  /// failed).
  std::optional<StepKind> descent_step() {
    order_.resize(moves_.size());
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = static_cast<int>(i);
    rng_.shuffle(order_);
    int saved = -1;
    IncrementalObjective::Candidate saved_candidate;
    for (int idx : order_) {
      moved_.clear();
      if (!stage(moves_[idx])) {
        unstage();
        continue;
      }
      std::optional<IncrementalObjective::Candidate> cand;
      try {
        cand = objective_.propose(trial_, moved_);
      } catch (const DegenerateConfiguration&) {
        unstage();
        continue;
      }
      if (objective_.improves(*cand)) {
        accept(std::move(*cand));
        return finish(StepKind::Decrease);
      }
      if (saved < 0) {
        saved = idx;
        saved_candidate = std::move(*cand);
      }
      unstage();
    }
    if (saved < 0 || rng_.uniform01() < config_.restart_ratio) {
      if (!restart()) return std::nullopt;
      return finish(StepKind::Restart);
    }
    moved_.clear();
    stage(moves_[saved]);
    accept(std::move(saved_candidate));
    return finish(StepKind::Plateau);
  }

  /// Full position requirement and symmetry relation on the current state.
  bool invariants_hold() const {
    if (!assignment_.within_outer()) return false;
    if (!position_requirement(assignment_.coords)) return false;
    return !config_.symmetry || config_.symmetry->satisfied_by(assignment_.coords);
  }

  SearchOutcome run() {
    SearchOutcome out;
    if (config_.mode == Mode::Immerse && triple_point_feasible(*complex_).proves_non_realizable()) {
      out.status = SearchStatus::Obstructed;
      out.coordinates = assignment_;
      return out;
    }
    if (!initialize()) {
      out.status = SearchStatus::InitFailed;
      out.coordinates = assignment_;
      return out;
    }
    while (true) {
      if (objective_.total() == 0.0) {
        out.status = SearchStatus::Realized;
        out.verified = verify_realization(*complex_, assignment_.coords, config_.mode);
        if (!out.verified) throw std::logic_error("zero objective failed exact verification");
        break;
      }
      if (steps_ >= config_.max_steps) {
        out.status = SearchStatus::StepBudgetExhausted;
        break;
      }
      if (!descent_step()) {
        out.status = SearchStatus::InitFailed;
        break;
      }
      if (config_.check_every_step && !invariants_hold()) ++out.invariant_violations;
    }
    out.coordinates = assignment_;
    out.steps_used = steps_;
    out.restarts = restarts_;
    out.objective = objective_.total();
    return out;
  }

 private:
  bool position_requirement(std::span<const LatticePoint> pts) const {
    return uses_relaxed_position() ? in_relaxed_general_position(*complex_, pts)
                                   : in_general_position(pts);
  }

  LatticePoint random_in_fixed_set(const SymmetryBinding& sym, Vertex rep, std::int64_t h) {
    const auto& basis = sym.fixed_basis(rep);
    while (true) {
      LatticePoint p{};
      for (const LatticePoint& b : basis) {
        const std::int64_t reach = h / std::max<std::int64_t>(1, b.max_abs());
        p = p + b * rng_.uniform_int(-reach, reach);
      }
      if (CoordinateAssignment::within(p, 2 * static_cast<int>(h))) return p;
    }
  }

  // Writes the move (and its orbit) into trial_; moved_ lists the touched
  // vertices. Returns admissibility.
  bool stage(const Move& move) {
    trial_[move.vertex] = assignment_.coords[move.vertex] + move.step;
    if (config_.symmetry) {
      for (Vertex w : config_.symmetry->orbit(move.vertex)) moved_.push_back(w);
      config_.symmetry->adapt(trial_, move.vertex);
    } else {
      moved_.push_back(move.vertex);
    }
    for (Vertex w : moved_)
      if (!CoordinateAssignment::within(trial_[w], config_.outer_box)) return false;
    return uses_relaxed_position()
               ? relaxed_general_position_after_move(*complex_, trial_, moved_)
               : general_position_after_move(trial_, moved_);
  }

  void unstage() {
    for (Vertex w : moved_) trial_[w] = assignment_.coords[w];
  }

  void accept(IncrementalObjective::Candidate cand) {
    for (Vertex w : moved_) assignment_.coords[w] = trial_[w];
    objective_.commit(std::move(cand));
  }

  bool restart() {
    ++restarts_;
    return initialize();
  }

  StepKind finish(StepKind kind) {
    ++steps_;
    if (config_.observer) config_.observer({steps_, kind, objective_.total()});
    return kind;
  }

  const SurfaceComplex* complex_;
  SearchConfig config_;
  PairSchedule schedule_;
  IncrementalObjective objective_;
  Rng rng_;
  CoordinateAssignment assignment_;
  std::vector<LatticePoint> trial_;
  std::vector<Move> moves_;
  std::vector<int> order_;
  std::vector<Vertex> moved_;
  std::uint64_t steps_ = 0;
  std::uint64_t restarts_ = 0;
};

/// Runs one search instance to completion.
inline SearchOutcome run_search(const SurfaceComplex& c, SearchConfig config) {
  DescentSearch search(c, std::move(config));
  return search.run();
}

}  // namespace polyreal
