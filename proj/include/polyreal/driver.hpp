#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "polyreal/automorphisms.hpp"
#include "polyreal/io.hpp"
#include "polyreal/rng.hpp"
#include "polyreal/search.hpp"
#include "polyreal/symmetry.hpp"

namespace polyreal {

/// Which search instances to run per triangulation: one unconstrained run
/// ("none"), every compatible symmetry binding ("all"), or the bindings of
/// one catalog kind.
struct SymmetryRequest {
  enum class Scope { None, All, Kind };
  Scope scope = Scope::None;
  IsometryKind kind = IsometryKind::Mirror;

  static SymmetryRequest parse(const std::string& text) {
    std::string lower = text;
    for (char& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (lower == "none") return {};
    if (lower == "all") return {Scope::All, IsometryKind::Mirror};
    if (auto k = parse_kind(text)) return {Scope::Kind, *k};
    throw std::invalid_argument("unknown symmetry '" + text + "' (none, all or a catalog kind)");
  }
  bool admits(IsometryKind k) const {
    return scope == Scope::All || (scope == Scope::Kind && kind == k);
  }
};

struct RealizeOptions {
  std::optional<Mode> mode;  // default: embed orientable, immerse otherwise
  SymmetryRequest symmetry;
  std::optional<int> inner_box;
  std::optional<int> outer_box;
  std::optional<std::uint64_t> max_steps;
  double restart_ratio = 0.01;
  std::uint64_t seed = 1;
  int jobs = 1;
  CompatibilityOptions compatibility;
};

struct SearchInstance {
  std::size_t entry = 0;  // index into the corpus
  int aut_index = 0;      // 0 for the unconstrained run, 1.. for bindings
  std::optional<SymmetryBinding> binding;
  std::uint64_t aut_group_order = 1;
};

/// The instances requested for one triangulation, in a fixed order.
inline std::vector<SearchInstance> plan_instances(const Corpus& corpus, std::size_t entry,
                                                  const RealizeOptions& options) {
  const SurfaceComplex& c = corpus.entries[entry].complex;
  const auto group = enumerate_automorphisms(c);
  std::vector<SearchInstance> out;
  if (options.symmetry.scope == SymmetryRequest::Scope::None) {
    out.push_back({entry, 0, std::nullopt, group.size()});
    return out;
  }
  int next = 1;
  for (int i : cyclic_subgroup_representatives(group))
    for (const LatticeIsometry& iso : compatible_isometries(group[i], c, options.compatibility))
      if (options.symmetry.admits(iso.kind))
        out.push_back({entry, next++, SymmetryBinding(c, group[i], iso), group.size()});
  if (options.symmetry.admits(IsometryKind::D2)) {
    const LatticeIsometry& d2 = catalog_isometry(IsometryKind::D2);
    for (const auto& [i, j] : d2_generator_pairs(group, c))
      out.push_back({entry, next++, SymmetryBinding(c, group[i], group[j], d2), group.size()});
  }
  return out;
}

inline std::vector<SearchInstance> plan_instances(const Corpus& corpus,
                                                  const RealizeOptions& options) {
  std::vector<SearchInstance> out;
  for (std::size_t e = 0; e < corpus.entries.size(); ++e)
    for (SearchInstance& inst : plan_instances(corpus, e, options)) out.push_back(std::move(inst));
  return out;
}

inline SearchConfig instance_config(const CorpusEntry& entry, const SearchInstance& inst,
                                    const RealizeOptions& options) {
  SearchConfig cfg = default_config_for(entry.complex, inst.binding.has_value());
  if (options.mode) cfg.mode = *options.mode;
  if (options.inner_box) cfg.inner_box = *options.inner_box;
  if (options.outer_box) cfg.outer_box = *options.outer_box;
  if (options.max_steps) cfg.max_steps = *options.max_steps;
  cfg.restart_ratio = options.restart_ratio;
  cfg.seed = derive_stream_seed(options.seed, static_cast<std::uint64_t>(entry.id.line),
                                static_cast<std::uint64_t>(inst.aut_index));
  cfg.symmetry = inst.binding;
  return cfg;
}

inline ResultRecord run_instance(const CorpusEntry& entry, const SearchInstance& inst,
                                 const RealizeOptions& options,
                                 std::function<void(const StepEvent&)> observer = {}) {
  SearchConfig cfg = instance_config(entry, inst, options);
  cfg.observer = std::move(observer);
  ResultRecord r;
  r.id = entry.id;
  r.mode = cfg.mode;
  r.symmetry = inst.binding ? inst.binding->descriptor() : "none";
  r.seed = cfg.seed;
  r.aut_group_order = inst.aut_group_order;
  r.triangles = to_list_string(entry.complex);
  const SearchOutcome out = run_search(entry.complex, std::move(cfg));
  r.status = out.status;
  r.steps = out.steps_used;
  r.restarts = out.restarts;
  r.coords = out.coordinates.coords;
  return r;
}

struct RealizeProgress {
  std::size_t done;
  std::size_t total;
  const ResultRecord& record;
};

/// Runs every planned instance on a pool of `options.jobs` workers. Records
/// come back in plan order regardless of the pool size. `progress` is called
/// under a lock as instances finish.
inline std::vector<ResultRecord> realize_corpus(
    const Corpus& corpus, const RealizeOptions& options,
    const std::function<void(const RealizeProgress&)>& progress = {}) {
  if (options.jobs < 1) throw std::invalid_argument("jobs must be at least 1");
  const std::vector<SearchInstance> plan = plan_instances(corpus, options);
  std::vector<std::optional<ResultRecord>> slots(plan.size());
  std::atomic<std::size_t> next{0};
  std::size_t done = 0;
  std::mutex mu;
  std::exception_ptr failure;
  auto worker = [&] {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= plan.size()) return;
      try {
        ResultRecord r = run_instance(corpus.entries[plan[k].entry], plan[k], options);
        std::lock_guard lock(mu);
        slots[k] = std::move(r);
        ++done;
        if (progress) progress({done, plan.size(), *slots[k]});
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        next = plan.size();
        return;
      }
    }
  };
  const int workers = static_cast<int>(std::min<std::size_t>(options.jobs, std::max<std::size_t>(1, plan.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<ResultRecord> records;
  records.reserve(slots.size());
  for (auto& s : slots) records.push_back(std::move(*s));
  return records;
}

}  // namespace polyreal
