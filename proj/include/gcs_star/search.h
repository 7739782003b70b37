#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "gcs_star/domination.h"
#include "gcs_star/gcs.h"
#include "gcs_star/heuristic.h"
#include "gcs_star/restriction.h"

namespace gcs_star {

enum class SearchStatus { kSolved, kFail, kTimedOut, kExpansionLimit };

std::string to_string(SearchStatus status);

struct SearchStats {
  long expansions{0};
  long queue_pushes{0};
  long domination_calls{0};
  /// LP solves issued by the run, domination checks included.
  long solver_calls{0};
  double wall_time_ms{0.0};
  long frontier_adds{0};
  long pruned{0};
  long infeasible{0};
  long solver_errors{0};
};

struct Solution {
  SearchStatus status{SearchStatus::kFail};
  Path path;
  Trajectory trajectory;
  double cost{kInfinity};
  SearchStats stats;

  bool solved() const { return status == SearchStatus::kSolved; }
};

/// Reported once per pop, before the popped node is returned or expanded.
struct IterationInfo {
  long iteration{0};
  const Path* popped{nullptr};
  double popped_f{0.0};
  /// Queue size after the pop.
  std::size_t queue_size{0};
};

struct SearchOptions {
  /// 0 selects 3 · (reachable vertices) on explicit graphs; required to be
  /// positive on other graphs.
  int max_path_len{0};
  /// 0 means unlimited.
  long max_expansions{0};
  /// Seconds; 0 means unlimited.
  double timeout_s{0.0};
  std::uint64_t seed{0};
  /// Workers for the successor solves and checks of one expansion.
  int num_threads{1};
  std::function<void(const IterationInfo&)> observer;
  /// Null selects DefaultLpSolver().
  const LpSolver* solver{nullptr};
};

/// Best-first search over paths with per-vertex domination pruning. The
/// checker's seed is replaced by options.seed. Throws std::invalid_argument
/// when max_path_len is unset on a non-explicit graph.
Solution gcs_star(const ImplicitGcs& g, const Heuristic& heuristic,
                  const DominationChecker& checker,
                  const SearchOptions& options = {});

/// Keeps a single best path per vertex and discards extensions that are not
/// strictly cheaper at their optimal terminal points.
Solution astar_vertex_baseline(const ImplicitGcs& g, const Heuristic& heuristic,
                               const SearchOptions& options = {});

/// The path-length limit in effect for `options` on `g`.
int EffectiveMaxPathLen(const ImplicitGcs& g, const SearchOptions& options);

}  // namespace gcs_star
