#include "gcs_star/search.h"

#include <atomic>
#include <chrono>
#include <exception>
#include <map>
#include <queue>
#include <stdexcept>
#include <thread>

namespace gcs_star {

std::string to_string(SearchStatus status) {
  switch (status) {
    case SearchStatus::kSolved:
      return "solved";
    case SearchStatus::kFail:
      return "fail";
    case SearchStatus::kTimedOut:
      return "timeout";
    case SearchStatus::kExpansionLimit:
      return "expansion_limit";
  }
  return "unknown";
}

int EffectiveMaxPathLen(const ImplicitGcs& g, const SearchOptions& options) {
  if (options.max_path_len > 0) return options.max_path_len;
  if (const auto* explicit_g = dynamic_cast<const ExplicitGcs*>(&g)) {
    return 3 * explicit_g->num_reachable_vertices();
  }
  throw std::invalid_argument("max_path_len is required on implicit graphs");
}

namespace {

using Clock = std::chrono::steady_clock;

struct Node {
  EntryPtr entry;
  double f;
  long seq;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.f != b.f) return a.f > b.f;
    return a.seq > b.seq;
  }
};

// Runs fn(0..n-1) on up to `threads` workers and rethrows the first error.
template <typename Fn>
void ParallelFor(std::size_t n, int threads, Fn fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t count = std::min<std::size_t>(threads, n);
  for (std::size_t t = 1; t < count; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

enum class Outcome { kDropped, kSolverError, kPruned, kAccepted };

struct Extension {
  Outcome outcome{Outcome::kDropped};
  EntryPtr entry;
};

// Shared best-first loop. `keep(entry)` decides whether an extension enters
// the queue and may run concurrently for distinct vertices; `commit(entry)`
// records an accepted extension and runs on the search thread.
template <typename Keep, typename Commit>
Solution Search(const ImplicitGcs& g, const Heuristic& heuristic,
                const SearchOptions& options, Keep keep, Commit commit) {
  const auto start = Clock::now();
  const LpSolver& solver = options.solver ? *options.solver : DefaultLpSolver();
  const long solves_before = solver.num_solves();
  const int max_len = EffectiveMaxPathLen(g, options);
  const VertexId target = g.target();

  Solution out;
  SearchStats& stats = out.stats;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> queue;
  long seq = 0;

  auto make_entry = [&](ConcretePath path, Extension& ext) {
    const GcsVertex& end = *path.back().vertex;
    RestrictionSolution sol =
        solve_restriction(path, FragmentAt(heuristic, g, end), solver);
    if (sol.status == SolveStatus::kInfeasible) return;
    if (sol.status == SolveStatus::kSolverError) {
      ext.outcome = Outcome::kSolverError;
      return;
    }
    ext.entry = std::make_shared<const PathCacheEntry>(
        std::move(path), std::move(sol), g.domination_selector(end.id));
    ext.outcome = Outcome::kPruned;
  };
  auto push = [&](const EntryPtr& entry) {
    queue.push(Node{entry, entry->solution().total_estimate, seq++});
    stats.queue_pushes++;
    commit(entry);
    stats.frontier_adds++;
  };
  auto elapsed_s = [&] {
    return std::chrono::duration<double>(Clock::now() - start).count();
  };
  auto finish = [&](SearchStatus status) {
    out.status = status;
    stats.solver_calls = solver.num_solves() - solves_before;
    stats.wall_time_ms = 1e3 * elapsed_s();
    return out;
  };

  {
    Extension root;
    make_entry(ConcretePath{PathStep{g.vertex(g.source()), nullptr}}, root);
    if (root.outcome == Outcome::kSolverError) stats.solver_errors++;
    if (!root.entry) return finish(SearchStatus::kFail);
    push(root.entry);
  }

  long iteration = 0;
  while (!queue.empty()) {
    if (options.timeout_s > 0 && elapsed_s() > options.timeout_s) {
      return finish(SearchStatus::kTimedOut);
    }
    const Node node = queue.top();
    queue.pop();
    if (options.observer) {
      options.observer(IterationInfo{iteration, &node.entry->ids(), node.f,
                                     queue.size()});
    }
    ++iteration;
    if (node.entry->end() == target) {
      out.path = node.entry->ids();
      out.trajectory = node.entry->solution().trajectory;
      out.cost = node.entry->solution().cost_to_come;
      return finish(SearchStatus::kSolved);
    }
    if (options.max_expansions > 0 && stats.expansions >= options.max_expansions) {
      return finish(SearchStatus::kExpansionLimit);
    }
    stats.expansions++;
    if (static_cast<int>(node.entry->path().size()) >= max_len) continue;

    const std::vector<Successor> successors = g.successors(node.entry->end());
    std::vector<Extension> results(successors.size());
    ParallelFor(successors.size(), options.num_threads, [&](std::size_t i) {
      ConcretePath path = node.entry->path();
      path.push_back(PathStep{successors[i].vertex, successors[i].edge});
      make_entry(std::move(path), results[i]);
      if (results[i].entry && keep(*results[i].entry)) {
        results[i].outcome = Outcome::kAccepted;
      }
    });
    for (const Extension& ext : results) {
      switch (ext.outcome) {
        case Outcome::kDropped:
          stats.infeasible++;
          break;
        case Outcome::kSolverError:
          stats.solver_errors++;
          break;
        case Outcome::kPruned:
          stats.pruned++;
          break;
        case Outcome::kAccepted:
          push(ext.entry);
          break;
      }
    }
  }
  return finish(SearchStatus::kFail);
}

}  // namespace

Solution gcs_star(const ImplicitGcs& g, const Heuristic& heuristic,
                  const DominationChecker& checker,
                  const SearchOptions& options) {
  const DominationChecker seeded(checker.kind(), checker.impl(),
                                 checker.samples(), options.seed);
  DominationContext ctx(options.solver ? *options.solver : DefaultLpSolver());
  VertexFrontier frontier;
  Solution out = Search(
      g, heuristic, options,
      [&](const PathCacheEntry& entry) {
        return seeded.Check(g, entry, frontier.at(entry.end()), ctx).not_dominated;
      },
      [&](const EntryPtr& entry) { frontier.Add(entry); });
  out.stats.domination_calls = ctx.counters().checks.load();
  out.stats.solver_errors += ctx.counters().solver_errors.load();
  return out;
}

Solution astar_vertex_baseline(const ImplicitGcs& g, const Heuristic& heuristic,
                               const SearchOptions& options) {
  std::map<VertexId, double> best;
  Solution out = Search(
      g, heuristic, options,
      [&](const PathCacheEntry& entry) {
        auto it = best.find(entry.end());
        return it == best.end() ||
               entry.solution().cost_to_come < it->second - kCheaperSlack;
      },
      [&](const EntryPtr& entry) {
        best[entry->end()] = entry->solution().cost_to_come;
      });
  out.stats.domination_calls = 0;
  return out;
}

}  // namespace gcs_star
