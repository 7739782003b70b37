#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "gcs_star/gcs.h"
#include "gcs_star/restriction.h"

namespace gcs_star {

/// Strictness slack of the reaches-cheaper comparison.
inline constexpr double kCheaperSlack = 1e-9;

/// A path stored in the frontier together with its optimal trajectory and
/// lazily built reachable set and cost epigraph (both in selector
/// coordinates).
class PathCacheEntry {
 public:
  PathCacheEntry(ConcretePath path, RestrictionSolution solution,
                 std::optional<Eigen::MatrixXd> selector);

  const ConcretePath& path() const { return path_; }
  const Path& ids() const { return ids_; }
  const VertexId& end() const { return ids_.back(); }
  const RestrictionSolution& solution() const { return solution_; }
  const std::optional<Eigen::MatrixXd>& selector() const { return selector_; }

  /// E x*_end, the optimal terminal point in selector coordinates.
  Eigen::VectorXd selected_terminal() const;

  /// Built on first use; safe to call concurrently.
  const std::optional<AHPolytope>& reachable(const LpSolver& solver) const;
  const std::optional<AHPolytope>& epigraph(const LpSolver& solver) const;

 private:
  ConcretePath path_;
  Path ids_;
  RestrictionSolution solution_;
  std::optional<Eigen::MatrixXd> selector_;
  mutable std::once_flag reachable_once_;
  mutable std::once_flag epigraph_once_;
  mutable std::optional<AHPolytope> reachable_;
  mutable std::optional<AHPolytope> epigraph_;
};

using EntryPtr = std::shared_ptr<const PathCacheEntry>;

/// Solves the restriction of `ids` without a heuristic and wraps it with the
/// graph's selector. Returns null when the path has no trajectory; throws
/// std::runtime_error on a solver failure.
EntryPtr MakePathEntry(const ImplicitGcs& g, const Path& ids,
                       const LpSolver& solver = DefaultLpSolver());

/// The map from each vertex to its un-pruned paths, in insertion order.
class VertexFrontier {
 public:
  const std::vector<EntryPtr>& at(const VertexId& v) const;
  void Add(EntryPtr entry);
  std::size_t total_entries() const { return total_; }
  const std::map<VertexId, std::vector<EntryPtr>>& entries() const {
    return entries_;
  }

 private:
  std::map<VertexId, std::vector<EntryPtr>> entries_;
  std::size_t total_{0};
};

enum class DominationKind { kReachesCheaper, kReachesNew };
enum class DominationImpl { kSampling, kContainment, kHybrid };

struct DominationCounters {
  std::atomic<long> checks{0};
  std::atomic<long> samples{0};
  std::atomic<long> containment_lps{0};
  std::atomic<long> prefilter_skips{0};
  std::atomic<long> solver_errors{0};
};

/// Shared state of the checks within one search: the LP backend, cached
/// samplers for terminal sets, and counters.
class DominationContext {
 public:
  explicit DominationContext(const LpSolver& solver = DefaultLpSolver())
      : solver_(solver) {}

  const LpSolver& solver() const { return solver_; }
  DominationCounters& counters() const { return counters_; }

  /// Sampler data for X_v, built once per vertex.
  std::shared_ptr<const SamplerSupport> sampler_support(
      const GcsVertex& v) const;

 private:
  const LpSolver& solver_;
  mutable DominationCounters counters_;
  mutable std::mutex mutex_;
  mutable std::map<VertexId, std::shared_ptr<const SamplerSupport>> samplers_;
};

struct CheckResult {
  /// True keeps the candidate.
  bool not_dominated{false};
  /// For a true sampling verdict: the witness in selector coordinates.
  std::optional<Eigen::VectorXd> witness;
  /// Whether a containment stage ran.
  bool used_containment{false};
};

/// Seeds the per-candidate stream from the global seed and the path ids.
std::uint64_t CandidateSeed(std::uint64_t seed, const Path& ids);

CheckResult reaches_cheaper_sampled(const ImplicitGcs& g,
                                    const PathCacheEntry& candidate,
                                    const std::vector<EntryPtr>& frontier,
                                    int k, std::mt19937_64& rng,
                                    const DominationContext& ctx);

CheckResult reaches_new_sampled(const ImplicitGcs& g,
                                const PathCacheEntry& candidate,
                                const std::vector<EntryPtr>& frontier, int k,
                                std::mt19937_64& rng,
                                const DominationContext& ctx);

/// False only when a single frontier entry's epigraph certifiably contains
/// the candidate's.
CheckResult reaches_cheaper_contained(const PathCacheEntry& candidate,
                                      const std::vector<EntryPtr>& frontier,
                                      const DominationContext& ctx);

/// False only when a single frontier entry's reachable set certifiably
/// contains the candidate's.
CheckResult reaches_new_contained(const PathCacheEntry& candidate,
                                  const std::vector<EntryPtr>& frontier,
                                  const DominationContext& ctx);

/// One-sample check, then containment if the sample found no witness.
CheckResult hybrid_not_dominated(const ImplicitGcs& g,
                                 const PathCacheEntry& candidate,
                                 const std::vector<EntryPtr>& frontier,
                                 DominationKind kind, std::mt19937_64& rng,
                                 const DominationContext& ctx);

/// Re-evaluates a witness by direct LPs. Returns the slack of the defining
/// condition: for reaches-cheaper, min over the frontier of g̃(v', y) −
/// g̃(v, y) (+∞ with an empty frontier or all unreachable); for reaches-new,
/// +∞ when the condition holds and −∞ otherwise.
double WitnessSlack(const PathCacheEntry& candidate,
                    const std::vector<EntryPtr>& frontier, DominationKind kind,
                    const Eigen::VectorXd& y, const LpSolver& solver);

/// A configured NotDominated check.
class DominationChecker {
 public:
  DominationChecker(DominationKind kind, DominationImpl impl, int samples = 1,
                    std::uint64_t seed = 0);

  /// Parses "rc-sampling", "rn-sampling", "rc-containment", "rn-containment",
  /// "rc-hybrid" or "rn-hybrid". Throws std::invalid_argument otherwise.
  static DominationChecker FromKey(std::string_view key, int samples = 1,
                                   std::uint64_t seed = 0);

  CheckResult Check(const ImplicitGcs& g, const PathCacheEntry& candidate,
                    const std::vector<EntryPtr>& frontier,
                    const DominationContext& ctx) const;

  DominationKind kind() const { return kind_; }
  DominationImpl impl() const { return impl_; }
  int samples() const { return samples_; }
  std::uint64_t seed() const { return seed_; }
  std::string key() const;

 private:
  DominationKind kind_;
  DominationImpl impl_;
  int samples_;
  std::uint64_t seed_;
};

}  // namespace gcs_star
