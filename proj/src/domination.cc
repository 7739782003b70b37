#include "gcs_star/domination.h"

#include "gcs_star/heuristic.h"

#include <algorithm>
#include <stdexcept>

namespace gcs_star {

PathCacheEntry::PathCacheEntry(ConcretePath path, RestrictionSolution solution,
                               std::optional<Eigen::MatrixXd> selector)
    : path_(std::move(path)),
      ids_(IdsOf(path_)),
      solution_(std::move(solution)),
      selector_(std::move(selector)) {}

Eigen::VectorXd PathCacheEntry::selected_terminal() const {
  const Eigen::VectorXd& x = solution_.terminal_point();
  return selector_ ? Eigen::VectorXd(*selector_ * x) : x;
}

const std::optional<AHPolytope>& PathCacheEntry::reachable(
    const LpSolver& solver) const {
  std::call_once(reachable_once_, [&] {
    reachable_ = reachable_set(path_, selector_, solver);
  });
  return reachable_;
}

const std::optional<AHPolytope>& PathCacheEntry::epigraph(
    const LpSolver& solver) const {
  std::call_once(epigraph_once_, [&] {
    epigraph_ = cost_epigraph(path_, selector_, solver);
  });
  return epigraph_;
}

EntryPtr MakePathEntry(const ImplicitGcs& g, const Path& ids,
                       const LpSolver& solver) {
  ConcretePath path = Realize(g, ids);
  RestrictionSolution sol = solve_restriction(path, HeuristicFragment{}, solver);
  if (sol.status == SolveStatus::kInfeasible) return nullptr;
  if (sol.status == SolveStatus::kSolverError) {
    throw std::runtime_error("restriction solve failed for " + PathToString(ids));
  }
  return std::make_shared<const PathCacheEntry>(std::move(path), std::move(sol),
                                                g.domination_selector(ids.back()));
}

const std::vector<EntryPtr>& VertexFrontier::at(const VertexId& v) const {
  static const std::vector<EntryPtr> kEmpty;
  auto it = entries_.find(v);
  return it == entries_.end() ? kEmpty : it->second;
}

void VertexFrontier::Add(EntryPtr entry) {
  const VertexId v = entry->end();
  entries_[v].push_back(std::move(entry));
  ++total_;
}

std::shared_ptr<const SamplerSupport> DominationContext::sampler_support(
    const GcsVertex& v) const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = samplers_.find(v.id);
    if (it != samplers_.end()) return it->second;
  }
  auto support = std::make_shared<const SamplerSupport>(v.set, solver_);
  std::lock_guard<std::mutex> lock(mutex_);
  return samplers_.emplace(v.id, std::move(support)).first->second;
}

std::uint64_t CandidateSeed(std::uint64_t seed, const Path& ids) {
  // FNV-1a over the ids, then a splitmix64 finalizer with the seed.
  std::uint64_t h = 1469598103934665603ull;
  for (const VertexId& id : ids) {
    for (unsigned char c : id.str()) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= 0xff;
    h *= 1099511628211ull;
  }
  std::uint64_t z = h ^ (seed + 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

namespace {

// Runs up to k samples and returns the first point satisfying `is_witness`.
template <typename WitnessFn>
CheckResult SampleForWitness(const PathCacheEntry& candidate, int k,
                             std::mt19937_64& rng, const DominationContext& ctx,
                             WitnessFn is_witness) {
  CheckResult out;
  const GcsVertex& end = *candidate.path().back().vertex;
  HitAndRunSampler sampler(ctx.sampler_support(end));
  for (int i = 0; i < k; ++i) {
    ctx.counters().samples++;
    const Eigen::VectorXd x = sampler.Sample(rng);
    const Projection p = project_to_reachable(candidate.path(), x, ctx.solver());
    if (p.status == SolveStatus::kInfeasible) return out;  // nothing reachable
    if (p.status == SolveStatus::kSolverError) {
      ctx.counters().solver_errors++;
      continue;
    }
    const Eigen::VectorXd y =
        candidate.selector() ? Eigen::VectorXd(*candidate.selector() * p.point)
                             : p.point;
    if (is_witness(y)) {
      out.not_dominated = true;
      out.witness = y;
      return out;
    }
  }
  return out;
}

}  // namespace

CheckResult reaches_cheaper_sampled(const ImplicitGcs&,
                                    const PathCacheEntry& candidate,
                                    const std::vector<EntryPtr>& frontier,
                                    int k, std::mt19937_64& rng,
                                    const DominationContext& ctx) {
  return SampleForWitness(candidate, k, rng, ctx, [&](const Eigen::VectorXd& y) {
    const PointCost own = cost_to_come_at_point(candidate.path(), y,
                                                candidate.selector(), ctx.solver());
    if (!own.finite()) {
      if (own.status == SolveStatus::kSolverError) ctx.counters().solver_errors++;
      return false;
    }
    for (const EntryPtr& other : frontier) {
      const PointCost c = cost_to_come_at_point(other->path(), y,
                                                other->selector(), ctx.solver());
      if (c.infinite()) continue;
      if (!c.finite()) {
        ctx.counters().solver_errors++;
        return false;
      }
      if (!(own.value < c.value - kCheaperSlack)) return false;
    }
    return true;
  });
}

CheckResult reaches_new_sampled(const ImplicitGcs&,
                                const PathCacheEntry& candidate,
                                const std::vector<EntryPtr>& frontier, int k,
                                std::mt19937_64& rng,
                                const DominationContext& ctx) {
  return SampleForWitness(candidate, k, rng, ctx, [&](const Eigen::VectorXd& y) {
    const PointCost own = cost_to_come_at_point(candidate.path(), y,
                                                candidate.selector(), ctx.solver());
    if (!own.finite()) {
      if (own.status == SolveStatus::kSolverError) ctx.counters().solver_errors++;
      return false;
    }
    for (const EntryPtr& other : frontier) {
      const PointCost c = cost_to_come_at_point(other->path(), y,
                                                other->selector(), ctx.solver());
      if (c.infinite()) continue;
      if (c.status == SolveStatus::kSolverError) ctx.counters().solver_errors++;
      return false;
    }
    return true;
  });
}

namespace {

// Tolerance of the membership pre-filter; a point rejected even with this
// slack lies outside the set, so containment cannot hold.
constexpr double kPrefilterTol = 1e-7;

CheckResult ContainedCheck(const PathCacheEntry& candidate,
                           const std::vector<EntryPtr>& frontier,
                           const DominationContext& ctx, bool epigraph) {
  CheckResult out;
  out.used_containment = true;
  out.not_dominated = true;
  if (frontier.empty()) return out;
  const LpSolver& solver = ctx.solver();
  const std::optional<AHPolytope>& own =
      epigraph ? candidate.epigraph(solver) : candidate.reachable(solver);
  if (!own) {
    // An empty set is contained in anything.
    out.not_dominated = false;
    return out;
  }
  Eigen::VectorXd probe = candidate.selected_terminal();
  if (epigraph) {
    probe.conservativeResize(probe.size() + 1);
    probe(probe.size() - 1) = candidate.solution().cost_to_come;
  }
  for (const EntryPtr& other : frontier) {
    const std::optional<AHPolytope>& set =
        epigraph ? other->epigraph(solver) : other->reachable(solver);
    if (!set) continue;
    try {
      if (!set->contains_point(probe, solver, kPrefilterTol)) {
        ctx.counters().prefilter_skips++;
        continue;
      }
    } catch (const std::runtime_error&) {
      ctx.counters().solver_errors++;
    }
    ctx.counters().containment_lps++;
    const Containment verdict = ah_containment_certified(*own, *set, solver);
    if (verdict == Containment::kCertified) {
      out.not_dominated = false;
      return out;
    }
    if (verdict == Containment::kSolverError) ctx.counters().solver_errors++;
  }
  return out;
}

}  // namespace

CheckResult reaches_cheaper_contained(const PathCacheEntry& candidate,
                                      const std::vector<EntryPtr>& frontier,
                                      const DominationContext& ctx) {
  return ContainedCheck(candidate, frontier, ctx, true);
}

CheckResult reaches_new_contained(const PathCacheEntry& candidate,
                                  const std::vector<EntryPtr>& frontier,
                                  const DominationContext& ctx) {
  return ContainedCheck(candidate, frontier, ctx, false);
}

CheckResult hybrid_not_dominated(const ImplicitGcs& g,
                                 const PathCacheEntry& candidate,
                                 const std::vector<EntryPtr>& frontier,
                                 DominationKind kind, std::mt19937_64& rng,
                                 const DominationContext& ctx) {
  const bool rc = kind == DominationKind::kReachesCheaper;
  CheckResult sampled =
      rc ? reaches_cheaper_sampled(g, candidate, frontier, 1, rng, ctx)
         : reaches_new_sampled(g, candidate, frontier, 1, rng, ctx);
  if (sampled.not_dominated) return sampled;
  return rc ? reaches_cheaper_contained(candidate, frontier, ctx)
            : reaches_new_contained(candidate, frontier, ctx);
}

double WitnessSlack(const PathCacheEntry& candidate,
                    const std::vector<EntryPtr>& frontier, DominationKind kind,
                    const Eigen::VectorXd& y, const LpSolver& solver) {
  const PointCost own =
      cost_to_come_at_point(candidate.path(), y, candidate.selector(), solver);
  if (!own.finite()) return -kInfinity;
  double slack = kInfinity;
  for (const EntryPtr& other : frontier) {
    const PointCost c =
        cost_to_come_at_point(other->path(), y, other->selector(), solver);
    if (c.infinite()) continue;
    if (!c.finite() || kind == DominationKind::kReachesNew) return -kInfinity;
    slack = std::min(slack, c.value - own.value);
  }
  return slack;
}

DominationChecker::DominationChecker(DominationKind kind, DominationImpl impl,
                                     int samples, std::uint64_t seed)
    : kind_(kind), impl_(impl), samples_(samples), seed_(seed) {
  if (samples < 1) throw std::invalid_argument("sample count must be >= 1");
}

DominationChecker DominationChecker::FromKey(std::string_view key, int samples,
                                             std::uint64_t seed) {
  const auto dash = key.find('-');
  if (dash == std::string_view::npos) {
    throw std::invalid_argument("unknown checker '" + std::string(key) + "'");
  }
  const std::string_view kind = key.substr(0, dash);
  const std::string_view impl = key.substr(dash + 1);
  DominationKind k;
  if (kind == "rc") {
    k = DominationKind::kReachesCheaper;
  } else if (kind == "rn") {
    k = DominationKind::kReachesNew;
  } else {
    throw std::invalid_argument("unknown checker '" + std::string(key) + "'");
  }
  DominationImpl i;
  if (impl == "sampling") {
    i = DominationImpl::kSampling;
  } else if (impl == "containment") {
    i = DominationImpl::kContainment;
  } else if (impl == "hybrid") {
    i = DominationImpl::kHybrid;
  } else {
    throw std::invalid_argument("unknown checker '" + std::string(key) + "'");
  }
  return DominationChecker(k, i, samples, seed);
}

std::string DominationChecker::key() const {
  std::string out = kind_ == DominationKind::kReachesCheaper ? "rc-" : "rn-";
  switch (impl_) {
    case DominationImpl::kSampling:
      return out + "sampling";
    case DominationImpl::kContainment:
      return out + "containment";
    case DominationImpl::kHybrid:
      return out + "hybrid";
  }
  return out;
}

CheckResult DominationChecker::Check(const ImplicitGcs& g,
                                     const PathCacheEntry& candidate,
                                     const std::vector<EntryPtr>& frontier,
                                     const DominationContext& ctx) const {
  ctx.counters().checks++;
  std::mt19937_64 rng(CandidateSeed(seed_, candidate.ids()));
  const bool rc = kind_ == DominationKind::kReachesCheaper;
  switch (impl_) {
    case DominationImpl::kSampling:
      return rc ? reaches_cheaper_sampled(g, candidate, frontier, samples_, rng,
                                          ctx)
                : reaches_new_sampled(g, candidate, frontier, samples_, rng, ctx);
    case DominationImpl::kContainment:
      return rc ? reaches_cheaper_contained(candidate, frontier, ctx)
                : reaches_new_contained(candidate, frontier, ctx);
    case DominationImpl::kHybrid:
      return hybrid_not_dominated(g, candidate, frontier, kind_, rng, ctx);
  }
  return CheckResult{};
}

}  // namespace gcs_star
