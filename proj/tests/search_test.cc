#include "gcs_star/search.h"

#include <gtest/gtest.h>

#include "gcs_star/environments.h"
#include "oracles.h"

namespace gcs_star {
namespace {

const std::vector<std::string> kCheckers = {
    "rc-sampling",    "rn-sampling", "rc-containment",
    "rn-containment", "rc-hybrid",   "rn-hybrid"};

const LpSolver& BlandSolver() {
  static const auto solver = MakeLpSolver("simplex-bland");
  return *solver;
}

// Hides the explicit type so the search treats the graph as implicit.
class Opaque final : public ImplicitGcs {
 public:
  explicit Opaque(std::shared_ptr<const ExplicitGcs> g) : g_(std::move(g)) {}
  VertexId source() const override { return g_->source(); }
  VertexId target() const override { return g_->target(); }
  std::shared_ptr<const GcsVertex> vertex(const VertexId& id) const override {
    return g_->vertex(id);
  }
  std::vector<Successor> successors(const VertexId& u) const override {
    return g_->successors(u);
  }

 private:
  std::shared_ptr<const ExplicitGcs> g_;
};

TEST(GcsStar, SingleEdge) {
  auto g = std::make_shared<ExplicitGcs>();
  g->AddVertex("s", HPolyhedron::MakeBox(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1)));
  g->AddVertex("t", HPolyhedron::MakeBox(Eigen::Vector2d(3, 0), Eigen::Vector2d(4, 1)));
  g->AddEdge("s", "t", HPolyhedron(Eigen::MatrixXd(0, 4), Eigen::VectorXd(0)),
             L1DistanceCost(2, 1.0));
  g->set_source("s");
  g->set_target("t");
  const Solution sol = gcs_star(*g, *MakeZeroHeuristic(),
                                DominationChecker::FromKey("rc-containment"));
  ASSERT_TRUE(sol.solved());
  EXPECT_EQ(sol.path, (Path{"s", "t"}));
  EXPECT_NEAR(sol.cost, 3.0, 1e-9);
}

TEST(GcsStar, CounterexampleEveryCheckerFindsTheFeasiblePath) {
  const auto g = make_fig3_counterexample();
  for (const auto& key : kCheckers) {
    SearchOptions opts;
    opts.seed = 7;
    const Solution sol =
        gcs_star(*g, *MakeZeroHeuristic(), DominationChecker::FromKey(key), opts);
    ASSERT_TRUE(sol.solved()) << key;
    EXPECT_EQ(sol.path, (Path{"s", "B", "C", "t"})) << key;
    const ConcretePath cp = Realize(*g, sol.path);
    EXPECT_LE(TrajectoryResidual(cp, sol.trajectory.points), 1e-6) << key;
    EXPECT_NEAR(EvaluateTrajectoryCost(cp, sol.trajectory.points), sol.cost, 1e-6);
  }
}

TEST(Baseline, CounterexampleFails) {
  const auto g = make_fig3_counterexample();
  EXPECT_EQ(astar_vertex_baseline(*g, *MakeZeroHeuristic()).status,
            SearchStatus::kFail);
}

TEST(Baseline, DiscreteChainMatchesGcsStar) {
  auto g = std::make_shared<ExplicitGcs>();
  auto point = [](double x) {
    return HPolyhedron::MakeBox(Eigen::VectorXd::Constant(1, x),
                                Eigen::VectorXd::Constant(1, x));
  };
  g->AddVertex("s", point(0));
  g->AddVertex("a", point(1));
  g->AddVertex("b", point(5));
  g->AddVertex("t", point(2));
  const HPolyhedron free(Eigen::MatrixXd(0, 2), Eigen::VectorXd(0));
  g->AddEdge("s", "a", free, L1DistanceCost(1, 1));
  g->AddEdge("s", "b", free, L1DistanceCost(1, 1));
  g->AddEdge("a", "t", free, L1DistanceCost(1, 1));
  g->AddEdge("b", "t", free, L1DistanceCost(1, 1));
  g->AddEdge("a", "b", free, L1DistanceCost(1, 1));
  g->set_source("s");
  g->set_target("t");
  const Solution a = astar_vertex_baseline(*g, *MakeZeroHeuristic());
  const Solution b = gcs_star(*g, *MakeZeroHeuristic(),
                              DominationChecker::FromKey("rc-containment"));
  ASSERT_TRUE(a.solved());
  ASSERT_TRUE(b.solved());
  EXPECT_EQ(a.path, b.path);
  EXPECT_NEAR(a.cost, 4.0, 1e-9);
  EXPECT_NEAR(b.cost, 4.0, 1e-9);
}

TEST(GcsStar, Stones4MatchesExhaustiveOracle) {
  const auto g = make_stones4();
  const auto oracle = testing::ExhaustiveOptimum(*g, 8, BlandSolver());
  ASSERT_TRUE(std::isfinite(oracle.cost));
  SearchOptions opts;
  opts.max_path_len = 8;
  for (const auto& h : {MakeZeroHeuristic(), MakeShortcutHeuristic({})}) {
    const Solution sol =
        gcs_star(*g, *h, DominationChecker::FromKey("rc-containment"), opts);
    ASSERT_TRUE(sol.solved()) << h->name();
    EXPECT_NEAR(sol.cost, oracle.cost, 1e-5 * oracle.cost) << h->name();
  }
  const Solution base = astar_vertex_baseline(*g, *MakeZeroHeuristic(), opts);
  if (base.solved()) EXPECT_GE(base.cost, oracle.cost - 1e-6);
}

TEST(GcsStar, RandomFixturesMatchExhaustiveOracle) {
  int solved = 0;
  for (int seed = 0; seed < 20; ++seed) {
    const auto g = MakeRandomExplicitGcs(seed);
    const auto oracle = testing::ExhaustiveOptimum(*g, 8, BlandSolver());
    SearchOptions opts;
    opts.max_path_len = 8;
    const auto h = MakeConstantLowerBoundHeuristic(*g);
    const Solution sol =
        gcs_star(*g, *h, DominationChecker::FromKey("rc-containment"), opts);
    if (!std::isfinite(oracle.cost)) {
      EXPECT_EQ(sol.status, SearchStatus::kFail) << seed;
      continue;
    }
    ++solved;
    ASSERT_TRUE(sol.solved()) << seed;
    EXPECT_NEAR(sol.cost, oracle.cost, 1e-5 * oracle.cost) << seed;
  }
  EXPECT_GE(solved, 10);
}

TEST(GcsStar, PoppedEstimatesStayBelowOptimum) {
  for (int seed = 0; seed < 6; ++seed) {
    const auto g = MakeRandomExplicitGcs(seed);
    const auto oracle = testing::ExhaustiveOptimum(*g, 8, BlandSolver());
    if (!std::isfinite(oracle.cost)) continue;
    SearchOptions opts;
    opts.max_path_len = 8;
    double worst = -kInfinity;
    opts.observer = [&](const IterationInfo& info) {
      worst = std::max(worst, info.popped_f);
    };
    const Solution sol = gcs_star(*g, *MakeConstantLowerBoundHeuristic(*g),
                                  DominationChecker::FromKey("rc-containment"), opts);
    ASSERT_TRUE(sol.solved());
    EXPECT_LE(worst, oracle.cost + 1e-6) << seed;
  }
}

TEST(GcsStar, EveryFrontierEntryIsQueued) {
  const auto g = make_stones4();
  for (const auto& key : kCheckers) {
    const Solution sol =
        gcs_star(*g, *MakeZeroHeuristic(), DominationChecker::FromKey(key));
    EXPECT_EQ(sol.stats.frontier_adds, sol.stats.queue_pushes) << key;
    EXPECT_GT(sol.stats.solver_calls, 0);
  }
}

TEST(GcsStar, ReachesNewCostsAtLeastReachesCheaper) {
  const auto g = make_stones4();
  SearchOptions opts;
  opts.seed = 3;
  const Solution rc =
      gcs_star(*g, *MakeZeroHeuristic(), DominationChecker::FromKey("rc-sampling"), opts);
  const Solution rn =
      gcs_star(*g, *MakeZeroHeuristic(), DominationChecker::FromKey("rn-sampling"), opts);
  ASSERT_TRUE(rc.solved());
  ASSERT_TRUE(rn.solved());
  EXPECT_GE(rn.cost, rc.cost - 1e-6);
}

TEST(GcsStar, InflationBoundsCost) {
  const auto g = make_stones4();
  const auto oracle = testing::ExhaustiveOptimum(*g, 8, BlandSolver());
  SearchOptions opts;
  opts.max_path_len = 8;
  const auto h = MakeInflatedHeuristic(MakeShortcutHeuristic({}), 10.0);
  const Solution sol = gcs_star(*g, *h, DominationChecker::FromKey("rc-containment"), opts);
  ASSERT_TRUE(sol.solved());
  EXPECT_LE(sol.cost, 10 * oracle.cost + 1e-6);
}

TEST(GcsStar, DeterministicAcrossRunsAndThreads) {
  const auto g = make_stones4();
  for (const auto& key : kCheckers) {
    SearchOptions opts;
    opts.seed = 5;
    const Solution a =
        gcs_star(*g, *MakeZeroHeuristic(), DominationChecker::FromKey(key), opts);
    opts.num_threads = 4;
    const Solution b =
        gcs_star(*g, *MakeZeroHeuristic(), DominationChecker::FromKey(key), opts);
    EXPECT_EQ(a.path, b.path) << key;
    EXPECT_EQ(a.cost, b.cost) << key;
    EXPECT_EQ(a.stats.expansions, b.stats.expansions) << key;
    EXPECT_EQ(a.stats.queue_pushes, b.stats.queue_pushes) << key;
  }
}

TEST(GcsStar, LimitsAndStatuses) {
  const auto g = make_stones4();
  SearchOptions opts;
  opts.max_expansions = 1;
  EXPECT_EQ(gcs_star(*g, *MakeZeroHeuristic(),
                     DominationChecker::FromKey("rc-containment"), opts)
                .status,
            SearchStatus::kExpansionLimit);
  opts.max_expansions = 0;
  opts.max_path_len = 2;
  EXPECT_EQ(gcs_star(*g, *MakeZeroHeuristic(),
                     DominationChecker::FromKey("rc-containment"), opts)
                .status,
            SearchStatus::kFail);
  const Opaque opaque(g);
  EXPECT_THROW(gcs_star(opaque, *MakeZeroHeuristic(),
                        DominationChecker::FromKey("rc-containment")),
               std::invalid_argument);
  opts.max_path_len = 8;
  EXPECT_TRUE(gcs_star(opaque, *MakeZeroHeuristic(),
                       DominationChecker::FromKey("rc-containment"), opts)
                  .solved());
  EXPECT_EQ(EffectiveMaxPathLen(*g, SearchOptions{}), 3 * 6);
  EXPECT_EQ(to_string(SearchStatus::kTimedOut), "timeout");
}

}  // namespace
}  // namespace gcs_star
