#include "gcs_star/pushing.h"

#include <gtest/gtest.h>

#include <set>

#include "gcs_star/search.h"

namespace gcs_star {
namespace {

std::vector<Eigen::Vector2d> Square(double half) {
  return {{-half, -half}, {half, -half}, {half, half}, {-half, half}};
}

std::vector<Eigen::Vector2d> Triangle(double scale) {
  return {{0, 0}, {scale, 0.2}, {0.3, scale}};
}

// Penetration depth of two convex polygons by separating axes.
double Penetration(const std::vector<Eigen::Vector2d>& P,
                   const std::vector<Eigen::Vector2d>& Q) {
  double depth = kInfinity;
  for (const auto* poly : {&P, &Q}) {
    const int n = static_cast<int>(poly->size());
    for (int k = 0; k < n; ++k) {
      const Eigen::Vector2d e = (*poly)[(k + 1) % n] - (*poly)[k];
      const Eigen::Vector2d axis = Eigen::Vector2d(e.y(), -e.x()).normalized();
      double p_lo = kInfinity, p_hi = -kInfinity, q_lo = kInfinity, q_hi = -kInfinity;
      for (const auto& v : P) {
        p_lo = std::min(p_lo, axis.dot(v));
        p_hi = std::max(p_hi, axis.dot(v));
      }
      for (const auto& v : Q) {
        q_lo = std::min(q_lo, axis.dot(v));
        q_hi = std::max(q_hi, axis.dot(v));
      }
      depth = std::min(depth, std::min(p_hi - q_lo, q_hi - p_lo));
    }
  }
  return std::max(depth, 0.0);
}

std::vector<Eigen::Vector2d> Placed(const BodySpec& b, const Eigen::Vector2d& p) {
  std::vector<Eigen::Vector2d> out;
  for (const auto& v : b.polygon) out.push_back(v + p);
  return out;
}

TEST(PairOptions, TwoBoxes) {
  const PushingEnvironment env = make_push1_environment();
  const auto options = pair_options(env, 0, 1);
  // 8 separating faces and 4 antiparallel face pairs; square vertices are never
  // unique extremes along a face normal of the other square.
  EXPECT_EQ(options.size(), 12u);
  std::set<std::string> tokens;
  for (const auto& o : options) tokens.insert(o.token());
  EXPECT_EQ(tokens.size(), options.size());
}

// Brute-force option list of a pair, built independently of pair_options.
int CountOptions(const BodySpec& I, const BodySpec& J) {
  int count = I.num_faces() + J.num_faces();
  for (int a = 0; a < I.num_faces(); ++a) {
    for (int b = 0; b < J.num_faces(); ++b) {
      const Eigen::Vector2d ea = I.polygon[(a + 1) % I.num_faces()] - I.polygon[a];
      const Eigen::Vector2d eb = J.polygon[(b + 1) % J.num_faces()] - J.polygon[b];
      const double cross = ea.x() * eb.y() - ea.y() * eb.x();
      if (std::abs(cross) < 1e-12 && ea.dot(eb) < 0) ++count;
    }
  }
  for (const auto& [F, V] : {std::pair{&I, &J}, std::pair{&J, &I}}) {
    for (int f = 0; f < F->num_faces(); ++f) {
      const Eigen::Vector2d n = F->normal(f);
      std::vector<double> d;
      for (const auto& v : V->polygon) d.push_back(n.dot(v));
      std::sort(d.begin(), d.end());
      if (d[1] - d[0] > 1e-9) ++count;
    }
  }
  return count;
}

TEST(Successors, OnePairOfTriangles) {
  PushingEnvironment env;
  env.bodies = {BodySpec{"r", Triangle(1.0), true, true},
                BodySpec{"o", Triangle(0.8), true, false}};
  env.start = {Eigen::Vector2d(-3, 0), Eigen::Vector2d(0, 0)};
  env.goal = HPolyhedron::MakeBox(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1));
  const int options = CountOptions(env.bodies[0], env.bodies[1]);
  EXPECT_EQ(static_cast<int>(pair_options(env, 0, 1).size()), options);
  const ContactModeKey start = start_mode(env);
  const auto succ = pushing_successors(env, start);
  EXPECT_EQ(static_cast<int>(succ.size()), options - 1);
  for (const auto& s : succ) EXPECT_NE(s, start);
}

TEST(Successors, TwoPairsWithObstacle) {
  PushingEnvironment env = make_push1_environment();
  env.bodies.push_back(BodySpec{
      "wall", {{2, -2}, {2.5, -2}, {2.5, 2}, {2, 2}}, false, false});
  ASSERT_EQ(env.pairs().size(), 3u);
  const ContactModeKey start = start_mode(env);
  std::size_t expected = 0;
  for (const auto& [i, j] : env.pairs()) {
    expected += CountOptions(env.bodies[i], env.bodies[j]) - 1;
  }
  EXPECT_EQ(pushing_successors(env, start).size(), expected);
}

TEST(ModeKey, RoundTrips) {
  const PushingEnvironment env = make_push1_environment();
  for (const auto& o : pair_options(env, 0, 1)) {
    const ContactModeKey key{{o}};
    EXPECT_EQ(ContactModeKey::Parse(key.ToString()), key);
  }
  EXPECT_THROW(ContactModeKey::Parse("x1.2"), std::invalid_argument);
  EXPECT_THROW(ContactModeKey::Parse("ff1.2"), std::invalid_argument);
}

TEST(VertexSet, RobotAloneFollowsActuation) {
  PushingEnvironment env;
  env.bodies = {BodySpec{"r", Square(0.25), true, true}};
  env.start = {Eigen::Vector2d(0, 0)};
  env.goal = HPolyhedron::MakeUnitBox(0);
  const ContactModeKey mode{};
  const HPolyhedron P = pushing_vertex_set(env, mode);
  const PushingVertexLayout l = pushing_layout(env, mode);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) {
    const Eigen::VectorXd x = sample_interior(P, rng);
    const Eigen::Vector2d dp = x.segment<2>(l.position(0, 1)) - x.segment<2>(l.position(0, 0));
    const Eigen::Vector2d a =
        0.5 * (x.segment<2>(l.actuation(0, 0)) + x.segment<2>(l.actuation(0, 1)));
    EXPECT_LE((dp - env.mu * a).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(VertexSet, SeparatedObjectIsStationary) {
  const PushingEnvironment env = make_push1_environment();
  const ContactModeKey mode = start_mode(env);
  const HPolyhedron P = pushing_vertex_set(env, mode);
  const PushingVertexLayout l = pushing_layout(env, mode);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 20; ++i) {
    const Eigen::VectorXd x = sample_interior(P, rng);
    EXPECT_LE((x.segment<2>(l.position(1, 1)) - x.segment<2>(l.position(1, 0)))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-8);
    for (int k = 0; k < 2; ++k) {
      EXPECT_LE(Penetration(Placed(env.bodies[0], x.segment<2>(l.position(0, k))),
                            Placed(env.bodies[1], x.segment<2>(l.position(1, k)))),
                1e-8);
    }
  }
}

TEST(VertexSet, FaceFaceContactForcesBalance) {
  const PushingEnvironment env = make_push1_environment();
  PairMode contact;
  for (const auto& o : pair_options(env, 0, 1)) {
    // Robot face with normal +x against the object.
    if (o.kind == PairMode::Kind::kFaceFace &&
        env.bodies[0].normal(o.face).isApprox(Eigen::Vector2d(1, 0))) {
      contact = o;
    }
  }
  ASSERT_EQ(contact.kind, PairMode::Kind::kFaceFace);
  const ContactModeKey mode{{contact}};
  const HPolyhedron P = pushing_vertex_set(env, mode);
  const PushingVertexLayout l = pushing_layout(env, mode);
  ASSERT_EQ(l.num_contacts, 1);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const Eigen::VectorXd x = sample_interior(P, rng);
    const double lambda = 0.5 * (x(l.force(0, 0)) + x(l.force(0, 1)));
    EXPECT_GE(std::min(x(l.force(0, 0)), x(l.force(0, 1))), -1e-9);
    const Eigen::Vector2d d_obj =
        x.segment<2>(l.position(1, 1)) - x.segment<2>(l.position(1, 0));
    const Eigen::Vector2d d_rob =
        x.segment<2>(l.position(0, 1)) - x.segment<2>(l.position(0, 0));
    const Eigen::Vector2d act =
        0.5 * (x.segment<2>(l.actuation(0, 0)) + x.segment<2>(l.actuation(0, 1)));
    // Object gets +λn, robot gets −λn plus its actuation.
    EXPECT_LE((d_obj - env.mu * lambda * Eigen::Vector2d(1, 0)).norm(), 1e-8);
    EXPECT_LE((d_rob - env.mu * (act - lambda * Eigen::Vector2d(1, 0))).norm(), 1e-8);
    for (int k = 0; k < 2; ++k) {
      const double gap = x(l.position(1, k)) - 0.5 - (x(l.position(0, k)) + 0.25);
      EXPECT_NEAR(gap, 0.0, 1e-8);
    }
  }
}

TEST(PushingGcs, EdgesAndCosts) {
  const auto g = make_pushing_problem(make_push1_environment());
  const auto succ = g->successors(g->source());
  ASSERT_FALSE(succ.empty());
  EXPECT_EQ(succ.back().vertex->id, VertexId("t"));
  const auto into_t = g->edge(succ.front().vertex->id, "t");
  EXPECT_EQ(into_t->cost.c0, 0.0);
  EXPECT_TRUE(into_t->cost.terms.empty());
  for (const auto& s : succ) {
    if (s.vertex->id == VertexId("t")) continue;
    EXPECT_EQ(s.edge->cost.c0, 1.0);
  }
  EXPECT_THROW(g->edge("t", succ.front().vertex->id), std::out_of_range);
  EXPECT_THROW(g->vertex("bogus"), std::out_of_range);
}

TEST(PushingGcs, SampledEdgePointsAreContinuous) {
  const auto g = make_pushing_problem(make_push1_environment());
  const VertexId s = g->source();
  std::mt19937_64 rng(4);
  int checked = 0;
  for (const auto& next : g->successors(s)) {
    const auto e = g->edge(s, next.vertex->id);
    const HPolyhedron joint =
        g->vertex(s)->set.CartesianProduct(next.vertex->set).Intersect(e->constraint);
    const auto c = chebyshev_center(joint);
    if (c.status != ChebyshevResult::Status::kFound) continue;
    const Eigen::VectorXd x = sample_interior(joint, rng);
    const int du = g->vertex(s)->dim();
    const auto pu = g->positions(s, x.head(du));
    const auto pv = g->positions(next.vertex->id, x.tail(x.size() - du));
    for (std::size_t m = 0; m < pu[1].size(); ++m) {
      EXPECT_LE((pu[1][m] - pv[0][m]).norm(), 1e-8);
    }
    if (next.vertex->id != VertexId("t") && (pv[1][0] - pv[0][0]).norm() < 1e-12 &&
        (pv[1][1] - pv[0][1]).norm() < 1e-12) {
      EXPECT_NEAR(e->cost.Evaluate(x.head(du), x.tail(x.size() - du)), 1.0, 1e-9);
    }
    ++checked;
  }
  EXPECT_GT(checked, 1);
}

TEST(PushingGcs, VertexSetsAreValid) {
  const auto g = make_pushing_problem(make_push1_environment());
  EXPECT_EQ(chebyshev_center(g->vertex(g->source())->set).status,
            ChebyshevResult::Status::kFound);
  for (const auto& s : g->successors(g->source())) {
    EXPECT_TRUE(is_bounded(s.vertex->set)) << s.vertex->id.str();
    EXPECT_EQ(chebyshev_center(s.vertex->set).status, ChebyshevResult::Status::kFound)
        << s.vertex->id.str();
  }
}

void ExpectPhysical(const PushingGcs& g, const Solution& sol) {
  const ConcretePath cp = Realize(g, sol.path);
  EXPECT_LE(TrajectoryResidual(cp, sol.trajectory.points), 1e-6);
  EXPECT_NEAR(EvaluateTrajectoryCost(cp, sol.trajectory.points), sol.cost, 1e-6);
  const auto& env = g.environment();
  for (std::size_t i = 0; i < sol.path.size(); ++i) {
    for (const auto& knot : g.positions(sol.path[i], sol.trajectory.points[i])) {
      EXPECT_LE(Penetration(Placed(env.bodies[0], knot[0]),
                            Placed(env.bodies[1], knot[1])),
                1e-6);
    }
  }
}

TEST(PushingSearch, PushesObjectToGoal) {
  const auto g = make_pushing_problem(make_push1_environment());
  SearchOptions opts;
  opts.max_path_len = 6;
  opts.seed = 1;
  const auto h = MakeInflatedHeuristic(MakeShortcutHeuristic({}), 10.0);
  const Solution rn = gcs_star(*g, *h, DominationChecker::FromKey("rn-sampling"), opts);
  ASSERT_TRUE(rn.solved());
  ExpectPhysical(*g, rn);
  const auto final_positions = g->positions("t", rn.trajectory.points.back());
  EXPECT_NEAR(final_positions[0][1].x(), 1.0, 0.05 + 1e-9);
  const Solution rc = gcs_star(*g, *h, DominationChecker::FromKey("rc-sampling"), opts);
  ASSERT_TRUE(rc.solved());
  EXPECT_GE(rn.cost, rc.cost - 1e-6);
}

TEST(PushingSearch, GoalAtStartIsCheap) {
  PushingEnvironment env = make_push1_environment();
  env.goal = HPolyhedron::MakeBox(Eigen::Vector2d(-0.05, -0.05), Eigen::Vector2d(0.05, 0.05));
  const auto g = make_pushing_problem(env);
  SearchOptions opts;
  opts.max_path_len = 4;
  const Solution sol = gcs_star(*g, *MakeShortcutHeuristic({}),
                                DominationChecker::FromKey("rc-containment"), opts);
  ASSERT_TRUE(sol.solved());
  EXPECT_LE(sol.cost, 1e-9);
}

TEST(PushingSearch, GoalOutsideWorkspaceFails) {
  PushingEnvironment env = make_push1_environment();
  env.goal = HPolyhedron::MakeBox(Eigen::Vector2d(9, 9), Eigen::Vector2d(9.5, 9.5));
  const auto g = make_pushing_problem(env);
  SearchOptions opts;
  opts.max_path_len = 3;
  EXPECT_EQ(gcs_star(*g, *MakeZeroHeuristic(), DominationChecker::FromKey("rn-sampling"),
                     opts)
                .status,
            SearchStatus::kFail);
}

TEST(PushingEnvironment, RejectsBadInput) {
  PushingEnvironment env = make_push1_environment();
  env.start.pop_back();
  EXPECT_THROW(make_pushing_problem(env), std::invalid_argument);
  env = make_push1_environment();
  env.start[0] = Eigen::Vector2d(0.1, 0);
  EXPECT_THROW(make_pushing_problem(env), std::invalid_argument);
  env = make_push1_environment();
  std::reverse(env.bodies[0].polygon.begin(), env.bodies[0].polygon.end());
  EXPECT_THROW(make_pushing_problem(env), std::invalid_argument);
}

}  // namespace
}  // namespace gcs_star
