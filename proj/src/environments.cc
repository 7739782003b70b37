#include "gcs_star/environments.h"

#include <random>
#include <stdexcept>

namespace gcs_star {

HPolyhedron PolygonFromVertices(const std::vector<Eigen::Vector2d>& vertices) {
  const int n = static_cast<int>(vertices.size());
  if (n < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d& p = vertices[i];
    const Eigen::Vector2d& q = vertices[(i + 1) % n];
    const Eigen::Vector2d e = q - p;
    const double len = e.norm();
    if (len == 0.0) throw std::invalid_argument("polygon has a repeated vertex");
    const Eigen::Vector2d normal(e.y() / len, -e.x() / len);  // outward for CCW
    A.row(i) = normal.transpose();
    b(i) = normal.dot(p);
    for (int j = 0; j < n; ++j) {
      if (normal.dot(vertices[j]) > b(i) + 1e-9) {
        throw std::invalid_argument("polygon is not convex and counterclockwise");
      }
    }
  }
  return HPolyhedron(std::move(A), std::move(b));
}

EdgeCostL1 L1DistanceCost(int n, double c0) {
  EdgeCostL1 cost;
  cost.c0 = c0;
  for (int k = 0; k < n; ++k) {
    L1Term term;
    term.a = Eigen::RowVectorXd::Zero(2 * n);
    term.a(k) = 1.0;
    term.a(n + k) = -1.0;
    cost.terms.push_back(std::move(term));
  }
  return cost;
}

HPolyhedron CoordinateEquality(int du, int dv,
                               const std::vector<std::pair<int, int>>& pairs) {
  const int p = static_cast<int>(pairs.size());
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(p, du + dv);
  for (int k = 0; k < p; ++k) {
    C(k, pairs[k].first) = 1.0;
    C(k, du + pairs[k].second) = -1.0;
  }
  return WithEqualities(HPolyhedron(Eigen::MatrixXd(0, du + dv),
                                    Eigen::VectorXd(0)),
                        C, Eigen::VectorXd::Zero(p));
}

namespace {

HPolyhedron Box2(double x0, double x1, double y0, double y1) {
  return HPolyhedron::MakeBox(Eigen::Vector2d(x0, y0), Eigen::Vector2d(x1, y1));
}

HPolyhedron NoConstraint(int dim) {
  return HPolyhedron(Eigen::MatrixXd(0, dim), Eigen::VectorXd(0));
}

}  // namespace

std::shared_ptr<ExplicitGcs> make_stepping_stones(
    const std::vector<SteppingStone>& stones,
    const std::vector<std::pair<std::string, std::string>>& adjacency,
    const Eigen::Vector2d& source_pt, const Eigen::Vector2d& target_pt,
    double c0) {
  auto g = std::make_shared<ExplicitGcs>();
  g->AddVertex("s", HPolyhedron::MakeBox(source_pt, source_pt));
  for (const SteppingStone& stone : stones) {
    g->AddVertex(stone.name, PolygonFromVertices(stone.polygon));
  }
  g->AddVertex("t", HPolyhedron::MakeBox(target_pt, target_pt));
  for (const auto& [u, v] : adjacency) {
    g->AddEdge(u, v, NoConstraint(4), L1DistanceCost(2, c0));
  }
  g->set_source("s");
  g->set_target("t");
  g->set_shortcut_positions(true);
  return g;
}

std::shared_ptr<ExplicitGcs> make_fig3_counterexample() {
  auto g = std::make_shared<ExplicitGcs>();
  g->AddVertex("s", Box2(0, 1, 0, 1));
  g->AddVertex("A", Box2(0, 1, 2, 3));
  g->AddVertex("B", Box2(0, 1, -5, -4));
  // Parallelogram: -5 ≤ y ≤ 3 and 4.5 ≤ x + y/2 ≤ 5.5.
  Eigen::MatrixXd A(4, 2);
  A << 0, 1, 0, -1, 1, 0.5, -1, -0.5;
  Eigen::Vector4d b(3, 5, 5.5, -4.5);
  g->AddVertex("C", HPolyhedron(A, b));
  g->AddVertex("t", Box2(7, 8, 6, 7));
  const HPolyhedron same_x = CoordinateEquality(2, 2, {{0, 0}});
  const HPolyhedron same_y = CoordinateEquality(2, 2, {{1, 1}});
  const EdgeCostL1 cost = L1DistanceCost(2, 1.0);
  g->AddEdge("s", "A", same_x, cost);
  g->AddEdge("s", "B", same_x, cost);
  g->AddEdge("A", "C", same_y, cost);
  g->AddEdge("B", "C", same_y, cost);
  g->AddEdge("C", "t", same_x, cost);
  g->set_source("s");
  g->set_target("t");
  return g;
}

std::shared_ptr<ExplicitGcs> make_stones4() {
  using V = Eigen::Vector2d;
  const std::vector<SteppingStone> stones = {
      {"s1", {V(1, 1), V(3, 1), V(3, 3), V(1, 3)}},
      {"s2", {V(2, -4), V(5, -3), V(4, -1), V(2, -2)}},
      {"s3", {V(4, 2), V(7, 1), V(6, 4)}},
      {"s4", {V(6, -3), V(9, -2), V(8, 0), V(6, -1)}},
  };
  const std::vector<std::pair<std::string, std::string>> adjacency = {
      {"s", "s1"},  {"s", "s2"},  {"s1", "s3"}, {"s1", "s2"},
      {"s2", "s4"}, {"s3", "s4"}, {"s3", "t"},  {"s4", "t"},
      {"s2", "s1"},
  };
  return make_stepping_stones(stones, adjacency, V(0, 0), V(10, 0));
}

DominationFixture MakeDominationFixture(const std::string& name,
                                        const std::vector<CostProfile>& paths,
                                        bool expected_rc, bool expected_rn) {
  DominationFixture out;
  out.name = name;
  out.expected_rc = expected_rc;
  out.expected_rn = expected_rn;
  out.profiles = paths;
  auto g = std::make_shared<ExplicitGcs>();
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
  g->AddVertex("s", HPolyhedron::MakeBox(zero, zero));
  g->AddVertex("T", HPolyhedron::MakeBox(zero, Eigen::VectorXd::Constant(1, 10)));
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const CostProfile& p = paths[i];
    const std::string id = "P" + std::to_string(i);
    const Eigen::VectorXd anchor = Eigen::VectorXd::Constant(1, p.anchor);
    g->AddVertex(id, HPolyhedron::MakeBox(anchor, anchor));
    EdgeCostL1 first;
    first.c0 = p.offset / 2;
    g->AddEdge("s", id, NoConstraint(2), first);
    EdgeCostL1 second;
    second.c0 = p.offset / 2;
    if (p.slope > 0) {
      L1Term term;
      term.w = p.slope;
      term.a = Eigen::RowVector2d(-1, 1);
      second.terms.push_back(term);
    }
    Eigen::MatrixXd A(2, 2);
    A << 0, 1, 0, -1;
    g->AddEdge(id, "T", HPolyhedron(A, Eigen::Vector2d(p.hi, -p.lo)), second);
    Path path{"s", VertexId(id), "T"};
    if (i == 0) {
      out.candidate = path;
    } else {
      out.frontier.push_back(path);
    }
  }
  g->set_source("s");
  g->set_target("T");
  out.graph = std::move(g);
  return out;
}

std::vector<DominationFixture> make_domination_fixtures() {
  return {
      // Cheaper nowhere and reaching only covered points.
      MakeDominationFixture("a", {{2, 1, 5, 2, 8}, {1, 1, 5, 0, 10}}, false,
                            false),
      // Reaches an interval no stored path reaches.
      MakeDominationFixture("b", {{3, 1, 7, 4, 10}, {1, 1, 2, 0, 5}}, true,
                            true),
      // Cheaper near its anchor, inside the stored path's reach.
      MakeDominationFixture("c", {{1, 2, 5, 3, 7}, {2, 1, 5, 0, 10}}, true,
                            false),
      // Cheaper than two stored paths whose union covers it.
      MakeDominationFixture(
          "d", {{0.5, 0.5, 5, 3, 7}, {1, 1, 2, 0, 6}, {1, 1, 8, 4, 10}}, true,
          false),
      // Dominated by the union of two stored paths but by neither alone.
      MakeDominationFixture(
          "e", {{2, 0, 5, 3, 7}, {1, 0, 2, 0, 5}, {1, 0, 8, 5, 10}}, false,
          false),
  };
}

std::shared_ptr<ExplicitGcs> MakeRandomExplicitGcs(
    std::uint64_t seed, const RandomGcsOptions& options) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  const int nv = options.min_vertices +
                 static_cast<int>(rng() % (options.max_vertices -
                                            options.min_vertices + 1));
  std::vector<VertexId> ids;
  ids.emplace_back("s");
  for (int i = 1; i + 1 < nv; ++i) ids.emplace_back("v" + std::to_string(i));
  ids.emplace_back("t");

  auto g = std::make_shared<ExplicitGcs>();
  std::vector<int> dims;
  for (int i = 0; i < nv; ++i) {
    int d = unit(rng) < 0.5 ? 1 : 2;
    if (unit(rng) < options.dim3_probability) d = 3;
    dims.push_back(d);
    Eigen::VectorXd c(d), h(d);
    for (int k = 0; k < d; ++k) {
      c(k) = uniform(-3, 3);
      h(k) = (i == 0) ? uniform(0.0, 0.3) : uniform(0.3, 1.5);
    }
    HPolyhedron set = HPolyhedron::MakeBox(c - h, c + h);
    if (d >= 2 && unit(rng) < 0.3) {
      // A cut through the box that keeps its center.
      Eigen::MatrixXd a(1, d);
      for (int k = 0; k < d; ++k) a(0, k) = uniform(-1, 1);
      const double slack = uniform(0.2, 0.8) * (a.cwiseAbs() * h)(0);
      set = set.Intersect(HPolyhedron(a, Eigen::VectorXd::Constant(1, (a * c)(0) + slack)));
    }
    g->AddVertex(ids[i], std::move(set));
  }

  auto add_edge = [&](int u, int v) {
    if (g->successors(ids[u]).size() > 0) {
      for (const Successor& s : g->successors(ids[u])) {
        if (s.vertex->id == ids[v]) return;
      }
    }
    const int du = dims[u], dv = dims[v];
    EdgeCostL1 cost;
    cost.c0 = uniform(0.5, 1.5);
    for (int k = 0; k < std::min(du, dv); ++k) {
      L1Term term;
      term.w = uniform(0.5, 1.5);
      term.a = Eigen::RowVectorXd::Zero(du + dv);
      term.a(k) = 1.0;
      term.a(du + k) = -1.0;
      cost.terms.push_back(std::move(term));
    }
    HPolyhedron constraint = NoConstraint(du + dv);
    const double r = unit(rng);
    if (r < options.coupling_probability) {
      const int i = static_cast<int>(rng() % du);
      const int j = static_cast<int>(rng() % dv);
      constraint = CoordinateEquality(du, dv, {{i, j}});
    } else if (r < options.coupling_probability + 0.2) {
      // Bounded step along one shared coordinate.
      Eigen::MatrixXd a = Eigen::MatrixXd::Zero(1, du + dv);
      a(0, 0) = -1.0;
      a(0, du) = 1.0;
      constraint = HPolyhedron(a, Eigen::VectorXd::Constant(1, uniform(0.5, 3.0)));
    }
    g->AddEdge(ids[u], ids[v], std::move(constraint), std::move(cost));
  };

  // A chain through a random middle vertex keeps t reachable in the graph.
  const int mid = 1 + static_cast<int>(rng() % (nv - 2));
  add_edge(0, mid);
  add_edge(mid, nv - 1);
  const double p = options.edge_density / (nv - 1);
  for (int u = 0; u + 1 < nv; ++u) {
    for (int v = 1; v < nv; ++v) {
      if (u == v) continue;
      if (unit(rng) < p) add_edge(u, v);
    }
  }
  g->set_source("s");
  g->set_target("t");
  return g;
}

}  // namespace gcs_star
