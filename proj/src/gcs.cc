#include "gcs_star/gcs.h"

#include <cmath>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gcs_star {

double EdgeCostL1::Evaluate(const Eigen::VectorXd& xu,
                            const Eigen::VectorXd& xv) const {
  Eigen::VectorXd z(xu.size() + xv.size());
  z << xu, xv;
  double total = c0;
  for (const L1Term& term : terms) {
    if (term.a.size() != z.size()) {
      throw std::invalid_argument("EdgeCostL1: term has wrong dimension");
    }
    total += term.w * std::abs(term.a.dot(z) + term.b);
  }
  return total;
}

std::shared_ptr<const EdgeData> ImplicitGcs::edge(const VertexId& u,
                                                  const VertexId& v) const {
  for (const Successor& s : successors(u)) {
    if (s.vertex->id == v) return s.edge;
  }
  throw std::out_of_range("no edge " + u.str() + " -> " + v.str());
}

std::optional<Eigen::MatrixXd> ImplicitGcs::domination_selector(
    const VertexId&) const {
  return std::nullopt;
}

std::optional<ShortcutModel> ImplicitGcs::shortcut_model(
    const VertexId&) const {
  return std::nullopt;
}

void ExplicitGcs::AddVertex(const VertexId& id, HPolyhedron set) {
  if (vertices_.count(id)) {
    throw std::invalid_argument("duplicate vertex '" + id.str() + "'");
  }
  vertices_[id] =
      std::make_shared<const GcsVertex>(GcsVertex{id, std::move(set)});
  adjacency_[id];
}

void ExplicitGcs::AddEdge(const VertexId& u, const VertexId& v,
                          HPolyhedron constraint, EdgeCostL1 cost) {
  if (!vertices_.count(u) || !vertices_.count(v)) {
    throw std::invalid_argument("edge " + u.str() + " -> " + v.str() +
                                " has an unknown endpoint");
  }
  auto& out = adjacency_[u];
  if (out.count(v)) {
    throw std::invalid_argument("duplicate edge " + u.str() + " -> " +
                                v.str());
  }
  out[v] = std::make_shared<const EdgeData>(
      EdgeData{u, v, std::move(constraint), std::move(cost)});
}

std::shared_ptr<const GcsVertex> ExplicitGcs::vertex(const VertexId& id) const {
  auto it = vertices_.find(id);
  if (it == vertices_.end()) {
    throw std::out_of_range("unknown vertex '" + id.str() + "'");
  }
  return it->second;
}

std::vector<Successor> ExplicitGcs::successors(const VertexId& u) const {
  auto it = adjacency_.find(u);
  if (it == adjacency_.end()) {
    throw std::out_of_range("unknown vertex '" + u.str() + "'");
  }
  std::vector<Successor> out;
  out.reserve(it->second.size());
  for (const auto& [v, e] : it->second) {
    out.push_back(Successor{e, vertices_.at(v)});
  }
  return out;
}

std::shared_ptr<const EdgeData> ExplicitGcs::edge(const VertexId& u,
                                                  const VertexId& v) const {
  auto it = adjacency_.find(u);
  if (it != adjacency_.end()) {
    auto jt = it->second.find(v);
    if (jt != it->second.end()) return jt->second;
  }
  throw std::out_of_range("no edge " + u.str() + " -> " + v.str());
}

std::optional<ShortcutModel> ExplicitGcs::shortcut_model(
    const VertexId& v) const {
  if (!shortcut_positions_) return std::nullopt;
  const int n = vertex(v)->dim();
  const int nt = vertex(target_)->dim();
  if (n != nt) return std::nullopt;
  ShortcutModel model;
  model.S = Eigen::MatrixXd::Identity(n, n);
  model.S_t = Eigen::MatrixXd::Identity(n, n);
  model.robot_rows.assign(n, false);
  auto it = adjacency_.at(v).find(target_);
  if (it != adjacency_.at(v).end()) model.direct_edge_c0 = it->second->cost.c0;
  return model;
}

std::vector<std::shared_ptr<const GcsVertex>> ExplicitGcs::vertices() const {
  std::vector<std::shared_ptr<const GcsVertex>> out;
  for (const auto& [id, v] : vertices_) out.push_back(v);
  return out;
}

std::vector<std::shared_ptr<const EdgeData>> ExplicitGcs::edges() const {
  std::vector<std::shared_ptr<const EdgeData>> out;
  for (const auto& [u, targets] : adjacency_) {
    for (const auto& [v, e] : targets) out.push_back(e);
  }
  return out;
}

int ExplicitGcs::num_reachable_vertices() const {
  if (!vertices_.count(source_)) return 0;
  std::set<VertexId> seen{source_};
  std::deque<VertexId> queue{source_};
  while (!queue.empty()) {
    const VertexId u = queue.front();
    queue.pop_front();
    for (const auto& [v, e] : adjacency_.at(u)) {
      if (seen.insert(v).second) queue.push_back(v);
    }
  }
  return static_cast<int>(seen.size());
}

std::vector<std::string> validate_problem(const ExplicitGcs& g,
                                          const LpSolver& solver) {
  std::vector<std::string> issues;
  if (!g.has_vertex(g.source())) {
    issues.push_back("source '" + g.source().str() + "' is not a vertex");
  }
  if (!g.has_vertex(g.target())) {
    issues.push_back("target '" + g.target().str() + "' is not a vertex");
  }
  for (const auto& v : g.vertices()) {
    const ChebyshevResult c = chebyshev_center(v->set, solver);
    if (c.empty()) {
      issues.push_back("vertex '" + v->id.str() + "': set is empty");
    } else if (!c.found()) {
      issues.push_back("vertex '" + v->id.str() + "': solver failure");
    } else if (std::isinf(c.radius) || !is_bounded(v->set, solver)) {
      issues.push_back("vertex '" + v->id.str() + "': set is unbounded");
    }
  }
  for (const auto& e : g.edges()) {
    const std::string name = "edge " + e->u.str() + " -> " + e->v.str();
    const int n = g.vertex(e->u)->dim() + g.vertex(e->v)->dim();
    if (e->constraint.ambient_dimension() != n) {
      issues.push_back(name + ": constraint has dimension " +
                       std::to_string(e->constraint.ambient_dimension()) +
                       ", expected " + std::to_string(n));
    }
    if (e->cost.c0 < 0.0) {
      issues.push_back(name + ": negative constant cost");
    } else if (e->cost.c0 == 0.0 && e->v != g.target()) {
      issues.push_back(name + ": cost not bounded away from zero");
    }
    for (const L1Term& term : e->cost.terms) {
      if (term.a.size() != n) {
        issues.push_back(name + ": cost term has wrong dimension");
      }
      if (term.w < 0.0) issues.push_back(name + ": negative cost weight");
    }
  }
  return issues;
}

std::string PathToString(const Path& path) {
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out << ", ";
    out << path[i].str();
  }
  out << "]";
  return out.str();
}

ConcretePath Realize(const ImplicitGcs& g, const Path& path) {
  ConcretePath out;
  out.reserve(path.size());
  for (std::size_t i = 0; i < path.size(); ++i) {
    PathStep step;
    step.vertex = g.vertex(path[i]);
    if (i > 0) step.in_edge = g.edge(path[i - 1], path[i]);
    out.push_back(std::move(step));
  }
  return out;
}

Path IdsOf(const ConcretePath& path) {
  Path out;
  out.reserve(path.size());
  for (const PathStep& s : path) out.push_back(s.vertex->id);
  return out;
}

double EvaluateTrajectoryCost(const ConcretePath& path,
                              const std::vector<Eigen::VectorXd>& points) {
  if (points.size() != path.size()) {
    throw std::invalid_argument("trajectory length does not match the path");
  }
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    total += path[i].in_edge->cost.Evaluate(points[i - 1], points[i]);
  }
  return total;
}

double TrajectoryResidual(const ConcretePath& path,
                          const std::vector<Eigen::VectorXd>& points) {
  if (points.size() != path.size()) {
    throw std::invalid_argument("trajectory length does not match the path");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    worst = std::max(worst, path[i].vertex->set.max_violation(points[i]));
    if (i == 0) continue;
    Eigen::VectorXd z(points[i - 1].size() + points[i].size());
    z << points[i - 1], points[i];
    worst = std::max(worst, path[i].in_edge->constraint.max_violation(z));
  }
  return worst;
}

SplitRows SplitEqualities(const HPolyhedron& P) {
  const int m = P.num_rows();
  const int n = P.ambient_dimension();
  std::vector<int> partner(m, -1);
  for (int i = 0; i < m; ++i) {
    if (partner[i] >= 0) continue;
    const double scale =
        std::max(1.0, P.A().row(i).cwiseAbs().maxCoeff());
    for (int j = i + 1; j < m; ++j) {
      if (partner[j] >= 0) continue;
      if ((P.A().row(i) + P.A().row(j)).cwiseAbs().maxCoeff() <=
              1e-12 * scale &&
          std::abs(P.b()(i) + P.b()(j)) <=
              1e-12 * std::max(1.0, std::abs(P.b()(i)))) {
        partner[i] = j;
        partner[j] = i;
        break;
      }
    }
  }
  std::vector<int> ineq, eq;
  for (int i = 0; i < m; ++i) {
    if (partner[i] < 0) {
      ineq.push_back(i);
    } else if (partner[i] > i) {
      eq.push_back(i);
    }
  }
  SplitRows out;
  out.A.resize(ineq.size(), n);
  out.b.resize(ineq.size());
  out.C.resize(eq.size(), n);
  out.d.resize(eq.size());
  for (std::size_t k = 0; k < ineq.size(); ++k) {
    out.A.row(k) = P.A().row(ineq[k]);
    out.b(k) = P.b()(ineq[k]);
  }
  for (std::size_t k = 0; k < eq.size(); ++k) {
    out.C.row(k) = P.A().row(eq[k]);
    out.d(k) = P.b()(eq[k]);
  }
  return out;
}

HPolyhedron WithEqualities(const HPolyhedron& P, const Eigen::MatrixXd& C,
                           const Eigen::VectorXd& d) {
  const int m = P.num_rows();
  const int p = static_cast<int>(C.rows());
  Eigen::MatrixXd A(m + 2 * p, P.ambient_dimension());
  Eigen::VectorXd b(m + 2 * p);
  A << P.A(), C, -C;
  b << P.b(), d, -d;
  return HPolyhedron(std::move(A), std::move(b));
}

}  // namespace gcs_star
