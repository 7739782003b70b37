#include "gcs_star/restriction.h"

#include <stdexcept>
#include <vector>

namespace gcs_star {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kSolverError:
      return "solver_error";
  }
  return "unknown";
}

namespace {

// Accumulates dense rows over a fixed number of columns.
class RowSet {
 public:
  explicit RowSet(int cols) : cols_(cols) {}

  int cols() const { return cols_; }

  void AddInequality(const Eigen::RowVectorXd& row, double rhs) {
    ineq_.push_back(row);
    ineq_rhs_.push_back(rhs);
  }
  void AddEquality(const Eigen::RowVectorXd& row, double rhs) {
    eq_.push_back(row);
    eq_rhs_.push_back(rhs);
  }

  Eigen::RowVectorXd Zero() const { return Eigen::RowVectorXd::Zero(cols_); }

  void Assemble(Eigen::MatrixXd* A, Eigen::VectorXd* b, Eigen::MatrixXd* C,
                Eigen::VectorXd* d) const {
    Stack(ineq_, ineq_rhs_, A, b);
    Stack(eq_, eq_rhs_, C, d);
  }

  void AddTo(LinearProgram* lp) const {
    Eigen::MatrixXd A, C;
    Eigen::VectorXd b, d;
    Assemble(&A, &b, &C, &d);
    lp->AddInequalities(A, b);
    lp->AddEqualities(C, d);
  }

 private:
  void Stack(const std::vector<Eigen::RowVectorXd>& rows,
             const std::vector<double>& rhs, Eigen::MatrixXd* M,
             Eigen::VectorXd* v) const {
    M->resize(rows.size(), cols_);
    v->resize(rhs.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      M->row(i) = rows[i];
      (*v)(i) = rhs[i];
    }
  }

  int cols_;
  std::vector<Eigen::RowVectorXd> ineq_, eq_;
  std::vector<double> ineq_rhs_, eq_rhs_;
};

// Column layout of a path program: stacked points z, then one auxiliary per
// L1 edge-cost term, then caller-defined extra columns.
struct PathLayout {
  std::vector<int> offset;
  int nz{0};
  int end_offset{0};
  int end_dim{0};
  int num_cost_aux{0};
  int first_extra{0};
  double c0_sum{0.0};
  Eigen::RowVectorXd cost_row;  // Σ w_k s_k over all columns
};

PathLayout MakeLayout(const ConcretePath& path, bool with_costs, int extra) {
  if (path.empty()) throw std::invalid_argument("empty path");
  PathLayout L;
  for (const PathStep& step : path) {
    L.offset.push_back(L.nz);
    L.nz += step.vertex->dim();
  }
  L.end_offset = L.offset.back();
  L.end_dim = path.back().vertex->dim();
  if (with_costs) {
    for (std::size_t i = 1; i < path.size(); ++i) {
      L.c0_sum += path[i].in_edge->cost.c0;
      L.num_cost_aux += static_cast<int>(path[i].in_edge->cost.terms.size());
    }
  }
  L.first_extra = L.nz + L.num_cost_aux;
  L.cost_row = Eigen::RowVectorXd::Zero(L.first_extra + extra);
  return L;
}

// Adds the rows s ≥ ±(a·z + b) for a term whose `a` acts on columns
// [offset, offset + a.size()).
void AddAbsRows(RowSet* rows, const L1Term& term, int offset, int aux) {
  Eigen::RowVectorXd r = rows->Zero();
  r.segment(offset, term.a.size()) = term.a;
  r(aux) = -1.0;
  rows->AddInequality(r, -term.b);
  r.segment(offset, term.a.size()) = -term.a;
  rows->AddInequality(r, term.b);
}

// Vertex and edge constraints and, with costs, the L1 auxiliary rows.
RowSet BuildPathRows(const ConcretePath& path, PathLayout* L, bool with_costs,
                     int extra) {
  RowSet rows(L->first_extra + extra);
  for (std::size_t i = 0; i < path.size(); ++i) {
    const SplitRows split = SplitEqualities(path[i].vertex->set);
    const int off = L->offset[i];
    const int n = path[i].vertex->dim();
    for (Eigen::Index k = 0; k < split.A.rows(); ++k) {
      Eigen::RowVectorXd r = rows.Zero();
      r.segment(off, n) = split.A.row(k);
      rows.AddInequality(r, split.b(k));
    }
    for (Eigen::Index k = 0; k < split.C.rows(); ++k) {
      Eigen::RowVectorXd r = rows.Zero();
      r.segment(off, n) = split.C.row(k);
      rows.AddEquality(r, split.d(k));
    }
  }
  int aux = L->nz;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const EdgeData& e = *path[i].in_edge;
    const int off = L->offset[i - 1];
    const int n = path[i - 1].vertex->dim() + path[i].vertex->dim();
    if (e.constraint.ambient_dimension() != n) {
      throw std::invalid_argument("edge " + e.u.str() + " -> " + e.v.str() +
                                  " has a constraint of wrong dimension");
    }
    const SplitRows split = SplitEqualities(e.constraint);
    for (Eigen::Index k = 0; k < split.A.rows(); ++k) {
      Eigen::RowVectorXd r = rows.Zero();
      r.segment(off, n) = split.A.row(k);
      rows.AddInequality(r, split.b(k));
    }
    for (Eigen::Index k = 0; k < split.C.rows(); ++k) {
      Eigen::RowVectorXd r = rows.Zero();
      r.segment(off, n) = split.C.row(k);
      rows.AddEquality(r, split.d(k));
    }
    if (!with_costs) continue;
    for (const L1Term& term : e.cost.terms) {
      if (term.a.size() != n) {
        throw std::invalid_argument("edge cost term has wrong dimension");
      }
      AddAbsRows(&rows, term, off, aux);
      L->cost_row(aux) = term.w;
      ++aux;
    }
  }
  L->cost_row.conservativeResize(rows.cols());
  return rows;
}

std::vector<Eigen::VectorXd> ExtractPoints(const ConcretePath& path,
                                           const PathLayout& L,
                                           const Eigen::VectorXd& x) {
  std::vector<Eigen::VectorXd> points;
  for (std::size_t i = 0; i < path.size(); ++i) {
    points.push_back(x.segment(L.offset[i], path[i].vertex->dim()));
  }
  return points;
}

Eigen::MatrixXd SelectorOrIdentity(const std::optional<Eigen::MatrixXd>& E,
                                   int dim) {
  if (!E) return Eigen::MatrixXd::Identity(dim, dim);
  if (E->cols() != dim) {
    throw std::invalid_argument("selector has wrong column count");
  }
  return *E;
}

SolveStatus FromLp(const LpSolution& sol) {
  if (sol.optimal()) return SolveStatus::kOptimal;
  if (sol.status == LpStatus::kInfeasible) return SolveStatus::kInfeasible;
  return SolveStatus::kSolverError;
}

// Lifted rows → AH-polytope through the map M applied to all columns.
std::optional<AHPolytope> ProjectLifted(const RowSet& rows,
                                        const Eigen::MatrixXd& M,
                                        const LpSolver& solver) {
  Eigen::MatrixXd A, C;
  Eigen::VectorXd b, d;
  rows.Assemble(&A, &b, &C, &d);
  std::optional<AHPolytope> reduced = nullspace_reduce(A, b, C, d);
  if (!reduced) return std::nullopt;
  HPolyhedron base = RemoveDuplicateRows(reduced->base());
  if (chebyshev_center(base, solver).empty()) return std::nullopt;
  base = RemoveRedundantRows(base, solver);
  return AHPolytope(std::move(base), M * reduced->T(), M * reduced->t());
}

}  // namespace

RestrictionSolution solve_restriction(const ConcretePath& path,
                                      const HeuristicFragment& heuristic,
                                      const LpSolver& solver) {
  const int ny = heuristic.num_aux;
  const int nh = static_cast<int>(heuristic.terms.size());
  PathLayout L = MakeLayout(path, true, ny + nh);
  RowSet rows = BuildPathRows(path, &L, true, ny + nh);

  // Heuristic fragment over (x_end, y) with its own L1 auxiliaries.
  const int y0 = L.first_extra;
  const int n = L.end_dim;
  auto place = [&](const Eigen::RowVectorXd& over_xy) {
    Eigen::RowVectorXd r = rows.Zero();
    r.segment(L.end_offset, n) = over_xy.head(n);
    r.segment(y0, ny) = over_xy.tail(ny);
    return r;
  };
  for (Eigen::Index k = 0; k < heuristic.G.rows(); ++k) {
    rows.AddInequality(place(heuristic.G.row(k)), heuristic.g(k));
  }
  Eigen::RowVectorXd cost = L.cost_row;
  for (int k = 0; k < nh; ++k) {
    const L1Term& term = heuristic.terms[k];
    const int aux = y0 + ny + k;
    Eigen::RowVectorXd r = place(term.a);
    r(aux) = -1.0;
    rows.AddInequality(r, -term.b);
    r = -place(term.a);
    r(aux) = -1.0;
    rows.AddInequality(r, term.b);
    cost(aux) = term.w;
  }

  LinearProgram lp(rows.cols());
  lp.cost = cost.transpose();
  rows.AddTo(&lp);
  const LpSolution sol = solver.Solve(lp);

  RestrictionSolution out;
  out.status = FromLp(sol);
  if (sol.status == LpStatus::kUnbounded) out.status = SolveStatus::kSolverError;
  if (!out.optimal()) return out;
  out.trajectory.points = ExtractPoints(path, L, sol.x);
  out.cost_to_come = EvaluateTrajectoryCost(path, out.trajectory.points);
  out.trajectory.cost = out.cost_to_come;
  out.total_estimate = sol.objective + L.c0_sum + heuristic.constant;
  return out;
}

RestrictionSolution solve_restriction(const ImplicitGcs& g, const Path& path,
                                      const Heuristic& heuristic,
                                      const LpSolver& solver) {
  const ConcretePath cp = Realize(g, path);
  return solve_restriction(cp, FragmentAt(heuristic, g, *cp.back().vertex),
                           solver);
}

PointCost cost_to_come_at_point(const ConcretePath& path,
                                const Eigen::VectorXd& y,
                                const std::optional<Eigen::MatrixXd>& selector,
                                const LpSolver& solver) {
  PathLayout L = MakeLayout(path, true, 0);
  const Eigen::MatrixXd E = SelectorOrIdentity(selector, L.end_dim);
  if (y.size() != E.rows()) {
    throw std::invalid_argument("cost_to_come_at_point: point has dimension " +
                                std::to_string(y.size()) + ", expected " +
                                std::to_string(E.rows()));
  }
  RowSet rows = BuildPathRows(path, &L, true, 0);
  for (Eigen::Index k = 0; k < E.rows(); ++k) {
    Eigen::RowVectorXd r = rows.Zero();
    r.segment(L.end_offset, L.end_dim) = E.row(k);
    rows.AddEquality(r, y(k));
  }
  LinearProgram lp(rows.cols());
  lp.cost = L.cost_row.transpose();
  rows.AddTo(&lp);
  const LpSolution sol = solver.Solve(lp);
  PointCost out;
  out.status = FromLp(sol);
  if (out.finite()) out.value = sol.objective + L.c0_sum;
  return out;
}

Projection project_to_reachable(const ConcretePath& path,
                                const Eigen::VectorXd& sample,
                                const LpSolver& solver) {
  PathLayout L = MakeLayout(path, false, 0);
  if (sample.size() != L.end_dim) {
    throw std::invalid_argument("project_to_reachable: dimension mismatch");
  }
  const int n = L.end_dim;
  RowSet rows = BuildPathRows(path, &L, false, n);
  LinearProgram lp(rows.cols());
  for (int k = 0; k < n; ++k) {
    const int aux = L.first_extra + k;
    Eigen::RowVectorXd r = rows.Zero();
    r(L.end_offset + k) = 1.0;
    r(aux) = -1.0;
    rows.AddInequality(r, sample(k));
    r(L.end_offset + k) = -1.0;
    rows.AddInequality(r, -sample(k));
    lp.cost(aux) = 1.0;
  }
  rows.AddTo(&lp);
  const LpSolution sol = solver.Solve(lp);
  Projection out;
  out.status = FromLp(sol);
  if (out.status == SolveStatus::kOptimal) {
    out.point = sol.x.segment(L.end_offset, n);
  }
  return out;
}

HPolyhedron trajectory_polytope(const ConcretePath& path) {
  PathLayout L = MakeLayout(path, false, 0);
  const RowSet rows = BuildPathRows(path, &L, false, 0);
  Eigen::MatrixXd A, C;
  Eigen::VectorXd b, d;
  rows.Assemble(&A, &b, &C, &d);
  return WithEqualities(HPolyhedron(A, b), C, d);
}

std::optional<AHPolytope> reachable_set(
    const ConcretePath& path, const std::optional<Eigen::MatrixXd>& selector,
    const LpSolver& solver) {
  PathLayout L = MakeLayout(path, false, 0);
  const RowSet rows = BuildPathRows(path, &L, false, 0);
  const Eigen::MatrixXd E = SelectorOrIdentity(selector, L.end_dim);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(E.rows(), rows.cols());
  M.block(0, L.end_offset, E.rows(), L.end_dim) = E;
  return ProjectLifted(rows, M, solver);
}

std::optional<AHPolytope> cost_epigraph(
    const ConcretePath& path, const std::optional<Eigen::MatrixXd>& selector,
    const LpSolver& solver) {
  PathLayout L = MakeLayout(path, true, 1);
  RowSet rows = BuildPathRows(path, &L, true, 1);
  const int l = L.first_extra;
  // c0_sum + Σ w_k s_k ≤ l.
  Eigen::RowVectorXd r = L.cost_row;
  r(l) = -1.0;
  rows.AddInequality(r, -L.c0_sum);
  const Eigen::MatrixXd E = SelectorOrIdentity(selector, L.end_dim);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(E.rows() + 1, rows.cols());
  M.block(0, L.end_offset, E.rows(), L.end_dim) = E;
  M(E.rows(), l) = 1.0;
  return ProjectLifted(rows, M, solver);
}

}  // namespace gcs_star
