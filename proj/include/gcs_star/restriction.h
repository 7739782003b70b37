#pragma once

#include <optional>

#include <Eigen/Dense>

#include "gcs_star/gcs.h"
#include "gcs_star/heuristic.h"

namespace gcs_star {

enum class SolveStatus { kOptimal, kInfeasible, kSolverError };

std::string_view to_string(SolveStatus status);

/// Optimal trajectory of the convex restriction of a fixed path.
struct RestrictionSolution {
  SolveStatus status{SolveStatus::kSolverError};
  Trajectory trajectory;
  /// Σ edge costs re-evaluated at the returned points.
  double cost_to_come{kInfinity};
  /// LP optimum of edge costs plus the heuristic at the terminal point.
  double total_estimate{kInfinity};

  bool optimal() const { return status == SolveStatus::kOptimal; }
  const Eigen::VectorXd& terminal_point() const {
    return trajectory.points.back();
  }
};

/// Minimizes the path's edge costs plus the heuristic fragment at the last
/// vertex, subject to all vertex and edge constraints.
RestrictionSolution solve_restriction(const ConcretePath& path,
                                      const HeuristicFragment& heuristic,
                                      const LpSolver& solver = DefaultLpSolver());

RestrictionSolution solve_restriction(const ImplicitGcs& g, const Path& path,
                                      const Heuristic& heuristic,
                                      const LpSolver& solver = DefaultLpSolver());

/// g̃ at a terminal point. Infeasible means +∞.
struct PointCost {
  SolveStatus status{SolveStatus::kSolverError};
  double value{kInfinity};

  bool finite() const { return status == SolveStatus::kOptimal; }
  bool infinite() const { return status == SolveStatus::kInfeasible; }
};

/// Optimal cost-to-come with the terminal point pinned by E x_end = y, where
/// E is `selector` or the identity.
PointCost cost_to_come_at_point(const ConcretePath& path,
                                const Eigen::VectorXd& y,
                                const std::optional<Eigen::MatrixXd>& selector,
                                const LpSolver& solver = DefaultLpSolver());

struct Projection {
  SolveStatus status{SolveStatus::kSolverError};
  Eigen::VectorXd point;
};

/// The L1-nearest point of the reachable set to `sample` (terminal space).
Projection project_to_reachable(const ConcretePath& path,
                                const Eigen::VectorXd& sample,
                                const LpSolver& solver = DefaultLpSolver());

/// All vertex and edge constraints over the stacked points of the path.
HPolyhedron trajectory_polytope(const ConcretePath& path);

/// Terminal points reachable along the path, mapped through `selector`.
/// std::nullopt when no trajectory exists.
std::optional<AHPolytope> reachable_set(
    const ConcretePath& path, const std::optional<Eigen::MatrixXd>& selector,
    const LpSolver& solver = DefaultLpSolver());

/// Pairs (E x_end, l) with l at least the cost of some trajectory ending at
/// x_end. std::nullopt when no trajectory exists.
std::optional<AHPolytope> cost_epigraph(
    const ConcretePath& path, const std::optional<Eigen::MatrixXd>& selector,
    const LpSolver& solver = DefaultLpSolver());

}  // namespace gcs_star
