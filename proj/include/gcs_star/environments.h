#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gcs_star/gcs.h"

namespace gcs_star {

/// Halfspace form of a convex polygon given by counterclockwise vertices.
/// Throws std::invalid_argument if the polygon is not convex and CCW.
HPolyhedron PolygonFromVertices(const std::vector<Eigen::Vector2d>& vertices);

/// Cost c0 + ‖x_u − x_v‖₁ between two points of equal dimension n.
EdgeCostL1 L1DistanceCost(int n, double c0);

/// Rows x_u[i] = x_v[j] (as paired inequalities) over (x_u, x_v).
HPolyhedron CoordinateEquality(int du, int dv,
                               const std::vector<std::pair<int, int>>& pairs);

struct SteppingStone {
  std::string name;
  std::vector<Eigen::Vector2d> polygon;
};

/// Vertices "s" and "t" are the singleton source and target points; one
/// vertex per stone. Edges follow `adjacency` (pairs of names, including "s"
/// and "t") with no coupling constraint and cost c0 + ‖x_u − x_v‖₁. The
/// shortcut heuristic is enabled.
std::shared_ptr<ExplicitGcs> make_stepping_stones(
    const std::vector<SteppingStone>& stones,
    const std::vector<std::pair<std::string, std::string>>& adjacency,
    const Eigen::Vector2d& source_pt, const Eigen::Vector2d& target_pt,
    double c0 = 1.0);

/// Five 2-D vertices {s, A, B, C, t}. (s,A), (s,B) and (C,t) force equal x;
/// (A,C) and (B,C) force equal y. [s,A,C,t] is infeasible and [s,B,C,t] is
/// feasible, while [s,A,C] reaches C more cheaply than [s,B,C].
std::shared_ptr<ExplicitGcs> make_fig3_counterexample();

/// Four polygonal stones between a source and a target point.
std::shared_ptr<ExplicitGcs> make_stones4();

/// A path [s, P_i, T] whose cost to reach y in T = [0, 10] is
/// offset + slope·|y − anchor| on [lo, hi] and infinite elsewhere.
struct CostProfile {
  double offset;
  double slope;
  double anchor;
  double lo;
  double hi;
};

/// A 1-D domination scenario built from cost profiles.
struct DominationFixture {
  std::string name;
  std::shared_ptr<ExplicitGcs> graph;
  Path candidate;
  std::vector<Path> frontier;
  bool expected_rc{false};
  bool expected_rn{false};
  std::vector<CostProfile> profiles;
};

/// Builds one fixture; profile 0 is the candidate, the rest the frontier.
DominationFixture MakeDominationFixture(const std::string& name,
                                        const std::vector<CostProfile>& paths,
                                        bool expected_rc, bool expected_rn);

/// Scenarios (a) to (e) of the reaches-cheaper / reaches-new classification.
std::vector<DominationFixture> make_domination_fixtures();

struct RandomGcsOptions {
  int min_vertices{4};
  int max_vertices{6};
  /// Probability that a vertex gets dimension 3 instead of 1 or 2.
  double dim3_probability{0.15};
  /// Expected out-degree of non-target vertices.
  double edge_density{1.8};
  /// Probability that an edge couples a coordinate pair by equality.
  double coupling_probability{0.35};
};

/// A random explicit graph with source "s" and target "t". The result is
/// valid per validate_problem but may have no feasible s-t path.
std::shared_ptr<ExplicitGcs> MakeRandomExplicitGcs(std::uint64_t seed,
                                                   const RandomGcsOptions& options = {});

}  // namespace gcs_star
