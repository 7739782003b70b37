#pragma once

#include <compare>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gcs_star/geometry.h"

namespace gcs_star {

/// Opaque, totally ordered vertex identifier.
class VertexId {
 public:
  VertexId() = default;
  VertexId(std::string value) : value_(std::move(value)) {}  // NOLINT
  VertexId(const char* value) : value_(value) {}  // NOLINT

  const std::string& str() const { return value_; }
  auto operator<=>(const VertexId&) const = default;
  bool operator==(const VertexId&) const = default;

 private:
  std::string value_;
};

struct GcsVertex {
  VertexId id;
  HPolyhedron set;
  int dim() const { return set.ambient_dimension(); }
};

/// One term w·|a·(x_u, x_v) + b| of an L1 cost, or of a heuristic fragment.
struct L1Term {
  double w{1.0};
  Eigen::RowVectorXd a;
  double b{0.0};
};

/// c(x_u, x_v) = c0 + Σ_k w_k |a_k·(x_u, x_v) + b_k|.
struct EdgeCostL1 {
  double c0{0.0};
  std::vector<L1Term> terms;

  double Evaluate(const Eigen::VectorXd& xu, const Eigen::VectorXd& xv) const;
};

struct EdgeData {
  VertexId u;
  VertexId v;
  /// Constraint over the stacked vector (x_u, x_v).
  HPolyhedron constraint;
  EdgeCostL1 cost;
};

struct Successor {
  std::shared_ptr<const EdgeData> edge;
  std::shared_ptr<const GcsVertex> vertex;
};

/// Data for the shortcut heuristic at one vertex: h(x) = κ + min over x_t of
/// Σ_r w_r |(S x − S_t x_t)_r|, where w_r is 1 or the robot weight.
struct ShortcutModel {
  Eigen::MatrixXd S;
  Eigen::MatrixXd S_t;
  /// True for rows that measure robot displacement.
  std::vector<bool> robot_rows;
  /// Constant of the direct edge to the target, if there is one.
  std::optional<double> direct_edge_c0;
};

/// A graph of convex sets exposed through its successor operator. Instances
/// are immutable and may be shared across threads.
class ImplicitGcs {
 public:
  virtual ~ImplicitGcs() = default;

  virtual VertexId source() const = 0;
  virtual VertexId target() const = 0;

  /// Throws std::out_of_range for an unknown id.
  virtual std::shared_ptr<const GcsVertex> vertex(const VertexId& id) const = 0;

  /// Successors sorted by vertex id. Throws std::out_of_range for an unknown
  /// id.
  virtual std::vector<Successor> successors(const VertexId& u) const = 0;

  /// The edge (u, v). Throws std::out_of_range if there is none.
  virtual std::shared_ptr<const EdgeData> edge(const VertexId& u,
                                               const VertexId& v) const;

  /// Linear map from a vertex point to the coordinates on which domination
  /// is checked. std::nullopt means the identity.
  virtual std::optional<Eigen::MatrixXd> domination_selector(
      const VertexId& v) const;

  /// Shortcut-heuristic data, or std::nullopt when the graph has none.
  virtual std::optional<ShortcutModel> shortcut_model(const VertexId& v) const;
};

/// A graph with stored vertices and adjacency. It may be populated with
/// invalid data; validate_problem reports the violations.
class ExplicitGcs final : public ImplicitGcs {
 public:
  /// Throws std::invalid_argument on a duplicate id.
  void AddVertex(const VertexId& id, HPolyhedron set);
  /// Throws std::invalid_argument on a duplicate edge or unknown endpoint.
  void AddEdge(const VertexId& u, const VertexId& v, HPolyhedron constraint,
               EdgeCostL1 cost);
  void set_source(const VertexId& s) { source_ = s; }
  void set_target(const VertexId& t) { target_ = t; }

  /// Enables the shortcut heuristic with S = S_t = identity. Requires every
  /// vertex to have the target's dimension.
  void set_shortcut_positions(bool enabled) { shortcut_positions_ = enabled; }

  VertexId source() const override { return source_; }
  VertexId target() const override { return target_; }
  std::shared_ptr<const GcsVertex> vertex(const VertexId& id) const override;
  std::vector<Successor> successors(const VertexId& u) const override;
  std::shared_ptr<const EdgeData> edge(const VertexId& u,
                                       const VertexId& v) const override;
  std::optional<ShortcutModel> shortcut_model(
      const VertexId& v) const override;

  /// Vertices in id order.
  std::vector<std::shared_ptr<const GcsVertex>> vertices() const;
  /// Edges ordered by (u, v).
  std::vector<std::shared_ptr<const EdgeData>> edges() const;
  bool has_vertex(const VertexId& id) const { return vertices_.count(id) > 0; }
  bool shortcut_positions() const { return shortcut_positions_; }

  /// Number of vertices reachable from the source, source included.
  int num_reachable_vertices() const;

 private:
  std::map<VertexId, std::shared_ptr<const GcsVertex>> vertices_;
  std::map<VertexId, std::map<VertexId, std::shared_ptr<const EdgeData>>>
      adjacency_;
  VertexId source_;
  VertexId target_;
  bool shortcut_positions_{false};
};

/// Problems found in an explicit graph; empty when the graph is well formed.
std::vector<std::string> validate_problem(
    const ExplicitGcs& g, const LpSolver& solver = DefaultLpSolver());

using Path = std::vector<VertexId>;

std::string PathToString(const Path& path);

/// Per-vertex points along a path and their total edge cost.
struct Trajectory {
  std::vector<Eigen::VectorXd> points;
  double cost{0.0};
};

/// A path with its vertex and edge data resolved.
struct PathStep {
  std::shared_ptr<const GcsVertex> vertex;
  /// Edge from the previous step, null for the first step.
  std::shared_ptr<const EdgeData> in_edge;
};
using ConcretePath = std::vector<PathStep>;

/// Resolves ids through g. Throws std::out_of_range on a missing vertex or
/// edge.
ConcretePath Realize(const ImplicitGcs& g, const Path& path);
Path IdsOf(const ConcretePath& path);

/// Σ of edge costs along the path evaluated at the given points.
double EvaluateTrajectoryCost(const ConcretePath& path,
                              const std::vector<Eigen::VectorXd>& points);

/// Largest violation of any vertex-set or edge-constraint row.
double TrajectoryResidual(const ConcretePath& path,
                          const std::vector<Eigen::VectorXd>& points);

/// Rows of P split into inequalities and equalities. An equality is a pair of
/// rows (a, b) and (−a, −b).
struct SplitRows {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::MatrixXd C;
  Eigen::VectorXd d;
};
SplitRows SplitEqualities(const HPolyhedron& P);

/// Appends C x = d to P as paired inequality rows.
HPolyhedron WithEqualities(const HPolyhedron& P, const Eigen::MatrixXd& C,
                           const Eigen::VectorXd& d);

}  // namespace gcs_star

template <>
struct std::hash<gcs_star::VertexId> {
  std::size_t operator()(const gcs_star::VertexId& id) const noexcept {
    return std::hash<std::string>()(id.str());
  }
};
