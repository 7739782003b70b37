#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gcs_star/gcs.h"

namespace gcs_star {

/// A convex polygon that translates (movable) or stays fixed. Vertices are
/// counterclockwise, relative to the body position for movable bodies and in
/// world coordinates for static ones.
struct BodySpec {
  std::string name;
  std::vector<Eigen::Vector2d> polygon;
  bool movable{true};
  bool actuated{false};

  int num_faces() const { return static_cast<int>(polygon.size()); }
  /// Outward unit normal of face f (from vertex f to vertex f+1).
  Eigen::Vector2d normal(int f) const;
  /// max over the polygon of normal(f)·v.
  double support(int f) const;
};

struct PushingEnvironment {
  std::vector<BodySpec> bodies;
  /// 2-D region that must contain every vertex of every movable body.
  HPolyhedron workspace{HPolyhedron::MakeBox(Eigen::Vector2d(-5, -5),
                                             Eigen::Vector2d(5, 5))};
  /// Start position of each movable body, in body order.
  std::vector<Eigen::Vector2d> start;
  /// Region over the stacked positions of the unactuated movable bodies.
  HPolyhedron goal{HPolyhedron::MakeUnitBox(0)};
  /// Per movable body weight of the L1 motion cost.
  std::vector<double> weights;
  double mu{1.0};
  double actuation_limit{5.0};
  double max_contact_force{10.0};

  /// Throws std::invalid_argument on malformed data.
  void Validate() const;
  std::vector<int> movable_bodies() const;
  std::vector<int> robots() const;
  std::vector<int> objects() const;
  /// Unordered pairs (i < j) with at least one movable body.
  std::vector<std::pair<int, int>> pairs() const;
};

/// The state of one body pair.
struct PairMode {
  enum class Kind { kSeparating, kFaceFace, kFaceVertex };
  Kind kind{Kind::kSeparating};
  /// Body owning the separating or contact face.
  int face_body{0};
  int face{0};
  /// kFaceFace: face of the other body. kFaceVertex: vertex of the other body.
  int other{0};

  bool in_contact() const { return kind != Kind::kSeparating; }
  std::string token() const;
  auto operator<=>(const PairMode&) const = default;
};

/// One PairMode per pair of PushingEnvironment::pairs(), in that order.
struct ContactModeKey {
  std::vector<PairMode> modes;

  std::string ToString() const;
  /// Throws std::invalid_argument on a malformed key.
  static ContactModeKey Parse(const std::string& text);
  auto operator<=>(const ContactModeKey&) const = default;
};

/// Options of the pair (i, j): separating faces of i, separating faces of j,
/// antiparallel face pairs, then face-vertex contacts where the vertex is the
/// unique extreme point of the other body against the face.
std::vector<PairMode> pair_options(const PushingEnvironment& env, int i, int j);

/// Column offsets of a mode vertex. Knot j ∈ {0, 1}.
struct PushingVertexLayout {
  int num_movable{0};
  int num_robots{0};
  int num_contacts{0};

  int position(int movable_index, int knot) const {
    return 2 * (knot * num_movable + movable_index);
  }
  int actuation(int robot_index, int knot) const {
    return 4 * num_movable + 2 * (knot * num_robots + robot_index);
  }
  int force(int contact_index, int knot) const {
    return 4 * num_movable + 4 * num_robots + knot * num_contacts + contact_index;
  }
  int dim() const { return 4 * num_movable + 4 * num_robots + 2 * num_contacts; }
};

PushingVertexLayout pushing_layout(const PushingEnvironment& env,
                                   const ContactModeKey& mode);

/// The set of (positions, actuation, contact forces) over both knots in
/// `mode`. With `pin_start`, both knots are fixed to the start positions.
HPolyhedron pushing_vertex_set(const PushingEnvironment& env,
                               const ContactModeKey& mode, bool pin_start = false);

/// Every key differing from `mode` in exactly one pair, sorted.
std::vector<ContactModeKey> pushing_successors(const PushingEnvironment& env,
                                               const ContactModeKey& mode);

/// The first mode (separating faces only) whose non-penetration rows hold at
/// the start positions. Throws std::invalid_argument when there is none.
ContactModeKey start_mode(const PushingEnvironment& env);

/// Implicit graph of contact modes. Vertex ids are "source:<key>", "<key>"
/// and "t".
class PushingGcs final : public ImplicitGcs {
 public:
  explicit PushingGcs(PushingEnvironment env);

  VertexId source() const override { return source_; }
  VertexId target() const override { return "t"; }
  std::shared_ptr<const GcsVertex> vertex(const VertexId& id) const override;
  std::vector<Successor> successors(const VertexId& u) const override;
  std::shared_ptr<const EdgeData> edge(const VertexId& u,
                                       const VertexId& v) const override;
  std::optional<Eigen::MatrixXd> domination_selector(
      const VertexId& v) const override;
  std::optional<ShortcutModel> shortcut_model(const VertexId& v) const override;

  const PushingEnvironment& environment() const { return env_; }
  /// The mode of a vertex id; throws std::out_of_range for "t".
  ContactModeKey mode_of(const VertexId& id) const;
  bool is_source(const VertexId& id) const;
  /// Positions of every movable body at each knot of a vertex point
  /// (one knot for the target).
  std::vector<std::vector<Eigen::Vector2d>> positions(
      const VertexId& id, const Eigen::VectorXd& x) const;

 private:
  int dim_of(const VertexId& id) const;

  PushingEnvironment env_;
  VertexId source_;
  mutable std::mutex mutex_;
  mutable std::map<VertexId, std::shared_ptr<const GcsVertex>> vertices_;
};

std::shared_ptr<PushingGcs> make_pushing_problem(PushingEnvironment env);

/// One square robot behind one square object; the goal moves the object by
/// (1, 0).
PushingEnvironment make_push1_environment();

}  // namespace gcs_star
