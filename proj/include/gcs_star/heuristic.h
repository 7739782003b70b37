#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gcs_star/gcs.h"

namespace gcs_star {

/// A heuristic at one vertex in LP-representable form:
///
///   h(x) = constant + min over y of Σ_k w_k |a_k·(x, y) + b_k|
///          subject to G (x, y) ≤ g.
///
/// With num_aux = 0 and no terms, h is the constant.
struct HeuristicFragment {
  double constant{0.0};
  int num_aux{0};
  Eigen::MatrixXd G;
  Eigen::VectorXd g;
  std::vector<L1Term> terms;

  bool is_constant() const { return num_aux == 0 && terms.empty(); }
  /// Multiplies the constant and every weight by `factor`.
  void Scale(double factor);
};

class Heuristic {
 public:
  virtual ~Heuristic() = default;
  virtual std::string name() const = 0;

  /// The fragment at vertex v. Callers go through FragmentAt, which enforces
  /// h ≡ 0 on the target.
  virtual HeuristicFragment Fragment(const ImplicitGcs& g,
                                     const GcsVertex& v) const = 0;
};

/// h's fragment at v, or the zero fragment when v is the target.
HeuristicFragment FragmentAt(const Heuristic& h, const ImplicitGcs& g,
                             const GcsVertex& v);

struct ShortcutParams {
  /// When false, the target point is the Chebyshev center of the target set
  /// instead of being chosen by the inner minimization.
  bool target_point_free{true};
  double robot_weight{0.2};
  double mode_switch_constant{1.0};
};

std::shared_ptr<const Heuristic> MakeZeroHeuristic();

/// h(x) = κ + min over x_t ∈ X_t of Σ_r w_r |(S x − S_t x_t)_r| using the
/// graph's ShortcutModel, where κ is the direct edge's constant when an edge
/// to the target exists and mode_switch_constant otherwise. Fragment throws
/// std::invalid_argument when the graph has no shortcut model.
std::shared_ptr<const Heuristic> MakeShortcutHeuristic(ShortcutParams params);

/// ε · inner. Throws std::invalid_argument when epsilon < 1.
std::shared_ptr<const Heuristic> MakeInflatedHeuristic(
    std::shared_ptr<const Heuristic> inner, double epsilon);

/// Per-vertex constant: the shortest distance to the target when every edge
/// is weighted by its constant cost c0. Vertices that cannot reach the target
/// get 0.
std::shared_ptr<const Heuristic> MakeConstantLowerBoundHeuristic(
    const ExplicitGcs& g);

/// Evaluates h at x ∈ X_v by solving the fragment's LP. Returns +∞ when the
/// fragment's constraints are infeasible at x. Throws std::runtime_error on a
/// solver failure.
double evaluate_heuristic(const Heuristic& h, const ImplicitGcs& g,
                          const GcsVertex& v, const Eigen::VectorXd& x,
                          const LpSolver& solver = DefaultLpSolver());

}  // namespace gcs_star
