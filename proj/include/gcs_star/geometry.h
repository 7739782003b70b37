#pragma once

#include <memory>
#include <optional>
#include <random>

#include <Eigen/Dense>

#include "gcs_star/lp_solver.h"

namespace gcs_star {

/// Default tolerance of point-membership queries.
inline constexpr double kMembershipTol = 1e-6;

/// The process-wide LP backend selected by GCSSTAR_SOLVER.
const LpSolver& DefaultLpSolver();

/// A polyhedron {x : A x ≤ b} in halfspace form.
class HPolyhedron {
 public:
  /// The zero-dimensional polyhedron with no rows (a single point).
  HPolyhedron() = default;

  /// Throws std::invalid_argument when the row counts differ or an entry is
  /// not finite.
  HPolyhedron(Eigen::MatrixXd A, Eigen::VectorXd b);

  /// The box {x : lb ≤ x ≤ ub}.
  static HPolyhedron MakeBox(const Eigen::VectorXd& lb,
                             const Eigen::VectorXd& ub);
  /// The box [0, 1]^dim.
  static HPolyhedron MakeUnitBox(int dim);

  int ambient_dimension() const { return static_cast<int>(A_.cols()); }
  int num_rows() const { return static_cast<int>(A_.rows()); }
  const Eigen::MatrixXd& A() const { return A_; }
  const Eigen::VectorXd& b() const { return b_; }

  /// True iff A x ≤ b + tol componentwise. Throws on a dimension mismatch.
  bool contains_point(const Eigen::Ref<const Eigen::VectorXd>& x,
                      double tol = kMembershipTol) const;

  /// Largest componentwise violation max(A x − b), or 0 with no rows.
  double max_violation(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// Set only by CertifyNonempty after a successful Chebyshev solve.
  bool checked_nonempty() const { return checked_nonempty_; }

  /// {(x, y) : x ∈ this, y ∈ other}.
  HPolyhedron CartesianProduct(const HPolyhedron& other) const;

  /// Rows of both polyhedra over the same space.
  HPolyhedron Intersect(const HPolyhedron& other) const;

 private:
  friend HPolyhedron CertifyNonempty(const HPolyhedron&, const LpSolver&);

  Eigen::MatrixXd A_{0, 0};
  Eigen::VectorXd b_{0};
  bool checked_nonempty_{false};
};

struct ChebyshevResult {
  enum class Status { kFound, kEmpty, kSolverError };
  Status status{Status::kSolverError};
  Eigen::VectorXd center;
  /// +∞ when the polyhedron contains arbitrarily large balls.
  double radius{0.0};

  bool found() const { return status == Status::kFound; }
  bool empty() const { return status == Status::kEmpty; }
};

/// Center and radius of the largest inscribed Euclidean ball.
ChebyshevResult chebyshev_center(const HPolyhedron& P,
                                 const LpSolver& solver = DefaultLpSolver());

/// Returns a copy of P with checked_nonempty set. Throws std::runtime_error if
/// P is empty or the solve fails.
HPolyhedron CertifyNonempty(const HPolyhedron& P,
                            const LpSolver& solver = DefaultLpSolver());

/// True iff the nonempty polyhedron P is bounded.
bool is_bounded(const HPolyhedron& P,
                const LpSolver& solver = DefaultLpSolver());

/// The affine image {t + T ξ : ξ ∈ base}.
class AHPolytope {
 public:
  AHPolytope() = default;
  /// Throws std::invalid_argument on inconsistent shapes.
  AHPolytope(HPolyhedron base, Eigen::MatrixXd T, Eigen::VectorXd t);
  /// The identity image of P.
  explicit AHPolytope(const HPolyhedron& P);

  int ambient_dimension() const { return static_cast<int>(T_.rows()); }
  int base_dimension() const { return base_.ambient_dimension(); }
  const HPolyhedron& base() const { return base_; }
  const Eigen::MatrixXd& T() const { return T_; }
  const Eigen::VectorXd& t() const { return t_; }

  /// {M y + m : y ∈ this}.
  AHPolytope AffineImage(const Eigen::MatrixXd& M,
                         const Eigen::VectorXd& m) const;

  /// LP feasibility of {ξ : A ξ ≤ b + tol, T ξ = y − t}. Throws
  /// std::runtime_error when the backend fails.
  bool contains_point(const Eigen::Ref<const Eigen::VectorXd>& y,
                      const LpSolver& solver = DefaultLpSolver(),
                      double tol = 0.0) const;

 private:
  HPolyhedron base_;
  Eigen::MatrixXd T_{0, 0};
  Eigen::VectorXd t_{0};
};

/// Parameterizes {z : A z ≤ b, C z = d} as {z0 + N ξ : A N ξ ≤ b − A z0}
/// where C z0 = d and the columns of N span null(C). Returns std::nullopt when
/// C z = d is inconsistent.
std::optional<AHPolytope> nullspace_reduce(const Eigen::MatrixXd& A,
                                           const Eigen::VectorXd& b,
                                           const Eigen::MatrixXd& C,
                                           const Eigen::VectorXd& d);

/// Drops all-zero rows and keeps the tightest of each group of parallel rows.
/// An all-zero row with negative right-hand side is kept, so emptiness is
/// preserved.
HPolyhedron RemoveDuplicateRows(const HPolyhedron& P);

/// Drops rows implied by the remaining ones, one LP per row. Rows whose LP
/// fails are kept, so the result describes the same set.
HPolyhedron RemoveRedundantRows(const HPolyhedron& P,
                                const LpSolver& solver = DefaultLpSolver());

enum class Containment { kCertified, kNotCertified, kSolverError };

/// Sufficient LP certificate for X ⊆ Y: there exist Γ, β and Λ ≥ 0 with
/// T_X = T_Y Γ, t_Y − t_X = −T_Y β, Λ H_X = H_Y Γ and Λ h_X ≤ h_Y − H_Y β.
/// Throws std::invalid_argument when the ambient dimensions differ.
Containment ah_containment_certified(const AHPolytope& X, const AHPolytope& Y,
                                     const LpSolver& solver = DefaultLpSolver());

/// Immutable data needed to run hit-and-run chains in a bounded polyhedron.
/// Lower-dimensional sets are handled by detecting implicit equalities and
/// sampling in their nullspace.
class SamplerSupport {
 public:
  /// Throws std::invalid_argument if P is empty or unbounded.
  explicit SamplerSupport(const HPolyhedron& P,
                          const LpSolver& solver = DefaultLpSolver());

  int ambient_dimension() const { return static_cast<int>(t_.size()); }
  const HPolyhedron& base() const { return base_; }
  const Eigen::VectorXd& start() const { return start_; }
  Eigen::VectorXd Lift(const Eigen::VectorXd& xi) const { return t_ + T_ * xi; }

 private:
  HPolyhedron base_;     // full-dimensional (or zero-dimensional) base
  Eigen::MatrixXd T_;    // maps base points into the original space
  Eigen::VectorXd t_;
  Eigen::VectorXd start_;  // Chebyshev center of the base
};

/// A hit-and-run chain. The first sample follows `burn_in` steps from the
/// Chebyshev center; every later sample follows `thinning` steps.
class HitAndRunSampler {
 public:
  explicit HitAndRunSampler(std::shared_ptr<const SamplerSupport> support,
                            int burn_in = 50, int thinning = 10);

  Eigen::VectorXd Sample(std::mt19937_64& rng);

 private:
  void Step(std::mt19937_64& rng);

  std::shared_ptr<const SamplerSupport> support_;
  int burn_in_;
  int thinning_;
  bool started_{false};
  Eigen::VectorXd xi_;
};

/// One approximately uniform sample of P using a fresh chain.
Eigen::VectorXd sample_interior(const HPolyhedron& P, std::mt19937_64& rng,
                                const LpSolver& solver = DefaultLpSolver());

}  // namespace gcs_star
