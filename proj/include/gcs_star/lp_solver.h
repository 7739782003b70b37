#pragma once

#include <atomic>
#include <limits>
#include <memory>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace gcs_star {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// A linear program in the general form
///
///   minimize    cost · x
///   subject to  A_ineq x ≤ b_ineq
///               A_eq x   = b_eq
///               lower ≤ x ≤ upper
///
/// Bounds may be ±∞. Rows are appended block-wise through the Add* helpers.
struct LinearProgram {
  explicit LinearProgram(int num_vars = 0);

  int num_vars() const { return static_cast<int>(cost.size()); }

  /// Appends `extra` free variables with zero cost and returns the index of
  /// the first one.
  int AddVariables(int extra);

  void AddInequalities(const Eigen::Ref<const Eigen::MatrixXd>& A,
                       const Eigen::Ref<const Eigen::VectorXd>& b);
  void AddEqualities(const Eigen::Ref<const Eigen::MatrixXd>& A,
                     const Eigen::Ref<const Eigen::VectorXd>& b);

  Eigen::VectorXd cost;
  Eigen::MatrixXd A_ineq;
  Eigen::VectorXd b_ineq;
  Eigen::MatrixXd A_eq;
  Eigen::VectorXd b_eq;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

enum class LpStatus {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kIterationLimit,
  kNumericalError,
};

std::string_view to_string(LpStatus status);

struct LpSolution {
  LpStatus status{LpStatus::kNumericalError};
  Eigen::VectorXd x;
  double objective{kInfinity};
  int iterations{0};

  bool optimal() const { return status == LpStatus::kOptimal; }
  /// True when the backend failed rather than proving a status.
  bool failed() const {
    return status == LpStatus::kIterationLimit ||
           status == LpStatus::kNumericalError;
  }
};

/// Backend interface. Implementations are stateless between calls and safe to
/// share across threads; `Solve` only reads the program.
class LpSolver {
 public:
  virtual ~LpSolver() = default;
  virtual LpSolution Solve(const LinearProgram& program) const = 0;
  virtual std::string_view name() const = 0;

  /// Number of `Solve` calls made through this instance.
  long num_solves() const { return num_solves_.load(); }

 protected:
  void CountSolve() const { num_solves_.fetch_add(1); }

 private:
  mutable std::atomic<long> num_solves_{0};
};

/// Pivoting rules of the bundled dense simplex.
enum class PricingRule {
  /// Dantzig's largest-reduced-cost rule with Harris' ratio test, falling
  /// back to Bland's rule during long degenerate stalls.
  kDantzig,
  /// Bland's smallest-index rule throughout (slow, cycle-free).
  kBland,
};

struct SimplexOptions {
  PricingRule pricing{PricingRule::kDantzig};
  double feasibility_tol{1e-9};
  double optimality_tol{1e-9};
  double pivot_tol{1e-9};
  int reinvert_every{150};
};

/// Bounded-variable two-phase primal simplex on a dense tableau.
class DenseSimplexSolver final : public LpSolver {
 public:
  explicit DenseSimplexSolver(SimplexOptions options = {});
  LpSolution Solve(const LinearProgram& program) const override;
  std::string_view name() const override;
  const SimplexOptions& options() const { return options_; }

 private:
  SimplexOptions options_;
};

/// Known backend keys: "simplex" (default) and "simplex-bland".
/// Throws std::invalid_argument for an unknown key.
std::unique_ptr<LpSolver> MakeLpSolver(std::string_view key);

/// The backend key from the GCSSTAR_SOLVER environment variable, or
/// "simplex" when unset.
std::string DefaultLpSolverKey();

}  // namespace gcs_star
