#include "gcs_star/lp_solver.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace gcs_star {

LinearProgram::LinearProgram(int num_vars)
    : cost(Eigen::VectorXd::Zero(num_vars)),
      A_ineq(0, num_vars),
      b_ineq(0),
      A_eq(0, num_vars),
      b_eq(0),
      lower(Eigen::VectorXd::Constant(num_vars, -kInfinity)),
      upper(Eigen::VectorXd::Constant(num_vars, kInfinity)) {}

int LinearProgram::AddVariables(int extra) {
  const int first = num_vars();
  const int n = first + extra;
  cost.conservativeResize(n);
  cost.tail(extra).setZero();
  lower.conservativeResize(n);
  lower.tail(extra).setConstant(-kInfinity);
  upper.conservativeResize(n);
  upper.tail(extra).setConstant(kInfinity);
  A_ineq.conservativeResize(Eigen::NoChange, n);
  A_ineq.rightCols(extra).setZero();
  A_eq.conservativeResize(Eigen::NoChange, n);
  A_eq.rightCols(extra).setZero();
  return first;
}

namespace {

void AppendRows(Eigen::MatrixXd* A, Eigen::VectorXd* b,
                const Eigen::Ref<const Eigen::MatrixXd>& rows,
                const Eigen::Ref<const Eigen::VectorXd>& rhs) {
  if (rows.cols() != A->cols() || rows.rows() != rhs.size()) {
    throw std::invalid_argument("LinearProgram: row block has wrong shape");
  }
  const Eigen::Index old = A->rows();
  A->conservativeResize(old + rows.rows(), Eigen::NoChange);
  A->bottomRows(rows.rows()) = rows;
  b->conservativeResize(old + rhs.size());
  b->tail(rhs.size()) = rhs;
}

}  // namespace

void LinearProgram::AddInequalities(const Eigen::Ref<const Eigen::MatrixXd>& A,
                                    const Eigen::Ref<const Eigen::VectorXd>& b) {
  AppendRows(&A_ineq, &b_ineq, A, b);
}

void LinearProgram::AddEqualities(const Eigen::Ref<const Eigen::MatrixXd>& A,
                                  const Eigen::Ref<const Eigen::VectorXd>& b) {
  AppendRows(&A_eq, &b_eq, A, b);
}

std::string_view to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kIterationLimit:
      return "iteration_limit";
    case LpStatus::kNumericalError:
      return "numerical_error";
  }
  return "unknown";
}

namespace {

enum class VarState : std::uint8_t { kBasic, kAtLower, kAtUpper, kFreeZero };

// Phase-1 infeasibility accepted as zero, in row-normalized units.
constexpr double kPhaseOneTol = 1e-8;
// Bound violation tolerated in the final, refactored basic solution.
constexpr double kFinalPrimalTol = 1e-7;
constexpr int kDegenerateStallLimit = 30;

class Tableau {
 public:
  Tableau(const LinearProgram& lp, const SimplexOptions& options)
      : lp_(lp), opt_(options) {}

  LpSolution Run();

 private:
  enum class PhaseResult { kOptimal, kUnbounded, kIterationLimit, kError };

  bool Setup();  // false when trivially infeasible
  PhaseResult Iterate(bool phase_one);
  bool ChooseEntering(const Eigen::RowVectorXd& d, bool bland, int* j,
                      int* dir) const;
  void Pivot(int r, int j);
  bool Reinvert();
  void DriveOutArtificials();
  double PhaseOneInfeasibility() const;
  double Value(int col) const {
    return state_[col] == VarState::kBasic ? beta_(pos_[col]) : xval_[col];
  }

  const LinearProgram& lp_;
  const SimplexOptions& opt_;

  int n_{0};         // structural columns
  int m_{0};         // rows kept after scaling
  int ncols_{0};     // structural + slack + artificial
  int first_art_{0}; // first artificial column
  Eigen::MatrixXd M_;  // original (scaled) constraint matrix over all columns
  Eigen::VectorXd rhs_;
  Eigen::MatrixXd T_;  // B^-1 M
  Eigen::VectorXd beta_;
  Eigen::RowVectorXd c1_, c2_, d1_, d2_;
  std::vector<double> lo_, up_, xval_;
  std::vector<VarState> state_;
  std::vector<int> basis_;  // row -> column
  std::vector<int> pos_;    // column -> row (or -1)
  int iterations_{0};
  int iteration_limit_{0};
  int pivots_since_reinvert_{0};
  bool infeasible_{false};
  bool bad_input_{false};
};

bool Tableau::Setup() {
  n_ = lp_.num_vars();
  const auto& Ai = lp_.A_ineq;
  const auto& Ae = lp_.A_eq;
  if (Ai.cols() != n_ || Ae.cols() != n_ || Ai.rows() != lp_.b_ineq.size() ||
      Ae.rows() != lp_.b_eq.size() || lp_.lower.size() != n_ ||
      lp_.upper.size() != n_) {
    throw std::invalid_argument("LinearProgram: inconsistent dimensions");
  }
  if (!Ai.allFinite() || !Ae.allFinite() || !lp_.b_ineq.allFinite() ||
      !lp_.b_eq.allFinite() || !lp_.cost.allFinite()) {
    bad_input_ = true;
    return false;
  }
  for (int j = 0; j < n_; ++j) {
    if (lp_.lower(j) > lp_.upper(j)) return false;
  }

  // Row normalization; rows that vanish relative to the matrix scale are
  // checked directly and dropped.
  double matrix_scale = 1.0;
  if (Ai.size() > 0) matrix_scale = std::max(matrix_scale, Ai.cwiseAbs().maxCoeff());
  if (Ae.size() > 0) matrix_scale = std::max(matrix_scale, Ae.cwiseAbs().maxCoeff());
  const double zero_row = 1e-13 * matrix_scale;
  std::vector<int> ineq_rows, eq_rows;
  std::vector<double> ineq_scale, eq_scale;
  for (Eigen::Index i = 0; i < Ai.rows(); ++i) {
    const double s = Ai.row(i).cwiseAbs().maxCoeff();
    if (s <= zero_row) {
      if (lp_.b_ineq(i) < -opt_.feasibility_tol) return false;
      continue;
    }
    ineq_rows.push_back(static_cast<int>(i));
    ineq_scale.push_back(1.0 / s);
  }
  for (Eigen::Index i = 0; i < Ae.rows(); ++i) {
    const double s = Ae.row(i).cwiseAbs().maxCoeff();
    if (s <= zero_row) {
      if (std::abs(lp_.b_eq(i)) > opt_.feasibility_tol) return false;
      continue;
    }
    eq_rows.push_back(static_cast<int>(i));
    eq_scale.push_back(1.0 / s);
  }
  const int mi = static_cast<int>(ineq_rows.size());
  const int me = static_cast<int>(eq_rows.size());
  m_ = mi + me;

  // Initial nonbasic values of structural columns.
  lo_.assign(n_ + mi, 0.0);
  up_.assign(n_ + mi, kInfinity);
  xval_.assign(n_ + mi, 0.0);
  state_.assign(n_ + mi, VarState::kAtLower);
  for (int j = 0; j < n_; ++j) {
    lo_[j] = lp_.lower(j);
    up_[j] = lp_.upper(j);
    if (std::isfinite(lo_[j])) {
      xval_[j] = lo_[j];
      state_[j] = VarState::kAtLower;
    } else if (std::isfinite(up_[j])) {
      xval_[j] = up_[j];
      state_[j] = VarState::kAtUpper;
    } else {
      xval_[j] = 0.0;
      state_[j] = VarState::kFreeZero;
    }
  }

  Eigen::MatrixXd A(m_, n_);
  rhs_.resize(m_);
  for (int k = 0; k < mi; ++k) {
    A.row(k) = Ai.row(ineq_rows[k]) * ineq_scale[k];
    rhs_(k) = lp_.b_ineq(ineq_rows[k]) * ineq_scale[k];
  }
  for (int k = 0; k < me; ++k) {
    A.row(mi + k) = Ae.row(eq_rows[k]) * eq_scale[k];
    rhs_(mi + k) = lp_.b_eq(eq_rows[k]) * eq_scale[k];
  }
  Eigen::VectorXd xn(n_);
  for (int j = 0; j < n_; ++j) xn(j) = xval_[j];
  const Eigen::VectorXd residual = rhs_ - A * xn;

  // Decide which rows need an artificial column.
  std::vector<int> art_rows;
  std::vector<double> art_sign;
  basis_.assign(m_, -1);
  beta_.resize(m_);
  for (int i = 0; i < m_; ++i) {
    const bool is_ineq = i < mi;
    if (is_ineq && residual(i) >= 0.0) {
      basis_[i] = n_ + i;
      beta_(i) = residual(i);
    } else {
      art_rows.push_back(i);
      art_sign.push_back(residual(i) >= 0.0 ? 1.0 : -1.0);
    }
  }
  first_art_ = n_ + mi;
  const int na = static_cast<int>(art_rows.size());
  ncols_ = first_art_ + na;

  M_ = Eigen::MatrixXd::Zero(m_, ncols_);
  M_.leftCols(n_) = A;
  for (int k = 0; k < mi; ++k) M_(k, n_ + k) = 1.0;
  for (int k = 0; k < na; ++k) {
    M_(art_rows[k], first_art_ + k) = art_sign[k];
    lo_.push_back(0.0);
    up_.push_back(kInfinity);
    xval_.push_back(0.0);
    state_.push_back(VarState::kAtLower);
    basis_[art_rows[k]] = first_art_ + k;
    beta_(art_rows[k]) = std::abs(residual(art_rows[k]));
  }

  T_ = M_;
  for (int k = 0; k < na; ++k) {
    if (art_sign[k] < 0) T_.row(art_rows[k]) *= -1.0;
  }
  pos_.assign(ncols_, -1);
  for (int i = 0; i < m_; ++i) {
    pos_[basis_[i]] = i;
    state_[basis_[i]] = VarState::kBasic;
  }

  c1_ = Eigen::RowVectorXd::Zero(ncols_);
  c2_ = Eigen::RowVectorXd::Zero(ncols_);
  c2_.head(n_) = lp_.cost.transpose();
  c1_.tail(na).setOnes();
  Eigen::RowVectorXd cb1(m_), cb2(m_);
  for (int i = 0; i < m_; ++i) {
    cb1(i) = c1_(basis_[i]);
    cb2(i) = c2_(basis_[i]);
  }
  d1_ = c1_ - cb1 * T_;
  d2_ = c2_ - cb2 * T_;

  iteration_limit_ = 50 * (m_ + ncols_) + 1000;
  return true;
}

bool Tableau::ChooseEntering(const Eigen::RowVectorXd& d, bool bland, int* j,
                             int* dir) const {
  const double tol = opt_.optimality_tol;
  double best = 0.0;
  *j = -1;
  for (int k = 0; k < ncols_; ++k) {
    const VarState s = state_[k];
    if (s == VarState::kBasic) continue;
    if (lo_[k] == up_[k]) continue;
    int candidate_dir = 0;
    if (s == VarState::kAtLower && d(k) < -tol) {
      candidate_dir = 1;
    } else if (s == VarState::kAtUpper && d(k) > tol) {
      candidate_dir = -1;
    } else if (s == VarState::kFreeZero && std::abs(d(k)) > tol) {
      candidate_dir = d(k) < 0 ? 1 : -1;
    }
    if (candidate_dir == 0) continue;
    if (bland) {
      *j = k;
      *dir = candidate_dir;
      return true;
    }
    if (std::abs(d(k)) > best) {
      best = std::abs(d(k));
      *j = k;
      *dir = candidate_dir;
    }
  }
  return *j >= 0;
}

void Tableau::Pivot(int r, int j) {
  const Eigen::RowVectorXd prow = T_.row(r) / T_(r, j);
  Eigen::VectorXd col = T_.col(j);
  col(r) = 0.0;
  T_.noalias() -= col * prow;
  T_.row(r) = prow;
  d1_ -= d1_(j) * prow;
  d2_ -= d2_(j) * prow;
  const int leaving = basis_[r];
  pos_[leaving] = -1;
  basis_[r] = j;
  pos_[j] = r;
  state_[j] = VarState::kBasic;
  ++pivots_since_reinvert_;
}

bool Tableau::Reinvert() {
  pivots_since_reinvert_ = 0;
  if (m_ == 0) return true;
  Eigen::MatrixXd B(m_, m_);
  for (int i = 0; i < m_; ++i) B.col(i) = M_.col(basis_[i]);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
  Eigen::VectorXd xn_rhs = rhs_;
  for (int k = 0; k < ncols_; ++k) {
    if (state_[k] != VarState::kBasic && xval_[k] != 0.0) {
      xn_rhs -= M_.col(k) * xval_[k];
    }
  }
  Eigen::MatrixXd T = lu.solve(M_);
  Eigen::VectorXd beta = lu.solve(xn_rhs);
  if (!T.allFinite() || !beta.allFinite()) return false;
  // Reject a numerically singular basis.
  if ((B * beta - xn_rhs).cwiseAbs().maxCoeff() > 1e-6) return false;
  T_ = std::move(T);
  beta_ = std::move(beta);
  Eigen::RowVectorXd cb1(m_), cb2(m_);
  for (int i = 0; i < m_; ++i) {
    cb1(i) = c1_(basis_[i]);
    cb2(i) = c2_(basis_[i]);
  }
  d1_ = c1_ - cb1 * T_;
  d2_ = c2_ - cb2 * T_;
  return true;
}

Tableau::PhaseResult Tableau::Iterate(
                                      bool phase_one) {
  const double ftol = opt_.feasibility_tol;
  const double ptol = opt_.pivot_tol;
  const bool always_bland = opt_.pricing == PricingRule::kBland;
  int degenerate_run = 0;
  bool bland = always_bland;
  while (true) {
    if (iterations_ >= iteration_limit_) return PhaseResult::kIterationLimit;
    if (pivots_since_reinvert_ >= std::max(opt_.reinvert_every, m_)) {
      if (!Reinvert()) return PhaseResult::kError;
    }
    const Eigen::RowVectorXd& d = phase_one ? d1_ : d2_;
    int j = -1, dir = 0;
    if (!ChooseEntering(d, bland, &j, &dir)) return PhaseResult::kOptimal;
    ++iterations_;

    const double flip =
        (std::isfinite(lo_[j]) && std::isfinite(up_[j])) ? up_[j] - lo_[j]
                                                          : kInfinity;
    int r = -1;
    double theta = kInfinity;
    bool leaves_at_lower = true;
    if (bland) {
      // Textbook ratio test, ties broken by smallest basic column index.
      for (int i = 0; i < m_; ++i) {
        const double a = T_(i, j);
        if (std::abs(a) <= ptol) continue;
        const double rate = -dir * a;
        const int b = basis_[i];
        double ratio;
        bool at_lower;
        if (rate < 0 && std::isfinite(lo_[b])) {
          ratio = (beta_(i) - lo_[b]) / (-rate);
          at_lower = true;
        } else if (rate > 0 && std::isfinite(up_[b])) {
          ratio = (up_[b] - beta_(i)) / rate;
          at_lower = false;
        } else {
          continue;
        }
        ratio = std::max(ratio, 0.0);
        if (r < 0 || ratio < theta - 1e-12 ||
            (ratio <= theta + 1e-12 && b < basis_[r])) {
          r = i;
          theta = ratio;
          leaves_at_lower = at_lower;
        }
      }
    } else {
      // Harris two-pass ratio test.
      double harris = kInfinity;
      for (int i = 0; i < m_; ++i) {
        const double a = T_(i, j);
        if (std::abs(a) <= ptol) continue;
        const double rate = -dir * a;
        const int b = basis_[i];
        if (rate < 0 && std::isfinite(lo_[b])) {
          harris = std::min(harris, (beta_(i) - lo_[b] + ftol) / (-rate));
        } else if (rate > 0 && std::isfinite(up_[b])) {
          harris = std::min(harris, (up_[b] - beta_(i) + ftol) / rate);
        }
      }
      if (std::isfinite(harris)) {
        double best_pivot = 0.0;
        for (int i = 0; i < m_; ++i) {
          const double a = T_(i, j);
          if (std::abs(a) <= ptol) continue;
          const double rate = -dir * a;
          const int b = basis_[i];
          double ratio;
          bool at_lower;
          if (rate < 0 && std::isfinite(lo_[b])) {
            ratio = (beta_(i) - lo_[b]) / (-rate);
            at_lower = true;
          } else if (rate > 0 && std::isfinite(up_[b])) {
            ratio = (up_[b] - beta_(i)) / rate;
            at_lower = false;
          } else {
            continue;
          }
          if (ratio <= harris && std::abs(a) > best_pivot) {
            best_pivot = std::abs(a);
            r = i;
            theta = std::max(ratio, 0.0);
            leaves_at_lower = at_lower;
          }
        }
      }
    }

    if (r < 0 && !std::isfinite(flip)) {
      return phase_one ? PhaseResult::kError : PhaseResult::kUnbounded;
    }
    if (r < 0 || flip <= theta) {
      // Bound flip of the entering variable; the basis is unchanged.
      beta_ -= (dir * flip) * T_.col(j);
      xval_[j] = dir > 0 ? up_[j] : lo_[j];
      state_[j] = dir > 0 ? VarState::kAtUpper : VarState::kAtLower;
      degenerate_run = 0;
      bland = always_bland;
      continue;
    }

    if (theta <= 1e-12) {
      if (++degenerate_run > kDegenerateStallLimit) bland = true;
    } else {
      degenerate_run = 0;
      bland = always_bland;
    }

    const double entering_value = xval_[j] + dir * theta;
    beta_ -= (dir * theta) * T_.col(j);
    const int leaving = basis_[r];
    xval_[leaving] = leaves_at_lower ? lo_[leaving] : up_[leaving];
    state_[leaving] =
        leaves_at_lower ? VarState::kAtLower : VarState::kAtUpper;
    Pivot(r, j);
    beta_(r) = entering_value;
    if (leaving >= first_art_) {
      // Artificials never re-enter.
      up_[leaving] = 0.0;
      xval_[leaving] = 0.0;
      state_[leaving] = VarState::kAtLower;
    }
  }
}

double Tableau::PhaseOneInfeasibility() const {
  double total = 0.0;
  for (int i = 0; i < m_; ++i) {
    if (basis_[i] >= first_art_) total += std::abs(beta_(i));
  }
  return total;
}

void Tableau::DriveOutArtificials() {
  for (int r = 0; r < m_; ++r) {
    if (basis_[r] < first_art_) continue;
    int best = -1;
    double best_abs = 1e-7;
    for (int k = 0; k < first_art_; ++k) {
      if (state_[k] == VarState::kBasic) continue;
      if (std::abs(T_(r, k)) > best_abs) {
        best_abs = std::abs(T_(r, k));
        best = k;
      }
    }
    if (best < 0) continue;  // redundant row; artificial stays fixed at zero
    const int leaving = basis_[r];
    const double entering_value = xval_[best];
    Pivot(r, best);
    beta_(r) = entering_value;
    xval_[leaving] = 0.0;
    state_[leaving] = VarState::kAtLower;
  }
  for (int k = first_art_; k < ncols_; ++k) {
    up_[k] = 0.0;
    if (state_[k] != VarState::kBasic) xval_[k] = 0.0;
  }
}

LpSolution Tableau::Run() {
  LpSolution out;
  if (!Setup()) {
    out.status =
        bad_input_ ? LpStatus::kNumericalError : LpStatus::kInfeasible;
    return out;
  }
  auto fail = [&](PhaseResult r) {
    out.iterations = iterations_;
    switch (r) {
      case PhaseResult::kIterationLimit:
        out.status = LpStatus::kIterationLimit;
        break;
      case PhaseResult::kUnbounded:
        out.status = LpStatus::kUnbounded;
        break;
      default:
        out.status = LpStatus::kNumericalError;
    }
    return out;
  };

  if (ncols_ > first_art_) {
    PhaseResult r = Iterate(true);
    if (r != PhaseResult::kOptimal) return fail(r);
    if (!Reinvert()) return fail(PhaseResult::kError);
    if (PhaseOneInfeasibility() > kPhaseOneTol) {
      // Re-check once from the refactored basis before declaring infeasible.
      r = Iterate(true);
      if (r != PhaseResult::kOptimal) return fail(r);
      if (PhaseOneInfeasibility() > kPhaseOneTol) {
        out.status = LpStatus::kInfeasible;
        out.iterations = iterations_;
        return out;
      }
    }
    DriveOutArtificials();
  }

  for (int attempt = 0; attempt < 3; ++attempt) {
    PhaseResult r = Iterate(false);
    if (r != PhaseResult::kOptimal) return fail(r);
    if (!Reinvert()) return fail(PhaseResult::kError);
    int j, dir;
    if (!ChooseEntering(d2_, false, &j, &dir)) break;
  }

  double violation = 0.0;
  for (int i = 0; i < m_; ++i) {
    const int b = basis_[i];
    violation = std::max(violation, lo_[b] - beta_(i));
    violation = std::max(violation, beta_(i) - up_[b]);
  }
  if (violation > kFinalPrimalTol) return fail(PhaseResult::kError);

  out.x.resize(n_);
  for (int j = 0; j < n_; ++j) {
    double v = Value(j);
    // Clamp the tiny residual bound violations left by the ratio test.
    if (std::isfinite(lo_[j])) v = std::max(v, lo_[j]);
    if (std::isfinite(up_[j])) v = std::min(v, up_[j]);
    out.x(j) = v;
  }
  out.objective = lp_.cost.dot(out.x);
  out.status = LpStatus::kOptimal;
  out.iterations = iterations_;
  return out;
}

}  // namespace

DenseSimplexSolver::DenseSimplexSolver(SimplexOptions options)
    : options_(options) {}

LpSolution DenseSimplexSolver::Solve(const LinearProgram& program) const {
  CountSolve();
  Tableau tableau(program, options_);
  return tableau.Run();
}

std::string_view DenseSimplexSolver::name() const {
  return options_.pricing == PricingRule::kBland ? "simplex-bland" : "simplex";
}

std::unique_ptr<LpSolver> MakeLpSolver(std::string_view key) {
  if (key == "simplex") return std::make_unique<DenseSimplexSolver>();
  if (key == "simplex-bland") {
    SimplexOptions options;
    options.pricing = PricingRule::kBland;
    return std::make_unique<DenseSimplexSolver>(options);
  }
  throw std::invalid_argument("unknown LP backend '" + std::string(key) +
                              "' (expected simplex or simplex-bland)");
}

std::string DefaultLpSolverKey() {
  const char* env = std::getenv("GCSSTAR_SOLVER");
  if (env == nullptr || *env == '\0') return "simplex";
  return env;
}

}  // namespace gcs_star
