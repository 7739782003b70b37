#include "gcs_star/geometry.h"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace gcs_star {

const LpSolver& DefaultLpSolver() {
  static const std::unique_ptr<LpSolver> solver =
      MakeLpSolver(DefaultLpSolverKey());
  return *solver;
}

HPolyhedron::HPolyhedron(Eigen::MatrixXd A, Eigen::VectorXd b)
    : A_(std::move(A)), b_(std::move(b)) {
  if (A_.rows() != b_.size()) {
    throw std::invalid_argument("HPolyhedron: A has " +
                                std::to_string(A_.rows()) + " rows but b has " +
                                std::to_string(b_.size()));
  }
  if (!A_.allFinite() || !b_.allFinite()) {
    throw std::invalid_argument("HPolyhedron: entries must be finite");
  }
}

HPolyhedron HPolyhedron::MakeBox(const Eigen::VectorXd& lb,
                                 const Eigen::VectorXd& ub) {
  if (lb.size() != ub.size()) {
    throw std::invalid_argument("MakeBox: bound sizes differ");
  }
  const int n = static_cast<int>(lb.size());
  Eigen::MatrixXd A(2 * n, n);
  A << Eigen::MatrixXd::Identity(n, n), -Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd b(2 * n);
  b << ub, -lb;
  return HPolyhedron(std::move(A), std::move(b));
}

HPolyhedron HPolyhedron::MakeUnitBox(int dim) {
  return MakeBox(Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Ones(dim));
}

bool HPolyhedron::contains_point(const Eigen::Ref<const Eigen::VectorXd>& x,
                                 double tol) const {
  return max_violation(x) <= tol;
}

double HPolyhedron::max_violation(
    const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != ambient_dimension()) {
    throw std::invalid_argument("HPolyhedron: point has dimension " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(ambient_dimension()));
  }
  if (A_.rows() == 0) return 0.0;
  return std::max(0.0, (A_ * x - b_).maxCoeff());
}

HPolyhedron HPolyhedron::CartesianProduct(const HPolyhedron& other) const {
  const int n1 = ambient_dimension(), n2 = other.ambient_dimension();
  const int m1 = num_rows(), m2 = other.num_rows();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m1 + m2, n1 + n2);
  A.topLeftCorner(m1, n1) = A_;
  A.bottomRightCorner(m2, n2) = other.A_;
  Eigen::VectorXd b(m1 + m2);
  b << b_, other.b_;
  return HPolyhedron(std::move(A), std::move(b));
}

HPolyhedron HPolyhedron::Intersect(const HPolyhedron& other) const {
  if (ambient_dimension() != other.ambient_dimension()) {
    throw std::invalid_argument("Intersect: dimension mismatch");
  }
  Eigen::MatrixXd A(num_rows() + other.num_rows(), ambient_dimension());
  A << A_, other.A_;
  Eigen::VectorXd b(num_rows() + other.num_rows());
  b << b_, other.b_;
  return HPolyhedron(std::move(A), std::move(b));
}

namespace {

LpSolution SolveChebyshev(const HPolyhedron& P, const LpSolver& solver,
                          double radius_cap) {
  const int n = P.ambient_dimension();
  LinearProgram lp(n + 1);
  lp.cost(n) = -1.0;
  lp.lower(n) = 0.0;
  lp.upper(n) = radius_cap;
  Eigen::MatrixXd A(P.num_rows(), n + 1);
  A.leftCols(n) = P.A();
  A.col(n) = P.A().rowwise().norm();
  lp.AddInequalities(A, P.b());
  return solver.Solve(lp);
}

}  // namespace

ChebyshevResult chebyshev_center(const HPolyhedron& P, const LpSolver& solver) {
  ChebyshevResult out;
  const int n = P.ambient_dimension();
  if (n == 0) {
    const bool ok = P.num_rows() == 0 || P.b().minCoeff() >= 0.0;
    out.status = ok ? ChebyshevResult::Status::kFound
                    : ChebyshevResult::Status::kEmpty;
    out.center = Eigen::VectorXd(0);
    out.radius = 0.0;
    return out;
  }
  LpSolution sol = SolveChebyshev(P, solver, kInfinity);
  if (sol.status == LpStatus::kUnbounded) {
    sol = SolveChebyshev(P, solver, 1.0);
    if (!sol.optimal()) return out;
    out.status = ChebyshevResult::Status::kFound;
    out.center = sol.x.head(n);
    out.radius = kInfinity;
    return out;
  }
  if (sol.status == LpStatus::kInfeasible) {
    out.status = ChebyshevResult::Status::kEmpty;
    return out;
  }
  if (!sol.optimal()) return out;
  out.status = ChebyshevResult::Status::kFound;
  out.center = sol.x.head(n);
  out.radius = std::max(0.0, sol.x(n));
  return out;
}

HPolyhedron CertifyNonempty(const HPolyhedron& P, const LpSolver& solver) {
  const ChebyshevResult c = chebyshev_center(P, solver);
  if (!c.found()) {
    throw std::runtime_error(c.empty() ? "polyhedron is empty"
                                       : "Chebyshev center solve failed");
  }
  HPolyhedron out = P;
  out.checked_nonempty_ = true;
  return out;
}

bool is_bounded(const HPolyhedron& P, const LpSolver& solver) {
  const int n = P.ambient_dimension();
  if (n == 0) return true;
  const int m = P.num_rows();
  if (m < n + 1) return false;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(P.A());
  lu.setThreshold(1e-10);
  if (lu.rank() < n) return false;
  // Bounded iff some strictly positive combination of rows vanishes.
  const Eigen::MatrixXd scaled =
      P.A().array().colwise() /
      P.A().rowwise().norm().array().max(1e-300);
  LinearProgram lp(m);
  lp.lower.setOnes();
  lp.AddEqualities(scaled.transpose(), Eigen::VectorXd::Zero(n));
  return solver.Solve(lp).optimal();
}

AHPolytope::AHPolytope(HPolyhedron base, Eigen::MatrixXd T, Eigen::VectorXd t)
    : base_(std::move(base)), T_(std::move(T)), t_(std::move(t)) {
  if (T_.cols() != base_.ambient_dimension() || T_.rows() != t_.size()) {
    throw std::invalid_argument("AHPolytope: inconsistent map dimensions");
  }
}

AHPolytope::AHPolytope(const HPolyhedron& P)
    : base_(P),
      T_(Eigen::MatrixXd::Identity(P.ambient_dimension(),
                                   P.ambient_dimension())),
      t_(Eigen::VectorXd::Zero(P.ambient_dimension())) {}

AHPolytope AHPolytope::AffineImage(const Eigen::MatrixXd& M,
                                   const Eigen::VectorXd& m) const {
  if (M.cols() != ambient_dimension() || M.rows() != m.size()) {
    throw std::invalid_argument("AffineImage: map has wrong shape");
  }
  return AHPolytope(base_, M * T_, M * t_ + m);
}

bool AHPolytope::contains_point(const Eigen::Ref<const Eigen::VectorXd>& y,
                                const LpSolver& solver, double tol) const {
  if (y.size() != ambient_dimension()) {
    throw std::invalid_argument("AHPolytope: point dimension mismatch");
  }
  LinearProgram lp(base_dimension());
  lp.AddInequalities(base_.A(),
                     base_.b() + Eigen::VectorXd::Constant(base_.num_rows(), tol));
  lp.AddEqualities(T_, y - t_);
  const LpSolution sol = solver.Solve(lp);
  if (sol.failed()) {
    throw std::runtime_error("AHPolytope membership solve failed: " +
                             std::string(to_string(sol.status)));
  }
  return sol.optimal();
}

std::optional<AHPolytope> nullspace_reduce(const Eigen::MatrixXd& A,
                                           const Eigen::VectorXd& b,
                                           const Eigen::MatrixXd& C,
                                           const Eigen::VectorXd& d) {
  const int n = static_cast<int>(A.cols());
  if (A.rows() != b.size() || C.rows() != d.size() ||
      (C.rows() > 0 && C.cols() != n)) {
    throw std::invalid_argument("nullspace_reduce: inconsistent shapes");
  }
  Eigen::VectorXd z0 = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd N = Eigen::MatrixXd::Identity(n, n);
  if (C.rows() > 0 && n > 0) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeFullU |
                                                 Eigen::ComputeFullV);
    const Eigen::VectorXd& s = svd.singularValues();
    const double smax = s.size() > 0 ? s(0) : 0.0;
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (s(i) > 1e-9 * smax) ++rank;
    }
    const Eigen::MatrixXd& U = svd.matrixU();
    const Eigen::MatrixXd& V = svd.matrixV();
    z0 = V.leftCols(rank) *
         (s.head(rank).cwiseInverse().asDiagonal() *
          (U.leftCols(rank).transpose() * d));
    N = V.rightCols(n - rank);
    const double residual = (C * z0 - d).cwiseAbs().maxCoeff();
    if (residual > 1e-8 * (1.0 + d.cwiseAbs().maxCoeff())) return std::nullopt;
  } else if (C.rows() > 0) {
    if (d.cwiseAbs().maxCoeff() > 1e-8) return std::nullopt;
  }
  HPolyhedron base(A * N, b - A * z0);
  return AHPolytope(std::move(base), std::move(N), std::move(z0));
}

HPolyhedron RemoveDuplicateRows(const HPolyhedron& P) {
  const int n = P.ambient_dimension();
  std::vector<Eigen::RowVectorXd> rows;
  std::vector<double> rhs;
  for (int i = 0; i < P.num_rows(); ++i) {
    const double norm = P.A().row(i).norm();
    if (norm < 1e-12) {
      if (P.b()(i) < -1e-12) {
        rows.push_back(Eigen::RowVectorXd::Zero(n));
        rhs.push_back(-1.0);
      }
      continue;
    }
    const Eigen::RowVectorXd u = P.A().row(i) / norm;
    const double r = P.b()(i) / norm;
    bool merged = false;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if ((rows[k] - u).cwiseAbs().maxCoeff() < 1e-10) {
        rhs[k] = std::min(rhs[k], r);
        merged = true;
        break;
      }
    }
    if (!merged) {
      rows.push_back(u);
      rhs.push_back(r);
    }
  }
  Eigen::MatrixXd A(rows.size(), n);
  Eigen::VectorXd b(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    A.row(k) = rows[k];
    b(k) = rhs[k];
  }
  return HPolyhedron(std::move(A), std::move(b));
}

HPolyhedron RemoveRedundantRows(const HPolyhedron& P, const LpSolver& solver) {
  const int n = P.ambient_dimension();
  const int m = P.num_rows();
  std::vector<bool> keep(m, true);
  for (int i = 0; i < m; ++i) {
    // max a_i z over the other kept rows, with row i relaxed by one unit so
    // the LP stays bounded.
    LinearProgram lp(n);
    lp.cost = -P.A().row(i).transpose();
    int rows = 0;
    for (int k = 0; k < m; ++k) rows += keep[k];
    Eigen::MatrixXd A(rows, n);
    Eigen::VectorXd b(rows);
    int r = 0;
    for (int k = 0; k < m; ++k) {
      if (!keep[k]) continue;
      A.row(r) = P.A().row(k);
      b(r) = P.b()(k) + (k == i ? 1.0 : 0.0);
      ++r;
    }
    lp.AddInequalities(A, b);
    const LpSolution sol = solver.Solve(lp);
    if (sol.optimal() && -sol.objective <= P.b()(i) + 1e-10 * (1 + std::abs(P.b()(i)))) {
      keep[i] = false;
    }
  }
  int rows = 0;
  for (int k = 0; k < m; ++k) rows += keep[k];
  Eigen::MatrixXd A(rows, n);
  Eigen::VectorXd b(rows);
  int r = 0;
  for (int k = 0; k < m; ++k) {
    if (!keep[k]) continue;
    A.row(r) = P.A().row(k);
    b(r) = P.b()(k);
    ++r;
  }
  return HPolyhedron(std::move(A), std::move(b));
}

Containment ah_containment_certified(const AHPolytope& X_in,
                                     const AHPolytope& Y_in,
                                     const LpSolver& solver) {
  if (X_in.ambient_dimension() != Y_in.ambient_dimension()) {
    throw std::invalid_argument(
        "ah_containment_certified: ambient dimensions differ");
  }
  const HPolyhedron Hx = RemoveDuplicateRows(X_in.base());
  const HPolyhedron Hy = RemoveDuplicateRows(Y_in.base());
  const Eigen::MatrixXd& Tx = X_in.T();
  const Eigen::MatrixXd& Ty = Y_in.T();
  const int n = X_in.ambient_dimension();
  const int kx = X_in.base_dimension();
  const int ky = Y_in.base_dimension();
  const int mx = Hx.num_rows();
  const int my = Hy.num_rows();

  // Variable layout: Γ (ky × kx, column-major), β (ky), Λ (my × mx) ≥ 0.
  const int gamma0 = 0;
  const int beta0 = ky * kx;
  const int lambda0 = beta0 + ky;
  const int nv = lambda0 + my * mx;
  auto gamma = [&](int r, int c) { return gamma0 + r + ky * c; };
  auto lambda = [&](int p, int j) { return lambda0 + p + my * j; };

  LinearProgram lp(nv);
  lp.lower.segment(lambda0, my * mx).setZero();

  const int n_eq = n * kx + n + my * kx;
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(n_eq, nv);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n_eq);
  int row = 0;
  // T_X = T_Y Γ.
  for (int c = 0; c < kx; ++c) {
    for (int i = 0; i < n; ++i, ++row) {
      for (int r = 0; r < ky; ++r) E(row, gamma(r, c)) = Ty(i, r);
      e(row) = Tx(i, c);
    }
  }
  // T_Y β = t_X − t_Y.
  for (int i = 0; i < n; ++i, ++row) {
    for (int r = 0; r < ky; ++r) E(row, beta0 + r) = Ty(i, r);
    e(row) = X_in.t()(i) - Y_in.t()(i);
  }
  // Λ H_X − H_Y Γ = 0.
  for (int c = 0; c < kx; ++c) {
    for (int p = 0; p < my; ++p, ++row) {
      for (int j = 0; j < mx; ++j) E(row, lambda(p, j)) = Hx.A()(j, c);
      for (int r = 0; r < ky; ++r) E(row, gamma(r, c)) = -Hy.A()(p, r);
    }
  }
  lp.AddEqualities(E, e);

  // Λ h_X + H_Y β ≤ h_Y.
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(my, nv);
  for (int p = 0; p < my; ++p) {
    for (int j = 0; j < mx; ++j) G(p, lambda(p, j)) = Hx.b()(j);
    for (int r = 0; r < ky; ++r) G(p, beta0 + r) = Hy.A()(p, r);
  }
  lp.AddInequalities(G, Hy.b());

  const LpSolution sol = solver.Solve(lp);
  switch (sol.status) {
    case LpStatus::kOptimal:
      return Containment::kCertified;
    case LpStatus::kInfeasible:
      return Containment::kNotCertified;
    default:
      return Containment::kSolverError;
  }
}

SamplerSupport::SamplerSupport(const HPolyhedron& P, const LpSolver& solver) {
  const int n = P.ambient_dimension();
  const ChebyshevResult cheb = chebyshev_center(P, solver);
  if (cheb.empty()) {
    throw std::invalid_argument("cannot sample an empty polyhedron");
  }
  if (!cheb.found()) {
    throw std::runtime_error("Chebyshev center solve failed");
  }
  if (std::isinf(cheb.radius) || !is_bounded(P, solver)) {
    throw std::invalid_argument("cannot sample an unbounded polyhedron");
  }
  if (cheb.radius > 1e-9) {
    base_ = P;
    T_ = Eigen::MatrixXd::Identity(n, n);
    t_ = Eigen::VectorXd::Zero(n);
    start_ = cheb.center;
    return;
  }

  // Measure-zero set: find the implicit equalities and sample their nullspace.
  std::vector<int> eq_rows, ineq_rows;
  for (int i = 0; i < P.num_rows(); ++i) {
    const double norm = P.A().row(i).norm();
    if (norm < 1e-12) continue;
    LinearProgram lp(n);
    lp.cost = P.A().row(i).transpose();
    lp.AddInequalities(P.A(), P.b());
    const LpSolution sol = solver.Solve(lp);
    if (!sol.optimal()) {
      throw std::runtime_error("implicit equality detection failed");
    }
    if ((P.b()(i) - sol.objective) / norm <= 1e-9) {
      eq_rows.push_back(i);
    } else {
      ineq_rows.push_back(i);
    }
  }
  Eigen::MatrixXd A(ineq_rows.size(), n), C(eq_rows.size(), n);
  Eigen::VectorXd b(ineq_rows.size()), d(eq_rows.size());
  for (std::size_t k = 0; k < ineq_rows.size(); ++k) {
    A.row(k) = P.A().row(ineq_rows[k]);
    b(k) = P.b()(ineq_rows[k]);
  }
  for (std::size_t k = 0; k < eq_rows.size(); ++k) {
    C.row(k) = P.A().row(eq_rows[k]);
    d(k) = P.b()(eq_rows[k]);
  }
  std::optional<AHPolytope> reduced = nullspace_reduce(A, b, C, d);
  if (!reduced) {
    throw std::runtime_error("implicit equalities are inconsistent");
  }
  base_ = RemoveDuplicateRows(reduced->base());
  T_ = reduced->T();
  t_ = reduced->t();
  const ChebyshevResult inner = chebyshev_center(base_, solver);
  if (!inner.found()) {
    throw std::runtime_error("Chebyshev center of the reduced set failed");
  }
  start_ = inner.center;
}

HitAndRunSampler::HitAndRunSampler(
    std::shared_ptr<const SamplerSupport> support, int burn_in, int thinning)
    : support_(std::move(support)), burn_in_(burn_in), thinning_(thinning) {
  xi_ = support_->start();
}

void HitAndRunSampler::Step(std::mt19937_64& rng) {
  const int k = static_cast<int>(xi_.size());
  if (k == 0) return;
  const HPolyhedron& base = support_->base();
  std::normal_distribution<double> normal;
  Eigen::VectorXd dir(k);
  for (int i = 0; i < k; ++i) dir(i) = normal(rng);
  const double norm = dir.norm();
  if (norm == 0.0) return;
  dir /= norm;
  const Eigen::VectorXd rate = base.A() * dir;
  const Eigen::VectorXd slack =
      (base.b() - base.A() * xi_).cwiseMax(0.0);
  double lo = -kInfinity, hi = kInfinity;
  for (Eigen::Index i = 0; i < rate.size(); ++i) {
    if (rate(i) > 1e-14) {
      hi = std::min(hi, slack(i) / rate(i));
    } else if (rate(i) < -1e-14) {
      lo = std::max(lo, slack(i) / rate(i));
    }
  }
  if (!std::isfinite(lo) || !std::isfinite(hi) || hi <= lo) return;
  const double step = std::uniform_real_distribution<double>(lo, hi)(rng);
  xi_ += step * dir;
}

Eigen::VectorXd HitAndRunSampler::Sample(std::mt19937_64& rng) {
  const int steps = started_ ? thinning_ : burn_in_;
  started_ = true;
  for (int i = 0; i < steps; ++i) Step(rng);
  return support_->Lift(xi_);
}

Eigen::VectorXd sample_interior(const HPolyhedron& P, std::mt19937_64& rng,
                                const LpSolver& solver) {
  HitAndRunSampler sampler(std::make_shared<SamplerSupport>(P, solver));
  return sampler.Sample(rng);
}

}  // namespace gcs_star
