#include "gcs_star/geometry.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.h"

namespace gcs_star {
namespace {

using testing::EnumerateVertexImages;
using testing::EnumerateVertices;

HPolyhedron Triangle() {
  Eigen::MatrixXd A(3, 2);
  A << -1, 0, 0, -1, 1, 1;
  return HPolyhedron(A, Eigen::Vector3d(0, 0, 1));
}

// A random bounded polytope: a box intersected with random halfspaces that
// keep the origin strictly inside.
HPolyhedron RandomPolytope(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(0.2, 1.5);
  HPolyhedron box = HPolyhedron::MakeBox(-Eigen::VectorXd::Constant(n, 1.5),
                                         Eigen::VectorXd::Constant(n, 1.5));
  const int extra = 2 + static_cast<int>(rng() % 3);
  Eigen::MatrixXd A(extra, n);
  Eigen::VectorXd b(extra);
  for (int i = 0; i < extra; ++i) {
    for (int j = 0; j < n; ++j) A(i, j) = normal(rng);
    b(i) = unif(rng) * A.row(i).norm();
  }
  return box.Intersect(HPolyhedron(A, b));
}

TEST(HPolyhedron, ContainsPoint) {
  const HPolyhedron box = HPolyhedron::MakeUnitBox(2);
  EXPECT_TRUE(box.contains_point(Eigen::Vector2d(0.5, 0.5), 1e-9));
  EXPECT_FALSE(box.contains_point(Eigen::Vector2d(1.5, 0.0)));
  EXPECT_TRUE(box.contains_point(Eigen::Vector2d(1.0, 0.0), 1e-9));
  EXPECT_THROW(box.contains_point(Eigen::Vector3d(0, 0, 0)),
               std::invalid_argument);
}

TEST(HPolyhedron, RejectsMalformedInput) {
  EXPECT_THROW(HPolyhedron(Eigen::MatrixXd::Zero(2, 2), Eigen::VectorXd(3)),
               std::invalid_argument);
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(2, 2);
  A(0, 0) = std::nan("");
  EXPECT_THROW(HPolyhedron(A, Eigen::Vector2d(1, 1)), std::invalid_argument);
}

TEST(Chebyshev, UnitBox) {
  const ChebyshevResult c = chebyshev_center(HPolyhedron::MakeUnitBox(2));
  ASSERT_TRUE(c.found());
  EXPECT_NEAR(c.center(0), 0.5, 1e-9);
  EXPECT_NEAR(c.center(1), 0.5, 1e-9);
  EXPECT_NEAR(c.radius, 0.5, 1e-9);
}

TEST(Chebyshev, SegmentHasZeroRadius) {
  Eigen::MatrixXd A(4, 2);
  A << 1, 0, -1, 0, 0, 1, 0, -1;
  const ChebyshevResult c =
      chebyshev_center(HPolyhedron(A, Eigen::Vector4d(0, 0, 1, 0)));
  ASSERT_TRUE(c.found());
  EXPECT_NEAR(c.radius, 0.0, 1e-12);
}

TEST(Chebyshev, TriangleMatchesSecondSolverConfiguration) {
  const HPolyhedron tri = Triangle();
  const ChebyshevResult c = chebyshev_center(tri);
  ASSERT_TRUE(c.found());

  // Oracle: the Chebyshev LP written out by hand, solved with Bland pricing.
  LinearProgram lp(3);
  lp.cost << 0, 0, -1;
  Eigen::MatrixXd A(3, 3);
  A << -1, 0, 1, 0, -1, 1, 1, 1, std::sqrt(2.0);
  lp.AddInequalities(A, Eigen::Vector3d(0, 0, 1));
  lp.lower(2) = 0;
  const LpSolution oracle = MakeLpSolver("simplex-bland")->Solve(lp);
  ASSERT_TRUE(oracle.optimal());
  EXPECT_NEAR(c.radius, oracle.x(2), 1e-9);
  EXPECT_NEAR(c.center(0), oracle.x(0), 1e-9);
  EXPECT_NEAR(c.center(1), oracle.x(1), 1e-9);
  EXPECT_NEAR(c.radius, 1.0 - 1.0 / std::sqrt(2.0), 1e-9);
}

TEST(Chebyshev, EmptyAndUnbounded) {
  Eigen::MatrixXd A(2, 1);
  A << 1, -1;
  EXPECT_TRUE(chebyshev_center(HPolyhedron(A, Eigen::Vector2d(0, -1))).empty());
  Eigen::MatrixXd H(1, 2);
  H << 1, 0;
  const ChebyshevResult half = chebyshev_center(HPolyhedron(H, Eigen::VectorXd::Ones(1)));
  ASSERT_TRUE(half.found());
  EXPECT_TRUE(std::isinf(half.radius));
}

TEST(Chebyshev, RadiusNonnegativeAndCenterInside) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const HPolyhedron P = RandomPolytope(1 + trial % 4, rng);
    const ChebyshevResult c = chebyshev_center(P);
    ASSERT_TRUE(c.found());
    EXPECT_GE(c.radius, 0.0);
    EXPECT_TRUE(P.contains_point(c.center));
  }
}

TEST(Chebyshev, CertifyNonemptySetsFlag) {
  const HPolyhedron box = HPolyhedron::MakeUnitBox(2);
  EXPECT_FALSE(box.checked_nonempty());
  EXPECT_TRUE(CertifyNonempty(box).checked_nonempty());
  Eigen::MatrixXd A(2, 1);
  A << 1, -1;
  EXPECT_THROW(CertifyNonempty(HPolyhedron(A, Eigen::Vector2d(0, -1))),
               std::runtime_error);
}

TEST(Boundedness, Classification) {
  EXPECT_TRUE(is_bounded(HPolyhedron::MakeUnitBox(3)));
  EXPECT_TRUE(is_bounded(Triangle()));
  Eigen::MatrixXd A(2, 2);
  A << -1, 0, 0, -1;
  EXPECT_FALSE(is_bounded(HPolyhedron(A, Eigen::Vector2d(0, 0))));
  Eigen::MatrixXd S(2, 2);
  S << 1, 0, -1, 0;
  EXPECT_FALSE(is_bounded(HPolyhedron(S, Eigen::Vector2d(1, 1))));
}

TEST(Sampling, PointsInsideBox) {
  const HPolyhedron box = HPolyhedron::MakeUnitBox(2);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    EXPECT_TRUE(box.contains_point(sample_interior(box, rng), 1e-9));
  }
}

TEST(Sampling, EmpiricalMeanMatchesUniformLaw) {
  const HPolyhedron box = HPolyhedron::MakeUnitBox(2);
  HitAndRunSampler sampler(std::make_shared<SamplerSupport>(box));
  std::mt19937_64 rng(5);
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  const int count = 10000;
  for (int i = 0; i < count; ++i) mean += sampler.Sample(rng);
  mean /= count;
  EXPECT_NEAR(mean(0), 0.5, 0.05);
  EXPECT_NEAR(mean(1), 0.5, 0.05);
}

TEST(Sampling, SameSeedSameSequence) {
  const HPolyhedron tri = Triangle();
  auto support = std::make_shared<SamplerSupport>(tri);
  HitAndRunSampler a(support), b(support);
  std::mt19937_64 ra(9), rb(9);
  for (int i = 0; i < 10; ++i) {
    EXPECT_EQ(a.Sample(ra), b.Sample(rb));
  }
}

TEST(Sampling, LowerDimensionalSet) {
  // The segment x + y = 1 inside the unit square, plus a flat 3-D square.
  Eigen::MatrixXd A(6, 2);
  A << 1, 0, -1, 0, 0, 1, 0, -1, 1, 1, -1, -1;
  Eigen::VectorXd b(6);
  b << 1, 0, 1, 0, 1, -1;
  const HPolyhedron segment(A, b);
  std::mt19937_64 rng(1);
  HitAndRunSampler sampler(std::make_shared<SamplerSupport>(segment));
  double min_x = 1, max_x = 0;
  for (int i = 0; i < 200; ++i) {
    const Eigen::VectorXd x = sampler.Sample(rng);
    ASSERT_TRUE(segment.contains_point(x, 1e-9));
    min_x = std::min(min_x, x(0));
    max_x = std::max(max_x, x(0));
  }
  EXPECT_LT(min_x, 0.2);
  EXPECT_GT(max_x, 0.8);

  Eigen::VectorXd lb(3), ub(3);
  lb << 0, 0, 2;
  ub << 1, 1, 2;
  const HPolyhedron flat = HPolyhedron::MakeBox(lb, ub);
  for (int i = 0; i < 20; ++i) {
    EXPECT_TRUE(flat.contains_point(sample_interior(flat, rng), 1e-9));
  }
}

TEST(Sampling, RejectsEmptyAndUnbounded) {
  Eigen::MatrixXd A(2, 1);
  A << 1, -1;
  std::mt19937_64 rng(0);
  EXPECT_THROW(sample_interior(HPolyhedron(A, Eigen::Vector2d(0, -1)), rng),
               std::invalid_argument);
  Eigen::MatrixXd H(1, 1);
  H << 1;
  EXPECT_THROW(sample_interior(HPolyhedron(H, Eigen::VectorXd::Ones(1)), rng),
               std::invalid_argument);
}

TEST(NullspaceReduce, LineThroughSquare) {
  const HPolyhedron box = HPolyhedron::MakeUnitBox(2);
  Eigen::MatrixXd C(1, 2);
  C << 1, 1;
  const auto reduced =
      nullspace_reduce(box.A(), box.b(), C, Eigen::VectorXd::Ones(1));
  ASSERT_TRUE(reduced.has_value());
  EXPECT_EQ(reduced->base_dimension(), 1);
  for (const auto& v : EnumerateVertexImages(*reduced)) {
    EXPECT_NEAR(v(0) + v(1), 1.0, 1e-12);
    EXPECT_TRUE(box.contains_point(v, 1e-12));
  }
}

TEST(NullspaceReduce, FullRankGivesPoint) {
  const HPolyhedron box = HPolyhedron::MakeUnitBox(2);
  Eigen::MatrixXd C(2, 2);
  C << 2, 1, 1, 3;
  const Eigen::Vector2d d(1, 1.5);
  const auto reduced = nullspace_reduce(box.A(), box.b(), C, d);
  ASSERT_TRUE(reduced.has_value());
  EXPECT_EQ(reduced->base_dimension(), 0);
  const Eigen::Vector2d expected = C.lu().solve(d);
  EXPECT_NEAR((reduced->t() - expected).norm(), 0.0, 1e-12);
}

TEST(NullspaceReduce, InconsistentEqualities) {
  const HPolyhedron box = HPolyhedron::MakeUnitBox(2);
  Eigen::MatrixXd C(2, 2);
  C << 1, 1, 2, 2;
  EXPECT_FALSE(
      nullspace_reduce(box.A(), box.b(), C, Eigen::Vector2d(1, 3)).has_value());
}

TEST(NullspaceReduce, RandomSampledImagesSatisfyOriginalConstraints) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> normal;
  int tested = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial % 2;
    const HPolyhedron P = RandomPolytope(n, rng);
    // Equalities through a known interior point so the slice is nonempty.
    const int p = 1 + trial % 2;
    Eigen::MatrixXd C(p + 1, n);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < n; ++j) C(i, j) = normal(rng);
    C.row(p) = 2.0 * C.row(0) - C.row(p - 1);  // rank deficient on purpose
    const Eigen::VectorXd z = 0.05 * Eigen::VectorXd::Ones(n);
    const Eigen::VectorXd d = C * z;
    const auto reduced = nullspace_reduce(P.A(), P.b(), C, d);
    ASSERT_TRUE(reduced.has_value());
    HitAndRunSampler sampler(std::make_shared<SamplerSupport>(reduced->base()));
    for (int s = 0; s < 100; ++s) {
      const Eigen::VectorXd x = reduced->t() + reduced->T() * sampler.Sample(rng);
      EXPECT_LE((C * x - d).cwiseAbs().maxCoeff(), 1e-8);
      EXPECT_TRUE(P.contains_point(x, 1e-8));
      ++tested;
    }
  }
  EXPECT_EQ(tested, 2000);
}

TEST(Containment, BoxesCertify) {
  const AHPolytope inner(HPolyhedron::MakeUnitBox(2));
  const AHPolytope outer(HPolyhedron::MakeBox(Eigen::Vector2d(-1, -1),
                                              Eigen::Vector2d(2, 2)));
  EXPECT_EQ(ah_containment_certified(inner, outer), Containment::kCertified);
  EXPECT_EQ(ah_containment_certified(outer, inner),
            Containment::kNotCertified);
  EXPECT_EQ(ah_containment_certified(inner, inner), Containment::kCertified);
}

TEST(Containment, RotatedSquareInBox) {
  // Square of half-width 0.5 rotated by 45 degrees, as an affine image.
  const double c = std::cos(M_PI / 4), s = std::sin(M_PI / 4);
  Eigen::Matrix2d R;
  R << c, -s, s, c;
  const AHPolytope X(HPolyhedron::MakeBox(Eigen::Vector2d(-0.5, -0.5),
                                          Eigen::Vector2d(0.5, 0.5)),
                     R, Eigen::Vector2d::Zero());
  const AHPolytope Y(HPolyhedron::MakeBox(Eigen::Vector2d(-1, -1),
                                          Eigen::Vector2d(1, 1)));
  EXPECT_EQ(ah_containment_certified(X, Y), Containment::kCertified);
  for (const auto& v : EnumerateVertexImages(X)) {
    EXPECT_TRUE(Y.contains_point(v, DefaultLpSolver(), 1e-9));
  }
}

TEST(Containment, DimensionMismatchThrows) {
  const AHPolytope X(HPolyhedron::MakeUnitBox(2));
  const AHPolytope Y(HPolyhedron::MakeUnitBox(3));
  EXPECT_THROW(ah_containment_certified(X, Y), std::invalid_argument);
}

TEST(Containment, ProjectionIntoInterval) {
  // Projection of the unit square onto its first coordinate is in [0, 1].
  Eigen::MatrixXd P(1, 2);
  P << 1, 0;
  const AHPolytope X(HPolyhedron::MakeUnitBox(2), P, Eigen::VectorXd::Zero(1));
  const AHPolytope Y(HPolyhedron::MakeUnitBox(1));
  EXPECT_EQ(ah_containment_certified(X, Y), Containment::kCertified);
  const AHPolytope Z(HPolyhedron::MakeBox(Eigen::VectorXd::Constant(1, 0.1),
                                          Eigen::VectorXd::Ones(1)));
  EXPECT_EQ(ah_containment_certified(X, Z), Containment::kNotCertified);
}

TEST(Containment, RandomCertificatesAreSound) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  int certified = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 1 + trial % 3;
    const int kx = 1 + static_cast<int>(rng() % 3);
    const int ky = n + static_cast<int>(rng() % 2);
    HPolyhedron bx = RandomPolytope(kx, rng);
    HPolyhedron by = RandomPolytope(ky, rng);
    Eigen::MatrixXd Tx(n, kx), Ty(n, ky);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < kx; ++j) Tx(i, j) = 0.4 * normal(rng);
      for (int j = 0; j < ky; ++j) Ty(i, j) = normal(rng);
    }
    Eigen::VectorXd tx(n), ty(n);
    for (int i = 0; i < n; ++i) {
      tx(i) = 0.2 * normal(rng);
      ty(i) = 0.2 * normal(rng);
    }
    const AHPolytope X(bx, Tx, tx), Y(by, Ty, ty);
    const Containment verdict = ah_containment_certified(X, Y);
    ASSERT_NE(verdict, Containment::kSolverError);
    if (verdict != Containment::kCertified) continue;
    ++certified;
    for (const auto& v : EnumerateVertexImages(X)) {
      EXPECT_TRUE(Y.contains_point(v, DefaultLpSolver(), 1e-7))
          << "trial " << trial;
    }
  }
  EXPECT_GT(certified, 10);
}

TEST(RemoveDuplicateRows, MergesParallelRows) {
  Eigen::MatrixXd A(4, 1);
  A << 1, 2, -1, 0;
  const HPolyhedron P(A, Eigen::Vector4d(3, 4, 0, 5));
  const HPolyhedron Q = RemoveDuplicateRows(P);
  EXPECT_EQ(Q.num_rows(), 2);
  EXPECT_TRUE(Q.contains_point(Eigen::VectorXd::Constant(1, 2.0), 1e-12));
  EXPECT_FALSE(Q.contains_point(Eigen::VectorXd::Constant(1, 2.1), 1e-12));
}

TEST(AHPolytope, Membership) {
  Eigen::MatrixXd P(1, 2);
  P << 1, 1;
  const AHPolytope X(HPolyhedron::MakeUnitBox(2), P, Eigen::VectorXd::Zero(1));
  EXPECT_TRUE(X.contains_point(Eigen::VectorXd::Constant(1, 1.7)));
  EXPECT_FALSE(X.contains_point(Eigen::VectorXd::Constant(1, 2.1)));
  EXPECT_THROW(X.contains_point(Eigen::Vector2d(0, 0)), std::invalid_argument);
}

}  // namespace
}  // namespace gcs_star
