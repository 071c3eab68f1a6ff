#include "conjtime/jacobi.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

namespace conjtime {
namespace {

constexpr double kPi = std::numbers::pi;

Matrix jacobi_generator(const StructuralMatrices& s, const Matrix& r) {
  const int n = s.dimension();
  Matrix a(2 * n, 2 * n);
  a << -s.gamma1, -r, s.gamma2, s.gamma1.transpose();
  return a;
}

StructuralMatrices scalar() { return build_structural_matrices(YoungDiagram::riemannian(1)); }

TEST(JacobiTest, FreeParticle) {
  const JacobiTrajectory traj =
      integrate_jacobi(scalar(), CurvatureField::constant(Matrix::Zero(1, 1)), 3.0);
  for (std::size_t k = 0; k < traj.size(); k += 100) {
    EXPECT_NEAR(traj.m(k)(0, 0), 1.0, 1e-12);
    EXPECT_NEAR(traj.n(k)(0, 0), traj.times[k], 1e-12);
  }
}

TEST(JacobiTest, HarmonicOscillator) {
  const double k = 2.5;
  const JacobiTrajectory traj =
      integrate_jacobi(scalar(), CurvatureField::constant(Matrix::Constant(1, 1, k)), 4.0);
  for (std::size_t i = 0; i < traj.size(); i += 50) {
    const double t = traj.times[i];
    EXPECT_NEAR(traj.n(i)(0, 0), std::sin(std::sqrt(k) * t) / std::sqrt(k), 1e-9);
  }
}

TEST(JacobiTest, NilpotentRowDeterminant) {
  const StructuralMatrices s = build_structural_matrices(YoungDiagram::single_row(2));
  const JacobiTrajectory traj = integrate_jacobi(s, CurvatureField::constant(Matrix::Zero(2, 2)), 5.0);
  for (std::size_t i = 1; i < traj.size(); i += 97) {
    const double t = traj.times[i];
    EXPECT_NEAR(traj.raw_det_n(i), std::pow(t, 4) / 12.0, 1e-9 * (1.0 + std::pow(t, 4)));
    EXPECT_GT(traj.det_n[i], 0.0);
  }
  EXPECT_EQ(first_conjugate_time(traj).verdict, Verdict::kNoneUpToHorizon);
}

// Oracle: (M; N)(t) = exp(t A) (I; 0) for constant curvature.
TEST(JacobiTest, MatchesMatrixExponentialOnContactDiagram) {
  const YoungDiagram y = YoungDiagram::parse("2,1");
  const StructuralMatrices s = build_structural_matrices(y);
  Matrix r(3, 3);
  r << 1.0, 0.2, -0.1, 0.2, 0.5, 0.3, -0.1, 0.3, 2.0;
  const JacobiTrajectory traj = integrate_jacobi(s, CurvatureField::constant(r), 2.0);
  Matrix init = Matrix::Zero(6, 3);
  init.topRows(3).setIdentity();
  for (std::size_t i = 0; i < traj.size(); i += 250) {
    const Matrix want = (traj.times[i] * jacobi_generator(s, r)).exp() * init;
    EXPECT_LT((traj.m(i) - want.topRows(3)).norm(), 1e-9);
    EXPECT_LT((traj.n(i) - want.bottomRows(3)).norm(), 1e-9);
  }
}

TEST(JacobiTest, FramesStayOrthonormal) {
  const StructuralMatrices s = build_structural_matrices(YoungDiagram::parse("2,2"));
  const JacobiTrajectory traj =
      integrate_jacobi(s, CurvatureField::constant(-3.0 * Matrix::Identity(4, 4)), 20.0);
  for (std::size_t i = 0; i < traj.size(); i += 200) {
    const Matrix& f = traj.frames[i];
    EXPECT_LT((f.transpose() * f - Matrix::Identity(4, 4)).norm(), 1e-10);
  }
}

TEST(ConjugateTimeTest, UnitCurvature) {
  const ConjugateTimeResult r = first_conjugate_time(
      integrate_jacobi(scalar(), CurvatureField::constant(Matrix::Ones(1, 1)), 5.0));
  ASSERT_TRUE(r.is_finite());
  EXPECT_NEAR(r.time, kPi, 1e-8);
  EXPECT_EQ(r.witness, Witness::kSignChange);
  EXPECT_LE(r.t_lo, r.time);
  EXPECT_GE(r.t_hi, r.time);
}

TEST(ConjugateTimeTest, SingleRowWithOneDirection) {
  Matrix q = Matrix::Zero(2, 2);
  q(0, 0) = 1.0;
  const ConjugateTimeResult r = first_conjugate_time(integrate_jacobi(
      build_structural_matrices(YoungDiagram::single_row(2)), CurvatureField::constant(q), 10.0));
  ASSERT_TRUE(r.is_finite());
  EXPECT_NEAR(r.time, 2.0 * kPi, 1e-8);
}

// det N = sin^2(t) touches zero at pi without a sign change.
TEST(ConjugateTimeTest, EvenMultiplicityZeroIsFoundByRankDrop) {
  const ConjugateTimeResult r = first_conjugate_time(integrate_jacobi(
      build_structural_matrices(YoungDiagram::riemannian(2)),
      CurvatureField::constant(Matrix::Identity(2, 2)), 5.0));
  ASSERT_TRUE(r.is_finite());
  EXPECT_NEAR(r.time, kPi, 1e-8);
  EXPECT_EQ(r.witness, Witness::kRankDrop);
  EXPECT_FALSE(r.flagged);
}

TEST(ConjugateTimeTest, NegativeCurvatureHasNoZero) {
  const ConjugateTimeResult r = first_conjugate_time(integrate_jacobi(
      build_structural_matrices(YoungDiagram::riemannian(3)),
      CurvatureField::constant(-Matrix::Identity(3, 3)), 30.0));
  EXPECT_EQ(r.verdict, Verdict::kNoneUpToHorizon);
  EXPECT_DOUBLE_EQ(r.horizon, 30.0);
}

TEST(ConjugateTimeTest, SampledFieldFollowsConstantCase) {
  std::vector<double> times{0.0, 10.0};
  std::vector<Matrix> values{Matrix::Constant(1, 1, 4.0), Matrix::Constant(1, 1, 4.0)};
  const ConjugateTimeResult r = first_conjugate_time(
      integrate_jacobi(scalar(), CurvatureField::sampled(times, values), 10.0));
  ASSERT_TRUE(r.is_finite());
  EXPECT_NEAR(r.time, kPi / 2.0, 1e-8);
}

TEST(JacobiTest, RejectsBadInput) {
  EXPECT_THROW(integrate_jacobi(scalar(), CurvatureField::constant(Matrix::Zero(2, 2)), 1.0),
               std::invalid_argument);
  EXPECT_THROW(integrate_jacobi(scalar(), CurvatureField::constant(Matrix::Zero(1, 1)), 0.0),
               std::invalid_argument);
}

}  // namespace
}  // namespace conjtime
