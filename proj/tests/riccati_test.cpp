#include "conjtime/riccati.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "conjtime/jacobi.hpp"

namespace conjtime {
namespace {

constexpr double kPi = std::numbers::pi;

RiccatiCoefficients constant_coefficients(Matrix m) {
  return [m](double) { return m; };
}

StructuralMatrices scalar() { return build_structural_matrices(YoungDiagram::riemannian(1)); }

CurvatureField constant(double k) { return CurvatureField::constant(Matrix::Constant(1, 1, k)); }

TEST(RiccatiTest, TangentBlowsUpAtHalfPi) {
  // X' = 1 + X^2, X(0) = 0.
  const RiccatiSolution sol =
      solve_riccati(constant_coefficients(Matrix::Identity(2, 2)), Matrix::Zero(1, 1), 0.0, 3.0);
  ASSERT_TRUE(sol.blowup_time.has_value());
  EXPECT_NEAR(*sol.blowup_time, kPi / 2.0, 1e-6);
  EXPECT_LE(sol.blowup_lo, kPi / 2.0);
  EXPECT_GE(sol.blowup_hi, kPi / 2.0);
  for (const RiccatiSample& s : sol.history) {
    if (s.t < 1.4) EXPECT_NEAR(s.value(0, 0), std::tan(s.t), 1e-8 * (1.0 + std::tan(s.t)));
  }
}

TEST(RiccatiTest, CotangentFromLimitDatum) {
  const double k = 4.0;
  const RiccatiConjugateResult r = integrate_riccati_limit_ic(scalar(), constant(k), 3.0);
  ASSERT_TRUE(r.conjugate.is_finite());
  EXPECT_NEAR(r.conjugate.time, kPi / 2.0, 1e-6);
  EXPECT_EQ(r.conjugate.witness, Witness::kBlowUp);
  for (const RiccatiSample& s : r.solution.history) {
    if (s.phase != RiccatiPhase::kDirect || s.t > 1.4) continue;
    const double want = std::sqrt(k) / std::tan(std::sqrt(k) * s.t);
    EXPECT_NEAR(s.value(0, 0), want, 1e-7 * (1.0 + std::abs(want)));
  }
}

TEST(RiccatiTest, FlatScalarIsReciprocal) {
  const RiccatiConjugateResult r = integrate_riccati_limit_ic(scalar(), constant(0.0), 5.0);
  EXPECT_EQ(r.conjugate.verdict, Verdict::kNoneUpToHorizon);
  for (const RiccatiSample& s : r.solution.history) {
    if (s.t == 0.0) continue;
    const double want = s.phase == RiccatiPhase::kInverse ? s.t : 1.0 / s.t;
    EXPECT_NEAR(s.value(0, 0), want, 1e-9 * (1.0 + want));
  }
}

TEST(RiccatiTest, BlowUpMatchesJacobiOnSingleRow) {
  Matrix q = Matrix::Zero(2, 2);
  q(0, 0) = 1.0;
  const RiccatiConjugateResult r = integrate_riccati_limit_ic(
      build_structural_matrices(YoungDiagram::single_row(2)), CurvatureField::constant(q), 10.0);
  ASSERT_TRUE(r.conjugate.is_finite());
  EXPECT_NEAR(r.conjugate.time, 2.0 * kPi, 1e-6);
}

TEST(RiccatiTest, AgreesWithJacobiDetectorOnRandomFields) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const StructuralMatrices s = build_structural_matrices(YoungDiagram::parse("2,1"));
  for (int trial = 0; trial < 5; ++trial) {
    Matrix a(3, 3);
    for (int i = 0; i < 9; ++i) a(i) = u(rng);
    const CurvatureField field = CurvatureField::constant(a * a.transpose() + Matrix::Identity(3, 3));
    const ConjugateTimeResult jac = first_conjugate_time(integrate_jacobi(s, field, 20.0));
    const ConjugateTimeResult ric = integrate_riccati_limit_ic(s, field, 20.0).conjugate;
    ASSERT_EQ(jac.verdict, ric.verdict);
    if (jac.is_finite()) EXPECT_NEAR(jac.time, ric.time, 1e-9);
  }
}

TEST(RiccatiTest, RejectsUncontrollablePair) {
  StructuralMatrices s = scalar();
  s.gamma2.setZero();
  EXPECT_THROW(integrate_riccati_limit_ic(s, constant(1.0), 1.0), std::invalid_argument);
}

TEST(RiccatiComparisonTest, FlatDominatesUnitCurvature) {
  // M1 for R = 0 dominates M2 for R = 1; V_0 = 1/t >= V_1 = cot t on (0, pi).
  const StructuralMatrices s = scalar();
  const auto m1 = jacobi_riccati_coefficients(s, constant(0.0));
  const auto m2 = jacobi_riccati_coefficients(s, constant(1.0));
  ComparisonInitialData init;
  init.kind = ComparisonInitialData::Kind::kLimit;
  init.first = Matrix::Zero(1, 1);
  init.second = Matrix::Zero(1, 1);
  const RiccatiOrderingReport report = riccati_comparison_check(m1, m2, init, 0.0, 3.0);
  EXPECT_EQ(report.status, RiccatiOrderingReport::Status::kHolds) << report.detail;
  EXPECT_GT(report.samples_checked, 100);
}

TEST(RiccatiComparisonTest, EqualProblemsGiveEquality) {
  const auto m = jacobi_riccati_coefficients(build_structural_matrices(YoungDiagram::single_row(2)),
                                             CurvatureField::constant(Matrix::Identity(2, 2)));
  ComparisonInitialData init;
  init.kind = ComparisonInitialData::Kind::kLimit;
  init.first = Matrix::Zero(2, 2);
  init.second = Matrix::Zero(2, 2);
  const RiccatiOrderingReport report = riccati_comparison_check(m, m, init, 0.0, 2.0);
  EXPECT_EQ(report.status, RiccatiOrderingReport::Status::kHolds);
  EXPECT_NEAR(report.min_margin, 0.0, 1e-9);
}

TEST(RiccatiComparisonTest, RandomOrderedConstantPairs) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto random = [&](int n) {
    Matrix a(n, n);
    for (int i = 0; i < n * n; ++i) a(i) = u(rng);
    return a;
  };
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix s = random(6);
    const Matrix p = random(6);
    const Matrix m2 = 0.5 * (s + s.transpose());
    const Matrix m1 = m2 + p * p.transpose();
    ComparisonInitialData init;
    const Matrix b = random(3);
    init.second = 0.5 * (b + b.transpose());
    const Matrix c = random(3);
    init.first = init.second + c * c.transpose();
    const RiccatiOrderingReport report = riccati_comparison_check(
        constant_coefficients(m1), constant_coefficients(m2), init, 0.0, 1.0);
    EXPECT_EQ(report.status, RiccatiOrderingReport::Status::kHolds)
        << "trial " << trial << ": " << report.detail;
  }
}

TEST(RiccatiComparisonTest, DetectsViolatedPrecondition) {
  const StructuralMatrices s = scalar();
  ComparisonInitialData init;
  init.kind = ComparisonInitialData::Kind::kLimit;
  init.first = Matrix::Zero(1, 1);
  init.second = Matrix::Zero(1, 1);
  const RiccatiOrderingReport report =
      riccati_comparison_check(jacobi_riccati_coefficients(s, constant(1.0)),
                               jacobi_riccati_coefficients(s, constant(0.0)), init, 0.0, 1.0);
  EXPECT_EQ(report.status, RiccatiOrderingReport::Status::kPreconditionViolated);
}

TEST(CauchySchwarzGapTest, Examples) {
  const Matrix i2 = Matrix::Identity(2, 2);
  EXPECT_TRUE(matrix_cauchy_schwarz_gap({i2}, {i2}).isZero(1e-15));

  const Matrix gap = matrix_cauchy_schwarz_gap({Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, 2.0)},
                                               {Matrix::Constant(1, 1, 2.0), Matrix::Constant(1, 1, 1.0)});
  EXPECT_DOUBLE_EQ(gap(0, 0), 9.0);
  EXPECT_THROW(matrix_cauchy_schwarz_gap({}, {}), std::invalid_argument);
  EXPECT_THROW(matrix_cauchy_schwarz_gap({i2}, {i2, i2}), std::invalid_argument);
}

TEST(CauchySchwarzGapTest, RandomInstancesArePositiveSemidefinite) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> pick(1, 4);
  for (int trial = 0; trial < 200; ++trial) {
    const int r = pick(rng);
    const int l = 1 + pick(rng) % 3;
    std::vector<Matrix> x, y;
    for (int a = 0; a < r; ++a) {
      x.push_back(Matrix::NullaryExpr(l, l, [&] { return u(rng); }));
      y.push_back(Matrix::NullaryExpr(l, l, [&] { return u(rng); }));
    }
    const Matrix gap = matrix_cauchy_schwarz_gap(x, y);
    EXPECT_GE(Eigen::SelfAdjointEigenSolver<Matrix>(symmetrized(gap)).eigenvalues().minCoeff(),
              -1e-10);
  }
}

TEST(MonotonicityTest, Examples) {
  const auto unit = riccati_monotonicity_check(scalar(), Matrix::Ones(1, 1), 4.0);
  EXPECT_TRUE(unit.holds);
  ASSERT_TRUE(unit.blowup_time.has_value());
  EXPECT_NEAR(*unit.blowup_time, kPi, 1e-6);

  const StructuralMatrices row = build_structural_matrices(YoungDiagram::single_row(2));
  EXPECT_TRUE(riccati_monotonicity_check(row, Matrix::Zero(2, 2), 10.0).holds);
  Matrix q = Matrix::Zero(2, 2);
  q(0, 0) = 1.0;
  const auto one = riccati_monotonicity_check(row, q, 8.0);
  EXPECT_TRUE(one.holds);
  ASSERT_TRUE(one.blowup_time.has_value());
  EXPECT_NEAR(*one.blowup_time, 2.0 * kPi, 1e-6);
}

}  // namespace
}  // namespace conjtime
