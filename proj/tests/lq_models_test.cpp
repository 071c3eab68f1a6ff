#include "conjtime/lq_models.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

namespace conjtime {
namespace {

constexpr double kPi = std::numbers::pi;

Matrix diag(std::initializer_list<double> d) {
  Vector v(d.size());
  int i = 0;
  for (double x : d) v(i++) = x;
  return v.asDiagonal();
}

TEST(LqModelTest, ValidatesPotential) {
  EXPECT_THROW(LqModel(YoungDiagram::single_row(2), Matrix::Identity(3, 3)), std::invalid_argument);
  Matrix q(2, 2);
  q << 1, 2, 0, 1;
  EXPECT_THROW(LqModel(YoungDiagram::single_row(2), q), std::invalid_argument);
  EXPECT_THROW(DiagonalRowModel({}), std::invalid_argument);
}

TEST(LqConjugateTimeTest, RiemannianIsotropic) {
  const LqModel m(YoungDiagram::riemannian(2), 4.0 * Matrix::Identity(2, 2));
  const ConjugateTimeResult r = lq_conjugate_time(m);
  ASSERT_TRUE(r.is_finite());
  EXPECT_NEAR(r.time, kPi / 2.0, 1e-8);
  EXPECT_FALSE(r.flagged);
}

TEST(LqConjugateTimeTest, ZeroPotentialIsCertifiedInfinite) {
  for (const char* rows : {"1", "2", "2,1", "3,1,1"}) {
    const YoungDiagram y = YoungDiagram::parse(rows);
    const int n = y.total_boxes();
    const ConjugateTimeResult r = lq_conjugate_time(LqModel(y, Matrix::Zero(n, n)));
    EXPECT_EQ(r.verdict, Verdict::kCertifiedInfinite) << rows;
  }
}

// Oracle: a dense det N scan with tightened tolerances.
TEST(LqConjugateTimeTest, SecondDirectionOnly) {
  const LqModel m(YoungDiagram::single_row(2), diag({0.0, 1.0}));
  EXPECT_EQ(classify_finiteness(DiagonalRowModel({0.0, 1.0})).verdict, Finiteness::kFinite);
  const ConjugateTimeResult r = lq_conjugate_time(m);
  LqOptions fine;
  fine.jacobi.tol = fine.jacobi.tol.tightened(100.0);
  fine.jacobi.grid_intervals = 20000;
  const ConjugateTimeResult oracle = lq_numeric_conjugate_time(m, fine);
  ASSERT_TRUE(r.is_finite());
  ASSERT_TRUE(oracle.is_finite());
  EXPECT_NEAR(r.time, oracle.time, 1e-9);
}

TEST(FinitenessTest, Examples) {
  const auto one = classify_finiteness(DiagonalRowModel({1.0}));
  EXPECT_EQ(one.verdict, Finiteness::kFinite);
  ASSERT_TRUE(one.witness_root.has_value());
  EXPECT_NEAR(*one.witness_root, -1.0, 1e-12);
  EXPECT_EQ(classify_finiteness(DiagonalRowModel({1.0, 0.0})).verdict, Finiteness::kFinite);
  EXPECT_EQ(classify_finiteness(DiagonalRowModel({0.0, 0.0})).verdict, Finiteness::kInfinite);
  EXPECT_EQ(classify_finiteness(DiagonalRowModel({-1.0})).verdict, Finiteness::kInfinite);
}

TEST(FinitenessTest, ExactRuleForTwoBoxes) {
  EXPECT_EQ(classify_finiteness_l2(-1.0, 0.1), Finiteness::kFinite);
  EXPECT_EQ(classify_finiteness_l2(1.0, -0.3), Finiteness::kInfinite);
  EXPECT_EQ(classify_finiteness_l2(0.0, 0.0), Finiteness::kInfinite);
  EXPECT_EQ(classify_finiteness_l2(1.0, -0.25), Finiteness::kInfinite);
  EXPECT_EQ(classify_finiteness_l2(1.0, -0.2499), Finiteness::kFinite);
}

// Root-based classification agrees with the exact rule away from the boundary.
TEST(FinitenessTest, RootClassifierAgreesWithExactRule) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  int checked = 0;
  while (checked < 500) {
    const double k1 = u(rng), k2 = u(rng);
    if (std::abs(k2) < 1e-3 || std::abs(4.0 * k2 + k1 * k1) < 1e-3) continue;
    const DiagonalRowModel m({k1, k2});
    Polynomial p = m.finiteness_polynomial();
    bool has_simple_negative = false;
    for (const RealRoot& r : real_roots(p, -20.0, -1e-12)) has_simple_negative |= r.simple;
    EXPECT_EQ(has_simple_negative, classify_finiteness_l2(k1, k2) == Finiteness::kFinite)
        << k1 << ", " << k2;
    ++checked;
  }
}

TEST(FinitenessTest, LongerRowsUseRoots) {
  // p(s) = s^3 + kappa_1 s^2 - kappa_2 s + kappa_3 with roots -1, -2, -3.
  const auto finite = classify_finiteness(DiagonalRowModel({6.0, -11.0, 6.0}));
  EXPECT_EQ(finite.verdict, Finiteness::kFinite);
  EXPECT_EQ(finite.negative_roots.size(), 3u);
  ASSERT_TRUE(finite.witness_root.has_value());
  EXPECT_NEAR(*finite.witness_root, -1.0, 1e-10);
  // Roots 1, 2, 3: nothing negative, and l >= 3 cannot certify infinity.
  EXPECT_EQ(classify_finiteness(DiagonalRowModel({-6.0, -11.0, -6.0})).verdict,
            Finiteness::kNotCertified);
  // (s + 1)^2 (s - 2): the only negative root is double.
  const auto doubled = classify_finiteness(DiagonalRowModel({0.0, 3.0, -2.0}));
  ASSERT_EQ(doubled.negative_roots.size(), 1u);
  EXPECT_FALSE(doubled.negative_roots[0].simple);
  EXPECT_EQ(doubled.verdict, Finiteness::kNotCertified);
}

TEST(ClosedFormTest, Examples) {
  for (int n = 1; n <= 4; ++n) {
    EXPECT_DOUBLE_EQ(*closed_form_tc(LqModel(YoungDiagram::riemannian(n),
                                             4.0 * Matrix::Identity(n, n))),
                     kPi / 2.0);
  }
  EXPECT_DOUBLE_EQ(*closed_form_tc(DiagonalRowModel({9.0, 0.0})), 2.0 * kPi / 3.0);
  EXPECT_FALSE(closed_form_tc(DiagonalRowModel({1.0, 1.0})).has_value());
  EXPECT_TRUE(std::isinf(*closed_form_tc(LqModel(YoungDiagram::riemannian(2),
                                                 -Matrix::Identity(2, 2)))));
}

TEST(HamiltonianSpectrumTest, RiemannianUnitCurvature) {
  const auto spec = hamiltonian_spectrum(LqModel(YoungDiagram::riemannian(2), Matrix::Identity(2, 2)));
  ASSERT_EQ(spec.size(), 2u);
  for (const auto& e : spec) {
    EXPECT_EQ(e.multiplicity, 2);
    EXPECT_TRUE(e.purely_imaginary);
    EXPECT_NEAR(std::abs(e.value.imag()), 1.0, 1e-10);
  }
}

TEST(HamiltonianSpectrumTest, NilpotentRow) {
  const auto spec = hamiltonian_spectrum(LqModel(YoungDiagram::single_row(2), Matrix::Zero(2, 2)));
  ASSERT_EQ(spec.size(), 1u);
  EXPECT_EQ(spec[0].multiplicity, 4);
  EXPECT_LT(std::abs(spec[0].value), 1e-6);
}

TEST(HamiltonianSpectrumTest, OneDirectionOfCurvature) {
  // Characteristic polynomial x^4 + x^2: {0, 0, i, -i}.
  const auto spec = hamiltonian_spectrum(LqModel(YoungDiagram::single_row(2), diag({1.0, 0.0})));
  int total = 0, zeros = 0, unit = 0;
  for (const auto& e : spec) {
    total += e.multiplicity;
    if (std::abs(e.value) < 1e-6) zeros += e.multiplicity;
    if (std::abs(std::abs(e.value.imag()) - 1.0) < 1e-9 && std::abs(e.value.real()) < 1e-9) {
      unit += e.multiplicity;
    }
  }
  EXPECT_EQ(total, 4);
  EXPECT_EQ(zeros, 2);
  EXPECT_EQ(unit, 2);
}

}  // namespace
}  // namespace conjtime
