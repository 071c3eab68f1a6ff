#include "conjtime/ode.hpp"

#include <cmath>

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

namespace conjtime {
namespace {

TEST(Dopri5Test, LinearSystemMatchesMatrixExponential) {
  Eigen::MatrixXd a(3, 3);
  a << 0.1, 1.0, 0.0, -1.0, 0.0, 0.5, 0.2, -0.3, -0.4;
  Eigen::VectorXd y0(3);
  y0 << 1.0, -2.0, 0.5;
  OdeOptions opts;
  opts.tol = {1e-12, 1e-14};
  const auto rhs = [&](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) { dy = a * y; };
  const OdeResult r = integrate_dopri5(rhs, 0.0, y0, 3.0, opts);
  ASSERT_EQ(r.status, OdeStatus::kReached);
  EXPECT_DOUBLE_EQ(r.t, 3.0);
  const Eigen::VectorXd want = (3.0 * a).exp() * y0;
  EXPECT_LT((r.y - want).norm(), 1e-10);
}

TEST(Dopri5Test, HarmonicOscillatorKeepsEnergy) {
  const auto rhs = [](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    dy.resize(2);
    dy << y(1), -y(0);
  };
  Eigen::VectorXd y0(2);
  y0 << 1.0, 0.0;
  OdeOptions opts;
  opts.tol = {1e-12, 1e-14};
  const OdeResult r = integrate_dopri5(rhs, 0.0, y0, 20.0, opts);
  EXPECT_NEAR(r.y(0), std::cos(20.0), 1e-9);
  EXPECT_NEAR(r.y(1), -std::sin(20.0), 1e-9);
}

TEST(Dopri5Test, ObserverStopsIntegration) {
  const auto rhs = [](double, const Eigen::VectorXd&, Eigen::VectorXd& dy) {
    dy = Eigen::VectorXd::Ones(1);
  };
  OdeOptions opts;
  opts.max_step = 0.1;
  const OdeResult r = integrate_dopri5(rhs, 0.0, Eigen::VectorXd::Zero(1), 10.0, opts,
                                       [](double t, const Eigen::VectorXd&, double) { return t < 2.0; });
  EXPECT_EQ(r.status, OdeStatus::kStopped);
  EXPECT_GE(r.t, 2.0);
  EXPECT_LT(r.t, 2.2);
}

TEST(Dopri5Test, FiniteTimeBlowUpThrows) {
  // y' = y^2, y(0) = 1 blows up at t = 1.
  const auto rhs = [](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) { dy = y.cwiseProduct(y); };
  try {
    integrate_dopri5_or_throw(rhs, 0.0, Eigen::VectorXd::Ones(1), 2.0, {});
    FAIL() << "expected IntegrationError";
  } catch (const IntegrationError& e) {
    EXPECT_LE(e.last_valid_time(), 1.0);
    EXPECT_GT(e.last_valid_time(), 0.99);
  }
}

}  // namespace
}  // namespace conjtime
