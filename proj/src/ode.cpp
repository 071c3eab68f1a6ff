#include "conjtime/ode.hpp"

#include <algorithm>
#include <cmath>

namespace conjtime {
namespace {

// Dormand & Prince (1980) coefficients.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
// Difference between the 5th and embedded 4th order weights.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

constexpr double kSafety = 0.9;
constexpr double kFacMin = 0.2;
constexpr double kFacMax = 10.0;
constexpr double kBeta = 0.04;  // PI controller memory

double error_norm(const Eigen::VectorXd& err, const Eigen::VectorXd& y0,
                  const Eigen::VectorXd& y1, const OdeTolerances& tol) {
  const Eigen::Index n = err.size();
  if (n == 0) return 0.0;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sc = tol.abs + tol.rel * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / sc;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(n));
}

// Hairer, Norsett & Wanner, "Solving ODEs I", II.4 starting step heuristic.
double initial_step(const OdeRhs& rhs, double t0, const Eigen::VectorXd& y0,
                    const Eigen::VectorXd& f0, double span, const OdeTolerances& tol) {
  const Eigen::Index n = y0.size();
  double d0 = 0.0, d1 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sc = tol.abs + tol.rel * std::abs(y0[i]);
    d0 += (y0[i] / sc) * (y0[i] / sc);
    d1 += (f0[i] / sc) * (f0[i] / sc);
  }
  d0 = std::sqrt(d0 / std::max<Eigen::Index>(n, 1));
  d1 = std::sqrt(d1 / std::max<Eigen::Index>(n, 1));
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, span);
  Eigen::VectorXd y1 = y0 + h0 * f0;
  Eigen::VectorXd f1(n);
  rhs(t0 + h0, y1, f1);
  double d2 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sc = tol.abs + tol.rel * std::abs(y0[i]);
    const double r = (f1[i] - f0[i]) / sc;
    d2 += r * r;
  }
  d2 = std::sqrt(d2 / std::max<Eigen::Index>(n, 1)) / h0;
  const double dmax = std::max(d1, d2);
  const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
  return std::min({100.0 * h0, h1, span});
}

}  // namespace

OdeResult integrate_dopri5(const OdeRhs& rhs, double t0, const Eigen::VectorXd& y0, double t1,
                           const OdeOptions& options, const StepObserver& observer) {
  OdeResult result;
  result.t = t0;
  result.y = y0;
  if (!(t1 > t0)) return result;

  const Eigen::Index n = y0.size();
  Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), err(n);

  double t = t0;
  Eigen::VectorXd y = y0;
  rhs(t, y, k1);
  if (!k1.allFinite() || !y.allFinite()) {
    result.status = OdeStatus::kNonFinite;
    return result;
  }

  double h = options.initial_step > 0.0 ? options.initial_step
                                        : initial_step(rhs, t, y, k1, t1 - t0, options.tol);
  h = std::min(h, options.max_step);
  double err_old = 1e-4;
  bool last_rejected = false;

  while (t < t1) {
    if (result.accepted + result.rejected >= options.max_steps) {
      result.status = OdeStatus::kTooManySteps;
      break;
    }
    const double min_step = options.min_step_rel * std::max(1.0, std::abs(t));
    bool hits_end = false;
    if (t + h >= t1 || t + 1.01 * h >= t1) {
      h = t1 - t;
      hits_end = true;
    }
    if (h < min_step && !hits_end) {
      result.status = OdeStatus::kStepUnderflow;
      break;
    }

    ytmp = y + h * (a21 * k1);
    rhs(t + c2 * h, ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    rhs(t + c3 * h, ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(t + c4 * h, ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(t + c5 * h, ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(t + h, ytmp, k6);
    ynew = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    const double t_new = hits_end ? t1 : t + h;
    rhs(t_new, ynew, k7);
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double e = error_norm(err, y, ynew, options.tol);
    if (!std::isfinite(e) || !ynew.allFinite()) {
      // Treat as a failed step; shrink hard.
      e = std::numeric_limits<double>::infinity();
    }

    if (e <= 1.0) {
      t = t_new;
      y = ynew;
      k1 = k7;
      ++result.accepted;
      result.last_step = h;
      if (observer && !observer(t, y, h)) {
        result.status = OdeStatus::kStopped;
        break;
      }
      double fac = kSafety * std::pow(e, -0.2 + 0.75 * kBeta) * std::pow(err_old, kBeta);
      if (e == 0.0) fac = kFacMax;
      fac = std::clamp(fac, kFacMin, kFacMax);
      if (last_rejected) fac = std::min(fac, 1.0);
      err_old = std::max(e, 1e-4);
      h = std::min(h * fac, options.max_step);
      last_rejected = false;
    } else {
      ++result.rejected;
      const double fac =
          std::isfinite(e) ? std::max(kFacMin, kSafety * std::pow(e, -0.2)) : kFacMin;
      h *= std::min(fac, 1.0);
      last_rejected = true;
    }
  }

  result.t = t;
  result.y = y;
  if (!y.allFinite()) result.status = OdeStatus::kNonFinite;
  return result;
}

OdeResult integrate_dopri5_or_throw(const OdeRhs& rhs, double t0, const Eigen::VectorXd& y0,
                                    double t1, const OdeOptions& options,
                                    const StepObserver& observer) {
  OdeResult r = integrate_dopri5(rhs, t0, y0, t1, options, observer);
  switch (r.status) {
    case OdeStatus::kReached:
    case OdeStatus::kStopped:
      return r;
    case OdeStatus::kStepUnderflow:
      throw IntegrationError("step size underflow at t = " + std::to_string(r.t), r.t);
    case OdeStatus::kNonFinite:
      throw IntegrationError("non-finite state at t = " + std::to_string(r.t), r.t);
    case OdeStatus::kTooManySteps:
      throw IntegrationError("step budget exhausted at t = " + std::to_string(r.t), r.t);
  }
  return r;
}

}  // namespace conjtime
