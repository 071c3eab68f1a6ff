#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace conjtime {

struct OdeTolerances {
  double rel = 1e-10;
  double abs = 1e-12;

  OdeTolerances tightened(double factor) const { return {rel / factor, abs / factor}; }
};

/// Raised when an integration cannot continue. `last_valid_time` is the last
/// time at which the state was finite and accepted.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double last_valid_time)
      : std::runtime_error(what), last_valid_time_(last_valid_time) {}
  double last_valid_time() const { return last_valid_time_; }

 private:
  double last_valid_time_;
};

enum class OdeStatus { kReached, kStopped, kStepUnderflow, kNonFinite, kTooManySteps };

struct OdeOptions {
  OdeTolerances tol;
  double initial_step = 0.0;  // 0 selects automatically
  double max_step = std::numeric_limits<double>::infinity();
  /// Underflow is declared when the step drops below min_step_rel * max(1, |t|).
  double min_step_rel = 1e-14;
  long max_steps = 5'000'000;
};

struct OdeResult {
  OdeStatus status = OdeStatus::kReached;
  double t = 0.0;
  Eigen::VectorXd y;
  double last_step = 0.0;
  long accepted = 0;
  long rejected = 0;
};

using OdeRhs = std::function<void(double t, const Eigen::VectorXd& y, Eigen::VectorXd& dydt)>;

/// Called after every accepted step with the new time, state and the step
/// just taken. Returning false stops the integration (status kStopped).
using StepObserver = std::function<bool(double t, const Eigen::VectorXd& y, double h)>;

/// Dormand-Prince 5(4) embedded pair with FSAL and a PI step controller.
/// Integrates from t0 to t1 (t1 > t0) and never steps past t1.
OdeResult integrate_dopri5(const OdeRhs& rhs, double t0, const Eigen::VectorXd& y0, double t1,
                           const OdeOptions& options, const StepObserver& observer = {});

/// Same as integrate_dopri5 but throws IntegrationError on anything other
/// than kReached / kStopped.
OdeResult integrate_dopri5_or_throw(const OdeRhs& rhs, double t0, const Eigen::VectorXd& y0,
                                    double t1, const OdeOptions& options,
                                    const StepObserver& observer = {});

}  // namespace conjtime
