#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "conjtime/conjugate_time.hpp"
#include "conjtime/curvature_field.hpp"
#include "conjtime/ode.hpp"
#include "conjtime/young_diagram.hpp"

namespace conjtime {

/// Coefficients of the symmetric Riccati equation
///
///   dX/dt = (I X) M(t) (I X)^T = M11 + M12 X + X M12^T + X M22 X,
///
/// given as the 2n x 2n symmetric matrix M(t) = [[M11, M12], [M12^T, M22]].
using RiccatiCoefficients = std::function<Matrix(double t)>;

struct RiccatiOptions {
  OdeTolerances tol;
  /// Output samples on a uniform grid of (t1 - t0) / grid_intervals.
  int grid_intervals = 2000;
  /// Inverse phase ends once the smallest eigenvalue of the inverse exceeds this.
  double switch_threshold = 1e-6;
  /// The switch must happen before t0 + max_switch_fraction * (t1 - t0).
  double max_switch_fraction = 0.1;
  /// Blow-up: operator norm above this, or step collapse below min_step_rel.
  double blowup_cap = 1e12;
  double min_step_rel = 1e-14;
};

enum class RiccatiPhase { kInverse, kDirect, kBlownUp };

struct RiccatiSample {
  double t = 0.0;
  RiccatiPhase phase = RiccatiPhase::kDirect;
  /// X itself in the direct phase, Y = X^{-1} in the inverse phase.
  Matrix value;
  /// Index on the uniform output grid, -1 for extra samples (phase switch, blow-up).
  int grid_index = -1;
};

struct RiccatiSolution {
  std::vector<RiccatiSample> history;
  std::optional<double> switch_time;
  /// Estimated blow-up time and the bracket [last accepted time, estimate + gap].
  std::optional<double> blowup_time;
  double blowup_lo = 0.0;
  double blowup_hi = 0.0;
  double end_time = 0.0;
  double grid_step = 0.0;
};

/// Integrates from a regular initial datum X(t0) = x0 up to t1 or blow-up.
RiccatiSolution solve_riccati(const RiccatiCoefficients& m, const Matrix& x0, double t0,
                              double t1, const RiccatiOptions& options = {});

/// Integrates from the limit datum lim_{t->t0+} X(t)^{-1} = y0 (positive
/// semidefinite, typically 0). The inverse Y is integrated first with
/// dY/dt = (I Y) N(t) (I Y)^T, N = -J M J, J = [[0, I], [I, 0]], and the
/// solution switches to X = Y^{-1} once Y is safely positive definite.
/// Throws std::runtime_error when the switch does not happen in time.
RiccatiSolution solve_riccati_limit(const RiccatiCoefficients& m, const Matrix& y0, double t0,
                                    double t1, const RiccatiOptions& options = {});

/// Coefficients of dV/dt = -G1 V - V G1^T - R(t) - V G2 V, that is
/// M = [[-R, -G1], [-G1^T, -G2]].
RiccatiCoefficients jacobi_riccati_coefficients(const StructuralMatrices& s,
                                                const CurvatureField& curvature);

struct RiccatiConjugateResult {
  RiccatiSolution solution;
  ConjugateTimeResult conjugate;
};

/// Limit-initial-condition Riccati solve for V = M N^{-1}; the blow-up time
/// is the first conjugate time. Throws std::invalid_argument when the
/// structural pair is not controllable.
RiccatiConjugateResult integrate_riccati_limit_ic(const StructuralMatrices& s,
                                                  const CurvatureField& curvature, double horizon,
                                                  const RiccatiOptions& options = {});

// --- Riccati comparison --------------------------------------------------

struct ComparisonInitialData {
  enum class Kind { kRegular, kLimit };
  Kind kind = Kind::kRegular;
  /// Regular: X_1(t0), X_2(t0). Limit: Y_1(t0), Y_2(t0) = lim X_i^{-1}.
  Matrix first;
  Matrix second;
};

struct RiccatiOrderingReport {
  enum class Status { kHolds, kPreconditionViolated, kConclusionViolated };
  Status status = Status::kHolds;
  std::optional<double> violation_time;
  /// Smallest scaled margin min_eig(X1 - X2) / (1 + |X1| + |X2|) observed.
  double min_margin = 0.0;
  /// End of the common interval of definition that was checked.
  double common_end = 0.0;
  int samples_checked = 0;
  std::string detail;
};

/// Checks X1(t) >= X2(t) on the common interval, given M1 >= M2 and ordered
/// initial data. Violations are re-checked with tolerances 100x tighter
/// before being reported.
RiccatiOrderingReport riccati_comparison_check(const RiccatiCoefficients& m1,
                                               const RiccatiCoefficients& m2,
                                               const ComparisonInitialData& init, double t0,
                                               double horizon,
                                               const RiccatiOptions& options = {},
                                               double ordering_tolerance = 1e-8);

/// ||sum Y_a^T Y_a|| sum X_b^T X_b - (sum X_a^T Y_a)(sum X_b^T Y_b)^T.
/// Throws std::invalid_argument on empty or inconsistent inputs.
Matrix matrix_cauchy_schwarz_gap(const std::vector<Matrix>& x, const std::vector<Matrix>& y);

struct MonotonicityReport {
  bool holds = true;
  /// Largest eigenvalue of V(t_{k+1}) - V(t_k), scaled by 1 + |V|.
  double worst_increase = 0.0;
  std::optional<double> violation_time;
  std::optional<double> blowup_time;
  int samples_checked = 0;
};

/// Checks that the limit-IC solution V for the constant potential Q is
/// non-increasing in the matrix order on the output grid.
MonotonicityReport riccati_monotonicity_check(const StructuralMatrices& s, const Matrix& q,
                                              double horizon, const RiccatiOptions& options = {},
                                              double tolerance = 1e-8);

}  // namespace conjtime
