#pragma once

#include <vector>

#include "conjtime/conjugate_time.hpp"
#include "conjtime/curvature_field.hpp"
#include "conjtime/ode.hpp"
#include "conjtime/young_diagram.hpp"

namespace conjtime {

struct JacobiOptions {
  OdeTolerances tol;
  /// Uniform output grid: horizon / grid_intervals.
  int grid_intervals = 2000;
  /// Zeros of det N before startup_fraction * horizon are ignored (N(0) = 0).
  double startup_fraction = 1e-4;
};

struct ConjugateSearchOptions {
  /// Final bracket width for the conjugate time.
  double refinement_tolerance = 1e-10;
  /// Rank-drop threshold on the smallest singular value of the orthonormal N block.
  double dip_threshold = 1e-7;
  /// Tolerance tightening used to confirm a rank drop.
  double confirm_factor = 10.0;
};

/// Solution of d/dt (M; N) = [[-G1, -R(t)], [G2, G1^T]] (M; N), M(0) = I, N(0) = 0.
///
/// The 2n x n solution is re-orthonormalized at every grid point to keep the
/// columns from collapsing onto the dominant growth direction. The raw
/// solution is frame * scale, where scale is upper triangular with positive
/// diagonal, so det N of the frame carries the sign of the raw det N.
struct JacobiTrajectory {
  StructuralMatrices structural;
  CurvatureField curvature = CurvatureField::constant(Matrix::Zero(1, 1));
  double horizon = 0.0;
  JacobiOptions options;

  std::vector<double> times;
  std::vector<Matrix> frames;
  std::vector<Matrix> scales;
  std::vector<double> det_n;
  std::vector<double> log_abs_det_scale;
  std::vector<double> sigma_min;

  int dimension() const { return structural.dimension(); }
  std::size_t size() const { return times.size(); }
  double startup_time() const { return options.startup_fraction * horizon; }

  /// Raw M(t_k), N(t_k); may overflow for long, strongly unstable runs.
  Matrix m(std::size_t k) const;
  Matrix n(std::size_t k) const;
  double raw_det_n(std::size_t k) const;

  /// Frame-normalized (M; N) at an arbitrary t in [0, horizon], integrated
  /// from the closest grid sample at or before t.
  Matrix frame_at(double t, const OdeTolerances& tol) const;
};

/// Determinant and smallest singular value of the N block of an orthonormalized frame.
struct FrameDiagnostics {
  double det_n = 0.0;
  double sigma_min = 0.0;
};
FrameDiagnostics frame_diagnostics(const Matrix& frame);

/// Throws std::invalid_argument on dimension mismatch or non-positive horizon,
/// IntegrationError on step underflow or non-finite entries.
JacobiTrajectory integrate_jacobi(const StructuralMatrices& structural,
                                  const CurvatureField& curvature, double horizon,
                                  const JacobiOptions& options = {});

/// First t in (startup, horizon] with det N(t) = 0.
ConjugateTimeResult first_conjugate_time(const JacobiTrajectory& trajectory,
                                         const ConjugateSearchOptions& options = {});

}  // namespace conjtime
