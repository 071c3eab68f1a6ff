#pragma once

#include <array>
#include <memory>
#include <optional>
#include <vector>

#include "conjtime/conjugate_time.hpp"
#include "conjtime/curvature_field.hpp"
#include "conjtime/jacobi.hpp"
#include "conjtime/ode.hpp"
#include "conjtime/riccati.hpp"

namespace conjtime {

/// Structure constants of a left-invariant orthonormal frame X1, X2 with Reeb field X0:
///
///   [X1, X0] = c01_1 X1 + c01_2 X2
///   [X2, X0] = c02_1 X1 + c02_2 X2
///   [X2, X1] = c12_1 X1 + c12_2 X2 + X0
struct StructureConstants3D {
  double c01_1 = 0.0;
  double c01_2 = 0.0;
  double c02_1 = 0.0;
  double c02_2 = 0.0;
  double c12_1 = 0.0;
  double c12_2 = 0.0;
};

struct Invariants3D {
  double chi = 0.0;
  double kappa = 0.0;
};

/// chi = sqrt(c01_1^2 + (c01_2 + c02_1)^2 / 4),
/// kappa = -c12_1^2 - c12_2^2 + (c01_2 - c02_1) / 2.
/// Throws std::invalid_argument when |c01_1 + c02_2| > trace_tolerance.
Invariants3D invariants_from_constants(const StructureConstants3D& c,
                                       double trace_tolerance = 1e-12);

class ContactStructure3D {
 public:
  /// Throws std::invalid_argument for chi < 0 or non-finite input.
  ContactStructure3D(double chi, double kappa);
  static ContactStructure3D from_constants(const StructureConstants3D& c);

  double chi() const { return chi_; }
  double kappa() const { return kappa_; }

  /// [X1, X0] = (chi + kappa) X2, [X2, X0] = (chi - kappa) X1, [X2, X1] = X0.
  StructureConstants3D canonical_constants() const;

 private:
  double chi_;
  double kappa_;
};

struct CovectorState {
  double h0 = 0.0;
  double h1 = 1.0;
  double h2 = 0.0;

  double hamiltonian() const { return 0.5 * (h1 * h1 + h2 * h2); }
  /// h0^2 / (2 chi) + h2^2; requires chi > 0.
  double energy(double chi) const;

  /// Length-parametrized state with the given E and h2:
  /// h0 = h0_sign * sqrt(2 chi (E - h2^2)), h1 = h1_sign * sqrt(1 - h2^2).
  /// Throws std::invalid_argument unless chi > 0, |h2| <= 1 and h2^2 <= E.
  static CovectorState from_energy(double chi, double energy, double h2, int h0_sign = 1,
                                   int h1_sign = 1);

  /// Throws std::invalid_argument unless |h1^2 + h2^2 - 1| <= tolerance.
  void require_length_parametrized(double tolerance = 1e-9) const;
};

struct FlowOptions {
  OdeTolerances tol{1e-14, 1e-16};
  /// Uniform grid used for diagnostics and tabulation.
  int grid_intervals = 2000;
  /// Drift of H or E above this aborts the integration.
  double abort_drift = 1e-6;
};

/// Solution of h0' = 2 chi h1 h2, h1' = h0 h2, h2' = -h0 h1.
///
/// Every accepted integrator step is stored; states between nodes are
/// reconstructed by quintic Hermite interpolation from the values and the
/// first two derivatives of the vector field.
class ExtremalTrajectory {
 public:
  double chi() const { return chi_; }
  double horizon() const { return horizon_; }
  const std::vector<double>& node_times() const { return times_; }
  const std::vector<CovectorState>& node_states() const { return states_; }
  /// Uniform grid t_k = horizon * k / grid_intervals.
  std::vector<double> grid_times() const;

  CovectorState at(double t) const;

  double max_hamiltonian_drift() const { return max_h_drift_; }
  double max_energy_drift() const { return max_e_drift_; }

 private:
  friend ExtremalTrajectory extremal_flow(double chi, const CovectorState& initial, double horizon,
                                          const FlowOptions& options);
  double chi_ = 0.0;
  double horizon_ = 0.0;
  int grid_intervals_ = 0;
  std::vector<double> times_;
  std::vector<CovectorState> states_;
  double max_h_drift_ = 0.0;
  double max_e_drift_ = 0.0;
};

/// Throws std::invalid_argument for chi <= 0 or a state off H = 1/2, and
/// IntegrationError when the drift of H or E exceeds the abort threshold.
ExtremalTrajectory extremal_flow(double chi, const CovectorState& initial, double horizon,
                                 const FlowOptions& options = {});
inline ExtremalTrajectory extremal_flow(const ContactStructure3D& s, const CovectorState& initial,
                                        double horizon, const FlowOptions& options = {}) {
  return extremal_flow(s.chi(), initial, horizon, options);
}

struct RicciPair {
  double r11 = 0.0;
  double r22 = 0.0;
};

/// R11 = h0^2 + 3 chi (h1^2 - h2^2) + kappa (h1^2 + h2^2),
/// R22 = 6 chi (h1^2 - h2^2) h0^2 - 2 chi (chi + kappa) h1^4 - 12 chi^2 h1^2 h2^2
///       - 2 chi (chi - kappa) h2^4.
/// For chi = 0 this gives (h0^2 + kappa (h1^2 + h2^2), 0).
RicciPair curvature_along(const ContactStructure3D& s, const CovectorState& state);

/// The same curvatures written through E and h0 only (chi > 0):
/// R11 = 4 h0^2 - 3 chi (2E - 1) + kappa,
/// R22 = 8 h0^4 - [2 kappa + 10 chi (2E - 1)] h0^2 + 2 chi kappa (2E - 1) + chi^2 (8E^2 - 8E - 2).
RicciPair curvature_energy_form(const ContactStructure3D& s, double h0, double energy);

/// diag(R11(t), R22(t)) along the extremal, on [0, trajectory horizon].
CurvatureField curvature_field_along(const ContactStructure3D& s,
                                     std::shared_ptr<const ExtremalTrajectory> trajectory);

struct Lie3dOptions {
  JacobiOptions jacobi;
  ConjugateSearchOptions search;
  FlowOptions flow;
  /// For chi = 0: use the closed form instead of integrating the constant field.
  bool chi0_closed_form = true;
};

/// First conjugate time along the geodesic with initial covector `initial`,
/// through the reduced single-row Jacobi system with R = diag(R11, R22).
ConjugateTimeResult conjugate_time_3d(const ContactStructure3D& s, const CovectorState& initial,
                                      double horizon, const Lie3dOptions& options = {});

/// 2 pi / sqrt(h0^2 + kappa) when positive, CertifiedInfinite otherwise.
ConjugateTimeResult chi0_conjugate_time(double kappa, double h0);

/// Lower bounds kappa_1 = 2 chi E - 5 chi + kappa and
/// kappa_2 = 2 chi^2 (15 - 26 E) - 2 chi kappa of R11, R22 along every
/// extremal with energy E. Throws std::invalid_argument unless chi > 0 and
/// E >= (5 - kappa / chi) / 2.
std::array<double, 2> ricci_bounds_egrande(double chi, double kappa, double energy);

/// max(largest real root of 4 chi^2 E^2 + (4 chi kappa - 228 chi^2) E
///     + 145 chi^2 - 18 chi kappa + kappa^2, (5 - kappa / chi) / 2).
double ebar(double chi, double kappa);

}  // namespace conjtime
