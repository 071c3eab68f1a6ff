#include "conjtime/lie3d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace conjtime {

Invariants3D invariants_from_constants(const StructureConstants3D& c, double trace_tolerance) {
  const double trace = c.c01_1 + c.c02_2;
  if (!(std::abs(trace) <= trace_tolerance)) {
    throw std::invalid_argument("structure constants violate c01_1 + c02_2 = 0 (got " +
                                std::to_string(trace) + ")");
  }
  const double off = c.c01_2 + c.c02_1;
  Invariants3D inv;
  inv.chi = std::sqrt(c.c01_1 * c.c01_1 + 0.25 * off * off);
  inv.kappa = -c.c12_1 * c.c12_1 - c.c12_2 * c.c12_2 + 0.5 * (c.c01_2 - c.c02_1);
  return inv;
}

ContactStructure3D::ContactStructure3D(double chi, double kappa) : chi_(chi), kappa_(kappa) {
  if (!std::isfinite(chi) || !std::isfinite(kappa)) {
    throw std::invalid_argument("chi and kappa must be finite");
  }
  if (chi < 0.0) throw std::invalid_argument("chi must be non-negative");
}

ContactStructure3D ContactStructure3D::from_constants(const StructureConstants3D& c) {
  const Invariants3D inv = invariants_from_constants(c);
  return ContactStructure3D(inv.chi, inv.kappa);
}

StructureConstants3D ContactStructure3D::canonical_constants() const {
  StructureConstants3D c;
  c.c01_2 = chi_ + kappa_;
  c.c02_1 = chi_ - kappa_;
  return c;
}

double CovectorState::energy(double chi) const {
  if (!(chi > 0.0)) throw std::invalid_argument("E is defined for chi > 0 only");
  return h0 * h0 / (2.0 * chi) + h2 * h2;
}

CovectorState CovectorState::from_energy(double chi, double energy, double h2, int h0_sign,
                                         int h1_sign) {
  if (!(chi > 0.0)) throw std::invalid_argument("E is defined for chi > 0 only");
  if (!(std::abs(h2) <= 1.0)) throw std::invalid_argument("|h2| must not exceed 1");
  if (!(h2 * h2 <= energy)) throw std::invalid_argument("E must be at least h2^2");
  CovectorState s;
  s.h2 = h2;
  s.h1 = (h1_sign < 0 ? -1.0 : 1.0) * std::sqrt(1.0 - h2 * h2);
  s.h0 = (h0_sign < 0 ? -1.0 : 1.0) * std::sqrt(2.0 * chi * (energy - h2 * h2));
  return s;
}

void CovectorState::require_length_parametrized(double tolerance) const {
  const double r = h1 * h1 + h2 * h2;
  if (!(std::abs(r - 1.0) <= tolerance)) {
    throw std::invalid_argument("initial covector must satisfy h1^2 + h2^2 = 1 (got " +
                                std::to_string(r) + ")");
  }
}

namespace {

using State3 = std::array<double, 3>;  // (h0, h1, h2)

State3 field(double chi, const State3& h) {
  return {2.0 * chi * h[1] * h[2], h[0] * h[2], -h[0] * h[1]};
}

// Time derivative of the field along the flow.
State3 field_dot(double chi, const State3& h) {
  const State3 f = field(chi, h);
  return {2.0 * chi * (f[1] * h[2] + h[1] * f[2]), f[0] * h[2] + h[0] * f[2],
          -(f[0] * h[1] + h[0] * f[1])};
}

State3 as_array(const CovectorState& s) { return {s.h0, s.h1, s.h2}; }

}  // namespace

std::vector<double> ExtremalTrajectory::grid_times() const {
  std::vector<double> t(static_cast<std::size_t>(grid_intervals_) + 1);
  for (int k = 0; k <= grid_intervals_; ++k) {
    t[k] = k == grid_intervals_ ? horizon_ : horizon_ * k / grid_intervals_;
  }
  return t;
}

CovectorState ExtremalTrajectory::at(double t) const {
  if (t < 0.0 || t > horizon_) {
    throw std::out_of_range("time " + std::to_string(t) + " lies outside the extremal");
  }
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  if (it == times_.end()) return states_.back();
  const std::size_t k = static_cast<std::size_t>(it - times_.begin()) - 1;
  const double t0 = times_[k], h = times_[k + 1] - t0;
  const double s = (t - t0) / h;
  if (s == 0.0) return states_[k];
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
  const double b0 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
  const double b1 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
  const double b2 = 0.5 * (s2 - 3.0 * s3 + 3.0 * s4 - s5);
  const double b3 = 0.5 * (s3 - 2.0 * s4 + s5);
  const double b4 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
  const double b5 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
  const State3 p0 = as_array(states_[k]), p1 = as_array(states_[k + 1]);
  const State3 v0 = field(chi_, p0), v1 = field(chi_, p1);
  const State3 a0 = field_dot(chi_, p0), a1 = field_dot(chi_, p1);
  State3 out;
  for (int i = 0; i < 3; ++i) {
    out[i] = b0 * p0[i] + b1 * h * v0[i] + b2 * h * h * a0[i] + b3 * h * h * a1[i] +
             b4 * h * v1[i] + b5 * p1[i];
  }
  return {out[0], out[1], out[2]};
}

ExtremalTrajectory extremal_flow(double chi, const CovectorState& initial, double horizon,
                                 const FlowOptions& options) {
  if (!(chi > 0.0)) throw std::invalid_argument("extremal_flow needs chi > 0");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("horizon must be positive and finite");
  }
  if (options.grid_intervals < 1) throw std::invalid_argument("flow grid needs an interval");
  initial.require_length_parametrized();

  ExtremalTrajectory traj;
  traj.chi_ = chi;
  traj.horizon_ = horizon;
  traj.grid_intervals_ = options.grid_intervals;
  traj.times_.push_back(0.0);
  traj.states_.push_back(initial);
  const double h_ref = initial.hamiltonian();
  const double e_ref = initial.energy(chi);

  OdeRhs rhs = [chi](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    dy.resize(3);
    dy[0] = 2.0 * chi * y[1] * y[2];
    dy[1] = y[0] * y[2];
    dy[2] = -y[0] * y[1];
  };
  bool drifted = false;
  StepObserver observer = [&](double t, const Eigen::VectorXd& y, double) {
    const CovectorState s{y[0], y[1], y[2]};
    const double dh = std::abs(s.hamiltonian() - h_ref);
    const double de = std::abs(s.energy(chi) - e_ref);
    traj.max_h_drift_ = std::max(traj.max_h_drift_, dh);
    traj.max_e_drift_ = std::max(traj.max_e_drift_, de);
    traj.times_.push_back(t);
    traj.states_.push_back(s);
    if (dh > options.abort_drift || de > options.abort_drift) {
      drifted = true;
      return false;
    }
    return true;
  };

  OdeOptions ode;
  ode.tol = options.tol;
  Eigen::VectorXd y(3);
  y << initial.h0, initial.h1, initial.h2;
  double t = 0.0;
  for (int k = 1; k <= options.grid_intervals; ++k) {
    const double target = k == options.grid_intervals ? horizon : horizon * k / options.grid_intervals;
    OdeResult r = integrate_dopri5_or_throw(rhs, t, y, target, ode, observer);
    if (drifted) {
      throw IntegrationError("conservation drift of H or E exceeded " +
                                 std::to_string(options.abort_drift) + " at t = " +
                                 std::to_string(r.t),
                             r.t);
    }
    t = target;
    y = r.y;
    traj.times_.back() = target;  // the last accepted step lands on the target
  }
  return traj;
}

RicciPair curvature_along(const ContactStructure3D& s, const CovectorState& h) {
  const double chi = s.chi(), kappa = s.kappa();
  const double a = h.h1 * h.h1, b = h.h2 * h.h2, z = h.h0 * h.h0;
  RicciPair r;
  r.r11 = z + 3.0 * chi * (a - b) + kappa * (a + b);
  r.r22 = 6.0 * chi * (a - b) * z - 2.0 * chi * (chi + kappa) * a * a - 12.0 * chi * chi * a * b -
          2.0 * chi * (chi - kappa) * b * b;
  return r;
}

RicciPair curvature_energy_form(const ContactStructure3D& s, double h0, double energy) {
  const double chi = s.chi(), kappa = s.kappa(), e2 = 2.0 * energy - 1.0;
  const double z = h0 * h0;
  RicciPair r;
  r.r11 = 4.0 * z - 3.0 * chi * e2 + kappa;
  r.r22 = 8.0 * z * z - (2.0 * kappa + 10.0 * chi * e2) * z +
          (2.0 * chi * kappa * e2 + chi * chi * (8.0 * energy * energy - 8.0 * energy - 2.0));
  return r;
}

CurvatureField curvature_field_along(const ContactStructure3D& s,
                                     std::shared_ptr<const ExtremalTrajectory> trajectory) {
  if (!trajectory) throw std::invalid_argument("null extremal trajectory");
  const double end = trajectory->horizon();
  return CurvatureField::closed_form(
      2,
      [s, trajectory](double t) {
        const RicciPair r = curvature_along(s, trajectory->at(t));
        Matrix m = Matrix::Zero(2, 2);
        m(0, 0) = r.r11;
        m(1, 1) = r.r22;
        return m;
      },
      end);
}

ConjugateTimeResult chi0_conjugate_time(double kappa, double h0) {
  const double ric = h0 * h0 + kappa;
  if (ric > 0.0) {
    const double t = 2.0 * std::numbers::pi / std::sqrt(ric);
    return ConjugateTimeResult::finite(t, t, t, Witness::kClosedForm);
  }
  return ConjugateTimeResult::certified_infinite("chi0-nonpositive-ricci");
}

ConjugateTimeResult conjugate_time_3d(const ContactStructure3D& s, const CovectorState& initial,
                                      double horizon, const Lie3dOptions& options) {
  initial.require_length_parametrized();
  const StructuralMatrices structural = build_structural_matrices(YoungDiagram::single_row(2));
  if (s.chi() == 0.0) {
    if (options.chi0_closed_form) {
      ConjugateTimeResult r = chi0_conjugate_time(s.kappa(), initial.h0);
      r.horizon = horizon;
      return r;
    }
    Matrix q = Matrix::Zero(2, 2);
    q(0, 0) = curvature_along(s, initial).r11;
    const JacobiTrajectory traj =
        integrate_jacobi(structural, CurvatureField::constant(q), horizon, options.jacobi);
    return first_conjugate_time(traj, options.search);
  }
  auto flow = std::make_shared<const ExtremalTrajectory>(
      extremal_flow(s, initial, horizon, options.flow));
  const JacobiTrajectory traj =
      integrate_jacobi(structural, curvature_field_along(s, flow), horizon, options.jacobi);
  return first_conjugate_time(traj, options.search);
}

std::array<double, 2> ricci_bounds_egrande(double chi, double kappa, double energy) {
  if (!(chi > 0.0)) throw std::invalid_argument("Ricci bounds need chi > 0");
  const double threshold = 0.5 * (5.0 - kappa / chi);
  if (!(energy >= threshold - 1e-12 * std::max(1.0, std::abs(threshold)))) {
    throw std::invalid_argument("Ricci bounds need E >= (5 - kappa/chi)/2 = " +
                                std::to_string(threshold));
  }
  return {2.0 * chi * energy - 5.0 * chi + kappa,
          2.0 * chi * chi * (15.0 - 26.0 * energy) - 2.0 * chi * kappa};
}

double ebar(double chi, double kappa) {
  if (!(chi > 0.0)) throw std::invalid_argument("E bar needs chi > 0");
  const double threshold = 0.5 * (5.0 - kappa / chi);
  const double qa = 4.0 * chi * chi;
  const double qb = 4.0 * chi * kappa - 228.0 * chi * chi;
  const double qc = 145.0 * chi * chi - 18.0 * chi * kappa + kappa * kappa;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0) return threshold;
  // Larger root without cancellation.
  const double sq = std::sqrt(disc);
  const double root = qb <= 0.0 ? (-qb + sq) / (2.0 * qa) : (2.0 * qc) / (-qb - sq);
  return std::max(root, threshold);
}

}  // namespace conjtime
