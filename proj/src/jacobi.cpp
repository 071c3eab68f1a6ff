#include "conjtime/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace conjtime {
namespace {

// Thin QR with a positive diagonal in R, so det R > 0.
void positive_qr(const Matrix& y, Matrix& q, Matrix& r) {
  const Eigen::Index cols = y.cols();
  Eigen::HouseholderQR<Matrix> qr(y);
  q = qr.householderQ() * Matrix::Identity(y.rows(), cols);
  r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < cols; ++j) {
    if (r(j, j) < 0.0) {
      r.row(j) *= -1.0;
      q.col(j) *= -1.0;
    }
  }
}

Matrix hamiltonian_block(const StructuralMatrices& s, const Matrix& r) {
  const int n = s.dimension();
  Matrix a(2 * n, 2 * n);
  a.topLeftCorner(n, n) = -s.gamma1;
  a.topRightCorner(n, n) = -r;
  a.bottomLeftCorner(n, n) = s.gamma2;
  a.bottomRightCorner(n, n) = s.gamma1.transpose();
  return a;
}

// Propagates the 2n x n matrix y0 from t0 to t1 under the Jacobi system.
Matrix propagate(const StructuralMatrices& s, const CurvatureField& field, const Matrix& y0,
                 double t0, double t1, const OdeTolerances& tol) {
  if (t1 <= t0) return y0;
  const Eigen::Index rows = y0.rows(), cols = y0.cols();
  const bool constant = field.is_constant();
  const Matrix a_const = constant ? hamiltonian_block(s, field.constant_value()) : Matrix();
  Matrix a = a_const;
  OdeRhs rhs = [&](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    Eigen::Map<const Matrix> ym(y.data(), rows, cols);
    if (!constant) {
      const Matrix r = field(std::min(t, field.domain_end()));
      a = hamiltonian_block(s, r);
    }
    dy.resize(y.size());
    Eigen::Map<Matrix> dym(dy.data(), rows, cols);
    dym.noalias() = a * ym;
  };
  OdeOptions opts;
  opts.tol = tol;
  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(y0.data(), y0.size());
  OdeResult res = integrate_dopri5_or_throw(rhs, t0, v, t1, opts);
  return Eigen::Map<const Matrix>(res.y.data(), rows, cols);
}

}  // namespace

FrameDiagnostics frame_diagnostics(const Matrix& frame) {
  const Eigen::Index n = frame.cols();
  Matrix q, r;
  positive_qr(frame, q, r);
  const Matrix nb = q.bottomRows(n);
  FrameDiagnostics d;
  d.det_n = nb.determinant();
  Eigen::JacobiSVD<Matrix> svd(nb);
  d.sigma_min = svd.singularValues()(n - 1);
  return d;
}

Matrix JacobiTrajectory::m(std::size_t k) const {
  const int n = dimension();
  return frames[k].topRows(n) * scales[k];
}

Matrix JacobiTrajectory::n(std::size_t k) const {
  const int n = dimension();
  return frames[k].bottomRows(n) * scales[k];
}

double JacobiTrajectory::raw_det_n(std::size_t k) const {
  return det_n[k] * std::exp(log_abs_det_scale[k]);
}

Matrix JacobiTrajectory::frame_at(double t, const OdeTolerances& tol) const {
  if (t < 0.0 || t > horizon) {
    throw std::out_of_range("requested time lies outside the Jacobi trajectory");
  }
  auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - times.begin()) - 1;
  return propagate(structural, curvature, frames[k], times[k], t, tol);
}

JacobiTrajectory integrate_jacobi(const StructuralMatrices& structural,
                                  const CurvatureField& curvature, double horizon,
                                  const JacobiOptions& options) {
  const int n = structural.dimension();
  if (curvature.dimension() != n) {
    throw std::invalid_argument("curvature dimension does not match the structural matrices");
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("horizon must be positive and finite");
  }
  if (curvature.domain_end() < horizon) {
    throw std::invalid_argument("curvature field does not cover the requested horizon");
  }
  if (options.grid_intervals < 2) {
    throw std::invalid_argument("Jacobi grid needs at least two intervals");
  }

  JacobiTrajectory traj;
  traj.structural = structural;
  traj.curvature = curvature;
  traj.horizon = horizon;
  traj.options = options;

  const std::size_t count = static_cast<std::size_t>(options.grid_intervals) + 1;
  traj.times.reserve(count);
  traj.frames.reserve(count);
  traj.scales.reserve(count);

  Matrix frame = Matrix::Zero(2 * n, n);
  frame.topRows(n).setIdentity();
  Matrix scale = Matrix::Identity(n, n);
  double log_det = 0.0;

  auto record = [&](double t) {
    traj.times.push_back(t);
    traj.frames.push_back(frame);
    traj.scales.push_back(scale);
    traj.log_abs_det_scale.push_back(log_det);
    const Matrix nb = frame.bottomRows(n);
    traj.det_n.push_back(nb.determinant());
    Eigen::JacobiSVD<Matrix> svd(nb);
    traj.sigma_min.push_back(svd.singularValues()(n - 1));
  };
  record(0.0);

  for (int k = 1; k <= options.grid_intervals; ++k) {
    const double t0 = traj.times.back();
    const double t1 = k == options.grid_intervals ? horizon : horizon * k / options.grid_intervals;
    Matrix y;
    try {
      y = propagate(structural, curvature, frame, t0, t1, options.tol);
    } catch (const IntegrationError& e) {
      throw IntegrationError(std::string("Jacobi integration failed: ") + e.what(),
                             e.last_valid_time());
    }
    if (!y.allFinite()) {
      throw IntegrationError("Jacobi integration produced non-finite entries", t0);
    }
    Matrix q, r;
    positive_qr(y, q, r);
    frame = q;
    scale = r * scale;
    log_det += r.diagonal().array().log().sum();
    record(t1);
  }
  return traj;
}

namespace {

struct Candidate {
  double time;
  double lo;
  double hi;
  Witness witness;
};

}  // namespace

ConjugateTimeResult first_conjugate_time(const JacobiTrajectory& traj,
                                         const ConjugateSearchOptions& options) {
  const double tol = options.refinement_tolerance;
  if (!(tol > 0.0)) throw std::invalid_argument("refinement tolerance must be positive");
  const std::size_t last = traj.size() - 1;
  const double t_start = traj.startup_time();

  auto diag_at = [&](double t, const OdeTolerances& ode_tol) {
    return frame_diagnostics(traj.frame_at(t, ode_tol));
  };

  std::optional<Candidate> best;
  bool flagged = false;
  std::string diagnostic;

  std::size_t k0 = 0;
  while (k0 < last && traj.times[k0] < t_start) ++k0;
  if (k0 == 0) k0 = 1;  // t = 0 is always excluded

  auto sign_change = [&](std::size_t k) {
    return k < last && traj.det_n[k] * traj.det_n[k + 1] < 0.0;
  };

  for (std::size_t k = k0; k < last; ++k) {
    if (best && traj.times[k] > best->time) break;

    if (traj.det_n[k] == 0.0) {
      const double t = traj.times[k];
      if (!best || t < best->time) best = Candidate{t, t, t, Witness::kSignChange};
      break;
    }

    if (sign_change(k)) {
      double lo = traj.times[k], hi = traj.times[k + 1];
      const bool lo_positive = traj.det_n[k] > 0.0;
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double d = diag_at(mid, traj.options.tol).det_n;
        if (d == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((d > 0.0) == lo_positive) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      const double t = 0.5 * (lo + hi);
      if (!best || t < best->time) best = Candidate{t, lo, hi, Witness::kSignChange};
    }

    // Rank drop without sign change: local minimum of sigma_min at k + 1.
    if (k + 2 <= last && !sign_change(k) && !sign_change(k + 1) &&
        traj.sigma_min[k + 1] < traj.sigma_min[k] &&
        traj.sigma_min[k + 1] <= traj.sigma_min[k + 2]) {
      // Golden-section search for the minimum on [t_k, t_{k+2}].
      constexpr double kInvPhi = 0.6180339887498949;
      double a = traj.times[k], b = traj.times[k + 2];
      double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
      double f1 = diag_at(x1, traj.options.tol).sigma_min;
      double f2 = diag_at(x2, traj.options.tol).sigma_min;
      while (b - a > tol) {
        if (f1 < f2) {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = b - kInvPhi * (b - a);
          f1 = diag_at(x1, traj.options.tol).sigma_min;
        } else {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + kInvPhi * (b - a);
          f2 = diag_at(x2, traj.options.tol).sigma_min;
        }
      }
      const double t_star = 0.5 * (a + b);
      const double s_star = diag_at(t_star, traj.options.tol).sigma_min;
      if (s_star < options.dip_threshold) {
        const double delta = std::max(100.0 * tol, 1e-8);
        const double left = diag_at(std::max(t_star - delta, 0.0), traj.options.tol).sigma_min;
        const double right =
            diag_at(std::min(t_star + delta, traj.horizon), traj.options.tol).sigma_min;
        const bool v_shaped = left > 4.0 * s_star && right > 4.0 * s_star;
        const double s_tight =
            diag_at(t_star, traj.options.tol.tightened(options.confirm_factor)).sigma_min;
        if (v_shaped && s_tight < options.dip_threshold) {
          if (!best || t_star < best->time) {
            best = Candidate{t_star, a, b, Witness::kRankDrop};
          }
        } else {
          flagged = true;
          diagnostic = "unconfirmed singular-value dip near t = " + std::to_string(t_star) +
                       "; tighten the integration tolerances";
        }
      }
    }
  }

  ConjugateTimeResult result = best ? ConjugateTimeResult::finite(best->time, best->lo, best->hi,
                                                                  best->witness)
                                    : ConjugateTimeResult::none_up_to(traj.horizon);
  result.horizon = traj.horizon;
  result.flagged = flagged;
  result.diagnostic = diagnostic;
  return result;
}

}  // namespace conjtime
