#include "conjtime/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace conjtime {
namespace {

Eigen::VectorXd pack(const Matrix& x) {
  const Eigen::Index n = x.rows();
  Eigen::VectorXd v(n * (n + 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) v[k++] = 0.5 * (x(i, j) + x(j, i));
  }
  return v;
}

Matrix unpack(const Eigen::VectorXd& v, Eigen::Index n) {
  Matrix x(n, n);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      x(i, j) = v[k];
      x(j, i) = v[k];
      ++k;
    }
  }
  return x;
}

// (I X) M (I X)^T for the 2n x 2n block matrix M.
Matrix riccati_field(const Matrix& m, const Matrix& x) {
  const Eigen::Index n = x.rows();
  const auto m11 = m.topLeftCorner(n, n);
  const auto m12 = m.topRightCorner(n, n);
  const auto m22 = m.bottomRightCorner(n, n);
  Matrix m12x = m12 * x;
  return m11 + m12x + m12x.transpose() + x * m22 * x;
}

// N = -J M J with J = [[0, I], [I, 0]].
Matrix inverse_coefficients(const Matrix& m) {
  const Eigen::Index n = m.rows() / 2;
  Matrix out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = -m.bottomRightCorner(n, n);
  out.topRightCorner(n, n) = -m.bottomLeftCorner(n, n);
  out.bottomLeftCorner(n, n) = -m.topRightCorner(n, n);
  out.bottomRightCorner(n, n) = -m.topLeftCorner(n, n);
  return out;
}

void check_coefficients(const Matrix& m, Eigen::Index n) {
  if (m.rows() != 2 * n || m.cols() != 2 * n) {
    throw std::invalid_argument("Riccati coefficient matrix must be 2n x 2n");
  }
}

RiccatiSolution run(const RiccatiCoefficients& coeffs, Matrix value, RiccatiPhase phase, double t0,
                    double t1, const RiccatiOptions& options) {
  if (!(t1 > t0) || !std::isfinite(t1)) {
    throw std::invalid_argument("Riccati horizon must be finite and after the start time");
  }
  if (options.grid_intervals < 1) {
    throw std::invalid_argument("Riccati output grid needs at least one interval");
  }
  const Eigen::Index n = value.rows();
  check_coefficients(coeffs(t0), n);

  RiccatiSolution sol;
  sol.grid_step = (t1 - t0) / options.grid_intervals;
  sol.history.push_back({t0, phase, symmetrized(value), 0});
  const double switch_deadline = t0 + options.max_switch_fraction * (t1 - t0);

  OdeOptions ode;
  ode.tol = options.tol;
  ode.min_step_rel = options.min_step_rel;

  double t = t0;
  Eigen::VectorXd state = pack(value);
  for (int k = 1; k <= options.grid_intervals; ++k) {
    const double target = k == options.grid_intervals ? t1 : t0 + (t1 - t0) * k / options.grid_intervals;
    while (t < target) {
      const RiccatiPhase current = phase;
      OdeRhs rhs = [&](double s, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
        Matrix m = coeffs(s);
        if (current == RiccatiPhase::kInverse) m = inverse_coefficients(m);
        dy = pack(riccati_field(m, unpack(y, n)));
      };
      bool switched = false, blown = false;
      StepObserver observer = [&](double s, const Eigen::VectorXd& y, double) {
        const Matrix x = unpack(y, n);
        if (current == RiccatiPhase::kInverse) {
          if (min_eigenvalue(x) > options.switch_threshold) {
            switched = true;
            return false;
          }
          if (s > switch_deadline) return false;
        } else if (x.norm() > options.blowup_cap) {
          blown = true;
          return false;
        }
        return true;
      };
      OdeResult res = integrate_dopri5(rhs, t, state, target, ode, observer);
      t = res.t;
      state = res.y;

      if (res.status == OdeStatus::kStepUnderflow && current == RiccatiPhase::kDirect &&
          unpack(state, n).norm() > std::sqrt(options.blowup_cap)) {
        blown = true;
      } else if (res.status != OdeStatus::kReached && res.status != OdeStatus::kStopped) {
        throw IntegrationError("Riccati integration failed at t = " + std::to_string(t), t);
      }

      if (blown) {
        const Matrix x = unpack(state, n);
        const double rate = riccati_field(coeffs(t), x).norm();
        const double gap = rate > 0.0 ? x.norm() / rate : 0.0;
        sol.blowup_time = t + gap;
        sol.blowup_lo = t;
        sol.blowup_hi = t + 2.0 * gap;
        sol.end_time = t;
        sol.history.push_back({t, RiccatiPhase::kBlownUp, x, -1});
        return sol;
      }
      if (current == RiccatiPhase::kInverse) {
        if (switched) {
          const Matrix y = unpack(state, n);
          const Matrix x = symmetrized(y.inverse());
          sol.switch_time = t;
          sol.history.push_back({t, RiccatiPhase::kInverse, y, -1});
          phase = RiccatiPhase::kDirect;
          state = pack(x);
          sol.history.push_back({t, RiccatiPhase::kDirect, x, -1});
        } else if (t > switch_deadline || (t >= target && target >= switch_deadline)) {
          throw std::runtime_error(
              "limit Riccati solution did not become positive definite by t = " +
              std::to_string(switch_deadline) +
              " (uncontrollable pair or switch threshold too tight)");
        }
      }
    }
    sol.history.push_back({t, phase, unpack(state, n), k});
  }
  sol.end_time = t1;
  return sol;
}

}  // namespace

RiccatiSolution solve_riccati(const RiccatiCoefficients& m, const Matrix& x0, double t0,
                              double t1, const RiccatiOptions& options) {
  if (x0.rows() != x0.cols() || x0.rows() == 0) {
    throw std::invalid_argument("Riccati initial datum must be square");
  }
  return run(m, x0, RiccatiPhase::kDirect, t0, t1, options);
}

RiccatiSolution solve_riccati_limit(const RiccatiCoefficients& m, const Matrix& y0, double t0,
                                    double t1, const RiccatiOptions& options) {
  if (y0.rows() != y0.cols() || y0.rows() == 0) {
    throw std::invalid_argument("Riccati limit datum must be square");
  }
  if (min_eigenvalue(symmetrized(y0)) < -1e-12) {
    throw std::invalid_argument("Riccati limit datum must be positive semidefinite");
  }
  if (min_eigenvalue(symmetrized(y0)) > options.switch_threshold) {
    return run(m, symmetrized(y0).inverse(), RiccatiPhase::kDirect, t0, t1, options);
  }
  return run(m, y0, RiccatiPhase::kInverse, t0, t1, options);
}

RiccatiCoefficients jacobi_riccati_coefficients(const StructuralMatrices& s,
                                                const CurvatureField& curvature) {
  const int n = s.dimension();
  Matrix base = Matrix::Zero(2 * n, 2 * n);
  base.topRightCorner(n, n) = -s.gamma1;
  base.bottomLeftCorner(n, n) = -s.gamma1.transpose();
  base.bottomRightCorner(n, n) = -s.gamma2;
  if (curvature.is_constant()) {
    Matrix m = base;
    m.topLeftCorner(n, n) = -curvature.constant_value();
    return [m](double) { return m; };
  }
  return [base, curvature, n](double t) {
    Matrix m = base;
    m.topLeftCorner(n, n) = -curvature(std::min(t, curvature.domain_end()));
    return m;
  };
}

RiccatiConjugateResult integrate_riccati_limit_ic(const StructuralMatrices& s,
                                                  const CurvatureField& curvature, double horizon,
                                                  const RiccatiOptions& options) {
  const int n = s.dimension();
  if (curvature.dimension() != n) {
    throw std::invalid_argument("curvature dimension does not match the structural matrices");
  }
  if (curvature.domain_end() < horizon) {
    throw std::invalid_argument("curvature field does not cover the requested horizon");
  }
  if (!is_controllable(s)) {
    throw std::invalid_argument("structural matrices violate the controllability condition");
  }
  RiccatiConjugateResult out;
  out.solution = solve_riccati_limit(jacobi_riccati_coefficients(s, curvature),
                                     Matrix::Zero(n, n), 0.0, horizon, options);
  if (out.solution.blowup_time) {
    out.conjugate = ConjugateTimeResult::finite(*out.solution.blowup_time, out.solution.blowup_lo,
                                                out.solution.blowup_hi, Witness::kBlowUp);
  } else {
    out.conjugate = ConjugateTimeResult::none_up_to(horizon);
  }
  out.conjugate.horizon = horizon;
  return out;
}

namespace {

// Positive when `upper` dominates `lower`; NaN when either side cannot be
// expressed in the direct phase.
double scaled_margin(const RiccatiSample& upper_of_x, const RiccatiSample& lower_of_x) {
  auto as_direct = [](const RiccatiSample& s, Matrix& x) {
    if (s.phase != RiccatiPhase::kInverse) {
      x = s.value;
      return true;
    }
    if (min_eigenvalue(s.value) <= 0.0) return false;
    x = symmetrized(s.value.inverse());
    return true;
  };
  if (upper_of_x.phase == RiccatiPhase::kInverse && lower_of_x.phase == RiccatiPhase::kInverse) {
    // X1 >= X2 > 0  <=>  Y1 <= Y2.
    const Matrix& y1 = upper_of_x.value;
    const Matrix& y2 = lower_of_x.value;
    return min_eigenvalue(y2 - y1) / (1.0 + operator_norm(y1) + operator_norm(y2));
  }
  Matrix x1, x2;
  if (!as_direct(upper_of_x, x1) || !as_direct(lower_of_x, x2)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return min_eigenvalue(x1 - x2) / (1.0 + operator_norm(x1) + operator_norm(x2));
}

RiccatiSolution solve_any(const RiccatiCoefficients& m, const Matrix& datum,
                          ComparisonInitialData::Kind kind, double t0, double t1,
                          const RiccatiOptions& options) {
  return kind == ComparisonInitialData::Kind::kLimit ? solve_riccati_limit(m, datum, t0, t1, options)
                                                     : solve_riccati(m, datum, t0, t1, options);
}

const RiccatiSample* at_grid(const RiccatiSolution& sol, int index) {
  for (const RiccatiSample& s : sol.history) {
    if (s.grid_index == index) return &s;
  }
  return nullptr;
}

}  // namespace

RiccatiOrderingReport riccati_comparison_check(const RiccatiCoefficients& m1,
                                               const RiccatiCoefficients& m2,
                                               const ComparisonInitialData& init, double t0,
                                               double horizon, const RiccatiOptions& options,
                                               double ordering_tolerance) {
  RiccatiOrderingReport report;
  const Eigen::Index n = init.first.rows();
  if (init.second.rows() != n || init.first.cols() != n || init.second.cols() != n) {
    throw std::invalid_argument("comparison initial data must share a square shape");
  }
  const double t1 = t0 + horizon;
  constexpr double kPreconditionTol = 1e-10;

  for (int k = 0; k <= options.grid_intervals; ++k) {
    const double t = t0 + horizon * k / options.grid_intervals;
    const Matrix a = m1(t), b = m2(t);
    check_coefficients(a, n);
    check_coefficients(b, n);
    const double scale = 1.0 + operator_norm(a) + operator_norm(b);
    if (min_eigenvalue(symmetrized(a - b)) < -kPreconditionTol * scale) {
      report.status = RiccatiOrderingReport::Status::kPreconditionViolated;
      report.violation_time = t;
      report.detail = "coefficient ordering M1 >= M2 fails";
      return report;
    }
  }
  {
    const Matrix diff = init.kind == ComparisonInitialData::Kind::kLimit
                            ? Matrix(init.second - init.first)
                            : Matrix(init.first - init.second);
    const double scale = 1.0 + operator_norm(init.first) + operator_norm(init.second);
    if (min_eigenvalue(symmetrized(diff)) < -kPreconditionTol * scale) {
      report.status = RiccatiOrderingReport::Status::kPreconditionViolated;
      report.violation_time = t0;
      report.detail = "initial data are not ordered";
      return report;
    }
  }

  const RiccatiSolution s1 = solve_any(m1, init.first, init.kind, t0, t1, options);
  const RiccatiSolution s2 = solve_any(m2, init.second, init.kind, t0, t1, options);
  report.common_end = std::min(s1.end_time, s2.end_time);
  report.min_margin = std::numeric_limits<double>::infinity();

  for (int k = 0; k <= options.grid_intervals; ++k) {
    const RiccatiSample* a = at_grid(s1, k);
    const RiccatiSample* b = at_grid(s2, k);
    if (!a || !b) break;
    const double margin = scaled_margin(*a, *b);
    if (std::isnan(margin)) continue;
    ++report.samples_checked;
    report.min_margin = std::min(report.min_margin, margin);
    if (margin >= -ordering_tolerance) continue;

    // Re-check with tighter integration before declaring a violation.
    RiccatiOptions tight = options;
    tight.tol = options.tol.tightened(100.0);
    tight.grid_intervals = std::max(1, k);
    const RiccatiSolution r1 = solve_any(m1, init.first, init.kind, t0, a->t, tight);
    const RiccatiSolution r2 = solve_any(m2, init.second, init.kind, t0, a->t, tight);
    const RiccatiSample* ta = at_grid(r1, tight.grid_intervals);
    const RiccatiSample* tb = at_grid(r2, tight.grid_intervals);
    const double tight_margin = (ta && tb) ? scaled_margin(*ta, *tb) : margin;
    if (!(tight_margin >= -ordering_tolerance)) {
      report.status = RiccatiOrderingReport::Status::kConclusionViolated;
      report.violation_time = a->t;
      report.detail = "X1(t) >= X2(t) fails after tighter re-integration";
      return report;
    }
  }
  if (report.samples_checked == 0) report.min_margin = 0.0;
  return report;
}

Matrix matrix_cauchy_schwarz_gap(const std::vector<Matrix>& x, const std::vector<Matrix>& y) {
  if (x.empty() || x.size() != y.size()) {
    throw std::invalid_argument("Cauchy-Schwarz gap needs r >= 1 matching pairs");
  }
  const Eigen::Index l = x.front().rows();
  for (std::size_t a = 0; a < x.size(); ++a) {
    if (x[a].rows() != l || x[a].cols() != l || y[a].rows() != l || y[a].cols() != l) {
      throw std::invalid_argument("Cauchy-Schwarz gap needs l x l matrices throughout");
    }
  }
  Matrix xy = Matrix::Zero(l, l), yy = Matrix::Zero(l, l), xx = Matrix::Zero(l, l);
  for (std::size_t a = 0; a < x.size(); ++a) {
    xy += x[a].transpose() * y[a];
    yy += y[a].transpose() * y[a];
    xx += x[a].transpose() * x[a];
  }
  return symmetrized(operator_norm(yy) * xx - xy * xy.transpose());
}

MonotonicityReport riccati_monotonicity_check(const StructuralMatrices& s, const Matrix& q,
                                              double horizon, const RiccatiOptions& options,
                                              double tolerance) {
  const RiccatiConjugateResult r =
      integrate_riccati_limit_ic(s, CurvatureField::constant(q), horizon, options);
  MonotonicityReport report;
  report.blowup_time = r.solution.blowup_time;
  const auto& h = r.solution.history;
  for (std::size_t k = 1; k < h.size(); ++k) {
    const RiccatiSample& prev = h[k - 1];
    const RiccatiSample& next = h[k];
    if (prev.phase != next.phase || next.phase == RiccatiPhase::kBlownUp) continue;
    // V non-increasing; in the inverse phase W = V^{-1} is non-decreasing.
    const Matrix step = next.phase == RiccatiPhase::kDirect ? Matrix(next.value - prev.value)
                                                            : Matrix(prev.value - next.value);
    const double scale = 1.0 + operator_norm(prev.value) + operator_norm(next.value);
    const double increase = -min_eigenvalue(-symmetrized(step)) / scale;
    ++report.samples_checked;
    if (increase > report.worst_increase) report.worst_increase = increase;
    if (increase > tolerance && report.holds) {
      report.holds = false;
      report.violation_time = next.t;
    }
  }
  return report;
}

}  // namespace conjtime
