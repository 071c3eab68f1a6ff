#include "conjtime/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace conjtime {

CurvatureBoundSpec CurvatureBoundSpec::sectional_lower(YoungDiagram diagram, Matrix q) {
  CurvatureBoundSpec s;
  s.kind = Kind::kSectionalLower;
  s.diagram = std::move(diagram);
  s.q = std::move(q);
  s.validate();
  return s;
}

CurvatureBoundSpec CurvatureBoundSpec::sectional_upper(YoungDiagram diagram, Matrix q) {
  CurvatureBoundSpec s = sectional_lower(std::move(diagram), std::move(q));
  s.kind = Kind::kSectionalUpper;
  return s;
}

CurvatureBoundSpec CurvatureBoundSpec::ricci_level(YoungDiagram diagram, int level,
                                                   std::vector<double> kappas) {
  CurvatureBoundSpec s;
  s.kind = Kind::kRicciLevel;
  s.diagram = std::move(diagram);
  s.level = level;
  s.kappas = std::move(kappas);
  s.validate();
  return s;
}

void CurvatureBoundSpec::validate() const {
  const int n = diagram.total_boxes();
  if (kind == Kind::kRicciLevel) {
    const auto levels = levels_and_superboxes(diagram);
    if (level < 0 || level >= static_cast<int>(levels.size())) {
      throw std::invalid_argument("level index out of range for diagram " + diagram.to_string());
    }
    if (static_cast<int>(kappas.size()) != levels[level].length) {
      throw std::invalid_argument("Ricci bound needs one constant per superbox of the level");
    }
    return;
  }
  if (q.rows() != n || q.cols() != n) {
    throw std::invalid_argument("sectional bound matrix does not match the diagram size");
  }
  if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + q.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("sectional bound matrix must be symmetric");
  }
}

std::string_view to_string(CurvatureBoundSpec::Kind kind) {
  switch (kind) {
    case CurvatureBoundSpec::Kind::kSectionalLower: return "sectional-lower";
    case CurvatureBoundSpec::Kind::kSectionalUpper: return "sectional-upper";
    case CurvatureBoundSpec::Kind::kRicciLevel: return "ricci-level";
  }
  return "unknown";
}

std::string_view to_string(ComparisonVerdict v) {
  switch (v) {
    case ComparisonVerdict::kPass: return "pass";
    case ComparisonVerdict::kFail: return "fail";
    case ComparisonVerdict::kVacuous: return "vacuous";
    case ComparisonVerdict::kInconclusive: return "inconclusive";
  }
  return "unknown";
}

ModelBound sectional_bound(const CurvatureBoundSpec& spec, const LqOptions& options) {
  if (spec.kind == CurvatureBoundSpec::Kind::kRicciLevel) {
    throw std::invalid_argument("sectional_bound needs a sectional specification");
  }
  spec.validate();
  ModelBound b;
  b.direction = spec.kind == CurvatureBoundSpec::Kind::kSectionalLower
                    ? BoundDirection::kUpperBoundOnTc
                    : BoundDirection::kLowerBoundOnTc;
  b.model = lq_conjugate_time(LqModel(spec.diagram, spec.q), options);
  return b;
}

namespace {

ConjugateTimeResult row_model_time(const DiagonalRowModel& row, Finiteness finiteness,
                                   const LqOptions& options) {
  if (finiteness == Finiteness::kInfinite) {
    return ConjugateTimeResult::certified_infinite("finiteness-polynomial");
  }
  if (const auto exact = closed_form_tc(row)) {
    if (!std::isfinite(*exact)) return ConjugateTimeResult::certified_infinite("closed-form");
    ConjugateTimeResult r = ConjugateTimeResult::finite(*exact, *exact, *exact, Witness::kClosedForm);
    return r;
  }
  ConjugateTimeResult r = lq_numeric_conjugate_time(row.to_model(), options);
  if (finiteness == Finiteness::kFinite && !r.is_finite()) {
    r.flagged = true;
    r.diagnostic = "finiteness certified but no conjugate time found up to the horizon";
  }
  return r;
}

}  // namespace

ModelBound ricci_bound(const CurvatureBoundSpec& spec, const LqOptions& options) {
  if (spec.kind != CurvatureBoundSpec::Kind::kRicciLevel) {
    throw std::invalid_argument("ricci_bound needs a Ricci-level specification");
  }
  spec.validate();
  const DiagonalRowModel row(spec.kappas);
  ModelBound b;
  b.direction = BoundDirection::kUpperBoundOnTc;
  b.finiteness = classify_finiteness(row).verdict;
  b.model = row_model_time(row, *b.finiteness, options);
  return b;
}

std::optional<double> bonnet_myers_diameter(int length, int size, const std::vector<double>& kappas,
                                            const LqOptions& options) {
  if (length < 1 || size < 1 || static_cast<int>(kappas.size()) != length) {
    throw std::invalid_argument("diameter bound needs l >= 1, r >= 1 and l constants");
  }
  const DiagonalRowModel row(kappas);
  if (classify_finiteness(row).verdict != Finiteness::kFinite) return std::nullopt;
  const ConjugateTimeResult r = row_model_time(row, Finiteness::kFinite, options);
  if (!r.is_finite()) return std::nullopt;
  return r.time;
}

ComparisonReport verify_comparison(const CurvatureField& curvature, const CurvatureBoundSpec& spec,
                                   double horizon, const ComparisonOptions& options) {
  spec.validate();
  const int n = spec.diagram.total_boxes();
  if (curvature.dimension() != n) {
    throw std::invalid_argument("curvature dimension does not match the diagram");
  }
  ComparisonReport report;

  // Hypothesis on the integration grid.
  const int samples = options.lq.jacobi.grid_intervals;
  std::vector<Level> levels = levels_and_superboxes(spec.diagram);
  report.hypothesis_margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= samples; ++k) {
    const double t = horizon * k / samples;
    const Matrix r = curvature(t);
    double slack = 0.0, scale = 1.0 + operator_norm(r);
    switch (spec.kind) {
      case CurvatureBoundSpec::Kind::kSectionalLower:
        slack = min_eigenvalue(r - spec.q);
        scale += operator_norm(spec.q);
        break;
      case CurvatureBoundSpec::Kind::kSectionalUpper:
        slack = min_eigenvalue(spec.q - r);
        scale += operator_norm(spec.q);
        break;
      case CurvatureBoundSpec::Kind::kRicciLevel: {
        const Level& lev = levels[spec.level];
        const std::vector<double> ric = partial_trace_ricci(r, spec.diagram, lev);
        slack = std::numeric_limits<double>::infinity();
        for (int i = 0; i < lev.length; ++i) {
          slack = std::min(slack, ric[i] / lev.size - spec.kappas[i]);
          scale = std::max(scale, 1.0 + std::abs(spec.kappas[i]));
        }
        break;
      }
    }
    report.hypothesis_margin = std::min(report.hypothesis_margin, slack);
    if (slack < -options.hypothesis_tolerance * scale && !report.hypothesis_violation_time) {
      report.hypothesis_violation_time = t;
    }
  }
  if (report.hypothesis_violation_time) {
    report.verdict = ComparisonVerdict::kVacuous;
    report.detail = "curvature hypothesis fails at t = " +
                    std::to_string(*report.hypothesis_violation_time);
    return report;
  }

  const ModelBound bound = spec.kind == CurvatureBoundSpec::Kind::kRicciLevel
                               ? ricci_bound(spec, options.lq)
                               : sectional_bound(spec, options.lq);
  report.model = bound.model;
  report.direction = bound.direction;

  const JacobiTrajectory traj = integrate_jacobi(build_structural_matrices(spec.diagram),
                                                 curvature, horizon, options.lq.jacobi);
  report.geodesic = first_conjugate_time(traj, options.lq.search);

  const double slack = options.inequality_factor * options.lq.search.refinement_tolerance;
  const double tg = report.geodesic.time_or_infinity();
  const double tm = report.model.time_or_infinity();
  if (bound.direction == BoundDirection::kUpperBoundOnTc) {
    report.margin = tm - tg;
    if (!std::isfinite(tm)) {
      report.verdict = ComparisonVerdict::kPass;
      report.detail = "model time is infinite; the bound carries no information";
    } else if (tm > horizon) {
      report.verdict = report.geodesic.is_finite() ? ComparisonVerdict::kPass
                                                   : ComparisonVerdict::kInconclusive;
      if (!report.geodesic.is_finite()) report.detail = "model time lies beyond the horizon";
    } else {
      report.verdict = tg <= tm + slack ? ComparisonVerdict::kPass : ComparisonVerdict::kFail;
    }
  } else {
    report.margin = tg - tm;
    if (!report.geodesic.is_finite()) {
      // t_c(geodesic) > horizon.
      report.verdict = (!std::isfinite(tm) || tm <= horizon + slack)
                           ? ComparisonVerdict::kPass
                           : ComparisonVerdict::kInconclusive;
    } else {
      report.verdict = tg >= tm - slack ? ComparisonVerdict::kPass : ComparisonVerdict::kFail;
    }
  }
  if (report.geodesic.flagged || report.model.flagged) {
    if (report.verdict == ComparisonVerdict::kPass) report.verdict = ComparisonVerdict::kInconclusive;
    report.detail = report.geodesic.flagged ? report.geodesic.diagnostic : report.model.diagnostic;
  }
  return report;
}

}  // namespace conjtime
