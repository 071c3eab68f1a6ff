#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conjtime/conjugate_time.hpp"
#include "conjtime/curvature_field.hpp"
#include "conjtime/lq_models.hpp"
#include "conjtime/young_diagram.hpp"

namespace conjtime {

/// Curvature hypothesis along a geodesic with diagram `diagram`.
///
///   kSectionalLower: R(t) >= q          (gives t_c <= t_c(Y; q))
///   kSectionalUpper: R(t) <= q          (gives t_c >= t_c(Y; q))
///   kRicciLevel:     Ric^{a_i}(t) / r >= kappas[i] on level `level`
///                                       (gives t_c <= t_c(kappa_1..kappa_l))
struct CurvatureBoundSpec {
  enum class Kind { kSectionalLower, kSectionalUpper, kRicciLevel };

  Kind kind = Kind::kSectionalLower;
  YoungDiagram diagram = YoungDiagram::riemannian(1);
  Matrix q;
  int level = 0;
  std::vector<double> kappas;

  static CurvatureBoundSpec sectional_lower(YoungDiagram diagram, Matrix q);
  static CurvatureBoundSpec sectional_upper(YoungDiagram diagram, Matrix q);
  static CurvatureBoundSpec ricci_level(YoungDiagram diagram, int level,
                                        std::vector<double> kappas);

  /// Throws std::invalid_argument on inconsistent sizes.
  void validate() const;
};

std::string_view to_string(CurvatureBoundSpec::Kind kind);

enum class BoundDirection { kUpperBoundOnTc, kLowerBoundOnTc };

struct ModelBound {
  ConjugateTimeResult model;
  BoundDirection direction = BoundDirection::kUpperBoundOnTc;
  /// Only set for Ricci-level bounds.
  std::optional<Finiteness> finiteness;
};

ModelBound sectional_bound(const CurvatureBoundSpec& spec, const LqOptions& options = {});
ModelBound ricci_bound(const CurvatureBoundSpec& spec, const LqOptions& options = {});

/// t_c(kappa_1..kappa_l) when the polynomial condition certifies finiteness.
std::optional<double> bonnet_myers_diameter(int length, int size, const std::vector<double>& kappas,
                                            const LqOptions& options = {});

enum class ComparisonVerdict { kPass, kFail, kVacuous, kInconclusive };
std::string_view to_string(ComparisonVerdict v);

struct ComparisonReport {
  ConjugateTimeResult geodesic;
  ConjugateTimeResult model;
  BoundDirection direction = BoundDirection::kUpperBoundOnTc;
  /// Smallest hypothesis slack over the samples (negative when violated).
  double hypothesis_margin = 0.0;
  std::optional<double> hypothesis_violation_time;
  /// t_c(model) - t_c(geodesic) for upper bounds, reversed for lower bounds;
  /// may be infinite.
  double margin = 0.0;
  ComparisonVerdict verdict = ComparisonVerdict::kInconclusive;
  std::string detail;
};

struct ComparisonOptions {
  LqOptions lq;
  /// Relative slack for sampled hypothesis checks.
  double hypothesis_tolerance = 1e-9;
  /// Inequality slack in units of the refinement tolerance.
  double inequality_factor = 10.0;
};

/// Checks the hypothesis on the integration grid, computes the geodesic and
/// model conjugate times, and asserts the comparison inequality.
ComparisonReport verify_comparison(const CurvatureField& curvature, const CurvatureBoundSpec& spec,
                                   double horizon, const ComparisonOptions& options = {});

}  // namespace conjtime
