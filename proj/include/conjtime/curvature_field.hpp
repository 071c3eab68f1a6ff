#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <vector>

#include "conjtime/young_diagram.hpp"

namespace conjtime {

/// Time-dependent symmetric curvature matrix R(t) along an extremal.
///
/// Values are symmetrized on read. The field is defined on [0, domain_end()];
/// evaluating outside that interval throws std::out_of_range.
class CurvatureField {
 public:
  enum class Kind { kConstant, kClosedForm, kSampled };

  using Evaluator = std::function<Matrix(double)>;

  static CurvatureField constant(Matrix q);
  static CurvatureField closed_form(int dimension, Evaluator f,
                                    double domain_end = std::numeric_limits<double>::infinity());
  /// Piecewise-linear interpolation of (time, matrix) samples. Times must
  /// start at 0 and be strictly increasing.
  static CurvatureField sampled(std::vector<double> times, std::vector<Matrix> values);

  Matrix operator()(double t) const;

  int dimension() const { return dimension_; }
  Kind kind() const { return kind_; }
  double domain_end() const { return domain_end_; }
  bool is_constant() const { return kind_ == Kind::kConstant; }
  /// Only meaningful for constant fields.
  const Matrix& constant_value() const { return constant_; }

  const std::vector<double>& sample_times() const { return times_; }
  const std::vector<Matrix>& sample_values() const { return values_; }

 private:
  CurvatureField() = default;

  Kind kind_ = Kind::kConstant;
  int dimension_ = 0;
  double domain_end_ = std::numeric_limits<double>::infinity();
  Matrix constant_;
  Evaluator evaluator_;
  std::vector<double> times_;
  std::vector<Matrix> values_;
};

/// 0.5 * (m + m^T)
Matrix symmetrized(const Matrix& m);

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Matrix& symmetric);

/// Spectral norm.
double operator_norm(const Matrix& m);

}  // namespace conjtime
