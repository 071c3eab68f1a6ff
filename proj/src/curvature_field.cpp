#include "conjtime/curvature_field.hpp"

#include <algorithm>
#include <stdexcept>

namespace conjtime {

Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

double min_eigenvalue(const Matrix& symmetric) {
  if (symmetric.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetric, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

CurvatureField CurvatureField::constant(Matrix q) {
  if (q.rows() != q.cols() || q.rows() == 0) {
    throw std::invalid_argument("curvature matrix must be square and non-empty");
  }
  CurvatureField f;
  f.kind_ = Kind::kConstant;
  f.dimension_ = static_cast<int>(q.rows());
  f.constant_ = symmetrized(q);
  return f;
}

CurvatureField CurvatureField::closed_form(int dimension, Evaluator evaluator, double domain_end) {
  if (dimension <= 0 || !evaluator) {
    throw std::invalid_argument("closed-form curvature needs a dimension and an evaluator");
  }
  if (!(domain_end > 0.0)) {
    throw std::invalid_argument("closed-form curvature domain must extend past t = 0");
  }
  CurvatureField f;
  f.kind_ = Kind::kClosedForm;
  f.dimension_ = dimension;
  f.evaluator_ = std::move(evaluator);
  f.domain_end_ = domain_end;
  return f;
}

CurvatureField CurvatureField::sampled(std::vector<double> times, std::vector<Matrix> values) {
  if (times.size() < 2 || times.size() != values.size()) {
    throw std::invalid_argument("sampled curvature needs at least two (time, matrix) pairs");
  }
  if (times.front() != 0.0) {
    throw std::invalid_argument("sampled curvature must start at t = 0");
  }
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) {
      throw std::invalid_argument("sample times must be strictly increasing");
    }
  }
  const Eigen::Index n = values.front().rows();
  for (const Matrix& v : values) {
    if (v.rows() != n || v.cols() != n || n == 0) {
      throw std::invalid_argument("sampled curvature matrices must share a square shape");
    }
  }
  CurvatureField f;
  f.kind_ = Kind::kSampled;
  f.dimension_ = static_cast<int>(n);
  f.domain_end_ = times.back();
  f.times_ = std::move(times);
  f.values_ = std::move(values);
  return f;
}

Matrix CurvatureField::operator()(double t) const {
  if (t < 0.0 || t > domain_end_) {
    throw std::out_of_range("curvature evaluated outside its domain at t = " + std::to_string(t));
  }
  switch (kind_) {
    case Kind::kConstant:
      return constant_;
    case Kind::kClosedForm: {
      Matrix r = evaluator_(t);
      if (r.rows() != dimension_ || r.cols() != dimension_) {
        throw std::runtime_error("closed-form curvature returned a matrix of the wrong size");
      }
      return symmetrized(r);
    }
    case Kind::kSampled: {
      auto it = std::upper_bound(times_.begin(), times_.end(), t);
      std::size_t hi = static_cast<std::size_t>(it - times_.begin());
      if (hi >= times_.size()) return symmetrized(values_.back());
      const std::size_t lo = hi - 1;
      const double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
      return symmetrized((1.0 - w) * values_[lo] + w * values_[hi]);
    }
  }
  return constant_;
}

}  // namespace conjtime
