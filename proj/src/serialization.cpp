#include "conjtime/serialization.hpp"

#include <cmath>
#include <stdexcept>

namespace conjtime {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kFinite: return "finite";
    case Verdict::kNoneUpToHorizon: return "none_up_to_horizon";
    case Verdict::kCertifiedInfinite: return "certified_infinite";
  }
  return "unknown";
}

std::string_view to_string(Witness w) {
  switch (w) {
    case Witness::kNone: return "none";
    case Witness::kSignChange: return "sign_change";
    case Witness::kRankDrop: return "rank_drop";
    case Witness::kBlowUp: return "blow_up";
    case Witness::kClosedForm: return "closed_form";
  }
  return "unknown";
}

namespace {

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix must be a non-empty array");
  const std::size_t rows = j.size();
  const std::size_t cols = j.front().is_array() ? j.front().size() : 0;
  if (cols == 0) throw std::invalid_argument("matrix rows must be non-empty arrays");
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) {
      throw std::invalid_argument("matrix rows must all have " + std::to_string(cols) + " entries");
    }
    for (std::size_t k = 0; k < cols; ++k) {
      if (!j[i][k].is_number()) throw std::invalid_argument("matrix entries must be numbers");
      m(i, k) = j[i][k].get<double>();
    }
  }
  return m;
}

Json to_json(const ConjugateTimeResult& r) {
  Json j;
  j["verdict"] = std::string(to_string(r.verdict));
  switch (r.verdict) {
    case Verdict::kFinite:
      j["tc"] = r.time;
      j["t_lo"] = r.t_lo;
      j["t_hi"] = r.t_hi;
      j["witness"] = std::string(to_string(r.witness));
      break;
    case Verdict::kNoneUpToHorizon:
      j["horizon"] = number_or_null(r.horizon);
      break;
    case Verdict::kCertifiedInfinite:
      j["certificate"] = r.certificate;
      break;
  }
  j["flagged"] = r.flagged;
  if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
  return j;
}

Json to_json(const CurvatureField& field) {
  Json j;
  switch (field.kind()) {
    case CurvatureField::Kind::kConstant:
      j["kind"] = "constant";
      j["dimension"] = field.dimension();
      j["value"] = matrix_to_json(field.constant_value());
      return j;
    case CurvatureField::Kind::kSampled: {
      j["kind"] = "sampled";
      j["interpolation"] = "linear";
      j["dimension"] = field.dimension();
      j["times"] = field.sample_times();
      Json values = Json::array();
      for (const Matrix& m : field.sample_values()) values.push_back(matrix_to_json(m));
      j["values"] = std::move(values);
      return j;
    }
    case CurvatureField::Kind::kClosedForm:
      break;
  }
  throw std::invalid_argument("closed-form curvature fields cannot be serialized; sample them first");
}

CurvatureField curvature_field_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind")) {
    throw std::invalid_argument("curvature field JSON needs a \"kind\" member");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") {
    Matrix q = matrix_from_json(j.at("value"));
    if (q.rows() != q.cols()) throw std::invalid_argument("constant curvature must be square");
    return CurvatureField::constant(std::move(q));
  }
  if (kind == "sampled") {
    if (j.contains("interpolation") && j.at("interpolation") != "linear") {
      throw std::invalid_argument("only linear interpolation is supported");
    }
    std::vector<double> times = j.at("times").get<std::vector<double>>();
    std::vector<Matrix> values;
    for (const Json& v : j.at("values")) values.push_back(matrix_from_json(v));
    return CurvatureField::sampled(std::move(times), std::move(values));
  }
  throw std::invalid_argument("unknown curvature field kind \"" + kind + "\"");
}

Json to_json(const LqModel& model) {
  Json j;
  j["rows"] = model.diagram().row_lengths();
  j["Q"] = matrix_to_json(model.potential());
  return j;
}

LqModel lq_model_from_json(const Json& j) {
  return LqModel(YoungDiagram(j.at("rows").get<std::vector<int>>()), matrix_from_json(j.at("Q")));
}

Json to_json(const DiagonalRowModel& model) {
  Json j;
  j["l"] = model.length();
  j["kappas"] = model.kappas();
  return j;
}

DiagonalRowModel diagonal_row_model_from_json(const Json& j) {
  std::vector<double> kappas = j.at("kappas").get<std::vector<double>>();
  if (j.contains("l") && j.at("l").get<int>() != static_cast<int>(kappas.size())) {
    throw std::invalid_argument("\"l\" does not match the number of kappas");
  }
  return DiagonalRowModel(std::move(kappas));
}

Json to_json(const FinitenessClassification& c) {
  Json j;
  j["verdict"] = std::string(to_string(c.verdict));
  j["polynomial"] = c.polynomial.coefficients();
  if (c.witness_root) j["witness_root"] = *c.witness_root;
  Json roots = Json::array();
  for (const RealRoot& r : c.negative_roots) {
    roots.push_back({{"value", r.value}, {"simple", r.simple}, {"derivative", r.derivative}});
  }
  j["negative_roots"] = std::move(roots);
  return j;
}

Json to_json(const ComparisonReport& report) {
  Json j;
  j["tc_geodesic"] = number_or_null(report.geodesic.time_or_infinity());
  j["tc_model"] = number_or_null(report.model.time_or_infinity());
  j["margin"] = number_or_null(report.margin);
  j["verdict"] = std::string(to_string(report.verdict));
  j["direction"] = report.direction == BoundDirection::kUpperBoundOnTc ? "upper_bound_on_tc"
                                                                       : "lower_bound_on_tc";
  j["hypothesis_margin"] = number_or_null(report.hypothesis_margin);
  if (report.hypothesis_violation_time) {
    j["hypothesis_violation_time"] = *report.hypothesis_violation_time;
  }
  j["geodesic"] = to_json(report.geodesic);
  j["model"] = to_json(report.model);
  if (!report.detail.empty()) j["detail"] = report.detail;
  return j;
}

}  // namespace conjtime
