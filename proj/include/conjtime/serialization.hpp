#pragma once

#include <json.hpp>

#include "conjtime/comparison.hpp"
#include "conjtime/conjugate_time.hpp"
#include "conjtime/curvature_field.hpp"
#include "conjtime/lq_models.hpp"

namespace conjtime {

using Json = nlohmann::ordered_json;

Json matrix_to_json(const Matrix& m);
/// Throws std::invalid_argument on ragged or non-numeric input.
Matrix matrix_from_json(const Json& j);

/// {"verdict", "tc", "t_lo", "t_hi", "horizon", "witness", "certificate", "flagged", "diagnostic"}
/// with only the fields that apply to the verdict.
Json to_json(const ConjugateTimeResult& r);

/// Constant: {"kind": "constant", "dimension": n, "value": [[..]]}.
/// Sampled:  {"kind": "sampled", "interpolation": "linear", "dimension": n,
///            "times": [..], "values": [[[..]], ..]}.
/// Closed-form fields are not serializable (std::invalid_argument).
Json to_json(const CurvatureField& field);
CurvatureField curvature_field_from_json(const Json& j);

/// {"rows": [..], "Q": [[..]]}
Json to_json(const LqModel& model);
LqModel lq_model_from_json(const Json& j);
/// {"l": l, "kappas": [..]}
Json to_json(const DiagonalRowModel& model);
DiagonalRowModel diagonal_row_model_from_json(const Json& j);

Json to_json(const FinitenessClassification& c);

/// {"tc_geodesic", "tc_model", "margin", "verdict", ...}; infinite times are null.
Json to_json(const ComparisonReport& report);

}  // namespace conjtime
