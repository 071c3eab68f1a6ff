#include "conjtime/serialization.hpp"

#include <cmath>

#include <gtest/gtest.h>

namespace conjtime {
namespace {

TEST(SerializationTest, MatrixRoundTripIsExact) {
  Matrix m(2, 3);
  m << 0.1, -1.0 / 3.0, 1e-300, 2.0, std::nextafter(1.0, 2.0), -0.0;
  const Json j = matrix_to_json(m);
  EXPECT_EQ(matrix_from_json(Json::parse(j.dump())), m);
  EXPECT_THROW(matrix_from_json(Json::parse("[[1,2],[3]]")), std::invalid_argument);
  EXPECT_THROW(matrix_from_json(Json::parse("[]")), std::invalid_argument);
  EXPECT_THROW(matrix_from_json(Json::parse("[[\"a\"]]")), std::invalid_argument);
}

TEST(SerializationTest, FiniteResult) {
  const auto r = ConjugateTimeResult::finite(3.0, 2.5, 3.5, Witness::kSignChange);
  const Json j = to_json(r);
  EXPECT_EQ(j.begin().key(), "verdict");
  EXPECT_EQ(j["verdict"], "finite");
  EXPECT_EQ(j["tc"], 3.0);
  EXPECT_EQ(j["witness"], "sign_change");
  EXPECT_FALSE(j.contains("horizon"));
}

TEST(SerializationTest, OtherVerdicts) {
  const Json none = to_json(ConjugateTimeResult::none_up_to(12.0));
  EXPECT_EQ(none["verdict"], "none_up_to_horizon");
  EXPECT_EQ(none["horizon"], 12.0);
  EXPECT_FALSE(none.contains("tc"));
  const Json inf = to_json(ConjugateTimeResult::certified_infinite("zero-potential"));
  EXPECT_EQ(inf["verdict"], "certified_infinite");
  EXPECT_EQ(inf["certificate"], "zero-potential");
}

TEST(SerializationTest, CurvatureFieldRoundTrip) {
  Matrix a(2, 2), b(2, 2);
  a << 1, 2, 2, 3;
  b << -1, 0.5, 0.5, 0.25;
  const CurvatureField sampled = CurvatureField::sampled({0.0, 0.5, 2.0}, {a, b, a});
  const CurvatureField back = curvature_field_from_json(Json::parse(to_json(sampled).dump()));
  for (double t : {0.0, 0.3, 0.5, 1.7, 2.0}) EXPECT_EQ(back(t), sampled(t));

  const CurvatureField constant = CurvatureField::constant(a);
  EXPECT_EQ(curvature_field_from_json(to_json(constant))(4.0), a);

  EXPECT_THROW(to_json(CurvatureField::closed_form(1, [](double) { return Matrix::Zero(1, 1); })),
               std::invalid_argument);
  EXPECT_THROW(curvature_field_from_json(Json{{"kind", "spline"}}), std::invalid_argument);
}

TEST(SerializationTest, ModelRoundTrips) {
  Matrix q(3, 3);
  q << 1, 0.1, 0, 0.1, 2, 0, 0, 0, -1;
  const LqModel m(YoungDiagram::parse("2,1"), q);
  const LqModel back = lq_model_from_json(Json::parse(to_json(m).dump()));
  EXPECT_EQ(back.diagram(), m.diagram());
  EXPECT_EQ(back.potential(), m.potential());

  const DiagonalRowModel row({1.5, -0.25, 3.0});
  EXPECT_EQ(diagonal_row_model_from_json(to_json(row)).kappas(), row.kappas());
  EXPECT_THROW(diagonal_row_model_from_json(Json{{"l", 2}, {"kappas", {1.0}}}),
               std::invalid_argument);
}

TEST(SerializationTest, ComparisonReportUsesNullForInfinity) {
  ComparisonReport report;
  report.geodesic = ConjugateTimeResult::finite(1.0, 1.0, 1.0, Witness::kSignChange);
  report.model = ConjugateTimeResult::certified_infinite("finiteness-polynomial");
  report.margin = std::numeric_limits<double>::infinity();
  report.verdict = ComparisonVerdict::kPass;
  const Json j = to_json(report);
  EXPECT_EQ(j["tc_geodesic"], 1.0);
  EXPECT_TRUE(j["tc_model"].is_null());
  EXPECT_TRUE(j["margin"].is_null());
  EXPECT_EQ(j["verdict"], "pass");
}

TEST(SerializationTest, NumbersRoundTripThroughText) {
  const double values[] = {0.1, 1.0 / 3.0, 6.283185307179586, 1e-17, 123456789.123456789};
  for (double v : values) {
    const Json j = v;
    EXPECT_EQ(Json::parse(j.dump()).get<double>(), v);
  }
}

}  // namespace
}  // namespace conjtime
