#include <algorithm>
#include <fstream>
#include <sstream>

#include "qcalc/json_io.hpp"
#include "qcalc/measure.hpp"
#include "qcalc/operator.hpp"
#include "test_util.hpp"

using namespace qcalc;

namespace {

std::string where_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ParseError& e) {
    return e.where();
  }
  return "no error";
}

}  // namespace

TEST(JsonIo, QuaternionRoundTrip) {
  const Quaternion q(0.1, -2.5, 1e-300, 3.0);
  EXPECT_EQ(quaternion_from_json(quaternion_to_json(q), "q"), q);
  EXPECT_EQ(quaternion_from_json(Json(2.5), "q"), Quaternion(2.5));
  EXPECT_THROW(quaternion_from_json(Json::parse("[1, 2]"), "q"), ParseError);
  EXPECT_THROW(quaternion_from_json(Json("x"), "q"), ParseError);
}

TEST(JsonIo, MatrixAndVectorRoundTrip) {
  std::mt19937_64 rng(8);
  const QMatrix m = qt::random_m(rng, 3);
  EXPECT_EQ(max_abs_diff(matrix_from_json(matrix_to_json(m), "m"), m), 0.0);
  const QVector v = qt::random_v(rng, 3);
  EXPECT_EQ(max_abs_diff(vector_from_json(vector_to_json(v), "v"), v), 0.0);
  const QMatrix d = matrix_from_json(Json::parse(R"({"diag": [[0, 1, 0, 0], 3]})"), "m");
  EXPECT_EQ(max_abs_diff(d, QMatrix::diag({Quaternion::e1(), Quaternion(3.0)})), 0.0);
  EXPECT_THROW(matrix_from_json(Json::parse(R"({"n": 2, "entries": [[1, 2]]})"), "m"), ParseError);
}

TEST(JsonIo, Spectrum) {
  const Json j = spectrum_to_json(s_spectrum(QMatrix::diag({Quaternion(1, 2, 0, 0), Quaternion(3.0)})));
  ASSERT_EQ(j.at("spheres").size(), 2u);
  EXPECT_NEAR(j["spheres"][0]["x0"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(j["spheres"][0]["x1"].get<double>(), 2.0, 1e-12);
  EXPECT_NEAR(j["spheres"][1]["x0"].get<double>(), 3.0, 1e-12);
  EXPECT_NEAR(j["spheres"][1]["x1"].get<double>(), 0.0, 1e-12);
}

TEST(JsonIo, MeasureRoundTrip) {
  ExpDensity d;
  d.c = Quaternion(1, 0, 2, 0);
  d.lambda = Quaternion(-1.0, 0.5, 0, 0);
  d.lo = 0.0;
  d.d = Quaternion(0, 0, 0, 1);
  d.poly = {1.0, 2.0};
  const QMeasure m({{0.5, Quaternion::e3()}}, {d});
  const QMeasure back = measure_from_json(measure_to_json(m), "m");
  const Quaternion s(0.2, 0.4, -0.1, 0.3);
  EXPECT_Q_NEAR(laplace_stieltjes(back, s), laplace_stieltjes(m, s), 1e-15);
  EXPECT_TRUE(measure_to_json(m)["densities"][0]["interval"][1].is_null());

  const QMeasure k = measure_from_json(Json::parse(R"({"kernel": {"p": 10}})"), "m");
  EXPECT_Q_NEAR(laplace_stieltjes(k, Quaternion(1.0)), Quaternion(1.0 / 9.0), 1e-15);
  EXPECT_THROW(measure_from_json(Json::parse(R"({"atoms": [{"a": 1}]})"), "m"), ParseError);
}

TEST(JsonIo, FunctionRoundTrip) {
  const std::map<std::string, QMeasure> named{{"mu", kernel_measure(Quaternion(4.0))}};
  const Quaternion x(0.3, 0.2, -0.5, 0.1);
  const char* texts[] = {
      R"({"form": "polynomial", "coefficients": [[0, 1, 0, 0], 0, 1]})",
      R"({"form": "kernel_power", "p": [3, 1, 0, 0], "n": 2})",
      R"({"form": "exp_kernel", "a": 1.5})",
      R"({"form": "transform", "measure": "mu"})",
      R"({"form": "product", "left": {"form": "polynomial", "coefficients": [1, 1]},
          "right": {"form": "exp_kernel", "a": -1}})",
  };
  for (const char* t : texts) {
    const SliceFunction f = function_from_json(Json::parse(t), "f", named);
    const SliceFunction g = function_from_json(function_to_json(f), "f", named);
    EXPECT_Q_NEAR(eval(g, x), eval(f, x), 1e-15) << t;
  }
  EXPECT_THROW(function_from_json(Json::parse(R"({"form": "transform", "measure": "nope"})"), "f", named),
               ParseError);
  EXPECT_THROW(function_from_json(Json::parse(R"({"form": "bessel"})"), "f"), ParseError);
  const Stem stem{ImaginaryUnit::e1(), [](std::complex<double>) { return Quaternion(); }, Domain::whole()};
  EXPECT_THROW(function_to_json(stem), UnsupportedError);
}

TEST(JsonIo, Units) {
  EXPECT_EQ(unit_from_json(Json("e2"), "u").q(), Quaternion::e2());
  EXPECT_Q_NEAR(unit_from_json(Json::parse("[0, 0, 3, 4]"), "u").q(), Quaternion(0, 0, 0.6, 0.8), 1e-15);
  EXPECT_EQ(unit_from_json(unit_to_json(ImaginaryUnit::e3()), "u").q(), Quaternion::e3());
  EXPECT_THROW(unit_from_json(Json("e4"), "u"), ParseError);
}

TEST(JsonIo, ConfigRoundTrip) {
  std::ifstream in(QCALC_SOURCE_DIR "/configs/demo.json");
  std::stringstream text;
  text << in.rdbuf();
  const RunConfig c = parse_config(text.str());
  ASSERT_TRUE(c.op.has_value());
  EXPECT_EQ(c.commands.size(), 6u);
  EXPECT_EQ(c.measures.size(), 2u);
  const Json once = config_to_json(c);
  const RunConfig again = config_from_json(once);
  EXPECT_EQ(config_to_json(again).dump(), once.dump());
  EXPECT_EQ(max_abs_diff(*again.op, *c.op), 0.0);
}

TEST(JsonIo, ErrorLocations) {
  EXPECT_EQ(where_of("{\n  \"commands\": [\n    {\"verb\": }\n  ]\n}"), "line 3, column 14");
  EXPECT_EQ(where_of(R"({"commands": [{"verb": "spectrum"}, {"verb": "calc"}, {"params": {}}]})"), "commands[2].verb");
  EXPECT_EQ(where_of(R"({"measures": {"m": {"kernel": {"p": "x"}}}})"), "measures.m.kernel.p");
  EXPECT_EQ(where_of(R"({"schema_version": 7})"), "schema_version");
  EXPECT_EQ(where_of("{}"), "no error");
}

TEST(JsonIo, NumberHelpers) {
  const Json j = Json::parse(R"({"a": 2, "b": "x"})");
  EXPECT_EQ(json_number(j, "a", "p"), 2.0);
  EXPECT_EQ(json_number_or(j, "c", 5.0, "p"), 5.0);
  EXPECT_THROW(json_number(j, "b", "p"), ParseError);
  EXPECT_THROW(json_number(j, "c", "p"), ParseError);
}

TEST(JsonIo, ShippedSchemaMatchesParser) {
  std::ifstream in(QCALC_SOURCE_DIR "/schema/config.schema.json");
  const Json schema = Json::parse(in);
  EXPECT_EQ(schema["properties"]["schema_version"]["const"].get<int>(), kConfigSchemaVersion);
  std::ifstream demo(QCALC_SOURCE_DIR "/configs/demo.json");
  const Json emitted = config_to_json(config_from_json(Json::parse(demo)));
  for (const auto& [key, value] : emitted.items()) {
    EXPECT_TRUE(schema["properties"].contains(key)) << key;
  }
  const auto& verbs = schema["$defs"]["command"]["properties"]["verb"]["enum"];
  for (const auto& cmd : emitted["commands"]) {
    EXPECT_NE(std::find(verbs.begin(), verbs.end(), cmd["verb"]), verbs.end());
  }
}
