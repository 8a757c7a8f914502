#pragma once

// JSON encodings of the library types and of the batch run configuration.

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcalc/calculus.hpp"
#include "qcalc/errors.hpp"

QCALC_NS_BEGIN

using Json = nlohmann::ordered_json;

inline constexpr int kConfigSchemaVersion = 1;

/// Malformed document or field; `where` is "line L, column C" for syntax
/// errors and a field path such as "commands[2].alpha" otherwise.
class ParseError : public Error {
 public:
  ParseError(const std::string& where, const std::string& what)
      : Error(ErrorKind::kValidation, where + ": " + what), where_(where) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

Json quaternion_to_json(const Quaternion& q);
/// Accepts [w, x, y, z] or a bare number.
Quaternion quaternion_from_json(const Json& j, const std::string& path);

Json vector_to_json(const QVector& v);
QVector vector_from_json(const Json& j, const std::string& path);

/// {"n": 2, "entries": [[q, q], [q, q]]}; {"diag": [q, ...]} is also read.
Json matrix_to_json(const QMatrix& m);
QMatrix matrix_from_json(const Json& j, const std::string& path);

/// {"spheres": [{"x0", "x1", "multiplicity"}]}
Json spectrum_to_json(const SSpectrum& s);

/// {"atoms": [{"t", "a"}], "densities": [{"c", "lambda", "interval": [lo|null,
/// hi|null], "d", "poly"}]}; {"kernel": {"p": q, "omega": w}} builds mu_p.
Json measure_to_json(const QMeasure& m);
QMeasure measure_from_json(const Json& j, const std::string& path);

Json domain_to_json(const Domain& d);

/// Forms: "polynomial" {"coefficients"}, "kernel_power" {"p", "n"},
/// "exp_kernel" {"a"}, "transform" {"measure"}, "product" {"left", "right"}.
/// A string "measure" is resolved through `measures`. Stems have no encoding.
Json function_to_json(const SliceFunction& f);
SliceFunction function_from_json(const Json& j, const std::string& path,
                                 const std::map<std::string, QMeasure>& measures = {});

Json unit_to_json(const ImaginaryUnit& u);
ImaginaryUnit unit_from_json(const Json& j, const std::string& path);

struct Command {
  std::string verb;
  /// Output file stem; defaults to "NN_verb".
  std::string name;
  Json params = Json::object();
};

struct OutputSpec {
  std::string directory = "out";
  bool json = true;
  bool csv = true;
};

struct RunConfig {
  int schema_version = kConfigSchemaVersion;
  std::optional<QMatrix> op;
  std::map<std::string, QMeasure> measures;
  std::map<std::string, SliceFunction> functions;
  std::vector<Command> commands;
  OutputSpec output;
};

RunConfig config_from_json(const Json& j);
/// Parses text; syntax errors carry line and column.
RunConfig parse_config(const std::string& text);
Json config_to_json(const RunConfig& c);

/// Field access with path-aware errors.
double json_number(const Json& j, const std::string& key, const std::string& path);
double json_number_or(const Json& j, const std::string& key, double fallback,
                      const std::string& path);

QCALC_NS_END
