#include "qcalc/json_io.hpp"

#include <cmath>
#include <sstream>

QCALC_NS_BEGIN

namespace {

std::string at(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string at(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

const Json& require(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw ParseError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(at(path, key), "missing field");
  return *it;
}

const Json& require_array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array");
  return j;
}

double as_number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path, "expected a number");
  return j.get<double>();
}

Json bound_to_json(double x) { return std::isinf(x) ? Json(nullptr) : Json(x); }

double bound_from_json(const Json& j, double inf, const std::string& path) {
  if (j.is_null()) return inf;
  return as_number(j, path);
}

}  // namespace

double json_number(const Json& j, const std::string& key, const std::string& path) {
  return as_number(require(j, key, path), at(path, key));
}

double json_number_or(const Json& j, const std::string& key, double fallback,
                      const std::string& path) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return as_number(j.at(key), at(path, key));
}

Json quaternion_to_json(const Quaternion& q) { return Json::array({q.w, q.x, q.y, q.z}); }

Quaternion quaternion_from_json(const Json& j, const std::string& path) {
  if (j.is_number()) return Quaternion(j.get<double>());
  if (!j.is_array() || j.size() != 4) throw ParseError(path, "expected [w, x, y, z] or a number");
  double c[4];
  for (std::size_t i = 0; i < 4; ++i) c[i] = as_number(j[i], at(path, i));
  return {c[0], c[1], c[2], c[3]};
}

Json vector_to_json(const QVector& v) {
  Json out = Json::array();
  for (const auto& q : v.data()) out.push_back(quaternion_to_json(q));
  return out;
}

QVector vector_from_json(const Json& j, const std::string& path) {
  require_array(j, path);
  std::vector<Quaternion> data;
  for (std::size_t i = 0; i < j.size(); ++i) data.push_back(quaternion_from_json(j[i], at(path, i)));
  return QVector(std::move(data));
}

Json matrix_to_json(const QMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.n(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.n(); ++k) row.push_back(quaternion_to_json(m(i, k)));
    rows.push_back(row);
  }
  return Json{{"n", m.n()}, {"entries", rows}};
}

QMatrix matrix_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ParseError(path, "expected an object with \"entries\" or \"diag\"");
  if (j.contains("diag")) {
    const Json& d = require_array(j.at("diag"), at(path, "diag"));
    std::vector<Quaternion> diag;
    for (std::size_t i = 0; i < d.size(); ++i) {
      diag.push_back(quaternion_from_json(d[i], at(at(path, "diag"), i)));
    }
    if (diag.empty()) throw ParseError(at(path, "diag"), "empty diagonal");
    return QMatrix::diag(diag);
  }
  const std::string epath = at(path, "entries");
  const Json& rows = require_array(require(j, "entries", path), epath);
  const std::size_t n = rows.size();
  if (n == 0) throw ParseError(epath, "empty matrix");
  if (j.contains("n") && j.at("n") != Json(n)) {
    throw ParseError(at(path, "n"), "does not match the number of rows");
  }
  QMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Json& row = require_array(rows[i], at(epath, i));
    if (row.size() != n) throw ParseError(at(epath, i), "row length differs from the row count");
    for (std::size_t k = 0; k < n; ++k) m(i, k) = quaternion_from_json(row[k], at(at(epath, i), k));
  }
  return m;
}

Json spectrum_to_json(const SSpectrum& s) {
  Json spheres = Json::array();
  for (const auto& sp : s.spheres) {
    spheres.push_back(Json{{"x0", sp.sphere.x0}, {"x1", sp.sphere.x1}, {"multiplicity", sp.multiplicity}});
  }
  return Json{{"spheres", spheres}};
}

Json measure_to_json(const QMeasure& m) {
  Json atoms = Json::array();
  for (const auto& a : m.atoms()) atoms.push_back({{"t", a.t}, {"a", quaternion_to_json(a.a)}});
  Json dens = Json::array();
  for (const auto& d : m.densities()) {
    dens.push_back({{"c", quaternion_to_json(d.c)},
                    {"lambda", quaternion_to_json(d.lambda)},
                    {"interval", Json::array({bound_to_json(d.lo), bound_to_json(d.hi)})},
                    {"d", quaternion_to_json(d.d)},
                    {"poly", d.poly}});
  }
  return Json{{"atoms", atoms}, {"densities", dens}};
}

QMeasure measure_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ParseError(path, "expected a measure object");
  if (j.contains("kernel")) {
    const Json& k = j.at("kernel");
    const std::string kpath = at(path, "kernel");
    const Quaternion p = quaternion_from_json(require(k, "p", kpath), at(kpath, "p"));
    try {
      return kernel_measure(p, json_number_or(k, "omega", 0.0, kpath));
    } catch (const DomainError& e) {
      throw ParseError(kpath, e.what());
    }
  }
  std::vector<Atom> atoms;
  if (j.contains("atoms")) {
    const std::string apath = at(path, "atoms");
    const Json& arr = require_array(j.at("atoms"), apath);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string p = at(apath, i);
      atoms.push_back({json_number(arr[i], "t", p), quaternion_from_json(require(arr[i], "a", p), at(p, "a"))});
    }
  }
  std::vector<ExpDensity> dens;
  if (j.contains("densities")) {
    const std::string dpath = at(path, "densities");
    const Json& arr = require_array(j.at("densities"), dpath);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string p = at(dpath, i);
      const Json& e = arr[i];
      ExpDensity d;
      if (e.contains("c")) d.c = quaternion_from_json(e.at("c"), at(p, "c"));
      d.lambda = quaternion_from_json(require(e, "lambda", p), at(p, "lambda"));
      if (e.contains("interval")) {
        const Json& iv = require_array(e.at("interval"), at(p, "interval"));
        if (iv.size() != 2) throw ParseError(at(p, "interval"), "expected [lo, hi]");
        d.lo = bound_from_json(iv[0], -kInf, at(at(p, "interval"), 0));
        d.hi = bound_from_json(iv[1], kInf, at(at(p, "interval"), 1));
      }
      if (e.contains("d")) d.d = quaternion_from_json(e.at("d"), at(p, "d"));
      if (e.contains("poly")) {
        const Json& pj = require_array(e.at("poly"), at(p, "poly"));
        d.poly.clear();
        for (std::size_t k = 0; k < pj.size(); ++k) d.poly.push_back(as_number(pj[k], at(at(p, "poly"), k)));
        if (d.poly.empty()) throw ParseError(at(p, "poly"), "empty polynomial");
      }
      dens.push_back(d);
    }
  }
  try {
    return QMeasure(std::move(atoms), std::move(dens));
  } catch (const Error& e) {
    throw ParseError(path, e.what());
  }
}

Json domain_to_json(const Domain& d) {
  switch (d.kind) {
    case Domain::Kind::kWhole:
      return Json{{"kind", "whole"}};
    case Domain::Kind::kStrip:
      return Json{{"kind", "strip"}, {"lower", bound_to_json(d.lower)}, {"upper", bound_to_json(d.upper)}};
    case Domain::Kind::kBall:
      return Json{{"kind", "ball"}, {"radius", bound_to_json(d.radius)}};
    case Domain::Kind::kSphereComplement: {
      Json holes = Json::array();
      for (const auto& h : d.holes) holes.push_back(Json::array({h.x0, h.x1}));
      return Json{{"kind", "sphere_complement"}, {"holes", holes}};
    }
    case Domain::Kind::kIntersection: {
      Json parts = Json::array();
      for (const auto& p : d.parts) parts.push_back(domain_to_json(p));
      return Json{{"kind", "intersection"}, {"parts", parts}};
    }
  }
  return Json{};
}

Json function_to_json(const SliceFunction& f) {
  Json out = std::visit(
      [](const auto& form) -> Json {
        using T = std::decay_t<decltype(form)>;
        if constexpr (std::is_same_v<T, RightPolynomial>) {
          Json c = Json::array();
          for (const auto& q : form.coefficients) c.push_back(quaternion_to_json(q));
          return Json{{"form", "polynomial"}, {"coefficients", c}};
        } else if constexpr (std::is_same_v<T, KernelPower>) {
          return Json{{"form", "kernel_power"}, {"p", quaternion_to_json(form.p)}, {"n", form.n}};
        } else if constexpr (std::is_same_v<T, ExpKernel>) {
          return Json{{"form", "exp_kernel"}, {"a", form.a}};
        } else if constexpr (std::is_same_v<T, TransformOf>) {
          return Json{{"form", "transform"}, {"measure", measure_to_json(form.measure)}};
        } else if constexpr (std::is_same_v<T, Product>) {
          return Json{{"form", "product"},
                      {"left", function_to_json(*form.left)},
                      {"right", function_to_json(*form.right)}};
        } else {
          throw UnsupportedError("stem functions have no JSON encoding");
        }
      },
      f.form());
  out["domain"] = domain_to_json(f.domain());
  return out;
}

SliceFunction function_from_json(const Json& j, const std::string& path,
                                 const std::map<std::string, QMeasure>& measures) {
  const Json& form_j = require(j, "form", path);
  if (!form_j.is_string()) throw ParseError(at(path, "form"), "expected a string");
  const std::string form = form_j.get<std::string>();
  if (form == "polynomial") {
    const std::string cpath = at(path, "coefficients");
    const Json& arr = require_array(require(j, "coefficients", path), cpath);
    std::vector<Quaternion> c;
    for (std::size_t i = 0; i < arr.size(); ++i) c.push_back(quaternion_from_json(arr[i], at(cpath, i)));
    if (c.empty()) throw ParseError(cpath, "empty coefficient list");
    return RightPolynomial{c};
  }
  if (form == "kernel_power") {
    const Quaternion p = quaternion_from_json(require(j, "p", path), at(path, "p"));
    const double n = json_number_or(j, "n", 1.0, path);
    if (n < 1.0 || n != std::floor(n)) throw ParseError(at(path, "n"), "expected a positive integer");
    return KernelPower{p, static_cast<unsigned>(n)};
  }
  if (form == "exp_kernel") return ExpKernel{json_number(j, "a", path)};
  if (form == "transform") {
    const Json& m = require(j, "measure", path);
    if (m.is_string()) {
      auto it = measures.find(m.get<std::string>());
      if (it == measures.end()) {
        throw ParseError(at(path, "measure"), "unknown measure \"" + m.get<std::string>() + "\"");
      }
      return TransformOf{it->second};
    }
    return TransformOf{measure_from_json(m, at(path, "measure"))};
  }
  if (form == "product") {
    return SliceFunction::product(function_from_json(require(j, "left", path), at(path, "left"), measures),
                                  function_from_json(require(j, "right", path), at(path, "right"), measures));
  }
  throw ParseError(at(path, "form"), "unknown form \"" + form + "\"");
}

Json unit_to_json(const ImaginaryUnit& u) { return quaternion_to_json(u.q()); }

ImaginaryUnit unit_from_json(const Json& j, const std::string& path) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "e1") return ImaginaryUnit::e1();
    if (s == "e2") return ImaginaryUnit::e2();
    if (s == "e3") return ImaginaryUnit::e3();
    throw ParseError(path, "unknown unit \"" + s + "\"");
  }
  const Quaternion q = quaternion_from_json(j, path);
  if (q.real() != 0.0 || q.imag_abs() == 0.0) throw ParseError(path, "expected a nonzero imaginary quaternion");
  return ImaginaryUnit(q / q.abs());
}

RunConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("(root)", "expected an object");
  RunConfig c;
  if (j.contains("schema_version")) {
    const double v = json_number(j, "schema_version", "");
    if (v != kConfigSchemaVersion) {
      throw ParseError("schema_version", "unsupported version " + std::to_string(static_cast<int>(v)));
    }
  }
  if (j.contains("operator")) c.op = matrix_from_json(j.at("operator"), "operator");
  if (j.contains("measures")) {
    const Json& ms = j.at("measures");
    if (!ms.is_object()) throw ParseError("measures", "expected an object of named measures");
    for (const auto& [name, m] : ms.items()) c.measures.emplace(name, measure_from_json(m, at("measures", name)));
  }
  if (j.contains("functions")) {
    const Json& fs = j.at("functions");
    if (!fs.is_object()) throw ParseError("functions", "expected an object of named functions");
    for (const auto& [name, f] : fs.items()) {
      c.functions.emplace(name, function_from_json(f, at("functions", name), c.measures));
    }
  }
  if (j.contains("commands")) {
    const Json& cmds = require_array(j.at("commands"), "commands");
    for (std::size_t i = 0; i < cmds.size(); ++i) {
      const std::string p = at("commands", i);
      const Json& verb = require(cmds[i], "verb", p);
      if (!verb.is_string()) throw ParseError(at(p, "verb"), "expected a string");
      Command cmd;
      cmd.verb = verb.get<std::string>();
      if (cmds[i].contains("name")) {
        if (!cmds[i].at("name").is_string()) throw ParseError(at(p, "name"), "expected a string");
        cmd.name = cmds[i].at("name").get<std::string>();
      }
      if (cmds[i].contains("params")) {
        cmd.params = cmds[i].at("params");
        if (!cmd.params.is_object()) throw ParseError(at(p, "params"), "expected an object");
      }
      c.commands.push_back(std::move(cmd));
    }
  }
  if (j.contains("output")) {
    const Json& o = j.at("output");
    if (!o.is_object()) throw ParseError("output", "expected an object");
    if (o.contains("directory")) {
      if (!o.at("directory").is_string()) throw ParseError("output.directory", "expected a string");
      c.output.directory = o.at("directory").get<std::string>();
    }
    if (o.contains("formats")) {
      const Json& f = require_array(o.at("formats"), "output.formats");
      c.output.json = c.output.csv = false;
      for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] == "json") {
          c.output.json = true;
        } else if (f[i] == "csv") {
          c.output.csv = true;
        } else {
          throw ParseError(at("output.formats", i), "expected \"json\" or \"csv\"");
        }
      }
    }
  }
  return c;
}

RunConfig parse_config(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    // Translate the byte offset into a line and column.
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream where;
    where << "line " << line << ", column " << col;
    throw ParseError(where.str(), "JSON syntax error");
  }
  return config_from_json(j);
}

Json config_to_json(const RunConfig& c) {
  Json out;
  out["schema_version"] = c.schema_version;
  if (c.op) out["operator"] = matrix_to_json(*c.op);
  Json ms = Json::object();
  for (const auto& [name, m] : c.measures) ms[name] = measure_to_json(m);
  out["measures"] = ms;
  Json fs = Json::object();
  for (const auto& [name, f] : c.functions) fs[name] = function_to_json(f);
  out["functions"] = fs;
  Json cmds = Json::array();
  for (const auto& cmd : c.commands) {
    Json e{{"verb", cmd.verb}};
    if (!cmd.name.empty()) e["name"] = cmd.name;
    e["params"] = cmd.params;
    cmds.push_back(e);
  }
  out["commands"] = cmds;
  Json formats = Json::array();
  if (c.output.json) formats.push_back("json");
  if (c.output.csv) formats.push_back("csv");
  out["output"] = {{"directory", c.output.directory}, {"formats", formats}};
  return out;
}

QCALC_NS_END
