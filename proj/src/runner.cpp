#include "qcalc/runner.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

QCALC_NS_BEGIN

namespace {

namespace fs = std::filesystem;

constexpr double kResolventTol = 1e-9;
constexpr double kGroupTol = 1e-10;
constexpr double kCalcTol = 1e-6;
constexpr double kCompareTol = 1e-6;
constexpr double kInvertTol = 1e-7;
constexpr double kPowerDerivativeTol = 1e-8;

std::string field(const std::string& path, const std::string& key) { return path + ".params." + key; }

double tolerance(const Json& params, const RunOptions& options, double fallback,
                 const std::string& path) {
  if (params.contains("tolerance")) return json_number(params, "tolerance", path + ".params");
  return options.tol.value_or(fallback);
}

const QMatrix& require_operator(const RunConfig& config, const std::string& path) {
  if (!config.op) throw PreconditionError(path + ": command needs an \"operator\" in the config");
  return *config.op;
}

const QMeasure& lookup_measure(const RunConfig& config, const Json& params, const std::string& path) {
  if (!params.contains("measure") || !params.at("measure").is_string()) {
    throw ParseError(field(path, "measure"), "expected the name of a measure");
  }
  const std::string name = params.at("measure").get<std::string>();
  auto it = config.measures.find(name);
  if (it == config.measures.end()) throw ParseError(field(path, "measure"), "unknown measure \"" + name + "\"");
  return it->second;
}

std::optional<SliceFunction> lookup_function(const RunConfig& config, const Json& params,
                                             const std::string& path) {
  if (!params.contains("function")) return std::nullopt;
  if (!params.at("function").is_string()) throw ParseError(field(path, "function"), "expected a name");
  const std::string name = params.at("function").get<std::string>();
  auto it = config.functions.find(name);
  if (it == config.functions.end()) {
    throw ParseError(field(path, "function"), "unknown function \"" + name + "\"");
  }
  return it->second;
}

ImaginaryUnit slice_of(const Json& params, const std::string& path) {
  if (!params.contains("slice")) return {};
  return unit_from_json(params.at("slice"), field(path, "slice"));
}

CalcProblem problem_of(const RunConfig& config, const Json& params, const std::string& path) {
  const QMatrix& op = require_operator(config, path);
  const std::string pp = path + ".params";
  CalcProblem p = make_problem(op, lookup_measure(config, params, path),
                               json_number_or(params, "epsilon", 1.0, pp),
                               json_number_or(params, "t_max", 10.0, pp),
                               static_cast<int>(json_number_or(params, "grid", 401, pp)));
  p.fn = lookup_function(config, params, path);
  p.slice = slice_of(params, path);
  if (params.contains("tolerances")) {
    const Json& t = params.at("tolerances");
    const std::string tp = pp + ".tolerances";
    p.tol.group = json_number_or(t, "group", p.tol.group, tp);
    p.tol.strip = json_number_or(t, "strip", p.tol.strip, tp);
    p.tol.circle = json_number_or(t, "circle", p.tol.circle, tp);
  }
  return p;
}

Json problem_settings(const CalcProblem& p) {
  return Json{{"epsilon", p.epsilon},
              {"envelope", {{"M", p.envelope.M}, {"omega", p.envelope.omega}, {"t_max", p.envelope.t_max}, {"grid", p.envelope.grid}}},
              {"slice", unit_to_json(p.slice)},
              {"route_tolerances", {{"group", p.tol.group}, {"strip", p.tol.strip}, {"circle", p.tol.circle}}}};
}

std::vector<Quaternion> real_polynomial(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ParseError(path, "expected a nonempty list of real coefficients");
  std::vector<Quaternion> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ParseError(path + "[" + std::to_string(i) + "]", "expected a real number");
    out.emplace_back(j[i].get<double>());
  }
  return out;
}

void check_strip_geometry(const QMatrix& op, double alpha, double c, const std::string& path,
                          double upper = kInf) {
  const double re = s_spectrum(op).max_abs_real();
  if (!(c < upper)) {
    std::ostringstream os;
    os << field(path, "c") << ": strip half-width " << c << " must stay below omega + epsilon = " << upper;
    throw PreconditionError(os.str());
  }
  if (!(c > re)) {
    std::ostringstream os;
    os << field(path, "c") << ": strip half-width " << c
       << " must exceed the largest |Re| of the S-spectrum (" << re << ")";
    throw PreconditionError(os.str());
  }
  if (!(std::abs(alpha) > c)) {
    std::ostringstream os;
    os << field(path, "alpha") << ": |alpha| = " << std::abs(alpha) << " must exceed c = " << c;
    throw PreconditionError(os.str());
  }
}

void validate_command(const RunConfig& config, const Command& cmd, const std::string& path) {
  const Json& params = cmd.params;
  const std::string pp = path + ".params";
  if (cmd.verb == "selftest") {
    if (params.contains("criteria")) {
      const Json& ids = params.at("criteria");
      if (!ids.is_array()) throw ParseError(field(path, "criteria"), "expected a list of criterion ids");
      for (const auto& id : ids) {
        if (!id.is_number_integer() || id.get<int>() < 1 || id.get<int>() > kCriterionCount) {
          throw ParseError(field(path, "criteria"), "ids must be integers in 1.." + std::to_string(kCriterionCount));
        }
      }
    }
    return;
  }
  const QMatrix& op = require_operator(config, path);
  if (cmd.verb == "spectrum") return;
  if (cmd.verb == "resolvent") {
    if (!params.contains("s")) throw ParseError(field(path, "s"), "missing field");
    const Quaternion s = quaternion_from_json(params.at("s"), field(path, "s"));
    const double n = json_number_or(params, "power", 1.0, pp);
    if (n < 1 || n != std::floor(n)) throw ParseError(field(path, "power"), "expected a positive integer");
    try {
      ResolventEvaluator(op).require_resolvent_point(s);
    } catch (const SpectralProximityError& e) {
      throw PreconditionError(field(path, "s") + ": " + e.what());
    }
    return;
  }
  if (cmd.verb == "expgroup") {
    if (params.contains("t") && !params.at("t").is_array()) throw ParseError(field(path, "t"), "expected a list");
    if (params.contains("hy")) {
      const Json& hy = params.at("hy");
      const double omega = s_spectrum(op).max_abs_real();
      if (!hy.contains("s0") || !hy.at("s0").is_array()) throw ParseError(field(path, "hy.s0"), "expected a list");
      for (const auto& s0 : hy.at("s0")) {
        if (!s0.is_number() || !(std::abs(s0.get<double>()) > omega)) {
          throw PreconditionError(field(path, "hy.s0") + ": every |s0| must exceed omega = " + std::to_string(omega));
        }
      }
    }
    return;
  }
  if (cmd.verb == "calc" || cmd.verb == "compare" || cmd.verb == "invert") {
    if (cmd.verb == "calc" && !params.contains("measure")) {
      // Contour route on a named function alone.
      if (!lookup_function(config, params, path)) {
        throw ParseError(field(path, "measure"), "calc needs a measure or a function");
      }
      const std::string route = params.value("route", "contour");
      if (route != "contour" && route != "strip") {
        throw ParseError(field(path, "route"), "without a measure only \"contour\" and \"strip\" apply");
      }
      if (route == "strip") {
        check_strip_geometry(op, json_number(params, "alpha", pp), json_number(params, "c", pp), path);
      }
      return;
    }
    const CalcProblem p = problem_of(config, params, path);
    try {
      validate(p);
    } catch (const PreconditionError& e) {
      throw PreconditionError(path + ": " + e.what());
    }
    const double upper = p.envelope.omega + p.epsilon;
    if (cmd.verb == "compare") {
      check_strip_geometry(op, json_number(params, "alpha", pp), json_number(params, "c", pp), path, upper);
    }
    if (cmd.verb == "calc") {
      const std::string route = params.value("route", "group");
      if (route == "strip") {
        check_strip_geometry(op, json_number(params, "alpha", pp), json_number(params, "c", pp), path, upper);
      } else if (route == "contour") {
        json_number(params, "radius", pp);
      } else if (route != "group" && route != "closed") {
        throw ParseError(field(path, "route"), "expected group, closed, strip or contour");
      }
    }
    if (cmd.verb == "invert") {
      if (!params.contains("polynomials") || !params.at("polynomials").is_array() || params.at("polynomials").empty()) {
        throw ParseError(field(path, "polynomials"), "expected a nonempty list of coefficient lists");
      }
      for (std::size_t i = 0; i < params.at("polynomials").size(); ++i) {
        real_polynomial(params.at("polynomials")[i], field(path, "polynomials") + "[" + std::to_string(i) + "]");
      }
      if (params.contains("u")) {
        const QVector u = vector_from_json(params.at("u"), field(path, "u"));
        if (u.size() != op.n()) throw ParseError(field(path, "u"), "length differs from the operator size");
      }
    }
    return;
  }
  throw ParseError(path + ".verb", "unknown verb \"" + cmd.verb + "\"");
}

std::string csv_number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

Json run_spectrum(const RunConfig& config, std::string* csv) {
  const SSpectrum s = s_spectrum(*config.op);
  if (csv) {
    *csv = "x0,x1,multiplicity\n";
    for (const auto& sp : s.spheres) {
      *csv += csv_number(sp.sphere.x0) + "," + csv_number(sp.sphere.x1) + "," + std::to_string(sp.multiplicity) + "\n";
    }
  }
  Json out = spectrum_to_json(s);
  out["pass"] = true;
  out["settings"] = {{"method", "complex adjoint eigenvalues"}, {"cluster_tolerance", "1e-6 (1 + max |eigenvalue|)"}};
  return out;
}

Json run_resolvent(const RunConfig& config, const Json& params, const RunOptions& options,
                   const std::string& path) {
  const QMatrix& t = *config.op;
  const Quaternion s = quaternion_from_json(params.at("s"), field(path, "s"));
  const unsigned n = static_cast<unsigned>(json_number_or(params, "power", 1.0, path + ".params"));
  const double tol = tolerance(params, options, kResolventTol, path);
  ResolventEvaluator r(t);
  const QMatrix first = r(s);
  const QMatrix eye = QMatrix::identity(t.n());
  const double scale = (1.0 + s.abs()) * (1.0 + t.norm());
  const double eq = max_abs_diff(s * first - first * t, eye) / scale;
  Json out{{"s", quaternion_to_json(s)}, {"power", n}};
  double power_gap = 0.0;
  if (n == 1) {
    out["value"] = matrix_to_json(first);
  } else {
    // d/ds0 S_R^{-(n-1)}(s, T) = -(n-1) S_R^{-n}(s, T); central differences with one
    // Richardson step.
    const QMatrix value = r.power(n, s);
    auto diff = [&](double h) {
      return (0.5 / h) * (r.power(n - 1, s + Quaternion(h)) - r.power(n - 1, s - Quaternion(h)));
    };
    const double h = 1e-3 * std::max(1.0, s.abs());
    const QMatrix d = (4.0 / 3.0) * diff(0.5 * h) - (1.0 / 3.0) * diff(h);
    power_gap = max_abs_diff(d, -static_cast<double>(n - 1) * value) / std::max(1.0, value.norm());
    out["value"] = matrix_to_json(value);
  }
  out["resolvent_equation_residual"] = eq;
  out["power_consistency_residual"] = power_gap;
  out["spectrum_distance"] = r.spectrum().distance(s);
  out["pass"] = eq <= tol && power_gap <= kPowerDerivativeTol;
  out["settings"] = {{"tolerance", tol},
                     {"residual_scale", "(1 + |s|)(1 + ||T||)"},
                     {"power_check", "d/ds0 of the (n-1)-th power, Richardson step 1e-3 max(1, |s|)"},
                     {"power_tolerance", kPowerDerivativeTol}};
  return out;
}

Json run_expgroup(const RunConfig& config, const Json& params, const RunOptions& options,
                  const std::string& path, std::string* csv) {
  const QMatrix& t = *config.op;
  const std::string pp = path + ".params";
  const double tol = tolerance(params, options, kGroupTol, path);
  const double t_max = json_number_or(params, "t_max", 10.0, pp);
  const int grid = static_cast<int>(json_number_or(params, "grid", 401, pp));
  const GroupEnvelope env = group_envelope(t, t_max, grid);
  GroupEvaluator group(t);
  std::vector<double> times{-1.0, -0.5, 0.0, 0.5, 1.0};
  if (params.contains("t")) {
    times.clear();
    for (std::size_t i = 0; i < params.at("t").size(); ++i) {
      const Json& tj = params.at("t")[i];
      if (!tj.is_number()) throw ParseError(field(path, "t") + "[" + std::to_string(i) + "]", "expected a number");
      times.push_back(tj.get<double>());
    }
  }
  Json values = Json::array();
  double group_law = 0.0;
  if (csv) *csv = "t,norm,envelope_bound\n";
  const QMatrix eye = QMatrix::identity(t.n());
  for (double time : times) {
    const QMatrix e = group(time);
    const double bound = env.M * std::exp(env.omega * std::abs(time));
    group_law = std::max(group_law, max_abs_diff(e * group(-time), eye));
    values.push_back(Json{{"t", time}, {"value", matrix_to_json(e)}, {"norm", e.norm()}, {"envelope_bound", bound}});
    if (csv) *csv += csv_number(time) + "," + csv_number(e.norm()) + "," + csv_number(bound) + "\n";
  }
  bool pass = group_law <= tol;
  Json out{{"envelope", {{"M", env.M}, {"omega", env.omega}, {"t_max", env.t_max}, {"grid", env.grid}}},
           {"values", values},
           {"group_law_residual", group_law}};
  if (params.contains("hy")) {
    const Json& hy = params.at("hy");
    std::vector<double> s0;
    for (const auto& x : hy.at("s0")) s0.push_back(x.get<double>());
    const unsigned n_max = static_cast<unsigned>(json_number_or(hy, "n_max", 4, pp + ".hy"));
    const HyReport rep = hy_bound_check(t, s0, n_max, env);
    Json entries = Json::array();
    for (const auto& e : rep.entries) entries.push_back(Json{{"s0", e.s0}, {"n", e.n}, {"ratio", e.ratio}});
    out["resolvent_power_bound"] = {{"entries", entries}, {"max_ratio", rep.max_ratio}, {"limit", env.M * (1.0 + 1e-6)}, {"pass", rep.pass}};
    pass = pass && rep.pass;
  }
  out["pass"] = pass;
  out["settings"] = {{"tolerance", tol}, {"expm", "Pade scaling and squaring"}};
  return out;
}

Json run_calc(const RunConfig& config, const Json& params, const RunOptions& options,
              const std::string& path) {
  const std::string pp = path + ".params";
  const double tol = tolerance(params, options, kCalcTol, path);
  Json out;
  QMatrix value;
  double error = 0.0;
  std::string route;
  Json settings{{"tolerance", tol}};
  if (!params.contains("measure")) {
    const SliceFunction f = *lookup_function(config, params, path);
    const ImaginaryUnit slice = slice_of(params, path);
    route = params.value("route", "contour");
    if (route == "contour") {
      const double radius = json_number(params, "radius", pp);
      const auto r = s_calc_bounded(f, *config.op, radius, slice, json_number_or(params, "quad_tol", 1e-11, pp));
      value = r.value;
      error = r.error;
      settings["radius"] = radius;
      settings["evaluations"] = r.evaluations;
    } else {
      const double alpha = json_number(params, "alpha", pp);
      const double c = json_number(params, "c", pp);
      const auto r = strip_f_of_T_matrix(f, *config.op, alpha, c, json_number_or(params, "truncation", 0.0, pp), slice,
                                         json_number_or(params, "quad_tol", 1e-8, pp));
      value = r.value;
      error = r.error;
      settings.update({{"alpha", alpha}, {"c", c}, {"truncation", r.truncation}, {"tail_bound", r.tail_bound}});
    }
  } else {
    const CalcProblem p = problem_of(config, params, path);
    settings.update(problem_settings(p));
    route = params.value("route", "group");
    if (route == "group") {
      const auto r = f_of_T_group(p);
      value = r.value;
      error = r.error;
      out["norm_bound"] = r.norm_bound;
    } else if (route == "closed") {
      value = f_of_T_closed(p.measure, p.op);
    } else if (route == "strip") {
      const double alpha = json_number(params, "alpha", pp);
      const double c = json_number(params, "c", pp);
      const auto r = strip_f_of_T_matrix(p.function(), p.op, alpha, c, json_number_or(params, "truncation", 0.0, pp),
                                         p.slice, p.tol.strip);
      value = r.value;
      error = r.error;
      settings.update({{"alpha", alpha}, {"c", c}, {"truncation", r.truncation}, {"tail_bound", r.tail_bound}});
    } else {
      const double radius = json_number(params, "radius", pp);
      const auto r = s_calc_bounded(p.function(), p.op, radius, p.slice, p.tol.circle);
      value = r.value;
      error = r.error;
      settings["radius"] = radius;
    }
  }
  out["route"] = route;
  out["value"] = matrix_to_json(value);
  out["error_estimate"] = error;
  out["pass"] = error <= tol;
  out["settings"] = settings;
  return out;
}

Json run_compare(const RunConfig& config, const Json& params, const RunOptions& options,
                 const std::string& path, std::string* csv) {
  const std::string pp = path + ".params";
  const double tol = tolerance(params, options, kCompareTol, path);
  const CalcProblem p = problem_of(config, params, path);
  const double alpha = json_number(params, "alpha", pp);
  const double c = json_number(params, "c", pp);
  std::optional<double> radius;
  if (params.contains("radius")) radius = json_number(params, "radius", pp);
  const ComparisonReport rep = compare_calculi(p, alpha, c, radius, tol);
  Json routes = Json::object();
  routes["group"] = {{"value", matrix_to_json(rep.value_group)}, {"error_estimate", rep.error_group}};
  if (rep.value_strip) routes["strip"] = {{"value", matrix_to_json(*rep.value_strip)}, {"error_estimate", rep.error_strip}};
  if (rep.value_contour) {
    routes["contour"] = {{"value", matrix_to_json(*rep.value_contour)}, {"error_estimate", rep.error_contour}, {"radius", rep.contour_radius}};
  }
  if (rep.value_closed) routes["closed"] = {{"value", matrix_to_json(*rep.value_closed)}, {"error_estimate", 0.0}};
  Json residuals = Json::array();
  if (csv) *csv = "first,second,residual,error_estimate\n";
  for (const auto& r : rep.residuals) {
    residuals.push_back(Json{{"first", r.first}, {"second", r.second}, {"residual", r.residual}, {"error_estimate", r.error_estimate}});
    if (csv) *csv += r.first + "," + r.second + "," + csv_number(r.residual) + "," + csv_number(r.error_estimate) + "\n";
  }
  Json settings = problem_settings(p);
  settings.update({{"tolerance", tol}, {"alpha", alpha}, {"c", c}});
  return Json{{"routes", routes},
              {"residuals", residuals},
              {"max_residual", rep.max_residual},
              {"skipped", rep.skipped},
              {"pass", rep.pass},
              {"settings", settings}};
}

Json run_invert(const RunConfig& config, const Json& params, const RunOptions& options,
                const std::string& path, std::string* csv) {
  const double tol = tolerance(params, options, kInvertTol, path);
  const CalcProblem p = problem_of(config, params, path);
  std::vector<std::vector<Quaternion>> polys;
  for (std::size_t i = 0; i < params.at("polynomials").size(); ++i) {
    polys.push_back(real_polynomial(params.at("polynomials")[i], field(path, "polynomials")));
  }
  const QVector u = params.contains("u") ? vector_from_json(params.at("u"), field(path, "u"))
                                         : QVector::basis(p.op.n(), 0);
  const double limit = json_number_or(params, "bound_limit", 1e6, path + ".params");
  const InversionRecord rec = inverting_sequence_run(polys, p, u, tol, limit);
  Json entries = Json::array();
  if (csv) *csv = "n,residual,bound_sample_max\n";
  for (const auto& e : rec.entries) {
    entries.push_back(Json{{"n", e.n}, {"residual", e.residual}, {"bound_sample_max", e.bound_sample_max}, {"operator_norm", e.operator_norm}});
    if (csv) *csv += std::to_string(e.n) + "," + csv_number(e.residual) + "," + csv_number(e.bound_sample_max) + "\n";
  }
  Json settings = problem_settings(p);
  settings.update({{"tolerance", tol}, {"bound_limit", limit}, {"u", vector_to_json(u)}});
  return Json{{"entries", entries}, {"warnings", rec.warnings}, {"pass", rec.pass}, {"settings", settings}};
}

Json run_selftest(const Json& params, const RunOptions& options, std::string* csv) {
  std::vector<int> ids;
  if (params.contains("criteria")) {
    for (const auto& id : params.at("criteria")) ids.push_back(id.get<int>());
  }
  const auto results = run_acceptance(ids, options.seed, options.variant);
  Json out = Json::parse(acceptance_json(results, options.seed));
  if (csv) {
    *csv = "id,name,pass,metric,threshold\n";
    for (const auto& r : results) {
      *csv += std::to_string(r.id) + "," + r.name + "," + (r.pass ? "true" : "false") + "," +
              csv_number(r.metric) + "," + csv_number(r.threshold) + "\n";
    }
  }
  out["settings"] = {{"seed", options.seed}};
  return out;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw RangeError("cannot write " + p.string());
  os << text;
}

}  // namespace

std::string command_stem(const Command& command, std::size_t index) {
  if (!command.name.empty()) return command.name;
  std::ostringstream os;
  os.width(2);
  os.fill('0');
  os << index + 1;
  return os.str() + "_" + command.verb;
}

void validate_config(const RunConfig& config) {
  for (std::size_t i = 0; i < config.commands.size(); ++i) {
    validate_command(config, config.commands[i], "commands[" + std::to_string(i) + "]");
  }
}

Json execute_command(const RunConfig& config, const Command& command, const RunOptions& options,
                     std::string* csv) {
  const std::string path = "command " + (command.name.empty() ? command.verb : command.name);
  const Json& params = command.params;
  Json out;
  if (command.verb == "spectrum") out = run_spectrum(config, csv);
  else if (command.verb == "resolvent") out = run_resolvent(config, params, options, path);
  else if (command.verb == "expgroup") out = run_expgroup(config, params, options, path, csv);
  else if (command.verb == "calc") out = run_calc(config, params, options, path);
  else if (command.verb == "compare") out = run_compare(config, params, options, path, csv);
  else if (command.verb == "invert") out = run_invert(config, params, options, path, csv);
  else if (command.verb == "selftest") out = run_selftest(params, options, csv);
  else throw ParseError(path, "unknown verb \"" + command.verb + "\"");
  Json doc{{"verb", command.verb}};
  if (!command.name.empty()) doc["name"] = command.name;
  doc["params"] = params;
  doc.update(out);
  return doc;
}

RunSummary run(const RunConfig& config, const RunOptions& options) {
  RunSummary summary;
  const bool want_json = options.json.value_or(config.output.json);
  const bool want_csv = options.csv.value_or(config.output.csv);
  const fs::path dir = options.out_dir.value_or(config.output.directory);
  Json settings{{"tolerance_override", options.tol ? Json(*options.tol) : Json(nullptr)},
                {"seed", options.seed},
                {"formats", Json::array()}};
  if (want_json) settings["formats"].push_back("json");
  if (want_csv) settings["formats"].push_back("csv");

  std::string validation_error;
  try {
    validate_config(config);
  } catch (const Error& e) {
    validation_error = e.what();
  }

  Json commands = Json::array();
  int passed = 0;
  bool any_validation = !validation_error.empty();
  bool any_failure = false;
  if (validation_error.empty()) {
    fs::create_directories(dir);
    for (std::size_t i = 0; i < config.commands.size(); ++i) {
      const Command& cmd = config.commands[i];
      CommandOutcome outcome;
      outcome.name = command_stem(cmd, i);
      outcome.verb = cmd.verb;
      try {
        std::string csv;
        const Json doc = execute_command(config, cmd, options, want_csv ? &csv : nullptr);
        const bool pass = doc.value("pass", false);
        outcome.status = pass ? "pass" : "fail";
        if (want_json) {
          write_file(dir / (outcome.name + ".json"), doc.dump(2) + "\n");
          outcome.files.push_back(outcome.name + ".json");
        }
        if (want_csv && !csv.empty()) {
          write_file(dir / (outcome.name + ".csv"), csv);
          outcome.files.push_back(outcome.name + ".csv");
        }
        if (pass) {
          ++passed;
        } else {
          any_failure = true;
        }
      } catch (const Error& e) {
        outcome.status = "error";
        outcome.message = e.what();
        outcome.error_kind = e.kind();
        if (e.kind() == ErrorKind::kValidation) any_validation = true;
        any_failure = true;
      } catch (const std::exception& e) {
        outcome.status = "error";
        outcome.message = e.what();
        any_failure = true;
      }
      Json entry{{"name", outcome.name}, {"verb", outcome.verb}, {"status", outcome.status}, {"files", outcome.files}};
      if (!outcome.message.empty()) entry["message"] = outcome.message;
      commands.push_back(entry);
      summary.commands.push_back(std::move(outcome));
    }
  }

  summary.exit_code = any_validation ? kExitValidation : any_failure ? kExitNumeric : kExitPass;
  summary.document = Json{{"schema_version", kConfigSchemaVersion},
                          {"settings", settings},
                          {"commands", commands},
                          {"checks_passed", passed},
                          {"checks_total", config.commands.size()},
                          {"pass", summary.exit_code == kExitPass},
                          {"exit_code", summary.exit_code}};
  if (!validation_error.empty()) summary.document["validation_error"] = validation_error;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!ec) write_file(dir / "summary.json", summary.document.dump(2) + "\n");
  return summary;
}

QCALC_NS_END
