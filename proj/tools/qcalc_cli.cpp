#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qcalc/runner.hpp"

namespace qcalc::mutant {
std::string run_acceptance_json(const std::vector<int>& ids);
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw qcalc::ParseError(path, "cannot open config file");
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quaternionic functional calculus: batch runs and self-test"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  double tol = 0.0;
  std::uint64_t seed = qcalc::kDefaultSeed;
  std::string format;
  std::vector<int> criteria;

  const std::vector<std::pair<std::string, std::string>> verbs{
      {"run", "Run every command in the config"},
      {"spectrum", "S-spectrum of the configured operator"},
      {"resolvent", "Right S-resolvent and its powers"},
      {"expgroup", "Group exp(tT), envelope and resolvent power bounds"},
      {"calc", "f(T) by a chosen route"},
      {"compare", "f(T) by every applicable route, with pairwise residuals"},
      {"invert", "Residuals of an inverting sequence"},
      {"selftest", "Built-in acceptance suite"}};
  for (const auto& [name, help] : verbs) {
    CLI::App* sub = app.add_subcommand(name, help);
    if (name == "selftest") {
      sub->add_option("--config", config_path, "Config; its selftest commands are run when given")->check(CLI::ExistingFile);
      sub->add_option("--criteria", criteria, "Criterion ids (default: all)");
    } else {
      sub->add_option("--config", config_path, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
    }
    sub->add_option("--out", out_dir, "Output directory (overrides the config)");
    sub->add_option("--tol", tol, "Check tolerance override")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "Seed for randomized suites");
    sub->add_option("--format", format, "Artifact formats")->check(CLI::IsMember({"json", "csv", "both"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qcalc::kExitValidation;
  }
  const std::string verb = app.get_subcommands().front()->get_name();

  qcalc::RunOptions options;
  options.seed = seed;
  options.variant = qcalc::mutant::run_acceptance_json;
  if (!out_dir.empty()) options.out_dir = out_dir;
  if (tol > 0.0) options.tol = tol;
  if (!format.empty()) {
    options.json = format != "csv";
    options.csv = format != "json";
  }

  qcalc::RunConfig config;
  try {
    if (!config_path.empty()) config = qcalc::parse_config(read_file(config_path));
  } catch (const qcalc::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return qcalc::kExitValidation;
  }
  if (verb == "selftest" && config_path.empty()) {
    qcalc::Command cmd{"selftest", "selftest", qcalc::Json::object()};
    if (!criteria.empty()) cmd.params["criteria"] = criteria;
    config.commands.push_back(cmd);
  } else if (verb != "run") {
    std::vector<qcalc::Command> keep;
    for (const auto& c : config.commands) {
      if (c.verb == verb) keep.push_back(c);
    }
    config.commands = keep;
  }

  const qcalc::RunSummary summary = qcalc::run(config, options);
  if (summary.document.contains("validation_error")) {
    std::cerr << "validation error: " << summary.document["validation_error"].get<std::string>() << "\n";
  }
  for (const auto& c : summary.commands) {
    std::cout << c.name << ": " << c.status;
    if (!c.message.empty()) std::cout << " (" << c.message << ")";
    std::cout << "\n";
  }
  std::cout << (summary.exit_code == 0 ? "PASS" : "FAIL") << " (exit " << summary.exit_code << ")\n";
  return summary.exit_code;
}
