#pragma once

// Batch execution of a RunConfig: every command writes NAME.json (and
// NAME.csv where a table exists) into the output directory, followed by
// summary.json.
//
// CSV tables:
//   spectrum  x0,x1,multiplicity
//   expgroup  t,norm,envelope_bound
//   compare   first,second,residual,error_estimate
//   invert    n,residual,bound_sample_max
//   selftest  id,name,pass,metric,threshold

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcalc/json_io.hpp"
#include "qcalc/selftest.hpp"

QCALC_NS_BEGIN

enum ExitCode : int { kExitPass = 0, kExitValidation = 1, kExitNumeric = 2 };

struct RunOptions {
  /// Overrides the config's output directory when set.
  std::optional<std::string> out_dir;
  /// Overrides every command's default check tolerance when set.
  std::optional<double> tol;
  std::uint64_t seed = kDefaultSeed;
  std::optional<bool> json;
  std::optional<bool> csv;
  /// Mutation build for the selftest's sensitivity criterion.
  VariantSuite variant;
};

struct CommandOutcome {
  std::string name;
  std::string verb;
  /// "pass", "fail" or "error".
  std::string status;
  std::string message;
  std::vector<std::string> files;
  ErrorKind error_kind = ErrorKind::kNumeric;
};

struct RunSummary {
  std::vector<CommandOutcome> commands;
  int exit_code = kExitPass;
  Json document;
};

/// Checks references and every command's preconditions before anything runs.
/// Throws ParseError or PreconditionError naming the command and field.
void validate_config(const RunConfig& config);

/// Runs one command and returns its JSON report; `csv` receives the table
/// text when the command has one.
Json execute_command(const RunConfig& config, const Command& command, const RunOptions& options,
                     std::string* csv = nullptr);

/// Validates, executes in order and writes the artifacts.
RunSummary run(const RunConfig& config, const RunOptions& options);

std::string command_stem(const Command& command, std::size_t index);

QCALC_NS_END
