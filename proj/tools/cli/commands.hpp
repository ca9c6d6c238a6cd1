#pragma once

#include <iosfwd>
#include <string>

#include "cli/run_config.hpp"

namespace tfpl::cli {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  /// Usage, config, validation, contract or I/O error.
  kExitUsage = 2,
  /// NumericalAbort or QuadratureError.
  kExitNumerical = 3,
};

struct CommandContext {
  RunConfig config;
  std::string out_dir;
  bool json = false;
  bool force_failure = false;
};

/// Each command writes its artifacts into ctx.out_dir and returns the report
/// whose records decide the exit code.
DiagnosticsReport cmd_eval(const CommandContext& ctx);
DiagnosticsReport cmd_simulate(const CommandContext& ctx);
DiagnosticsReport cmd_diagnose(const CommandContext& ctx);
DiagnosticsReport cmd_oracle(const CommandContext& ctx);
DiagnosticsReport cmd_report(const CommandContext& ctx);

DiagnosticsReport run_command(const CommandContext& ctx);

/// Human-readable summary, one line per record.
void print_summary(std::ostream& os, const DiagnosticsReport& report);
std::string report_json(const DiagnosticsReport& report, Mode mode, const std::string& hash);

/// Full command line handling; returns the exit code.
int run_cli(int argc, char** argv);

}  // namespace tfpl::cli
