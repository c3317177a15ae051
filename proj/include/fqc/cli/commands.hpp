#pragma once

#include <iosfwd>
#include <optional>
#include <string>

namespace fqc::cli {

enum ExitCode { kOk = 0, kUsage = 1, kConfigError = 2, kNumericalError = 3 };

struct CommandOptions {
  std::string config_path;
  std::string out;     // file path; a directory for scan; empty means stdout
  std::string format;  // csv or json; empty picks the command default
  bool svg = false;
  std::optional<int> workers;
  std::optional<double> base_re;
  std::optional<double> base_im;
};

int cmd_spectrum(const CommandOptions& o, std::ostream& out, std::ostream& err);
int cmd_scan(const CommandOptions& o, std::ostream& out, std::ostream& err);
int cmd_winding(const CommandOptions& o, std::ostream& out, std::ostream& err);
int cmd_validate(const CommandOptions& o, std::ostream& out, std::ostream& err);
int cmd_lyapunov(const CommandOptions& o, std::ostream& out, std::ostream& err);

/// --workers, else FLOQUET_QC_WORKERS, else hardware concurrency.
int resolve_workers(std::optional<int> flag);

/// Full command line entry used by the floquet-qc binary.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fqc::cli
