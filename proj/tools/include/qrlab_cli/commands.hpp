#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qrlab_cli/config.hpp"
#include "qrlab_cli/format.hpp"

namespace qrlab::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBudget = 3;

// A library error raised while running one named check.
class CheckAborted : public Error {
 public:
  CheckAborted(std::string check, const Error& cause);
  const std::string& check() const { return check_; }
  int exit_code() const { return exit_code_; }

 private:
  std::string check_;
  int exit_code_;
};

struct CommandResult {
  Json report;
  std::string summary;
  std::optional<std::string> csv;
  int exit_code = kExitPass;
};

// Check names accepted by --suite, in execution order.
const std::vector<std::string>& suite_names();

CommandResult cmd_catalog(const RunConfig& config, std::optional<std::size_t> n_filter);
CommandResult cmd_analyze(const RunConfig& config);
CommandResult cmd_verify(const RunConfig& config);
CommandResult cmd_fit(const RunConfig& config);

struct GridExportConfig {
  std::vector<std::size_t> shape;
  std::optional<std::string> box;
  std::string csv_path;
  std::string meta_path;
};
CommandResult cmd_grid_export(const RunConfig& config, const GridExportConfig& grid);

// Writes --out / --csv atomically and prints the summary (or the JSON when
// --out is "-").
void emit(const RunConfig& config, const CommandResult& result);

}  // namespace qrlab::cli
