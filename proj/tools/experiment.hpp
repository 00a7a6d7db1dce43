#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "json.hpp"

namespace monoplay::cli {

enum ExitCode { kOk = 0, kCheckFailed = 1, kConfigError = 2, kNumericError = 3 };

// Dispatches one command against a parsed config. CSV artifacts go to out_dir,
// check lines to summary, diagnostics to err.
int run_command(const std::string& command, const nlohmann::json& config,
                const std::filesystem::path& out_dir, std::ostream& summary, std::ostream& err);

int run_command_file(const std::string& command, const std::filesystem::path& config_path,
                     const std::filesystem::path& out_dir, std::ostream& summary,
                     std::ostream& err);

}  // namespace monoplay::cli
