#pragma once

#include "padic_lab/suites.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace padic::lab {

enum ExitCode : int {
    kExitPass = 0,
    kExitVerificationFailure = 1,
    kExitConfigError = 2,
    kExitNonConvergence = 3,
};

struct CommandOptions {
    std::string command;
    std::optional<std::filesystem::path> config;  ///< default configuration when empty
    std::filesystem::path out = "padiclab-out";   ///< directory for report.json and the CSV tables
    std::optional<std::uint64_t> seed;            ///< overrides the configured seed
    bool quiet = false;
    Fault fault;                                  ///< test hook for the negative controls
};

/// grid-info, symbol-verify, norms, solve, contraction, convergence, verify.
const std::vector<std::string>& command_names();

/// Runs one command and writes its files. Progress goes to `out` unless quiet;
/// errors always go to `err`. Returns one of the exit codes above.
int run_command(const CommandOptions& options, std::ostream& out, std::ostream& err);

}  // namespace padic::lab
