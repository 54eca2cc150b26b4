#ifndef GAMMAFILT_CLI_HPP
#define GAMMAFILT_CLI_HPP

// Command implementations behind the gammafilt executable.  Each command
// returns a JSON report plus an exit code; run() parses argv and prints.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gammafilt/grouprings.hpp"

namespace gammafilt::cli {

enum Exit : int { verified = 0, refuted = 1, usage = 2, budget = 3 };

struct RunConfig {
    std::string command;
    std::string subcommand; // fgl operation or verify preset
    std::optional<unsigned long> p;
    std::optional<unsigned> r;
    std::optional<unsigned> n;
    std::optional<unsigned long> q;
    std::vector<unsigned> exponents;
    unsigned max_topdeg = 24;
    unsigned max_n = 6;
    unsigned extra_weight = 0;
    int trunc = 0;
    int v1_cap = 0;
    int saturation = -1;
    std::string presentation_file;
    std::string format = "table";
    std::string out;
    Budget budget;
};

struct CommandResult {
    nlohmann::json report;
    int exit_code = verified;
    std::string table;
};

inline constexpr const char* tool_version = "0.1.0";

CommandResult cmd_grgamma(const RunConfig& cfg);
CommandResult cmd_verify(const RunConfig& cfg);
CommandResult cmd_fgl(const RunConfig& cfg);
CommandResult cmd_gamma_vs_ideal(const RunConfig& cfg);

/// Dispatches on cfg.command; maps exceptions to exit codes.
CommandResult dispatch(const RunConfig& cfg);

/// Full front end: parse, run, write table or JSON to `out` (or --out).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Removes timing fields so reports can be compared byte for byte.
nlohmann::json without_timings(nlohmann::json report);

} // namespace gammafilt::cli

#endif
