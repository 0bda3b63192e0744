#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qjp::cli {

enum class Command { audit, nogo, hv, lattice };
enum class Format { json, csv };

struct RunConfig {
    Command command = Command::audit;
    std::size_t dim = 2;
    std::optional<double> alpha; ///< radians
    std::uint64_t seed = 0;
    std::size_t samples = 1000;
    double tol = 1e-10;
    std::optional<std::string> candidate;
    std::optional<std::string> output_path;
    Format format = Format::json;
    std::uint64_t mc_samples = 20'000;  ///< hidden-variable evaluations per cell in `audit`
    std::size_t grid_points = 100'000; ///< sphere lattice size in `nogo`
};

/// Throws qjp::Error(InvalidConfig) when samples < 1, tol <= 0 or dim is
/// outside [2, 8].
void validate(const RunConfig &config);

/// Flat `key = value` lines; `#` starts a comment. Throws InvalidConfig on a
/// line without '='.
std::map<std::string, std::string> parse_config_file(std::istream &in);

/// Applies file entries to the fields not set on the command line.
void apply_config_file(RunConfig &config, const std::map<std::string, std::string> &entries,
                       const std::vector<std::string> &set_on_command_line);

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 1;
inline constexpr int deviation = 2;
} // namespace exit_code

struct CommandResult {
    std::string report;
    int exit_code = exit_code::ok;
};

CommandResult cmd_audit(const RunConfig &config);
CommandResult cmd_nogo(const RunConfig &config);
CommandResult cmd_hv(const RunConfig &config);
CommandResult cmd_lattice(const RunConfig &config);

/// Full front end: parses `args` (args[0] is the program name), resolves the
/// seed as flag > config file > env_seed > 0, runs the command and writes the
/// report to `out` or to --output. Diagnostics go to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err,
        std::optional<std::string> env_seed = std::nullopt);

} // namespace qjp::cli
