#include "qjp/cli.hpp"

#include "qjp/error.hpp"

#include <algorithm>
#include <istream>
#include <sstream>

namespace qjp::cli {

void validate(const RunConfig &config) {
    if (config.samples < 1) {
        throw Error(Errc::InvalidConfig, "samples must be at least 1");
    }
    if (!(config.tol > 0.0)) {
        throw Error(Errc::InvalidConfig, "tol must be positive");
    }
    if (config.dim < 2 || config.dim > 8) {
        throw Error(Errc::InvalidConfig, "dim must lie in [2, 8]");
    }
    if (config.mc_samples < 1 || config.grid_points < 1) {
        throw Error(Errc::InvalidConfig, "mc-samples and grid-points must be at least 1");
    }
}

namespace {

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <class T> T parse_number(const std::string &key, const std::string &value) {
    std::istringstream is(value);
    T v{};
    is >> v;
    if (!is || !(is >> std::ws).eof()) {
        throw Error(Errc::InvalidConfig, "bad value for " + key + ": " + value);
    }
    return v;
}

} // namespace

std::map<std::string, std::string> parse_config_file(std::istream &in) {
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(Errc::InvalidConfig, "config line " + std::to_string(lineno) +
                                                 " is not key=value");
        }
        std::string key = trim(line.substr(0, eq));
        std::replace(key.begin(), key.end(), '_', '-');
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

void apply_config_file(RunConfig &config, const std::map<std::string, std::string> &entries,
                       const std::vector<std::string> &set_on_command_line) {
    auto from_flag = [&](const std::string &key) {
        return std::find(set_on_command_line.begin(), set_on_command_line.end(), key) !=
               set_on_command_line.end();
    };
    for (const auto &[key, value] : entries) {
        if (from_flag(key)) {
            continue;
        }
        if (key == "dim") {
            config.dim = parse_number<std::size_t>(key, value);
        } else if (key == "alpha") {
            config.alpha = parse_number<double>(key, value);
        } else if (key == "seed") {
            config.seed = parse_number<std::uint64_t>(key, value);
        } else if (key == "samples") {
            config.samples = parse_number<std::size_t>(key, value);
        } else if (key == "tol") {
            config.tol = parse_number<double>(key, value);
        } else if (key == "candidate") {
            config.candidate = value;
        } else if (key == "output") {
            config.output_path = value;
        } else if (key == "format") {
            if (value != "json" && value != "csv") {
                throw Error(Errc::InvalidConfig, "format must be json or csv");
            }
            config.format = value == "csv" ? Format::csv : Format::json;
        } else if (key == "mc-samples") {
            config.mc_samples = parse_number<std::uint64_t>(key, value);
        } else if (key == "grid-points") {
            config.grid_points = parse_number<std::size_t>(key, value);
        } else {
            throw Error(Errc::InvalidConfig, "unknown config key: " + key);
        }
    }
}

} // namespace qjp::cli
