#include "qjp/cli.hpp"

#include <cstdlib>
#include <iostream>

int main(int argc, char **argv) {
    std::vector<std::string> args(argv, argv + argc);
    std::optional<std::string> env_seed;
    if (const char *s = std::getenv("QPROB_SEED")) {
        env_seed = s;
    }
    return qjp::cli::run(args, std::cout, std::cerr, env_seed);
}
