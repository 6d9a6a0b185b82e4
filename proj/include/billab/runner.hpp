#pragma once

#include <string>

#include "billab/config.hpp"

namespace billab {

struct RunContext {
    RunConfig cfg;
    std::string out_dir;
    int threads = 1;
    bool verbose = false;
};

// Subcommands: validate-operator | eigs | separable | quasimode | mass-report |
// scaling-fit.  Writes the artifacts and a manifest into out_dir.  Returns the
// process exit status (0 ok; callers map Error{config_error} to 2 and numerical
// failures to 3).
int run_subcommand(const std::string& subcommand, const RunContext& ctx);

} // namespace billab
