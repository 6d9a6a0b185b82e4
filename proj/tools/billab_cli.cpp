// billab command-line driver.  Links only the shared C API (billab.h).

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "billab.h"

int main(int argc, char** argv) {
    CLI::App app{"billab — quasimode non-concentration laboratory for partially "
                 "rectangular billiards"};
    app.require_subcommand(1);
    app.fallthrough(); // accept the shared options after the subcommand name

    std::string config_path, out_dir = ".";
    int threads = 1;
    bool verbose = false;
    app.add_option("--config", config_path, "run configuration file")->required();
    app.add_option("--out", out_dir, "output directory (default: .)");
    app.add_option("--threads", threads, "worker threads for sweeps");
    app.add_flag("--verbose", verbose, "progress output on stderr");

    static const char* kSubcommands[] = {"validate-operator", "eigs", "separable",
                                         "quasimode", "mass-report", "scaling-fit"};
    static const char* kHelp[] = {
        "run the straightening identity suite and emit cutoff constants",
        "solve the Dirichlet eigenproblem in a lambda window and persist modes",
        "1D separable sweeps of the comparison operator",
        "bouncing-ball trial sweeps: residual E(lambda) and wing masses",
        "wing-mass functionals and theorem trend check over persisted modes",
        "fit scaling exponents against the regularity floors"};
    for (size_t i = 0; i < 6; ++i) app.add_subcommand(kSubcommands[i], kHelp[i]);

    CLI11_PARSE(app, argc, argv);

    const std::string sub = app.get_subcommands().front()->get_name();
    int exit_status = 0;
    const blb_status rc =
        blb_run(sub.c_str(), config_path.c_str(), out_dir.c_str(), threads, verbose ? 1 : 0,
                &exit_status);
    if (rc != BLB_OK) {
        std::fprintf(stderr, "billab: %s (%s)\n", blb_last_error(), blb_status_name(rc));
        return 3;
    }
    if (exit_status != 0)
        std::fprintf(stderr, "billab %s: %s\n", sub.c_str(),
                     *blb_last_error() ? blb_last_error() : "failed");
    return exit_status;
}
