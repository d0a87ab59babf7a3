// Batch front door for the waveguide thin-limit toolkit. Every subcommand
// reads a JSON config and writes CSV/JSON outputs into --out; schemas are
// documented in the README.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qwlim.h"

namespace {

int exit_code(qwlim_status s) {
    switch (s) {
        case QWLIM_OK: return 0;
        case QWLIM_ERROR_PARSE:
        case QWLIM_ERROR_INVALID_ARGUMENT: return 1;
        case QWLIM_ERROR_NOT_RESONANT: return 2;
        case QWLIM_ERROR_HYPOTHESIS: return 3;
        case QWLIM_ERROR_SOLVER: return 4;
        case QWLIM_ERROR_IO: return 5;
        case QWLIM_ERROR_INTERNAL: return 70;
    }
    return 70;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qwlim - thin quantum waveguides, zero-energy resonances and "
                 "their point-interaction limits"};
    app.set_version_flag("--version", qwlim_version());
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    int threads = 1;
    unsigned long long seed = 0; // reserved; all algorithms are deterministic
    bool verbose = false;
    app.add_option("--config", config_path, "path to the JSON config")
        ->required()
        ->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory (default: .)");
    app.add_option("--threads", threads, "worker threads for sweeps")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "reserved");
    app.add_flag("--verbose", verbose, "per-step progress on stdout");

    const char* const names[] = {"resonance", "scan",  "limit-op", "converge-1d",
                                 "converge-2d", "curve", "evolve"};
    const char* const blurbs[] = {
        "zero-energy resonance report for a potential or curvature",
        "margin sweep over a potential family, with root refinement",
        "limit point interaction and its scattering table",
        "1D scaled-resolvent convergence study",
        "2D strip convergence study (regularized matrix elements)",
        "curve reconstruction, bending angle, self-intersection check",
        "propagator evolution of a Gaussian packet"};
    for (int i = 0; i < 7; ++i)
        app.add_subcommand(names[i], blurbs[i])->fallthrough();

    CLI11_PARSE(app, argc, argv);

    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
        std::fprintf(stderr, "error: cannot read config '%s'\n", config_path.c_str());
        return 1;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string config_text = buffer.str();

    const std::string cmd = app.get_subcommands().front()->get_name();
    const qwlim_status status =
        qwlim_run(cmd.c_str(), config_text.c_str(), out_dir.c_str(), threads,
                  verbose ? 1 : 0);
    if (status != QWLIM_OK)
        std::fprintf(stderr, "error (%s): %s\n", qwlim_status_name(status),
                     qwlim_last_error());
    return exit_code(status);
}
