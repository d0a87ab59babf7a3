#ifndef QWLIM_RUNNERS_HPP
#define QWLIM_RUNNERS_HPP

#include <string>

namespace qwlim {

struct RunOptions {
    int threads = 1;
    bool verbose = false;
};

/// Batch drivers behind the CLI subcommands: parse the config document,
/// compute, and write the output files into `out_dir`. Throws on every
/// failure; file contents are deterministic for a fixed config.
/// Commands: resonance | scan | limit-op | converge-1d | converge-2d |
/// curve | evolve.
void run_command(const std::string& command, const std::string& config_text,
                 const std::string& out_dir, const RunOptions& options = {});

} // namespace qwlim

#endif
