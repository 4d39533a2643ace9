#pragma once

#include <iosfwd>
#include <optional>

#include "cellhom/config.hpp"

namespace cellhom {

struct RunFlags {
    std::optional<std::string> out;       // overrides config [run] out
    std::optional<std::uint64_t> seed;    // overrides config [run] seed
    std::optional<int> jobs;              // overrides config [run] jobs
    bool no_cache = false;
};

// Executes one CLI command against a config; writes CSV + JSON artifacts into
// the result store and a human summary to `log`.  Returns the process exit
// status (0 success, 1 usage/config error, 2 failed verification).
int run_command(const std::string& command, ExperimentConfig cfg,
                const RunFlags& flags, std::ostream& log);

}  // namespace cellhom
