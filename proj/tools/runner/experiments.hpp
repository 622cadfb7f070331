#pragma once

#include "runner/config.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace splab::runner {

inline const std::vector<std::string>& experiment_kinds()
{
    static const std::vector<std::string> kinds{"kernel", "scaling", "remainder", "randomwave",
                                                "loopset"};
    return kinds;
}

struct RunResult {
    std::vector<std::string> outputs; // file names relative to the output directory
    double wall_seconds = 0.0;
};

//! Validates every key of `cfg` for experiment `kind`, then runs it and
//! writes its reports plus manifest.json into `out`. A seed override is
//! written back into the config so the manifest reruns identically.
RunResult run_experiment(const std::string& kind, Config cfg, const std::filesystem::path& out,
                         std::optional<std::uint64_t> seed_override, unsigned threads);

} // namespace splab::runner
