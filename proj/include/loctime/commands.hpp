#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "loctime/config.hpp"
#include "loctime/ensemble.hpp"
#include "loctime/path.hpp"

namespace loctime {

struct CommandResult {
    int exit_code = 0;
    std::vector<std::filesystem::path> files;
};

/// Driver of the path/converge commands.
std::shared_ptr<const PiecewiseLinearPath> make_driver(const RunConfig& cfg);

/// Runs the determinacy experiment: direct samples for every path (p < 1) or
/// ladder samples (p >= 1), ladder cross-checks on the first scheme_paths
/// paths, Laplace table and KS distance against the first-passage law.
struct DeterminacyResult {
    std::vector<TauSample> samples;
    EnsembleReport report;
};
DeterminacyResult run_determinacy(const RunConfig& cfg);

/// Executes the configured command, writing its files under out_dir.
CommandResult run_command(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);

}  // namespace loctime
