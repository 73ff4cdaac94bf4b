#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace loctime {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Runs the invariant suite of every module at desk scale and prints one
/// line per check.
std::vector<CheckResult> run_checks(std::uint64_t seed, std::ostream& log);

}  // namespace loctime
