#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "adelic/dynamics.hpp"

namespace adelic {

/// Outcome of one randomized property suite.  `detail` holds the first
/// failing assertion, empty when the suite passed.
struct SuiteResult {
    std::string name;
    bool passed = true;
    long checks = 0;
    std::string detail;
};

/// Runs every property suite against F with reproducible randomness.
/// With `parallel` set the suites run concurrently on copies of F, which
/// share one cache; results come back in a fixed order either way.
std::vector<SuiteResult> run_selftests(const Field& F, std::uint64_t seed,
                                       bool parallel);

}  // namespace adelic
