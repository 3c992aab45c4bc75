#pragma once

// Acceptance suites: one numbered check per headline property, each with its
// tolerance fixed here.

#include <functional>
#include <string>
#include <vector>

namespace spectral_hardy::verify {

struct SuiteResult {
    int id = 0;
    std::string name;
    bool pass = false;
    /// Measured quantities against their limits, one line.
    std::string detail;
    double seconds = 0.0;
};

/// Ids 1..10.
int suite_count();
std::string suite_name(int id);
/// Runs one suite; exceptions are caught and reported as failures.
SuiteResult run_suite(int id);
/// Runs the given suites in order (all when empty), calling progress after each.
std::vector<SuiteResult> run_suites(const std::vector<int>& ids = {},
                                    const std::function<void(const SuiteResult&)>& progress = {});

}  // namespace spectral_hardy::verify
