#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace locons::cli {

struct CheckResult {
    bool pass = false;
    std::string detail;
};

struct Check {
    std::string name;
    std::function<CheckResult()> run;
};

/// The built-in vortex acceptance suite, in report order.
std::vector<Check> verify_checks();

/// Runs the suite on `jobs` threads and prints one PASS/FAIL row per check
/// in suite order. Without `deterministic` a leading metadata line carries
/// the wall-clock time. Returns 0 iff every check passed.
int run_verify(std::ostream& out, bool deterministic, int jobs);

}  // namespace locons::cli
