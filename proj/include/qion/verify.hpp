// verify.hpp — the built-in invariant suite behind the `qion verify` verb.

#pragma once

#include <string>
#include <vector>

namespace qion::verify {

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double bound = 0.0;
    bool must_exceed = false; // true: pass means measured > bound
    std::string note;
};

/// Runs every invariant check (algebra, route equivalence, dynamics,
/// observables, paper scalars).  Each entry is independent; a throwing check
/// is reported as failed with the exception text in `note`.
std::vector<CheckResult> run_verification();

/// Renders the pass/fail table; returns the number of failures.
int print_report(const std::vector<CheckResult>& results);

} // namespace qion::verify
