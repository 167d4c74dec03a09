#pragma once

#include <map>
#include <string>
#include <vector>

namespace nqent {

// Outcome of one oracle-equivalence check run by `verify`.
struct CheckResult {
    std::string name;
    std::string statistic; // what `value` measures
    double value = 0.0;
    double limit = 0.0;
    bool passed = false;
};

// Default limit for each named check.
std::map<std::string, double> default_verify_tolerances();

// Runs every check. Entries of `overrides` replace the matching default
// limits; unknown names are rejected with ValidationError.
std::vector<CheckResult> run_verification(const std::map<std::string, double>& overrides,
                                          unsigned threads);

} // namespace nqent
