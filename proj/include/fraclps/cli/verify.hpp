#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fraclps/cli/config.hpp"

namespace fraclps::cli {

/// One verification outcome: passes when value <= tolerance.
struct CheckRow {
    std::string name;
    std::string identity;  // the identity or inequality being checked, in words
    double value = 0.0;    // residual, relative change or ratio, per check
    double tolerance = 0.0;
    bool pass = false;
};

/// semigroup, fracderiv, squarefuncs, hilbert, all.
const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);

/// Runs the suite's checks in a fixed order. Accuracy-budget failures inside a
/// check become FAIL rows with an infinite value.
std::vector<CheckRow> run_suite(const std::string& suite, const RunConfig& cfg);

/// Fixed-width table, then a `passed k of n` line.
void write_table(std::ostream& os, const std::vector<CheckRow>& rows);
/// `check,identity,value,tolerance,result` rows.
void write_verify_csv(std::ostream& os, const std::vector<CheckRow>& rows);

}  // namespace fraclps::cli
