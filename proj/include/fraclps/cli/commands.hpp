#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fraclps::cli {

inline constexpr const char* kVersion = "1.0.0";

/// Exit codes.
enum Exit : int { kOk = 0, kVerifyFail = 1, kConfig = 2, kInput = 3, kAccuracy = 4 };

/**
 * Entry point of the `fraclps` tool without argv[0]:
 *
 *   compute --kind {semigroup,fracderiv,gfun,area,gstar} --input F [--config C] [--out D] [--seed N]
 *   verify  --suite {semigroup,fracderiv,squarefuncs,hilbert,all} [--config C] [--out D] [--seed N]
 *   probe   --kind {cotype,type,hilbert-convergence} [--input F] [--config C] [--out D] [--seed N]
 *
 * Results go to files under the output directory (written atomically); the
 * summary goes to `out`, diagnostics to `err`.
 */
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Writes `content` to `path` through a temporary file and a rename.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace fraclps::cli
