#pragma once

#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fraclps/banach.hpp"
#include "fraclps/grid.hpp"

namespace fraclps::cli {

struct HilbertSettings {
    double half_width = 16.0;
    int intervals = 16384;
    int levels = 4;                       // convergence study resolutions N, N/2, ...
    std::vector<int> multiples{16, 8, 4, 2};  // eps = multiple * h
    double threshold = 1e-2;
};

/// Settings shared by all subcommands, read from key=value text.
struct RunConfig {
    int dim = 1;
    int n = 1024;
    double period = 2.0 * std::numbers::pi;
    int m = 1;
    double r = 2.0;
    std::vector<double> alpha{1.0};
    double p = 2.0;
    double q = 2.0;
    double lambda = 2.0;
    double t = 1.0;
    double t_min = 0.0;  // 0: derived from the input spectrum
    double t_max = 0.0;
    int count = 0;
    std::string route = "spectral";
    int near_nodes = 128;
    int far_nodes = 128;
    int subordination_nodes = 256;
    std::optional<double> tolerance;  // overrides every verify tolerance
    std::uint64_t seed = 1;
    std::string out = ".";
    ProbeConfig probe;
    HilbertSettings hilbert;

    GridSpec grid() const { return GridSpec::make(dim, n, period); }
    BanachSpec banach() const { return m == 1 ? BanachSpec::scalar() : BanachSpec::sequence(m, r); }
    bool explicit_time_grid() const { return count > 0; }

    /// Every key with its effective value, one `key=value` per line, fixed order.
    std::string canonical() const;
};

/// Parses key=value lines (`#` comments, blank lines allowed) over the defaults.
/// Throws ConfigError naming the key and its legal range, or the unknown key.
RunConfig parse_config(std::istream& is);
RunConfig load_config(const std::string& path);

/// Applies one key=value pair; same errors as parse_config.
void set_key(RunConfig& cfg, const std::string& key, const std::string& value);

/// Cross-key checks (time grid consistency, probe ranges).
void validate(const RunConfig& cfg);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view text);
std::string hex64(std::uint64_t v);

}  // namespace fraclps::cli
