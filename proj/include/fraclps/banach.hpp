#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fraclps/fracderiv.hpp"
#include "fraclps/grid.hpp"
#include "fraclps/quadrature.hpp"

namespace fraclps {

/// k_j = base 2^j, j < m; rejects frequencies at or above the Nyquist index N/2.
std::vector<int> dyadic_frequencies(int m, int base, int n_points);

/**
 * Geometric family on [base, top]: k_j = max(round(base rho^j), k_{j-1} + 1)
 * with rho = (top/base)^{1/(count-1)}. Prefixes of a longer family are the
 * frequencies used for smaller dimensions, so the families are nested.
 */
std::vector<int> geometric_frequencies(int count, int base, int top);

/// f(x) = sum_j a_j eps_j e^{i k_j x} e_j in l^r_m, one mode per coordinate.
Field make_lacunary_field(const GridSpec& grid, double r, std::span<const double> amplitudes,
                          std::span<const double> signs, std::span<const int> frequencies);
/// Same with k_j = base_freq 2^j.
Field make_lacunary_field(const GridSpec& grid, int m, double r, std::span<const double> amplitudes,
                          std::span<const double> signs, int base_freq);

/// ||g_alpha^q f||_p / ||f||_p.
double cotype_ratio(const Field& f, FracOrder ord, double q, double p, const TimeGrid& tg);
/// ||f||_p / (||E0 f||_p + ||g_alpha^q f||_p).
double type_ratio(const Field& f, FracOrder ord, double q, double p, const TimeGrid& tg);

struct ProbeConfig {
    double r = 2.0;
    double q = 2.0;
    double p = 0.0;  // 0 means p = q
    double alpha = 32.0;
    std::vector<int> m_list{2, 4, 8, 16, 32, 64};
    int trials = 8;
    std::uint64_t seed = 1;
    int n = 4096;
    int base_freq = 1;
    double bounded_threshold = 1.2;  // rho(last)/rho(first) at most this: bounded
    double growth_threshold = 1.5;   // at least this: growing

    double lebesgue_exponent() const { return p == 0.0 ? q : p; }
    /// Throws ConfigError naming the offending field.
    void validate() const;
};

struct ProbeRow {
    int m = 0;
    double rho = 0.0;
    int trials = 0;  // trials evaluated at this m, embedded smaller-m trials included
};

struct ProbeResult {
    std::string direction;  // "cotype" or "type"
    std::vector<ProbeRow> rows;
    double growth_exponent = 0.0;  // least-squares slope of log rho against log m

    /// rho at the largest m over rho at the smallest.
    double trend() const;
    /// "bounded", "growing" or "inconclusive" against the config thresholds.
    std::string verdict(const ProbeConfig& cfg) const;
};

/// Trial field for (seed, m, trial): trial 0 has unit amplitudes and + signs,
/// later trials Rademacher signs and amplitudes uniform in [1/2, 1].
Field probe_trial_field(const ProbeConfig& cfg, int m, int trial);

ProbeResult run_cotype_probe(const ProbeConfig& cfg);
ProbeResult run_type_probe(const ProbeConfig& cfg);

/// `m,rho,trials,growth_exponent` rows.
void write_probe_csv(std::ostream& os, const ProbeResult& res);

}  // namespace fraclps
