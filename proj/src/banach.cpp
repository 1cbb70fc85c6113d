#include "fraclps/banach.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "fraclps/errors.hpp"
#include "fraclps/parallel.hpp"
#include "fraclps/squarefuncs.hpp"

namespace fraclps {

std::vector<int> dyadic_frequencies(int m, int base, int n_points) {
    if (m < 1 || base < 1) throw std::invalid_argument("lacunary family needs m >= 1 and base >= 1");
    std::vector<int> k(m);
    long long v = base;
    for (int j = 0; j < m; ++j) {
        if (v >= n_points / 2) {
            std::ostringstream msg;
            msg << "lacunary frequency " << v << " (j = " << j << ") is at or above the Nyquist index "
                << n_points / 2;
            throw std::invalid_argument(msg.str());
        }
        k[j] = static_cast<int>(v);
        v *= 2;
    }
    return k;
}

std::vector<int> geometric_frequencies(int count, int base, int top) {
    if (count < 1 || base < 1) throw std::invalid_argument("geometric family needs count >= 1 and base >= 1");
    if (top - base + 1 < count) throw std::invalid_argument("geometric family does not fit below the top frequency");
    std::vector<int> k(count);
    const double ratio = count > 1 ? std::pow(static_cast<double>(top) / base, 1.0 / (count - 1)) : 1.0;
    int prev = 0;
    for (int j = 0; j < count; ++j) {
        const int v = static_cast<int>(std::lround(base * std::pow(ratio, j)));
        k[j] = std::max(v, prev + 1);
        prev = k[j];
    }
    if (k.back() > top) throw std::invalid_argument("geometric family does not fit below the top frequency");
    return k;
}

Field make_lacunary_field(const GridSpec& grid, double r, std::span<const double> amplitudes,
                          std::span<const double> signs, std::span<const int> frequencies) {
    const std::size_t m = frequencies.size();
    if (m == 0 || amplitudes.size() != m || signs.size() != m) {
        throw std::invalid_argument("lacunary field needs one amplitude, sign and frequency per coordinate");
    }
    if (grid.dim != 1) throw std::invalid_argument("lacunary fields are one-dimensional");
    for (std::size_t j = 0; j < m; ++j) {
        if (frequencies[j] <= 0 || frequencies[j] >= grid.n / 2) {
            throw std::invalid_argument("lacunary frequency outside (0, N/2)");
        }
        if (j > 0 && frequencies[j] == frequencies[j - 1]) {
            throw std::invalid_argument("lacunary frequencies must be distinct");
        }
    }
    const BanachSpec bs = BanachSpec::sequence(static_cast<int>(m), r);
    const double scale = 2.0 * std::numbers::pi / grid.period;
    return Field::sample(grid, bs, [&](std::span<const double> x, std::span<cplx> out) {
        for (std::size_t j = 0; j < m; ++j) {
            out[j] = amplitudes[j] * signs[j] * std::polar(1.0, scale * frequencies[j] * x[0]);
        }
    });
}

Field make_lacunary_field(const GridSpec& grid, int m, double r, std::span<const double> amplitudes,
                          std::span<const double> signs, int base_freq) {
    const std::vector<int> k = dyadic_frequencies(m, base_freq, grid.n);
    return make_lacunary_field(grid, r, amplitudes, signs, k);
}

double cotype_ratio(const Field& f, FracOrder ord, double q, double p, const TimeGrid& tg) {
    const double fn = lp_norm(f, p);
    if (!(fn > 0.0)) throw std::invalid_argument("cotype ratio needs a nonzero field");
    const SquareFunctionReport g = g_function(f, ord, q, tg);
    return lp_norm(f.grid(), g.values, p) / fn;
}

double type_ratio(const Field& f, FracOrder ord, double q, double p, const TimeGrid& tg) {
    const double fn = lp_norm(f, p);
    if (!(fn > 0.0)) throw std::invalid_argument("type ratio needs a nonzero field");
    const SquareFunctionReport g = g_function(f, ord, q, tg);
    return fn / (lp_norm(e0_project(f), p) + lp_norm(f.grid(), g.values, p));
}

// ---------------------------------------------------------------- probes

void ProbeConfig::validate() const {
    auto fail = [](const std::string& key, const std::string& range) {
        throw ConfigError("probe." + key + " must be " + range);
    };
    if (!(r >= 1.0)) fail("r", "in [1, inf]");
    if (!(q > 1.0) || !std::isfinite(q)) fail("q", "in (1, inf)");
    if (p != 0.0 && (!(p > 1.0) || !std::isfinite(p))) fail("p", "in (1, inf) (or 0 for p = q)");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) fail("alpha", "positive");
    if (m_list.empty()) fail("m_list", "nonempty");
    for (std::size_t i = 0; i < m_list.size(); ++i) {
        if (m_list[i] < 1) fail("m_list", "positive integers");
        if (i > 0 && m_list[i] <= m_list[i - 1]) fail("m_list", "strictly increasing");
    }
    if (trials < 1) fail("trials", ">= 1");
    if (n < 8 || (n & (n - 1)) != 0) fail("n", "a power of two >= 8");
    if (base_freq < 1) fail("base_freq", ">= 1");
    if (n / 2 - 1 - base_freq + 1 < m_list.back()) fail("m_list", "small enough to fit distinct frequencies below N/2");
    if (!(bounded_threshold > 0.0) || !(growth_threshold > 0.0)) fail("thresholds", "positive");
}

double ProbeResult::trend() const {
    if (rows.empty() || !(rows.front().rho > 0.0)) return 0.0;
    return rows.back().rho / rows.front().rho;
}

std::string ProbeResult::verdict(const ProbeConfig& cfg) const {
    const double t = trend();
    if (t <= cfg.bounded_threshold) return "bounded";
    if (t >= cfg.growth_threshold) return "growing";
    return "inconclusive";
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform in [0, 1) from the top 53 bits; fixed across standard libraries.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

ProbeResult run_probe(const ProbeConfig& cfg, bool cotype) {
    cfg.validate();
    const double p = cfg.lebesgue_exponent();
    const FracOrder ord = FracOrder::of(cfg.alpha);
    ProbeResult res;
    res.direction = cotype ? "cotype" : "type";
    double running = 0.0;
    int seen = 0;
    for (int m : cfg.m_list) {
        std::vector<double> ratios(cfg.trials);
        parallel_for(ratios.size(), [&](std::size_t b, std::size_t e) {
            for (std::size_t t = b; t < e; ++t) {
                const Field f = probe_trial_field(cfg, m, static_cast<int>(t));
                const TimeGrid tg = square_time_grid(f, cfg.q, cfg.alpha);
                ratios[t] = cotype ? cotype_ratio(f, ord, cfg.q, p, tg) : type_ratio(f, ord, cfg.q, p, tg);
            }
        });
        // Smaller-m trials embed (zero-padded) into this dimension with identical
        // ratios, so the nested maximum is the running one.
        for (double v : ratios) running = std::max(running, v);
        seen += cfg.trials;
        res.rows.push_back({m, running, seen});
    }
    if (res.rows.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(res.rows.size());
        for (const auto& row : res.rows) {
            const double x = std::log(static_cast<double>(row.m)), y = std::log(row.rho);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double den = n * sxx - sx * sx;
        res.growth_exponent = den > 0.0 ? (n * sxy - sx * sy) / den : 0.0;
    }
    return res;
}

}  // namespace

Field probe_trial_field(const ProbeConfig& cfg, int m, int trial) {
    const GridSpec grid = GridSpec::make(1, cfg.n);
    const int m_max = cfg.m_list.empty() ? m : std::max(m, cfg.m_list.back());
    const std::vector<int> all = geometric_frequencies(m_max, cfg.base_freq, cfg.n / 2 - 1);
    std::vector<double> amp(m, 1.0), sign(m, 1.0);
    if (trial > 0) {
        const std::uint64_t key =
            splitmix64(splitmix64(cfg.seed) ^ (static_cast<std::uint64_t>(m) << 32) ^ static_cast<std::uint64_t>(trial));
        std::mt19937_64 rng(key);
        for (int j = 0; j < m; ++j) {
            sign[j] = unit(rng) < 0.5 ? -1.0 : 1.0;
            amp[j] = 0.5 + 0.5 * unit(rng);
        }
    }
    return make_lacunary_field(grid, cfg.r, amp, sign, std::span<const int>(all.data(), m));
}

ProbeResult run_cotype_probe(const ProbeConfig& cfg) { return run_probe(cfg, true); }

ProbeResult run_type_probe(const ProbeConfig& cfg) {
    if (!(cfg.q <= 2.0)) throw ConfigError("probe.q must be in (1, 2] for the type probe");
    return run_probe(cfg, false);
}

void write_probe_csv(std::ostream& os, const ProbeResult& res) {
    os << "m,rho,trials,growth_exponent\n";
    char buf[64];
    for (const auto& row : res.rows) {
        os << row.m << ',';
        std::snprintf(buf, sizeof buf, "%.17g", row.rho);
        os << buf << ',' << row.trials << ',';
        std::snprintf(buf, sizeof buf, "%.17g", res.growth_exponent);
        os << buf << '\n';
    }
}

}  // namespace fraclps
