#include "fraclps/cli/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>

#include "fraclps/errors.hpp"
#include "fraclps/fracderiv.hpp"
#include "fraclps/hilbert.hpp"
#include "fraclps/semigroup.hpp"
#include "fraclps/squarefuncs.hpp"

namespace fraclps::cli {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Suite {
    const RunConfig& cfg;
    std::vector<CheckRow> rows;

    void add(const std::string& name, const std::string& identity, double tolerance,
             const std::function<double()>& measure) {
        CheckRow row{name, identity, kInf, cfg.tolerance.value_or(tolerance), false};
        try {
            row.value = measure();
        } catch (const AccuracyError&) {
            row.value = kInf;
        }
        row.pass = std::isfinite(row.value) && row.value <= row.tolerance;
        rows.push_back(row);
    }

    GridSpec grid() const { return cfg.grid(); }
    int band() const { return std::max(1, std::min(8, cfg.n / 8)); }
    Field random(std::uint64_t k, bool real = false) const {
        return random_band_limited(grid(), cfg.banach(), band(), cfg.seed * 1000 + k, real);
    }
    Field random_scalar(std::uint64_t k) const {
        return random_band_limited(grid(), BanachSpec::scalar(), band(), cfg.seed * 1000 + k);
    }
    Field mode() const {
        return Field::sample(grid(), BanachSpec::scalar(), [&](std::span<const double> x, std::span<cplx> out) {
            out[0] = std::polar(1.0, 2.0 * std::numbers::pi / cfg.period * x[0]);
        });
    }
};

double rel_change(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b)) return kInf;
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

constexpr int kFields = 3;
const double kTimes[] = {0.1, 1.0, 10.0};
const double kExponents[] = {1.0, 2.0, 4.0, kInf};

void semigroup_suite(Suite& s) {
    const SubordinationQuad quad(s.cfg.subordination_nodes);
    s.add("subordination", "P_t f = subordinated heat semigroup", 1e-8, [&] {
        double worst = 0.0;
        for (int k = 0; k < kFields; ++k) {
            const Field f = s.random(k);
            for (double t : kTimes) {
                worst = std::max(worst, relative_l2_distance(subordinate_poisson(f, t, quad), poisson_apply(f, t)));
            }
        }
        return worst;
    });
    s.add("semigroup_law", "P_s P_t f = P_{s+t} f", 1e-12, [&] {
        const Field f = s.random(0);
        return relative_l2_distance(poisson_apply(poisson_apply(f, 0.3), 0.7), poisson_apply(f, 1.0));
    });
    s.add("contractivity", "||P_t f||_p <= ||f||_p", 1e-12, [&] {
        double worst = 0.0;
        const Field f = s.random(1, true);
        for (double p : kExponents) {
            for (double t : {0.5, 1.0, 10.0}) {
                worst = std::max(worst, lp_norm(poisson_apply(f, t), p) / lp_norm(f, p) - 1.0);
            }
        }
        return std::max(worst, 0.0);
    });
    s.add("derivative_fd", "d/dt P_t f = centered difference", 1e-6, [&] {
        const Field f = s.random(2);
        const double t = 1.0, h = 1e-4;
        const Field fd = (1.0 / (2.0 * h)) * (poisson_apply(f, t + h) - poisson_apply(f, t - h));
        return relative_l2_distance(fd, poisson_derivative_integer(f, t, 1));
    });
    s.add("integer_decay", "sup_t t^m ||d^m P_t f||_p / ||f||_p stable", 0.05, [&] {
        double worst = 0.0;
        const Field f = s.random(3);
        for (int m : {1, 2}) {
            for (double p : kExponents) {
                const DecayReport r = check_decay_bound(f, FracOrder::of(m), p, decay_sweep_grid());
                worst = std::max(worst, rel_change(r.sup_ratio, r.sup_ratio_refined));
            }
        }
        return worst;
    });
}

void fracderiv_suite(Suite& s) {
    const SWBudget budget{s.cfg.near_nodes, s.cfg.far_nodes};
    s.add("route_agreement", "quadrature D^a P_t f = spectral D^a P_t f", 1e-6, [&] {
        double worst = 0.0;
        for (int k = 0; k < kFields; ++k) {
            const Field f = s.random(10 + k);
            for (double a : {0.3, 0.5, 1.0, 1.3, 2.0, 2.7}) {
                for (double t : kTimes) {
                    const FracOrder ord = FracOrder::of(a);
                    worst = std::max(worst, relative_l2_distance(frac_derivative_quadrature(f, t, ord, budget),
                                                                 frac_derivative_spectral(f, t, ord)));
                }
            }
        }
        return worst;
    });
    s.add("integer_order", "quadrature D^j P_t f = d^j P_t f", 1e-7, [&] {
        double worst = 0.0;
        const Field f = s.random(13);
        for (int j : {1, 2}) {
            for (double t : kTimes) {
                worst = std::max(worst, relative_l2_distance(frac_derivative_quadrature(f, t, FracOrder::of(j), budget),
                                                             poisson_derivative_integer(f, t, j)));
            }
        }
        return worst;
    });
    s.add("phase", "e^{i pi a} D^a P_t f is real for real f", 1e-10, [&] {
        const Field f = s.random(14, true);
        double worst = 0.0;
        for (double a : {0.3, 1.3, 2.7}) {
            const Field d = frac_derivative_spectral(f, 1.0, a);
            const cplx undo = std::conj(derivative_phase(a));
            double im = 0.0, mag = 0.0;
            for (const auto& v : d.values()) {
                im = std::max(im, std::abs((undo * v).imag()));
                mag = std::max(mag, std::abs(v));
            }
            if (mag > 0.0) worst = std::max(worst, im / mag);
        }
        return worst;
    });
    s.add("decay_bound", "sup_t t^a ||D^a P_t f||_p / ||f||_p stable", 0.05, [&] {
        double worst = 0.0;
        const Field f = s.random(15);
        for (double a : {0.5, 1.3}) {
            for (double p : kExponents) {
                const DecayReport r = check_decay_bound(f, FracOrder::of(a), p, decay_sweep_grid());
                worst = std::max(worst, rel_change(r.sup_ratio, r.sup_ratio_refined));
            }
        }
        return worst;
    });
    s.add("order_reduction_mode", "SW integral of D^g P gives D^b P, single mode", 1e-6,
          [&] { return check_order_reduction(s.mode(), 0.5, 1.5, 1.0, budget); });
    s.add("order_reduction", "SW integral of D^g P gives D^b P", 1e-5,
          [&] { return check_order_reduction(s.random(16), 0.5, 1.5, 1.0, budget); });
    s.add("composition_mode", "D^a D^b P_t f = D^{a+b} P_t f, single mode", 1e-6,
          [&] { return check_composition(s.mode(), 0.75, 0.75, 1.0, budget); });
    s.add("composition", "D^a D^b P_t f = D^{a+b} P_t f", 1e-5,
          [&] { return check_composition(s.random(17), 0.5, 1.7, 1.0, budget); });
    s.add("kernel_bounds", "sup |x| A(x) and |x|^2 |A'(x)| stable", 0.1, [&] {
        double worst = 0.0;
        for (double a : {0.5, 1.0}) {
            const KernelBoundsReport r = check_kernel_bounds(FracOrder::of(a), 2.0, 1e-2, 1e2, 41);
            worst = std::max({worst, rel_change(r.size_sup, r.size_sup_refined),
                              rel_change(r.gradient_sup, r.gradient_sup_refined)});
        }
        return worst;
    });
}

void squarefuncs_suite(Suite& s) {
    const Field one = s.mode();
    s.add("g_single_mode", "g(e^{ix}) = Gamma(q a)^{1/q} / q^a", 1e-6, [&] {
        double worst = 0.0;
        for (auto [a, q] : {std::pair{1.0, 2.0}, std::pair{0.5, 3.0}}) {
            const double expect = std::pow(std::tgamma(q * a), 1.0 / q) / std::pow(q, a);
            const SquareFunctionReport g = g_function(one, FracOrder::of(a), q, square_time_grid(one, q, a));
            for (double v : g.values) worst = std::max(worst, std::abs(v - expect) / expect);
        }
        return worst;
    });
    s.add("beta_gamma", "g_b <= Gamma(b)/Gamma(g) g_g pointwise", 1e-4, [&] {
        const Field f = s.random(20);
        const Band band = spectral_band(f);
        double worst = 0.0;
        for (auto [b, g] : {std::pair{0.5, 1.5}, std::pair{1.0, 2.0}, std::pair{1.3, 2.7}}) {
            for (double q : {2.0, 3.0}) {
                const BetaGammaReport r = check_beta_gamma_comparison(f, b, g, q, square_time_grid(band, q, b, g));
                worst = std::max(worst, r.max_ratio / r.constant - 1.0);
            }
        }
        return std::max(worst, 0.0);
    });
    s.add("Lq_identity_mode", "||S f||_q^q = v_n ||g f||_q^q, single mode", 1e-6, [&] {
        return check_Lq_identity(one, FracOrder::of(1.0), 2.0, square_time_grid(one, 2.0, 1.0));
    });
    s.add("Lq_identity", "||S f||_q^q = v_n ||g f||_q^q", 1e-4, [&] {
        double worst = 0.0;
        for (int k = 0; k < 2; ++k) {
            const Field f = s.random(21 + k);
            worst = std::max(worst, check_Lq_identity(f, FracOrder::of(1.0), 2.0, square_time_grid(f, 2.0, 1.0)));
        }
        return worst;
    });
    s.add("S_le_gstar", "S <= 2^{lambda n / q} g*_lambda pointwise", 1e-4, [&] {
        const Field f = s.random(23);
        const TimeGrid tg = square_time_grid(f, 2.0, 1.0);
        double worst = 0.0;
        for (double lambda : {2.0, 4.0}) {
            worst = std::max(worst, check_S_le_gstar(f, FracOrder::of(1.0), 2.0, lambda, tg).max_ratio - 1.0);
        }
        return std::max(worst, 0.0);
    });
    s.add("g_over_S", "max g / S stable under refinement", 0.1, [&] {
        const Field f = s.random(24);
        return check_g_le_S(f, FracOrder::of(1.0), 2.0, square_time_grid(f, 2.0, 1.0)).relative_change();
    });
    s.add("polarization_mode", "polarization with conjugate pairing = L, single mode", 1e-8, [&] {
        const FracOrder ord = FracOrder::of(0.8);
        const PolarizationResult r = check_polarization(one, one, ord, square_time_grid(one, 2.0, 0.8));
        const double volume = s.grid().volume();
        return std::max(std::abs(r.lhs - volume), std::abs(r.rhs - volume)) / volume;
    });
    s.add("polarization", "int f conj(g) = 4^a/Gamma(2a) int int paired derivatives", 1e-6, [&] {
        const Field f = s.random_scalar(25);
        const Field g = s.random_scalar(26);
        const Band bf = spectral_band(f), bg = spectral_band(g);
        const Band band{std::min(bf.min, bg.min), std::max(bf.max, bg.max)};
        return check_polarization(f, g, FracOrder::of(0.8), square_time_grid(band, 2.0, 0.8)).residual;
    });
    s.add("iteration", "double integral = B(kq, q) single integral", 1e-4, [&] {
        const Field f = s.random_scalar(27);
        double worst = 0.0;
        for (int k : {1, 2}) worst = std::max(worst, check_iteration_identity(f, k, 2.0).residual);
        return worst;
    });
    s.add("maximal_domination", "sup_t weighted average / M h stable", 0.1, [&] {
        const Field f = s.random_scalar(28);
        std::vector<cplx> h(f.points());
        for (std::size_t j = 0; j < h.size(); ++j) h[j] = std::norm(f(j));
        const Field hf(s.grid(), BanachSpec::scalar(), std::move(h));
        const TimeGrid tg(s.grid().spacing(), 0.5 * s.cfg.period, 41);
        return check_maximal_domination(hf, s.cfg.lambda, tg).relative_change();
    });
}

void hilbert_suite(Suite& s) {
    const auto& hs = s.cfg.hilbert;
    s.add("hilbert_odd", "H_eps f(-.)(-x) = -H_eps f(x)", 1e-12, [&] {
        const LineSample f = hilbert_test_field(1, hs.half_width, hs.intervals);
        std::vector<cplx> mirrored(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) mirrored[i] = f.at(f.size() - 1 - i)[0];
        const LineSample g(f.half_width(), f.intervals(), f.banach(), std::move(mirrored));
        const double eps = 8.0 * f.step();
        const LineSample hf = truncated_hilbert(f, eps), hg = truncated_hilbert(g, eps);
        double worst = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            worst = std::max(worst, std::abs(hg.at(f.size() - 1 - i)[0] + hf.at(i)[0]));
            scale = std::max(scale, std::abs(hf.at(i)[0]));
        }
        return scale > 0.0 ? worst / scale : worst;
    });
    s.add("hilbert_indicator", "H 1_[-1,1] (2) = log 3", 5e-3, [&] {
        const LineSample f = LineSample::sample(hs.half_width, hs.intervals, BanachSpec::scalar(),
                                                [](double x, std::span<cplx> out) { out[0] = std::abs(x) <= 1.0; });
        const LineSample h = truncated_hilbert(f, 2.0 * f.step());
        const std::size_t at = static_cast<std::size_t>(f.half() + std::lround(2.0 / f.step()));
        return std::abs(h.at(at)[0].real() - std::log(3.0));
    });
    s.add("comparison", "|H*_phi f - H* f| / M||f|| stable under h -> h/2", 0.1, [&] {
        double worst = 0.0;
        for (int idx : {0, 4, 8}) {
            double r[2];
            for (int j = 0; j < 2; ++j) {
                const LineSample f = hilbert_test_field(idx, hs.half_width, hs.intervals / (2 - j));
                r[j] = comparison_ratio(f, CutoffPhi{}, default_eps_grid(f));
            }
            worst = std::max(worst, rel_change(r[0], r[1]));
        }
        return worst;
    });
    s.add("convergence", "median oscillation ratio under h -> h/2", 0.75, [&] {
        const LineSample g = gaussian_line_sample(hs.half_width, hs.intervals);
        const auto rows = convergence_study(g, hs.levels, hs.multiples, hs.threshold);
        double worst = 0.0;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            worst = std::max(worst, rows[i - 1].median_osc > 0.0 ? rows[i].median_osc / rows[i - 1].median_osc : kInf);
        }
        return worst;
    });
    s.add("maximal_sublinear", "M(h1 + h2) <= M h1 + M h2", 1e-12, [&] {
        const LineSample a = hilbert_test_field(2, hs.half_width, hs.intervals / 4);
        const LineSample b = hilbert_test_field(5, hs.half_width, hs.intervals / 4);
        const std::vector<double> na = a.norms(), nb = b.norms();
        std::vector<double> sum(na.size());
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = na[i] + nb[i];
        const auto ms = hardy_littlewood_maximal(a, sum);
        const auto ma = hardy_littlewood_maximal(a, na), mb = hardy_littlewood_maximal(a, nb);
        double worst = 0.0;
        for (std::size_t i = 0; i < sum.size(); ++i) {
            const double rhs = ma[i] + mb[i];
            if (rhs > 0.0) worst = std::max(worst, (ms[i] - rhs) / rhs);
        }
        return std::max(worst, 0.0);
    });
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"semigroup", "fracderiv", "squarefuncs", "hilbert", "all"};
    return names;
}

bool is_suite(const std::string& name) {
    const auto& n = suite_names();
    return std::find(n.begin(), n.end(), name) != n.end();
}

std::vector<CheckRow> run_suite(const std::string& suite, const RunConfig& cfg) {
    if (!is_suite(suite)) throw ConfigError("suite must be one of semigroup, fracderiv, squarefuncs, hilbert, all");
    Suite s{cfg, {}};
    const bool all = suite == "all";
    if (all || suite == "semigroup") semigroup_suite(s);
    if (all || suite == "fracderiv") fracderiv_suite(s);
    if (all || suite == "squarefuncs") squarefuncs_suite(s);
    if (all || suite == "hilbert") hilbert_suite(s);
    return s.rows;
}

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

}  // namespace

void write_table(std::ostream& os, const std::vector<CheckRow>& rows) {
    std::size_t wn = 5, wi = 8;
    for (const auto& r : rows) {
        wn = std::max(wn, r.name.size());
        wi = std::max(wi, r.identity.size());
    }
    auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w - s.size() + 2, ' '); };
    os << pad("check", wn) << pad("identity", wi) << pad("value", 10) << pad("tolerance", 10) << "result\n";
    std::size_t passed = 0;
    for (const auto& r : rows) {
        os << pad(r.name, wn) << pad(r.identity, wi) << pad(sci(r.value), 10) << pad(sci(r.tolerance), 10)
           << (r.pass ? "PASS" : "FAIL") << '\n';
        passed += r.pass;
    }
    os << "passed " << passed << " of " << rows.size() << '\n';
}

void write_verify_csv(std::ostream& os, const std::vector<CheckRow>& rows) {
    os << "check,identity,value,tolerance,result\n";
    char buf[40];
    for (const auto& r : rows) {
        os << r.name << ",\"" << r.identity << "\",";
        std::snprintf(buf, sizeof buf, "%.17g", r.value);
        os << buf << ',';
        std::snprintf(buf, sizeof buf, "%.17g", r.tolerance);
        os << buf << ',' << (r.pass ? "PASS" : "FAIL") << '\n';
    }
}

}  // namespace fraclps::cli
