#include "fraclps/fracderiv.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "fraclps/errors.hpp"
#include "fraclps/parallel.hpp"
#include "fraclps/semigroup.hpp"

namespace fraclps {

namespace {

constexpr double pi = std::numbers::pi;

void require_positive_time(double t, const char* what) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument(std::string(what) + ": t must be positive");
    }
}

// e^{+i pi nu}, the prefactor phase of every SW-type integral.
cplx sw_phase(double nu) { return derivative_phase(-nu); }

// Certify the SW rule on the frequency band of the grid.
void certify(const SWQuadrature& sw, double t, double s_max, const GridSpec& g, double tolerance,
             const char* what) {
    const double err = sw.exponential_error(t, s_max, g.min_frequency(), g.max_frequency());
    if (!(err <= tolerance)) {
        std::ostringstream msg;
        msg << what << ": SW quadrature (" << sw.near_nodes() << "+" << sw.far_nodes()
            << " nodes, exponent " << sw.nu() << ") has relative error " << err << " > " << tolerance
            << " at t = " << t;
        throw AccuracyError(msg.str());
    }
}

// sum_j w_j F(s_j), F field-valued, in fixed node order.
template <typename F>
Field accumulate(const Field& like, const QuadratureRule& rule, cplx prefactor, F&& term) {
    std::vector<cplx> acc(like.values().size());
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const Field v = term(rule.nodes[j]);
        const auto vals = v.values();
        const double w = rule.weights[j];
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * vals[i];
    }
    for (auto& a : acc) a *= prefactor;
    return Field(like.grid(), like.banach(), std::move(acc));
}

}  // namespace

FracOrder FracOrder::of(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("fractional order must be positive and finite");
    }
    return FracOrder{alpha, static_cast<int>(std::floor(alpha)) + 1};
}

cplx derivative_phase(double alpha) {
    // Reduce modulo 2 so the angle stays small.
    double a = std::fmod(alpha, 2.0);
    if (a < 0.0) a += 2.0;
    const double twice = 2.0 * a;
    if (twice == std::floor(twice)) {
        switch (static_cast<int>(twice) % 4) {
            case 0: return {1.0, 0.0};
            case 1: return {0.0, -1.0};
            case 2: return {-1.0, 0.0};
            default: return {0.0, 1.0};
        }
    }
    return std::polar(1.0, -pi * a);
}

Field frac_derivative_spectral(const Field& f, double t, double alpha) {
    require_positive_time(t, "frac_derivative_spectral");
    if (!(alpha > 0.0)) throw std::invalid_argument("frac_derivative_spectral: alpha must be positive");
    const cplx phase = derivative_phase(alpha);
    return apply_multiplier(f, [=](double xi) {
        if (xi == 0.0) return cplx(0.0);
        return phase * std::exp(alpha * std::log(xi) - t * xi);
    });
}

Field scaled_frac_derivative(const Spectrum& spec, double t, double alpha) {
    require_positive_time(t, "scaled_frac_derivative");
    if (!(alpha > 0.0)) throw std::invalid_argument("scaled_frac_derivative: alpha must be positive");
    const cplx phase = derivative_phase(alpha);
    // (t xi)^alpha e^{-t xi} in log form, safe for large t xi.
    return apply_multiplier(spec, [=](double xi) {
        if (xi == 0.0) return cplx(0.0);
        const double s = t * xi;
        return phase * std::exp(alpha * std::log(s) - s);
    });
}

Field scaled_frac_derivative(const Field& f, double t, double alpha) {
    return scaled_frac_derivative(forward_transform(f), t, alpha);
}

Field frac_derivative_quadrature(const Field& f, double t, FracOrder ord, const SWBudget& budget,
                                 double tolerance) {
    require_positive_time(t, "frac_derivative_quadrature");
    const double nu = ord.gap();
    const SWQuadrature sw(nu, budget.near_nodes, budget.far_nodes);
    const double s_max = sw_extent(t, f.grid().min_frequency());
    certify(sw, t, s_max, f.grid(), tolerance, "frac_derivative_quadrature");
    const QuadratureRule rule = sw.rule(t, s_max);
    const cplx pref = sw_phase(nu) / std::tgamma(nu);
    return accumulate(f, rule, pref,
                      [&](double s) { return poisson_derivative_integer(f, t + s, ord.m); });
}

DecayReport check_decay_bound(const Field& f, FracOrder ord, double p, const TimeGrid& tg) {
    const double fn = lp_norm(f, p);
    if (!(fn > 0.0)) throw std::invalid_argument("check_decay_bound: f must be nonzero");
    auto sweep = [&](const TimeGrid& grid, double& argmax) {
        double best = 0.0;
        argmax = grid.nodes()[0];
        for (double t : grid.nodes()) {
            const double v = lp_norm(scaled_frac_derivative(f, t, ord.alpha), p) / fn;
            if (v > best) {
                best = v;
                argmax = t;
            }
        }
        return best;
    };
    DecayReport rep;
    double unused = 0.0;
    rep.sup_ratio = sweep(tg, rep.argmax_t);
    rep.sup_ratio_refined = sweep(tg.refined(), unused);
    if (rep.sup_ratio > 0.0) {
        rep.stable = std::abs(rep.sup_ratio_refined - rep.sup_ratio) <= 0.05 * rep.sup_ratio;
    }
    return rep;
}

TimeGrid decay_sweep_grid() { return TimeGrid(1e-3, 1e3, 61); }

double check_order_reduction(const Field& f, double beta, double gamma, double t, const SWBudget& budget,
                             double tolerance) {
    require_positive_time(t, "check_order_reduction");
    if (!(beta > 0.0) || !(gamma > beta)) {
        throw std::invalid_argument("check_order_reduction: need 0 < beta < gamma");
    }
    const double nu = gamma - beta;
    const SWQuadrature sw(nu, budget.near_nodes, budget.far_nodes);
    const double s_max = sw_extent(t, f.grid().min_frequency());
    certify(sw, t, s_max, f.grid(), tolerance, "check_order_reduction");
    const QuadratureRule rule = sw.rule(t, s_max);
    const cplx pref = sw_phase(nu) / std::tgamma(nu);
    const Field lhs = accumulate(f, rule, pref,
                                 [&](double s) { return frac_derivative_spectral(f, t + s, gamma); });
    return relative_l2_distance(lhs, frac_derivative_spectral(f, t, beta));
}

double check_composition(const Field& f, double alpha, double beta, double t, const SWBudget& budget,
                         double tolerance) {
    require_positive_time(t, "check_composition");
    if (!(alpha > 0.0) || !(beta > 0.0)) {
        throw std::invalid_argument("check_composition: alpha and beta must be positive");
    }
    const FracOrder ord = FracOrder::of(alpha);
    const double nu = ord.gap();
    const SWQuadrature sw(nu, budget.near_nodes, budget.far_nodes);
    const double s_max = sw_extent(t, f.grid().min_frequency());
    certify(sw, t, s_max, f.grid(), tolerance, "check_composition");
    const QuadratureRule rule = sw.rule(t, s_max);
    const cplx pref = sw_phase(nu) / std::tgamma(nu);
    // d^m/dtau^m of D^beta P_tau f, split as two half steps of the semigroup.
    const Field lhs = accumulate(f, rule, pref, [&](double s) {
        const double tau = t + s;
        return poisson_derivative_integer(frac_derivative_spectral(f, 0.5 * tau, beta), 0.5 * tau, ord.m);
    });
    return relative_l2_distance(lhs, frac_derivative_spectral(f, t, alpha + beta));
}

double check_composition_spectral(const Field& f, double alpha, double beta, double t) {
    require_positive_time(t, "check_composition_spectral");
    const Field inner = frac_derivative_spectral(f, 0.5 * t, beta);
    const Field lhs = frac_derivative_spectral(inner, 0.5 * t, alpha);
    return relative_l2_distance(lhs, frac_derivative_spectral(f, t, alpha + beta));
}

// ---------------------------------------------------------------- kernel

double poisson_kernel_dt(int m, double t, double x) {
    if (m < 0 || m > 4) throw std::invalid_argument("poisson_kernel_dt: m must be in 0..4");
    // P = (1/pi) Re 1/(t + ix), so d^m P = (1/pi) Re (-1)^m m! / (t + ix)^{m+1}.
    static constexpr double factorial[] = {1.0, 1.0, 2.0, 6.0, 24.0};
    const cplx z(t, x);
    cplx w = 1.0 / z;
    cplx p = w;
    for (int k = 0; k < m; ++k) p *= w;
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    return sign * factorial[m] * p.real() / pi;
}

namespace {

cplx kernel_value_with(const SWQuadrature& sw, double t, double x, FracOrder ord,
                       const KernelBudget& budget) {
    const double nu = ord.gap();
    const double scale = std::max(t, std::abs(x));
    const double s_max = scale * std::exp(budget.tail_log_extent / (ord.alpha + 1.0));
    const QuadratureRule rule = sw.rule(t, s_max);
    double acc = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        acc += rule.weights[j] * poisson_kernel_dt(ord.m, t + rule.nodes[j], x);
    }
    const double lg = ord.alpha * std::log(t) - std::lgamma(nu);
    return sw_phase(nu) * (std::exp(lg) * acc);
}

void require_kernel_order(FracOrder ord) {
    if (ord.m > 4) throw std::invalid_argument("kernel evaluation supports m <= 4 (alpha < 4)");
}

}  // namespace

cplx kernel_value(double t, double x, FracOrder ord, const KernelBudget& budget) {
    require_positive_time(t, "kernel_value");
    require_kernel_order(ord);
    if (x == 0.0) throw std::invalid_argument("kernel_value: x must be nonzero");
    const SWQuadrature sw(ord.gap(), budget.near_nodes, budget.far_nodes);
    return kernel_value_with(sw, t, x, ord, budget);
}

KernelProfile kernel_eval(double x, FracOrder ord, double q, const TimeGrid& tg, const KernelBudget& budget) {
    require_kernel_order(ord);
    if (!(q > 1.0)) throw std::invalid_argument("kernel_eval: q must exceed 1");
    if (!(std::abs(x) >= tg.t_min())) {
        throw std::invalid_argument("kernel_eval: |x| is below the time-grid resolution");
    }
    const SWQuadrature sw(ord.gap(), budget.near_nodes, budget.far_nodes);
    KernelProfile prof;
    prof.x = x;
    prof.t.assign(tg.nodes().begin(), tg.nodes().end());
    prof.values.resize(prof.t.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < prof.t.size(); ++i) {
        prof.values[i] = kernel_value_with(sw, prof.t[i], x, ord, budget);
        acc += tg.weights()[i] * std::pow(std::abs(prof.values[i]), q);
    }
    prof.aggregate = std::pow(acc, 1.0 / q);
    return prof;
}

TimeGrid kernel_time_grid(double x_lo, double x_hi, FracOrder ord, double q) {
    if (!(x_lo > 0.0) || !(x_hi >= x_lo)) throw std::invalid_argument("kernel_time_grid: bad x range");
    // |K_t|^q ~ t^{q alpha} as t -> 0 and ~ t^{-q} as t -> inf.
    const double tail = 1e-12;
    const double t_min = x_lo * std::pow(tail, 1.0 / (q * ord.alpha));
    const double t_max = x_hi * std::pow(tail, -1.0 / q);
    const int count = static_cast<int>(std::ceil(std::log(t_max / t_min) / 0.1)) + 1;
    return TimeGrid(t_min, t_max, count);
}

KernelBoundsReport check_kernel_bounds(FracOrder ord, double q, double x_lo, double x_hi, int points,
                                       const KernelBudget& budget) {
    if (points < 3) throw std::invalid_argument("check_kernel_bounds: need at least 3 x points");
    const TimeGrid tg = kernel_time_grid(x_lo, x_hi, ord, q);
    auto measure = [&](int count, double& size_sup, double& grad_sup) {
        std::vector<double> xs(count), a(count);
        const double step = std::log(x_hi / x_lo) / (count - 1);
        for (int i = 0; i < count; ++i) xs[i] = x_lo * std::exp(step * i);
        parallel_for(count, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) a[i] = kernel_eval(xs[i], ord, q, tg, budget).aggregate;
        });
        size_sup = 0.0;
        grad_sup = 0.0;
        for (int i = 0; i < count; ++i) size_sup = std::max(size_sup, xs[i] * a[i]);
        for (int i = 1; i + 1 < count; ++i) {
            const double d = (a[i + 1] - a[i - 1]) / (xs[i + 1] - xs[i - 1]);
            grad_sup = std::max(grad_sup, xs[i] * xs[i] * std::abs(d));
        }
    };
    KernelBoundsReport rep;
    measure(points, rep.size_sup, rep.gradient_sup);
    measure(2 * points - 1, rep.size_sup_refined, rep.gradient_sup_refined);
    auto close = [](double a, double b) { return std::abs(a - b) <= 0.1 * std::max(a, b); };
    rep.stable = std::isfinite(rep.size_sup) && std::isfinite(rep.gradient_sup) &&
                 close(rep.size_sup, rep.size_sup_refined) &&
                 close(rep.gradient_sup, rep.gradient_sup_refined);
    return rep;
}

}  // namespace fraclps
