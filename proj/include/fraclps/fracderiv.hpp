#pragma once

#include <vector>

#include "fraclps/grid.hpp"
#include "fraclps/quadrature.hpp"

namespace fraclps {

/// Fractional order alpha > 0 and m, the smallest integer strictly above it.
struct FracOrder {
    double alpha;
    int m;

    static FracOrder of(double alpha);
    /// m - alpha, in (0, 1].
    double gap() const { return m - alpha; }
};

/// e^{-i pi alpha}, exact when 2 alpha is an integer.
cplx derivative_phase(double alpha);

/// Node budgets of the Segovia-Wheeden integrals.
struct SWBudget {
    int near_nodes = 128;
    int far_nodes = 128;
};

/**
 * Fractional derivative of the Poisson semigroup as a Fourier multiplier:
 * e^{-i pi alpha} |xi|^alpha e^{-t |xi|}, zero on the mean mode.
 */
Field frac_derivative_spectral(const Field& f, double t, double alpha);
inline Field frac_derivative_spectral(const Field& f, double t, FracOrder ord) {
    return frac_derivative_spectral(f, t, ord.alpha);
}

/// t^alpha times the spectral derivative (the square-function integrand).
Field scaled_frac_derivative(const Field& f, double t, double alpha);
Field scaled_frac_derivative(const Spectrum& s, double t, double alpha);

/**
 * Segovia-Wheeden route: (e^{i pi (m-alpha)} / Gamma(m-alpha)) times
 * int_0^inf d^m/dt^m P_{t+s} f  s^{m-alpha-1} ds, with the integer derivatives
 * taken from the semigroup module. The phase convention matches the spectral
 * route. Throws AccuracyError when the budget cannot certify `tolerance`.
 */
Field frac_derivative_quadrature(const Field& f, double t, FracOrder ord, const SWBudget& budget = {},
                                 double tolerance = 1e-6);

struct DecayReport {
    double sup_ratio = 0.0;          // sup_t t^alpha ||D^alpha P_t f||_p / ||f||_p
    double argmax_t = 0.0;
    double sup_ratio_refined = 0.0;  // same on the doubled time grid
    bool stable = true;              // within 5%
};

/// sup over the time grid of t^alpha ||D^alpha P_t f||_p / ||f||_p (spectral route).
DecayReport check_decay_bound(const Field& f, FracOrder ord, double p, const TimeGrid& tg);

/// Default sweep for decay checks: 61 log-spaced points on [1e-3, 1e3].
TimeGrid decay_sweep_grid();

/// Relative L2 distance between the order-reduction integral
/// (e^{i pi (gamma-beta)} / Gamma(gamma-beta)) int D^gamma P_{t+s} f s^{gamma-beta-1} ds
/// and D^beta P_t f.
double check_order_reduction(const Field& f, double beta, double gamma, double t,
                             const SWBudget& budget = {}, double tolerance = 1e-6);

/// Residual of D^alpha (D^beta P_t f) = D^{alpha+beta} P_t f, the outer derivative
/// taken by the SW quadrature applied to s -> D^beta P_{t+s} f.
double check_composition(const Field& f, double alpha, double beta, double t,
                         const SWBudget& budget = {}, double tolerance = 1e-5);

/// The same identity at the level of multipliers (spectral route only).
double check_composition_spectral(const Field& f, double alpha, double beta, double t);

// ---------------------------------------------------------------- kernel (n = 1)

/// d^m/dt^m of the 1-d Poisson kernel (1/pi) t / (t^2 + x^2), m in 0..4.
double poisson_kernel_dt(int m, double t, double x);

/// Budgets for the kernel integral, whose integrand decays only like s^{-alpha-2}.
struct KernelBudget {
    int near_nodes = 128;
    int far_nodes = 256;
    double tail_log_extent = 36.0;  // integrate to s = t exp(tail_log_extent / (alpha + 1))
};

/// K_t(x) = t^alpha (e^{i pi (m-alpha)} / Gamma(m-alpha)) int_0^inf d^m P_{t+s}(x) s^{m-alpha-1} ds.
cplx kernel_value(double t, double x, FracOrder ord, const KernelBudget& budget = {});

struct KernelProfile {
    double x = 0.0;
    std::vector<double> t;
    std::vector<cplx> values;
    double aggregate = 0.0;  // (int |K_t(x)|^q dt/t)^{1/q}
};

KernelProfile kernel_eval(double x, FracOrder ord, double q, const TimeGrid& tg,
                          const KernelBudget& budget = {});

struct KernelBoundsReport {
    double size_sup = 0.0;              // sup_x |x| A(x)
    double gradient_sup = 0.0;          // sup_x |x|^2 |A'(x)|
    double size_sup_refined = 0.0;
    double gradient_sup_refined = 0.0;
    bool stable = true;                 // both within 10% under refinement
};

/// Size and gradient bounds of the aggregate kernel on a log-spaced x grid
/// [x_lo, x_hi] with `points` nodes; refinement doubles the x resolution.
KernelBoundsReport check_kernel_bounds(FracOrder ord, double q, double x_lo, double x_hi, int points,
                                       const KernelBudget& budget = {});

/// Time grid wide enough to integrate |K_t(x)|^q dt/t for |x| in [x_lo, x_hi].
TimeGrid kernel_time_grid(double x_lo, double x_hi, FracOrder ord, double q);

}  // namespace fraclps
