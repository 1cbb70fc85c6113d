#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "fraclps/fracderiv.hpp"
#include "fraclps/grid.hpp"
#include "fraclps/quadrature.hpp"

namespace fraclps {

/**
 * Pointwise square-function values on the grid of the input field, with the
 * parameters that produced them.
 */
struct SquareFunctionReport {
    enum class Kind { G, Area, GStar };

    Kind kind = Kind::G;
    GridSpec grid;
    std::vector<double> values;
    double alpha = 0.0;
    double q = 2.0;
    double lambda = 0.0;   // g* only
    double aperture = 1.0;
    double t_min = 0.0;
    double t_max = 0.0;
    int count = 0;
    bool truncation_flag = false;  // endpoint terms above 1e-8 of some pointwise integral
    bool wide_cone_flag = false;   // t_max > L/2: cone slices wrap around the torus

    double max() const;
};

const char* kind_name(SquareFunctionReport::Kind kind);

/// Time grid for the square-function integrands of a field whose spectrum lies in
/// `band`, valid for every order in [alpha_lo, alpha_hi].
TimeGrid square_time_grid(Band band, double q, double alpha_lo, double alpha_hi);
inline TimeGrid square_time_grid(Band band, double q, double alpha) {
    return square_time_grid(band, q, alpha, alpha);
}
/// Default grid from the field's own spectral band.
TimeGrid square_time_grid(const Field& f, double q, double alpha);

/// g(x) = (int ||t^alpha D^alpha P_t f(x)||^q dt/t)^{1/q}.
SquareFunctionReport g_function(const Field& f, FracOrder ord, double q, const TimeGrid& tg);

/// Area function over the cone |x - y| < t with measure dy dt / t^{n+1}.
SquareFunctionReport area_function(const Field& f, FracOrder ord, double q, const TimeGrid& tg);

/// g*_lambda over the full space with weight (t / (t + |x - y|))^{lambda n}.
SquareFunctionReport gstar_function(const Field& f, FracOrder ord, double q, double lambda,
                                    const TimeGrid& tg);

/**
 * Folded spatial weights at one time t: W(d) is the integral of the weight
 * over the grid cell at offset d and all its periodic images in R^n, so
 * sum_d W(d) is the exact R^n integral. Offsets are flat grid indices.
 */
struct OffsetWeights {
    std::vector<std::size_t> offset;
    std::vector<double> weight;

    double total() const;
};

/// Cone slice |u| < t: total v_n t^n.
OffsetWeights cone_weights(const GridSpec& grid, double t);

/// (t / (t + |u|))^{lambda n}: total 2t/(lambda-1) (n = 1) or
/// 2 pi t^2 / ((2 lambda - 2)(2 lambda - 1)) (n = 2).
OffsetWeights gstar_weights(const GridSpec& grid, double t, double lambda);

/// Volume of the unit ball: 2 (n = 1), pi (n = 2).
double unit_ball_volume(int dim);

// ---------------------------------------------------------------- checks

struct Violation {
    std::size_t point;
    double lhs;
    double rhs;
};

struct BetaGammaReport {
    double max_ratio = 0.0;  // max_x g_beta / g_gamma
    double constant = 0.0;   // Gamma(beta) / Gamma(gamma)
    std::vector<Violation> violations;
    bool passed() const { return violations.empty(); }
};

/// g_beta <= (Gamma(beta)/Gamma(gamma)) g_gamma (1 + slack) at every grid point.
BetaGammaReport check_beta_gamma_comparison(const Field& f, double beta, double gamma, double q,
                                            const TimeGrid& tg, double slack = 1e-4);

struct StabilityReport {
    double value = 0.0;
    double value_refined = 0.0;
    bool stable = true;
    double relative_change() const;
};

/// max_x g/S on the given grids and on both grids refined; stable within 10%.
StabilityReport check_g_le_S(const Field& f, FracOrder ord, double q, const TimeGrid& tg);

/// |int S^q - v_n int g^q| / (v_n int g^q); zero when both vanish.
double check_Lq_identity(const Field& f, FracOrder ord, double q, const TimeGrid& tg);

struct ChainReport {
    double max_ratio = 0.0;  // max_x S / (2^{lambda n / q} g*)
    std::vector<Violation> violations;
    bool passed() const { return violations.empty(); }
};

/// S <= 2^{lambda n / q} g* (1 + slack) at every grid point.
ChainReport check_S_le_gstar(const Field& f, FracOrder ord, double q, double lambda, const TimeGrid& tg,
                             double slack = 1e-4);

/**
 * Polarization with conjugate pairing:
 *   int (f - E0 f) conj(g - E0 g) = (4^alpha / Gamma(2 alpha)) int int
 *       (t^alpha D^alpha P_t f) conj(t^alpha D^alpha P_t g) dt/t dx.
 * Returns |lhs - rhs| / (||f - E0 f||_2 ||g - E0 g||_2). Throws AccuracyError
 * when `tg` misses the per-mode Gamma integral by more than `tolerance`.
 */
struct PolarizationResult {
    cplx lhs;
    cplx rhs;
    double residual = 0.0;
};
PolarizationResult check_polarization(const Field& f, const Field& g, FracOrder ord, const TimeGrid& tg,
                                      double tolerance = 1e-9);

/// Time grids of the iteration identity: t and s for the double integral, u for the single one.
struct IterationGrids {
    TimeGrid t;
    TimeGrid s;
    TimeGrid u;
};
IterationGrids iteration_grids(Band band, int k, double q);

/**
 * int int s^q t^{kq} ||d^{k+1} P_{t+s} f||_q^q ds/s dt/t against
 * B(kq, q) int u^{(k+1)q} ||d^{k+1} P_u f||_q^q du/u (norms in L^q of the torus).
 */
struct IterationResult {
    double double_integral = 0.0;
    double single_integral = 0.0;
    double residual = 0.0;
};
IterationResult check_iteration_identity(const Field& f, int k, double q, const IterationGrids& grids,
                                         double tolerance = 1e-6);
IterationResult check_iteration_identity(const Field& f, int k, double q);

/// sup_t int t^{-n} (t / (t + |x-y|))^{lambda n} h(y) dy against the periodic
/// Hardy-Littlewood maximal function; max over x of the ratio, refined by
/// splitting every cell and doubling the time grid.
StabilityReport check_maximal_domination(const Field& h, double lambda, const TimeGrid& tg);

/// sup_t value of the weighted average above, pointwise.
std::vector<double> gstar_average_sup(const Field& h, double lambda, const TimeGrid& tg);

/// ||g*||_p / ||g||_p for p >= q, with both grids refined.
StabilityReport check_gstar_norm_comparison(const Field& f, FracOrder ord, double q, double lambda, double p,
                                            const TimeGrid& tg);

/// L^p norm of a nonnegative scalar grid function (Lebesgue weight).
double lp_norm(const GridSpec& grid, const std::vector<double>& values, double p);

// ---------------------------------------------------------------- output

/// `x[,y],value` rows, 17 significant digits.
void write_report_csv(std::ostream& os, const SquareFunctionReport& rep);
/// key=value sidecar lines.
void write_report_sidecar(std::ostream& os, const SquareFunctionReport& rep);

}  // namespace fraclps
