#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "fraclps/grid.hpp"

namespace fraclps {

/**
 * Samples on the symmetric grid x_i = i h, i = -M..M, of the window [-A, A]
 * with h = A / M. Values are [point][coordinate]; outside the window the
 * function is taken to be zero.
 */
class LineSample {
public:
    /// `intervals` = 2M cells across the window (so 2M + 1 points).
    LineSample(double half_width, int intervals, BanachSpec banach);
    LineSample(double half_width, int intervals, BanachSpec banach, std::vector<cplx> values);

    using Sampler = std::function<void(double x, std::span<cplx> out)>;
    static LineSample sample(double half_width, int intervals, BanachSpec banach, const Sampler& fn);

    double half_width() const { return half_width_; }
    int intervals() const { return 2 * half_; }
    int half() const { return half_; }
    double step() const { return half_width_ / half_; }
    std::size_t size() const { return static_cast<std::size_t>(2 * half_ + 1); }
    int components() const { return banach_.dimension(); }
    const BanachSpec& banach() const { return banach_; }

    /// Point index i in 0..2M, coordinate x = (i - M) h.
    double x(std::size_t i) const { return (static_cast<double>(i) - half_) * step(); }
    std::span<const cplx> values() const { return values_; }
    std::span<const cplx> at(std::size_t i) const {
        return {values_.data() + i * components(), static_cast<std::size_t>(components())};
    }
    double norm_at(std::size_t i) const { return banach_.norm(at(i)); }
    std::vector<double> norms() const;

    /// True when every value within A/4 of either window edge is zero.
    bool support_margin_ok() const;

private:
    double half_width_;
    int half_;
    BanachSpec banach_;
    std::vector<cplx> values_;
};

/**
 * Test family for the comparison and convergence checks, index 0..9:
 * bump((x - c) / s) cos(w x + index) with bump(u) = exp(-1 / (1 - u^2)) on |u| < 1,
 * supported inside [-4, 4]. Indices 8 and 9 are l^2_2-valued (a second,
 * sine-modulated coordinate).
 */
LineSample hilbert_test_field(int index, double half_width, int intervals);

/// exp(-2 x^2) cut to zero for |x| > 4.
LineSample gaussian_line_sample(double half_width, int intervals);

/// Quintic smoothstep transition on [lo, hi] (default [1/2, 3/2]).
struct CutoffPhi {
    double lo = 0.5;
    double hi = 1.5;

    double operator()(double u) const;
    double derivative(double u) const;
};

/// H_eps f(x_i) = h sum_{|x_i - y_j| > eps} f(y_j) / (x_i - y_j), no 1/pi factor.
/// Requires eps >= 2h.
LineSample truncated_hilbert(const LineSample& f, double eps);

/// Geometric truncation lattice 2A 2^{-k/per_octave}, k = 0, 1, ..., down to >= 2h.
std::vector<double> default_eps_grid(const LineSample& f, int per_octave = 4);

/// sup over eps of ||H_eps f(x)||.
std::vector<double> maximal_hilbert(const LineSample& f, std::span<const double> eps_grid);

/// sup over eps of ||h sum_j phi(|x - y_j| / eps) f(y_j) / (x - y_j)||.
std::vector<double> smoothed_maximal_hilbert(const LineSample& f, const CutoffPhi& phi,
                                             std::span<const double> eps_grid);

/// Both maximal operators in one pass.
struct MaximalPair {
    std::vector<double> hstar;
    std::vector<double> hstar_phi;
};
MaximalPair maximal_hilbert_pair(const LineSample& f, const CutoffPhi& phi, std::span<const double> eps_grid);

/// Radii h 2^{k/8} up to `top` (8 per octave, so dyadic radii are included).
std::vector<double> maximal_radii(double spacing, double top);

/// Mh(x_i) = max over radii of the average of h over the closed ball of radius
/// rho about x_i (point count normalization, zero outside the window).
std::vector<double> hardy_littlewood_maximal(const LineSample& grid_like, std::span<const double> h);
std::vector<double> hardy_littlewood_maximal(const LineSample& f_nonnegative);

/// Periodic version on a torus grid: closed balls in the periodic distance,
/// radii up to L/2.
std::vector<double> periodic_maximal(const GridSpec& grid, std::span<const double> h);

/// max_x |H*_phi f - H* f|(x) / M(||f||)(x).
double comparison_ratio(const LineSample& f, const CutoffPhi& phi, std::span<const double> eps_grid);

struct ConvergenceReport {
    double step = 0.0;
    std::vector<double> osc;        // per point
    double threshold = 0.0;
    double fraction_below = 0.0;    // share of points with osc < threshold
    double median_osc = 0.0;        // over points with |x| <= A/4
    std::vector<double> hstar;
    std::vector<double> hstar_phi;
    std::vector<double> maximal;
};

/// Oscillation of H_eps f over a decreasing eps sequence (min >= 2h).
ConvergenceReport convergence_probe(const LineSample& f, std::span<const double> eps_sequence,
                                    double threshold = 1e-2);

/// eps sequence `multiples` * h, decreasing.
std::vector<double> eps_sequence_for(const LineSample& f, std::span<const int> multiples);

struct ConvergenceRow {
    int intervals = 0;
    double step = 0.0;
    double median_osc = 0.0;
    double fraction_below = 0.0;
};

/// Runs the probe for each resolution on samples of `fn` with eps proportional to h.
std::vector<ConvergenceRow> convergence_study(const LineSample::Sampler& fn, BanachSpec banach,
                                              double half_width, std::span<const int> intervals,
                                              std::span<const int> multiples, double threshold = 1e-2);

/// Every `factor`-th sample of f (same window, intervals / factor cells).
LineSample coarsen(const LineSample& f, int factor);

/// Same study on subsamples of a given finest sample: rows for intervals
/// N / 2^{levels-1}, ..., N, coarsest first.
std::vector<ConvergenceRow> convergence_study(const LineSample& finest, int levels, std::span<const int> multiples,
                                              double threshold = 1e-2);

// `x,re_0,im_0,...` rows.
void write_line_sample_csv(std::ostream& os, const LineSample& f);
// `x,osc,Hstar,Hstar_phi,M` rows.
void write_convergence_csv(std::ostream& os, const LineSample& f, const ConvergenceReport& rep);
// `intervals,step,median_osc,fraction_below` rows.
void write_study_csv(std::ostream& os, std::span<const ConvergenceRow> rows);
/// Reads `x,re_0,im_0,...`; x must be the symmetric grid (i - M) h. Throws InputError.
LineSample read_line_sample_csv(std::istream& is, double r = 2.0);

}  // namespace fraclps
