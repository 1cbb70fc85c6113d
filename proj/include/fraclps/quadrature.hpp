#pragma once

#include <span>
#include <vector>

#include "fraclps/grid.hpp"

namespace fraclps {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    template <typename F>
    auto apply(F&& f) const {
        decltype(f(nodes[0]) * weights[0]) acc{};
        for (std::size_t j = 0; j < nodes.size(); ++j) acc += weights[j] * f(nodes[j]);
        return acc;
    }
};

/// Gauss-Jacobi rule on [-1, 1] for the weight (1-x)^a (1+x)^b, a, b > -1.
QuadratureRule gauss_jacobi(int n, double a, double b);
QuadratureRule gauss_legendre(int n);

/**
 * Log-spaced nodes on [t_min, t_max] with trapezoidal weights for the
 * measure dt/t (uniform step in log t).
 */
class TimeGrid {
public:
    TimeGrid(double t_min, double t_max, int count);

    /// Grid resolving s^a e^{-decay s} profiles with s = t |xi| for every |xi|
    /// in the band; `exponent` is the small-t power a of the integrand and
    /// `decay` the rate of its exponential tail. Boundary losses stay below
    /// `tail` relative to each mode's own integral.
    static TimeGrid for_band(Band band, double exponent, double decay, double tail = 1e-13);

    double t_min() const { return t_min_; }
    double t_max() const { return t_max_; }
    int count() const { return static_cast<int>(nodes_.size()); }
    double log_step() const { return step_; }
    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> weights() const { return weights_; }

    /// Same range, twice the resolution (nested nodes).
    TimeGrid refined() const;

private:
    double t_min_;
    double t_max_;
    double step_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/**
 * Rule for integrals of the form  int_0^inf F(s) s^{nu-1} ds  with F smooth and
 * exponentially decaying.  The range is split at s = t: [0, t] uses
 * Gauss-Jacobi nodes carrying the endpoint weight s^{nu-1} exactly; [t, s_max]
 * uses Gauss-Legendre in v = log(s/t).
 */
class SWQuadrature {
public:
    explicit SWQuadrature(double nu, int near_nodes = 128, int far_nodes = 128);

    double nu() const { return nu_; }
    int near_nodes() const { return static_cast<int>(near_.nodes.size()); }
    int far_nodes() const { return static_cast<int>(far_.nodes.size()); }

    /// Nodes s_j and weights for int_0^{s_max} F(s) s^{nu-1} ds.
    QuadratureRule rule(double t, double s_max) const;

    /// Largest relative error reproducing int_0^inf e^{-cs} s^{nu-1} ds =
    /// Gamma(nu) c^{-nu} over c in [c_min, c_max] (geometric sample). Modes with
    /// c t > 40 are skipped: they enter every derivative damped by e^{-ct}.
    double exponential_error(double t, double s_max, double c_min, double c_max) const;

private:
    double nu_;
    QuadratureRule near_;  // Gauss-Jacobi (0, nu-1) on [-1, 1]
    QuadratureRule far_;   // Gauss-Legendre on [-1, 1]
};

/// Upper integration limit for SW integrals on a grid whose smallest nonzero
/// frequency is lambda_min: the e^{-lambda s} tail beyond it is below e^{-60}.
double sw_extent(double t, double lambda_min);

}  // namespace fraclps
