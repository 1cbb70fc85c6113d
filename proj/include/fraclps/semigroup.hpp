#pragma once

#include <span>
#include <vector>

#include "fraclps/grid.hpp"

namespace fraclps {

/// Gauss-Weierstrass semigroup: multiplies each mode by e^{-t |xi|^2}.
Field heat_apply(const Field& f, double t);

/// Poisson semigroup: multiplies each mode by e^{-t |xi|}.
Field poisson_apply(const Field& f, double t);

/// m-th time derivative of the Poisson semigroup, multiplier (-|xi|)^m e^{-t|xi|}.
/// The mean mode maps to zero.
Field poisson_derivative_integer(const Field& f, double t, int m);

/**
 * Quadrature for the subordination integral.
 *
 * With u = t^2 / (4 w) the subordination formula becomes
 *
 *     P_t f = pi^{-1/2} int_0^inf w^{-1/2} e^{-w} T_{t^2/(4w)} f dw,
 *
 * which is discretized by a trapezoid rule in v = log w. The nodes w_j and
 * positive weights are independent of t.
 */
class SubordinationQuad {
public:
    explicit SubordinationQuad(int nodes = 256, double v_min = -60.0, double v_max = 3.9);

    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> weights() const { return weights_; }
    int size() const { return static_cast<int>(nodes_.size()); }

    /// Heat times u_j = t^2 / (4 w_j) used for P_t.
    std::vector<double> heat_times(double t) const;

    /// Quadrature of pi^{-1/2} int w^{-1/2} e^{-w} e^{-a^2/(4w)} dw (exactly e^{-a}).
    double poisson_factor(double a) const;

    /// Quadrature of int_0^inf u^{-3/2} e^{-t^2/(4u)} e^{-c u} du
    /// (closed form 2 sqrt(pi) / t * e^{-t sqrt(c)}).
    double density_integral(double t, double c) const;

    /// Largest |poisson_factor(a) - e^{-a}| over a in [0, a_max].
    double max_abs_error(double a_max) const;

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// P_t f assembled from heat_apply at the quadrature nodes. Throws
/// AccuracyError when the rule cannot certify `tolerance` on this grid and t.
Field subordinate_poisson(const Field& f, double t, const SubordinationQuad& quad,
                          double tolerance = 1e-8);

}  // namespace fraclps
