#include "fraclps/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fraclps {

QuadratureRule gauss_jacobi(int n, double a, double b) {
    if (n < 1) throw std::invalid_argument("gauss_jacobi needs at least one node");
    if (!(a > -1.0) || !(b > -1.0)) throw std::invalid_argument("gauss_jacobi needs a, b > -1");

    // Golub-Welsch on the symmetric Jacobi matrix of the monic recurrence.
    Eigen::VectorXd diag(n);
    Eigen::VectorXd off(std::max(n - 1, 1));
    const double ab = a + b;
    for (int k = 0; k < n; ++k) {
        const double s = 2.0 * k + ab;
        diag(k) = k == 0 ? (b - a) / (ab + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    }
    for (int k = 1; k < n; ++k) {
        const double s = 2.0 * k + ab;
        const double num = 4.0 * k * (k + a) * (k + b) * (k + ab);
        const double den = s * s * (s + 1.0) * (s - 1.0);
        off(k - 1) = std::sqrt(num / den);
    }
    const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) +
                                std::lgamma(b + 1.0) - std::lgamma(ab + 2.0));

    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    if (n == 1) {
        rule.nodes[0] = diag(0);
        rule.weights[0] = mu0;
        return rule;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, off.head(n - 1), Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw std::runtime_error("Golub-Welsch eigensolve failed");
    for (int k = 0; k < n; ++k) {
        rule.nodes[k] = solver.eigenvalues()(k);
        const double v0 = solver.eigenvectors()(0, k);
        rule.weights[k] = mu0 * v0 * v0;
    }
    return rule;
}

QuadratureRule gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

// ---------------------------------------------------------------- TimeGrid

TimeGrid::TimeGrid(double t_min, double t_max, int count) : t_min_(t_min), t_max_(t_max) {
    if (!(t_min > 0.0) || !(t_max > t_min)) {
        throw std::invalid_argument("time grid needs 0 < t_min < t_max");
    }
    if (count < 2) throw std::invalid_argument("time grid needs at least two nodes");
    const double lo = std::log(t_min);
    const double hi = std::log(t_max);
    step_ = (hi - lo) / (count - 1);
    nodes_.resize(count);
    weights_.assign(count, step_);
    for (int i = 0; i < count; ++i) nodes_[i] = std::exp(lo + step_ * i);
    nodes_.front() = t_min;
    nodes_.back() = t_max;
    weights_.front() = weights_.back() = 0.5 * step_;
}

TimeGrid TimeGrid::for_band(Band band, double exponent, double decay, double tail) {
    if (!(band.min > 0.0) || !(band.max >= band.min)) {
        throw std::invalid_argument("time grid band must be positive");
    }
    if (!(exponent > 0.0) || !(decay > 0.0)) {
        throw std::invalid_argument("time grid exponent and decay must be positive");
    }
    const double a = exponent;
    // Lower end: (decay s)^a / Gamma(a+1) below `tail`, evaluated at the top of the band.
    const double s_lo = std::exp((std::log(tail) + std::lgamma(a + 1.0)) / a) / decay;
    // Upper end: the Gamma(a) tail past decay*s = a + 6 sqrt(a) + 30 is below 1e-13.
    const double s_hi = (a + 6.0 * std::sqrt(a) + 30.0) / decay;
    const double t_min = s_lo / band.max;
    const double t_max = s_hi / band.min;
    // The integrand exp(a v - e^v) needs finer steps as a grows.
    const double step = 0.2 / std::sqrt(std::max(1.0, a / 4.0));
    const int count = static_cast<int>(std::ceil(std::log(t_max / t_min) / step)) + 1;
    return TimeGrid(t_min, t_max, count);
}

TimeGrid TimeGrid::refined() const { return TimeGrid(t_min_, t_max_, 2 * count() - 1); }

// ---------------------------------------------------------------- SWQuadrature

SWQuadrature::SWQuadrature(double nu, int near_nodes, int far_nodes)
    : nu_(nu), near_(), far_() {
    if (!(nu > 0.0)) throw std::invalid_argument("SW quadrature exponent must be positive");
    if (near_nodes < 2 || far_nodes < 2) {
        throw std::invalid_argument("SW quadrature budgets must be >= 2");
    }
    near_ = gauss_jacobi(near_nodes, 0.0, nu - 1.0);
    far_ = gauss_legendre(far_nodes);
}

QuadratureRule SWQuadrature::rule(double t, double s_max) const {
    if (!(t > 0.0)) throw std::invalid_argument("SW quadrature split point must be positive");
    QuadratureRule out;
    out.nodes.reserve(near_.nodes.size() + far_.nodes.size());
    out.weights.reserve(out.nodes.capacity());
    // [0, t]: s = t (1 + y) / 2 maps s^{nu-1} ds to (t/2)^nu (1+y)^{nu-1} dy.
    const double near_scale = std::pow(0.5 * t, nu_);
    for (std::size_t j = 0; j < near_.nodes.size(); ++j) {
        out.nodes.push_back(0.5 * t * (1.0 + near_.nodes[j]));
        out.weights.push_back(near_scale * near_.weights[j]);
    }
    if (s_max > t) {
        // [t, s_max]: s = t e^v, s^{nu-1} ds = s^nu dv.
        const double v_max = std::log(s_max / t);
        for (std::size_t j = 0; j < far_.nodes.size(); ++j) {
            const double v = 0.5 * v_max * (1.0 + far_.nodes[j]);
            const double s = t * std::exp(v);
            out.nodes.push_back(s);
            out.weights.push_back(0.5 * v_max * far_.weights[j] * std::pow(s, nu_));
        }
    }
    return out;
}

double SWQuadrature::exponential_error(double t, double s_max, double c_min, double c_max) const {
    const QuadratureRule r = rule(t, s_max);
    const double c_hi = std::max(c_min, std::min(c_max, 40.0 / t));
    const int samples = 24;
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double c = c_min * std::pow(c_hi / c_min, static_cast<double>(i) / (samples - 1));
        const double approx = r.apply([c](double s) { return std::exp(-c * s); });
        const double exact = std::exp(std::lgamma(nu_) - nu_ * std::log(c));
        worst = std::max(worst, std::abs(approx - exact) / exact);
        if (c_hi == c_min) break;
    }
    return worst;
}

double sw_extent(double t, double lambda_min) {
    return std::max(2.0 * t, t + 60.0 / lambda_min);
}

}  // namespace fraclps
