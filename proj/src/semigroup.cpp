#include "fraclps/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "fraclps/errors.hpp"

namespace fraclps {

namespace {

void require_positive_time(double t, const char* what) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument(std::string(what) + ": t must be positive");
    }
}

}  // namespace

Field heat_apply(const Field& f, double t) {
    require_positive_time(t, "heat_apply");
    return apply_multiplier(f, [t](double xi) { return cplx(std::exp(-t * xi * xi)); });
}

Field poisson_apply(const Field& f, double t) {
    require_positive_time(t, "poisson_apply");
    return apply_multiplier(f, [t](double xi) { return cplx(std::exp(-t * xi)); });
}

Field poisson_derivative_integer(const Field& f, double t, int m) {
    require_positive_time(t, "poisson_derivative_integer");
    if (m < 1) throw std::invalid_argument("poisson_derivative_integer: m must be >= 1");
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    return apply_multiplier(f, [t, m, sign](double xi) {
        if (xi == 0.0) return cplx(0.0);
        return cplx(sign * std::exp(m * std::log(xi) - t * xi));
    });
}

// ---------------------------------------------------------------- subordination

SubordinationQuad::SubordinationQuad(int nodes, double v_min, double v_max) {
    if (nodes < 2) throw std::invalid_argument("subordination quadrature needs >= 2 nodes");
    if (!(v_max > v_min)) throw std::invalid_argument("subordination range is empty");
    const double h = (v_max - v_min) / (nodes - 1);
    const double norm = 1.0 / std::sqrt(std::numbers::pi);
    nodes_.resize(nodes);
    weights_.resize(nodes);
    for (int j = 0; j < nodes; ++j) {
        const double v = v_min + h * j;
        const double w = std::exp(v);
        // dw = w dv, so w^{-1/2} e^{-w} dw = w^{1/2} e^{-w} dv.
        const double end = (j == 0 || j == nodes - 1) ? 0.5 : 1.0;
        nodes_[j] = w;
        weights_[j] = end * h * norm * std::sqrt(w) * std::exp(-w);
    }
}

std::vector<double> SubordinationQuad::heat_times(double t) const {
    std::vector<double> u(nodes_.size());
    for (std::size_t j = 0; j < u.size(); ++j) u[j] = t * t / (4.0 * nodes_[j]);
    return u;
}

double SubordinationQuad::poisson_factor(double a) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
        acc += weights_[j] * std::exp(-a * a / (4.0 * nodes_[j]));
    }
    return acc;
}

double SubordinationQuad::density_integral(double t, double c) const {
    // int u^{-3/2} e^{-t^2/4u} e^{-cu} du = (2 sqrt(pi) / t) * [subordination average of e^{-cu}].
    double acc = 0.0;
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
        const double u = t * t / (4.0 * nodes_[j]);
        acc += weights_[j] * std::exp(-c * u);
    }
    return 2.0 * std::sqrt(std::numbers::pi) / t * acc;
}

double SubordinationQuad::max_abs_error(double a_max) const {
    const int samples = 64;
    double worst = std::abs(poisson_factor(0.0) - 1.0);
    for (int i = 1; i <= samples; ++i) {
        const double a = a_max * i / samples;
        worst = std::max(worst, std::abs(poisson_factor(a) - std::exp(-a)));
    }
    return worst;
}

Field subordinate_poisson(const Field& f, double t, const SubordinationQuad& quad, double tolerance) {
    require_positive_time(t, "subordinate_poisson");
    const auto& g = f.grid();
    // Relative output error is bounded by the multiplier error against the
    // slowest nonzero mode e^{-t xi_min}, which dominates a zero-mean field.
    const double a_max = t * g.max_frequency();
    const double reference = std::exp(-t * g.min_frequency());
    const double err = quad.max_abs_error(std::min(a_max, 200.0));
    if (err > tolerance * reference) {
        std::ostringstream msg;
        msg << "subordination quadrature with " << quad.size() << " nodes has multiplier error "
            << err << " > " << tolerance << " * " << reference << " at t = " << t;
        throw AccuracyError(msg.str());
    }
    const auto times = quad.heat_times(t);
    std::vector<cplx> acc(f.values().size());
    for (std::size_t j = 0; j < times.size(); ++j) {
        const Field term = heat_apply(f, times[j]);
        const double w = quad.weights()[j];
        const auto v = term.values();
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * v[i];
    }
    return Field(g, f.banach(), std::move(acc));
}

}  // namespace fraclps
