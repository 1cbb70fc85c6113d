#include <gtest/gtest.h>

#include <boost/math/quadrature/exp_sinh.hpp>

#include <cmath>
#include <numbers>

#include "fraclps/errors.hpp"
#include "fraclps/fracderiv.hpp"
#include "fraclps/semigroup.hpp"

using namespace fraclps;

namespace {

constexpr double kPi = std::numbers::pi;

Field mode(const GridSpec& g, int k) {
    return Field::sample(g, BanachSpec::scalar(), [&](std::span<const double> x, std::span<cplx> out) {
        out[0] = std::polar(1.0, k * x[0]);
    });
}

Field constant(const GridSpec& g, cplx c) { return Field(g, BanachSpec::scalar(), std::vector<cplx>(g.points(), c)); }

const GridSpec kGrid = GridSpec::make(1, 256);

}  // namespace

TEST(Heat, Examples) {
    const Field c = constant(kGrid, 2.0);
    EXPECT_LT(relative_l2_distance(heat_apply(c, 0.7), c), 1e-15);
    const Field e = mode(kGrid, 1);
    EXPECT_LT(relative_l2_distance(heat_apply(e, 1.0), std::exp(-1.0) * e), 1e-14);
    const Field f = random_band_limited(kGrid, BanachSpec::sequence(2, 2.0), 10, 3);
    EXPECT_LT(relative_l2_distance(heat_apply(heat_apply(f, 0.2), 0.3), heat_apply(f, 0.5)), 1e-12);
    EXPECT_THROW(heat_apply(f, 0.0), std::invalid_argument);
}

TEST(Poisson, Examples) {
    const Field c = constant(kGrid, cplx(0.0, 1.0));
    EXPECT_LT(relative_l2_distance(poisson_apply(c, 3.0), c), 1e-15);
    const Field e = mode(kGrid, 1);
    EXPECT_LT(relative_l2_distance(poisson_apply(e, 2.0), std::exp(-2.0) * e), 1e-14);
    const Field f = random_band_limited(kGrid, BanachSpec::scalar(), 12, 5);
    EXPECT_LT(relative_l2_distance(poisson_apply(poisson_apply(f, 0.4), 1.1), poisson_apply(f, 1.5)), 1e-12);
    EXPECT_THROW(poisson_apply(f, -1.0), std::invalid_argument);
}

TEST(Poisson, TwoDimensionalMultiplierUsesEuclideanNorm) {
    const GridSpec g = GridSpec::make(2, 16);
    const Field f = Field::sample(g, BanachSpec::scalar(), [](std::span<const double> x, std::span<cplx> out) {
        out[0] = std::polar(1.0, 3.0 * x[0] + 4.0 * x[1]);
    });
    EXPECT_LT(relative_l2_distance(poisson_apply(f, 0.5), std::exp(-2.5) * f), 1e-14);
}

TEST(Poisson, Contractive) {
    const Field f = random_band_limited(kGrid, BanachSpec::sequence(3, 1.5), 20, 8, true);
    for (double p : {1.0, 2.0, 4.0, HUGE_VAL}) {
        for (double t : {0.5, 1.0, 3.0, 10.0}) {
            EXPECT_LE(lp_norm(poisson_apply(f, t), p), lp_norm(f, p) * (1.0 + 1e-12)) << p << ' ' << t;
        }
    }
}

TEST(SubordinationQuad, PositiveWeightsAndDensityClosedForm) {
    const SubordinationQuad quad;
    for (double w : quad.weights()) EXPECT_GT(w, 0.0);
    // Oracle: adaptive exp-sinh quadrature of the same integral, and its closed form.
    boost::math::quadrature::exp_sinh<double> integrator;
    for (double t : {0.05, 0.5, 1.0, 4.0}) {
        for (double c : {0.0, 0.3, 1.0, 9.0, 100.0}) {
            const double closed = 2.0 * std::sqrt(kPi) / t * std::exp(-t * std::sqrt(c));
            const double adaptive = integrator.integrate(
                [&](double u) { return std::pow(u, -1.5) * std::exp(-t * t / (4.0 * u) - c * u); });
            EXPECT_NEAR(adaptive, closed, 1e-9 * closed);
            // Absolute multiplier accuracy: scale by the c = 0 value.
            EXPECT_NEAR(quad.density_integral(t, c), closed, 1e-9 * 2.0 * std::sqrt(kPi) / t) << t << ' ' << c;
        }
    }
    for (double a : {0.0, 0.1, 1.0, 10.0, 40.0}) EXPECT_NEAR(quad.poisson_factor(a), std::exp(-a), 1e-12);
}

TEST(SubordinatePoisson, Examples) {
    const SubordinationQuad quad;
    const Field c = constant(kGrid, 1.5);
    EXPECT_LT(relative_l2_distance(subordinate_poisson(c, 1.0, quad), c), 1e-9);
    const Field e = mode(kGrid, 1);
    EXPECT_LT(relative_l2_distance(subordinate_poisson(e, 1.0, quad), std::exp(-1.0) * e), 1e-8);
    const Field z(kGrid, BanachSpec::scalar());
    EXPECT_EQ(lp_norm(subordinate_poisson(z, 1.0, quad), 2.0), 0.0);
}

TEST(SubordinatePoisson, AgreesWithMultiplierOnRandomFields) {
    const SubordinationQuad quad;
    for (unsigned seed = 0; seed < 5; ++seed) {
        const Field f = random_band_limited(kGrid, BanachSpec::sequence(2, 2.0), 16, seed);
        for (double t : {0.1, 1.0, 10.0}) {
            EXPECT_LE(relative_l2_distance(subordinate_poisson(f, t, quad), poisson_apply(f, t)), 1e-8);
        }
    }
}

TEST(SubordinatePoisson, SmallBudgetIsReported) {
    const SubordinationQuad tiny(8);
    const Field f = random_band_limited(kGrid, BanachSpec::scalar(), 16, 1);
    EXPECT_THROW(subordinate_poisson(f, 1.0, tiny), AccuracyError);
}

TEST(PoissonDerivative, Examples) {
    EXPECT_EQ(lp_norm(poisson_derivative_integer(constant(kGrid, 4.0), 1.0, 2), HUGE_VAL), 0.0);
    const Field e = mode(kGrid, 1);
    EXPECT_LT(relative_l2_distance(poisson_derivative_integer(e, 1.0, 1), -std::exp(-1.0) * e), 1e-14);
    EXPECT_THROW(poisson_derivative_integer(e, 1.0, 0), std::invalid_argument);
}

TEST(PoissonDerivative, FiniteDifference) {
    const Field f = random_band_limited(kGrid, BanachSpec::scalar(), 10, 9);
    const double t = 1.0, h = 1e-4;
    auto lower = [&](double tt, int m) { return m == 0 ? poisson_apply(f, tt) : poisson_derivative_integer(f, tt, m); };
    for (int m = 1; m <= 3; ++m) {
        const Field fd = (1.0 / (2.0 * h)) * (lower(t + h, m - 1) - lower(t - h, m - 1));
        EXPECT_LE(relative_l2_distance(fd, poisson_derivative_integer(f, t, m)), 1e-6) << m;
    }
}

TEST(PoissonDerivative, DecayBoundStable) {
    const Field f = random_band_limited(kGrid, BanachSpec::scalar(), 20, 4);
    for (int m : {1, 2, 3}) {
        for (double p : {1.0, 2.0, 4.0, HUGE_VAL}) {
            const DecayReport r = check_decay_bound(f, FracOrder::of(m), p, decay_sweep_grid());
            EXPECT_TRUE(std::isfinite(r.sup_ratio));
            EXPECT_TRUE(r.stable) << m << ' ' << p << ' ' << r.sup_ratio << ' ' << r.sup_ratio_refined;
        }
    }
}
