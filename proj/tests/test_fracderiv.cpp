#include <gtest/gtest.h>

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>

#include "fraclps/errors.hpp"
#include "fraclps/fracderiv.hpp"
#include "fraclps/semigroup.hpp"

using namespace fraclps;

namespace {

constexpr double kPi = std::numbers::pi;
const GridSpec kGrid = GridSpec::make(1, 256);

Field mode(int k) {
    return Field::sample(kGrid, BanachSpec::scalar(), [&](std::span<const double> x, std::span<cplx> out) {
        out[0] = std::polar(1.0, k * x[0]);
    });
}

Field random_field(unsigned seed, bool real = false) {
    return random_band_limited(kGrid, BanachSpec::scalar(), 12, seed, real);
}

double poisson_kernel(double t, double x) { return t / (t * t + x * x) / kPi; }

}  // namespace

TEST(FracOrder, SmallestIntegerStrictlyAbove) {
    EXPECT_EQ(FracOrder::of(2.0).m, 3);
    EXPECT_EQ(FracOrder::of(1.999).m, 2);
    EXPECT_EQ(FracOrder::of(0.5).m, 1);
    EXPECT_EQ(FracOrder::of(1.0).m, 2);
    EXPECT_NEAR(FracOrder::of(2.7).gap(), 0.3, 1e-15);
    EXPECT_THROW(FracOrder::of(0.0), std::invalid_argument);
    EXPECT_THROW(FracOrder::of(-1.0), std::invalid_argument);
}

TEST(DerivativePhase, ExactAtHalfIntegers) {
    EXPECT_EQ(derivative_phase(0.5), cplx(0.0, -1.0));
    EXPECT_EQ(derivative_phase(1.0), cplx(-1.0, 0.0));
    EXPECT_EQ(derivative_phase(2.0), cplx(1.0, 0.0));
    EXPECT_NEAR(std::abs(derivative_phase(0.3) - std::polar(1.0, -0.3 * kPi)), 0.0, 1e-15);
}

TEST(Spectral, Examples) {
    const Field f = random_field(1);
    EXPECT_LT(relative_l2_distance(frac_derivative_spectral(f, 0.7, 1.0), poisson_derivative_integer(f, 0.7, 1)),
              1e-15);
    const Field e = mode(1);
    EXPECT_LT(relative_l2_distance(frac_derivative_spectral(e, 1.0, 0.5), cplx(0.0, -std::exp(-1.0)) * e), 1e-14);
    const Field c(kGrid, BanachSpec::scalar(), std::vector<cplx>(kGrid.points(), 3.0));
    EXPECT_EQ(lp_norm(frac_derivative_spectral(c, 1.0, 0.5), HUGE_VAL), 0.0);
}

TEST(SWQuadrature, PositiveWeightsAndGammaIntegrals) {
    for (double alpha : {0.3, 0.5, 1.0, 1.3, 2.7}) {
        const FracOrder ord = FracOrder::of(alpha);
        const double nu = ord.gap();
        const SWQuadrature sw(nu);
        for (double t : {0.1, 1.0, 10.0}) {
            for (double c : {0.5, 1.0, 7.0, 40.0}) {
                const double s_max = sw_extent(t, 0.5);
                const QuadratureRule rule = sw.rule(t, s_max);
                for (double w : rule.weights) EXPECT_GT(w, 0.0);
                if (c * t > 40.0) continue;
                // Oracle: Gamma(nu) c^{-nu}.
                const double closed = boost::math::tgamma(nu) * std::pow(c, -nu);
                const double got = rule.apply([&](double s) { return std::exp(-c * s); });
                EXPECT_NEAR(got, closed, 1e-8 * closed) << alpha << ' ' << t << ' ' << c;
            }
        }
    }
}

TEST(Quadrature, Examples) {
    const Field f = random_field(2);
    for (int j : {1, 2, 3}) {
        for (double t : {0.1, 1.0, 10.0}) {
            EXPECT_LE(relative_l2_distance(frac_derivative_quadrature(f, t, FracOrder::of(j)),
                                           poisson_derivative_integer(f, t, j)),
                      1e-7)
                << j << ' ' << t;
        }
    }
    const Field e = mode(1);
    EXPECT_LE(relative_l2_distance(frac_derivative_quadrature(e, 1.0, FracOrder::of(0.5)),
                                   cplx(0.0, -std::exp(-1.0)) * e),
              1e-6);
    const Field z(kGrid, BanachSpec::scalar());
    EXPECT_EQ(lp_norm(frac_derivative_quadrature(z, 1.0, FracOrder::of(0.5)), 2.0), 0.0);
    EXPECT_THROW(frac_derivative_quadrature(f, 1.0, FracOrder::of(0.5), SWBudget{4, 4}), AccuracyError);
    EXPECT_THROW(frac_derivative_quadrature(f, 0.0, FracOrder::of(0.5)), std::invalid_argument);
}

TEST(Quadrature, RouteAgreementOnRandomFields) {
    for (unsigned seed = 0; seed < 4; ++seed) {
        const Field f = random_band_limited(kGrid, BanachSpec::sequence(2, 3.0), 16, 100 + seed);
        for (double alpha : {0.3, 0.5, 1.0, 1.3, 2.0, 2.7}) {
            for (double t : {0.1, 1.0, 10.0}) {
                const FracOrder ord = FracOrder::of(alpha);
                EXPECT_LE(relative_l2_distance(frac_derivative_quadrature(f, t, ord), frac_derivative_spectral(f, t, ord)),
                          1e-6);
            }
        }
    }
}

TEST(Quadrature, PhaseAndLinearity) {
    const Field f = random_field(3, true), g = random_field(4);
    const cplx a(0.3, -1.2), b(2.0, 0.5);
    for (double alpha : {0.4, 1.5, 2.2}) {
        const Field d = frac_derivative_spectral(f, 0.8, alpha);
        const cplx undo = std::conj(derivative_phase(alpha));
        double worst = 0.0;
        for (const auto& v : d.values()) worst = std::max(worst, std::abs((undo * v).imag()));
        EXPECT_LE(worst, 1e-10 * lp_norm(d, HUGE_VAL));
        const FracOrder ord = FracOrder::of(alpha);
        const Field lin = a * f + b * g;
        EXPECT_LE(relative_l2_distance(frac_derivative_spectral(lin, 0.8, ord),
                                       a * frac_derivative_spectral(f, 0.8, ord) + b * frac_derivative_spectral(g, 0.8, ord)),
                  1e-14);
        EXPECT_LE(relative_l2_distance(frac_derivative_quadrature(lin, 0.8, ord),
                                       a * frac_derivative_quadrature(f, 0.8, ord) +
                                           b * frac_derivative_quadrature(g, 0.8, ord)),
                  1e-13);
    }
}

TEST(DecayBound, Examples) {
    const DecayReport r = check_decay_bound(mode(1), FracOrder::of(1.0), 2.0, decay_sweep_grid());
    EXPECT_NEAR(r.sup_ratio, std::exp(-1.0), 1e-12);
    EXPECT_NEAR(r.argmax_t, 1.0, 1e-12);
    const Field c(kGrid, BanachSpec::scalar(), std::vector<cplx>(kGrid.points(), 1.0));
    EXPECT_EQ(check_decay_bound(c, FracOrder::of(1.0), 2.0, decay_sweep_grid()).sup_ratio, 0.0);
    const Field f = random_field(5);
    for (double p : {1.0, 2.0, 4.0, HUGE_VAL}) {
        const DecayReport rr = check_decay_bound(f, FracOrder::of(0.7), p, decay_sweep_grid());
        EXPECT_TRUE(std::isfinite(rr.sup_ratio));
        EXPECT_TRUE(rr.stable) << p;
    }
}

TEST(OrderReduction, Examples) {
    EXPECT_LE(check_order_reduction(mode(1), 0.5, 1.5, 1.0), 1e-8);
    EXPECT_LE(check_order_reduction(random_field(6), 0.5, 1.5, 1.0), 1e-6);
    EXPECT_LE(check_order_reduction(random_field(7), 0.3, 2.2, 0.5), 1e-6);
    const Field c(kGrid, BanachSpec::scalar(), std::vector<cplx>(kGrid.points(), 1.0));
    EXPECT_EQ(check_order_reduction(c, 0.5, 1.5, 1.0), 0.0);
    EXPECT_THROW(check_order_reduction(c, 1.5, 0.5, 1.0), std::invalid_argument);
}

TEST(Composition, Examples) {
    EXPECT_LE(check_composition_spectral(random_field(8), 0.6, 1.1, 1.0), 1e-14);
    EXPECT_LE(check_composition(mode(1), 0.75, 0.75, 1.0), 1e-6);
    EXPECT_LE(check_composition(random_field(9), 0.5, 1.7, 1.0), 1e-5);
}

TEST(Kernel, OrderOneIsTimesFirstDerivative) {
    // Finite-difference oracle on the explicit Poisson kernel.
    const FracOrder ord = FracOrder::of(1.0);
    for (double t : {0.3, 1.0, 2.5}) {
        for (double x : {0.5, 1.0, -2.0}) {
            const double h = 1e-4 * t;
            const double fd = t * (poisson_kernel(t + h, x) - poisson_kernel(t - h, x)) / (2.0 * h);
            const cplx k = kernel_value(t, x, ord);
            EXPECT_NEAR(k.real(), fd, 1e-6 * poisson_kernel(t, x)) << t << ' ' << x;
            EXPECT_NEAR(k.imag(), 0.0, 1e-12);
        }
    }
}

TEST(Kernel, AnalyticDerivatives) {
    for (int m = 0; m <= 4; ++m) {
        for (double x : {0.2, 1.5}) {
            const double t = 0.7, h = 1e-5;
            const double fd = (poisson_kernel_dt(m, t + h, x) - poisson_kernel_dt(m, t - h, x)) / (2.0 * h);
            if (m < 4) EXPECT_NEAR(poisson_kernel_dt(m + 1, t, x), fd, 1e-5 * std::abs(fd) + 1e-9);
        }
    }
    EXPECT_DOUBLE_EQ(poisson_kernel_dt(0, 1.0, 2.0), poisson_kernel(1.0, 2.0));
    EXPECT_THROW(poisson_kernel_dt(5, 1.0, 1.0), std::invalid_argument);
}

TEST(Kernel, JointHomogeneity) {
    for (double alpha : {0.5, 1.0, 1.7}) {
        const FracOrder ord = FracOrder::of(alpha);
        for (double c : {0.5, 3.0}) {
            const cplx a = kernel_value(0.8, 1.3, ord);
            const cplx b = c * kernel_value(c * 0.8, c * 1.3, ord);
            EXPECT_NEAR(std::abs(a - b), 0.0, 1e-9 * std::abs(a)) << alpha << ' ' << c;
        }
    }
}

TEST(Kernel, AggregateDecays) {
    for (double alpha : {0.5, 1.0}) {
        const FracOrder ord = FracOrder::of(alpha);
        const TimeGrid tg = kernel_time_grid(0.25, 8.0, ord, 2.0);
        double prev = HUGE_VAL;
        for (double x : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
            const double a = kernel_eval(x, ord, 2.0, tg).aggregate;
            EXPECT_LE(a, prev);
            EXPECT_NEAR(x * a, 0.25 * kernel_eval(0.25, ord, 2.0, tg).aggregate, 1e-6 * x * a);
            prev = a;
        }
        EXPECT_THROW(kernel_eval(0.1 * tg.t_min(), ord, 2.0, tg), std::invalid_argument);
    }
}

TEST(Kernel, BoundsStableAndScaleInvariant) {
    for (double alpha : {0.5, 1.0}) {
        const FracOrder ord = FracOrder::of(alpha);
        const KernelBoundsReport r = check_kernel_bounds(ord, 2.0, 0.05, 20.0, 21);
        EXPECT_TRUE(r.stable);
        EXPECT_TRUE(std::isfinite(r.size_sup) && std::isfinite(r.gradient_sup));
        const KernelBoundsReport s = check_kernel_bounds(ord, 2.0, 0.5, 200.0, 21);
        EXPECT_NEAR(s.size_sup, r.size_sup, 1e-6 * r.size_sup);
        EXPECT_NEAR(s.gradient_sup, r.gradient_sup, 1e-6 * r.gradient_sup);
    }
}
