#include <gtest/gtest.h>

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fraclps/errors.hpp"
#include "fraclps/hilbert.hpp"

using namespace fraclps;

namespace {

double max_abs(std::span<const cplx> v) {
    double m = 0.0;
    for (const auto& z : v) m = std::max(m, std::abs(z));
    return m;
}

LineSample brute_force(const LineSample& f, double eps) {
    const int c = f.components();
    std::vector<cplx> out(f.size() * c);
    for (std::size_t i = 0; i < f.size(); ++i) {
        for (std::size_t j = 0; j < f.size(); ++j) {
            const double d = f.x(i) - f.x(j);
            if (std::abs(d) <= eps) continue;
            for (int k = 0; k < c; ++k) out[i * c + k] += f.step() * f.at(j)[k] / d;
        }
    }
    return LineSample(f.half_width(), f.intervals(), f.banach(), std::move(out));
}

}  // namespace

TEST(CutoffPhi, SmoothStep) {
    const CutoffPhi phi;
    EXPECT_EQ(phi(0.2), 0.0);
    EXPECT_EQ(phi(0.5), 0.0);
    EXPECT_EQ(phi(1.5), 1.0);
    EXPECT_EQ(phi(7.0), 1.0);
    EXPECT_NEAR(phi(1.0), 0.5, 1e-15);
    double prev = 0.0;
    for (double u = 0.5; u <= 1.5; u += 0.01) {
        EXPECT_GE(phi(u), prev - 1e-15);
        prev = phi(u);
        // 1_{u > 3/2} <= phi <= 1_{u > 1/2}
        EXPECT_LE(phi(u), 1.0);
        const double h = 1e-6;
        EXPECT_NEAR(phi.derivative(u), (phi(u + h) - phi(u - h)) / (2 * h), 1e-6);
    }
    EXPECT_EQ(phi.derivative(0.5), 0.0);
    EXPECT_EQ(phi.derivative(1.5), 0.0);
}

TEST(TruncatedHilbert, MatchesBruteForce) {
    for (int idx : {0, 3, 8}) {
        const LineSample f = hilbert_test_field(idx, 8.0, 512);
        for (double m : {2.0, 5.0, 40.0}) {
            const double eps = m * f.step();
            const LineSample a = truncated_hilbert(f, eps), b = brute_force(f, eps);
            std::vector<cplx> diff(a.values().size());
            for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = a.values()[i] - b.values()[i];
            EXPECT_LE(max_abs(diff), 1e-12 * max_abs(b.values())) << idx << ' ' << m;
        }
    }
    const LineSample f = hilbert_test_field(0, 8.0, 512);
    EXPECT_THROW(truncated_hilbert(f, 1.5 * f.step()), std::invalid_argument);
}

TEST(TruncatedHilbert, EvenFieldGivesZeroAtOrigin) {
    const LineSample f = gaussian_line_sample(8.0, 1024);
    const LineSample h = truncated_hilbert(f, 4.0 * f.step());
    EXPECT_LE(std::abs(h.at(static_cast<std::size_t>(f.half()))[0]), 1e-15);
    // Odd output for even input.
    for (std::size_t i = 0; i < f.size(); ++i) {
        EXPECT_NEAR(std::abs(h.at(i)[0] + h.at(f.size() - 1 - i)[0]), 0.0, 1e-14);
    }
}

TEST(TruncatedHilbert, IndicatorValue) {
    const LineSample f = LineSample::sample(16.0, 1 << 14, BanachSpec::scalar(),
                                            [](double x, std::span<cplx> out) { out[0] = std::abs(x) <= 1.0; });
    const LineSample h = truncated_hilbert(f, 2.0 * f.step());
    const std::size_t at = static_cast<std::size_t>(f.half() + std::lround(2.0 / f.step()));
    EXPECT_NEAR(h.at(at)[0].real(), std::log(3.0), 5e-3);
}

TEST(TruncatedHilbert, FarFieldMatchesMomentExpansion) {
    // 1/(x - y) = sum_k y^k / x^{k+1}; odd moments of the Gaussian vanish and
    // int y^{2j} exp(-2 y^2) dy = Gamma(j + 1/2) / 2^{j + 1/2}.
    const LineSample f = gaussian_line_sample(16.0, 4096);
    const double eps = 4.0 * f.step();
    const LineSample h = truncated_hilbert(f, eps);
    for (double x : {10.0, 12.0, -14.0}) {
        double series = 0.0;
        for (int j = 0; j < 30; ++j) {
            series += boost::math::tgamma(j + 0.5) / std::pow(2.0, j + 0.5) / std::pow(x, 2 * j + 1);
        }
        const std::size_t at = static_cast<std::size_t>(f.half() + std::lround(x / f.step()));
        EXPECT_NEAR(h.at(at)[0].real(), series, 1e-10 * std::abs(series)) << x;
    }
}

TEST(TruncatedHilbert, TranslationEquivariant) {
    const int shift = 37;
    const LineSample f = LineSample::sample(16.0, 2048, BanachSpec::scalar(), [](double x, std::span<cplx> out) {
        out[0] = std::abs(x) < 3.0 ? std::exp(-1.0 / (9.0 - x * x)) * std::cos(3.0 * x) : 0.0;
    });
    const double s = shift * f.step();
    const LineSample g = LineSample::sample(16.0, 2048, BanachSpec::scalar(), [&](double x, std::span<cplx> out) {
        const double y = x - s;
        out[0] = std::abs(y) < 3.0 ? std::exp(-1.0 / (9.0 - y * y)) * std::cos(3.0 * y) : 0.0;
    });
    const double eps = 6.0 * f.step();
    const LineSample hf = truncated_hilbert(f, eps), hg = truncated_hilbert(g, eps);
    const double scale = max_abs(hf.values());
    for (std::size_t i = shift; i < f.size(); ++i) {
        EXPECT_NEAR(std::abs(hg.at(i)[0] - hf.at(i - shift)[0]), 0.0, 1e-13 * scale);
    }
}

TEST(MaximalHilbert, SmoothedEqualsTruncatedOffTheAnnulus) {
    // f is supported in [-1, 1]; at x = 3 with eps = 1 every |x - y| lies above 3 eps / 2.
    const LineSample f = hilbert_test_field(0, 8.0, 1024);
    LineSample bump = LineSample::sample(8.0, 1024, BanachSpec::scalar(), [](double x, std::span<cplx> out) {
        out[0] = std::abs(x) < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0;
    });
    const std::vector<double> eps{1.0};
    const auto a = maximal_hilbert(bump, eps);
    const auto b = smoothed_maximal_hilbert(bump, CutoffPhi{}, eps);
    const std::size_t at = static_cast<std::size_t>(bump.half() + std::lround(3.0 / bump.step()));
    EXPECT_NEAR(a[at], b[at], 1e-15 * a[at]);
    EXPECT_GT(a[at], 0.0);
    const MaximalPair p = maximal_hilbert_pair(f, CutoffPhi{}, default_eps_grid(f));
    EXPECT_EQ(p.hstar, maximal_hilbert(f, default_eps_grid(f)));
    EXPECT_EQ(p.hstar_phi, smoothed_maximal_hilbert(f, CutoffPhi{}, default_eps_grid(f)));
}

TEST(MaximalHilbert, EpsGrid) {
    const LineSample f = hilbert_test_field(1, 16.0, 1024);
    const auto e = default_eps_grid(f);
    EXPECT_DOUBLE_EQ(e.front(), 32.0);
    EXPECT_GE(e.back(), 2.0 * f.step());
    EXPECT_LT(e.back() * std::pow(2.0, -0.25), 2.0 * f.step());
    for (std::size_t i = 1; i < e.size(); ++i) EXPECT_NEAR(e[i - 1] / e[i], std::pow(2.0, 0.25), 1e-12);
}

TEST(HardyLittlewood, ConstantAndHotCell) {
    const LineSample grid = LineSample::sample(4.0, 256, BanachSpec::scalar(), [](double, std::span<cplx> o) {
        o[0] = 0.0;
    });
    // Smallest ball has radius h (three cells); zero outside the window.
    std::vector<double> one(grid.size(), 1.0);
    const auto mc = hardy_littlewood_maximal(grid, one);
    for (std::size_t i = 1; i + 1 < mc.size(); ++i) EXPECT_DOUBLE_EQ(mc[i], 1.0);
    EXPECT_DOUBLE_EQ(mc.front(), 2.0 / 3.0);
    std::vector<double> hot(grid.size(), 0.0);
    hot[static_cast<std::size_t>(grid.half())] = 1.0;
    const auto m = hardy_littlewood_maximal(grid, hot);
    EXPECT_DOUBLE_EQ(m[static_cast<std::size_t>(grid.half())], 1.0 / 3.0);
    for (int k : {1, 8, 64}) {
        const double rho = k * grid.step();
        EXPECT_NEAR(m[static_cast<std::size_t>(grid.half() + k)], grid.step() / (2.0 * rho + grid.step()), 1e-12) << k;
    }
    const auto r = maximal_radii(0.1, 3.2);
    EXPECT_DOUBLE_EQ(r.front(), 0.1);
    EXPECT_NEAR(r[8], 0.2, 1e-12);
    EXPECT_LE(r.back(), 3.2 * (1.0 + 1e-12));
}

TEST(HardyLittlewood, Sublinear) {
    const LineSample a = hilbert_test_field(2, 16.0, 1024), b = hilbert_test_field(9, 16.0, 1024);
    const auto na = a.norms(), nb = b.norms();
    std::vector<double> sum(na.size());
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = na[i] + nb[i];
    const auto ms = hardy_littlewood_maximal(a, sum), ma = hardy_littlewood_maximal(a, na),
               mb = hardy_littlewood_maximal(a, nb);
    for (std::size_t i = 0; i < sum.size(); ++i) EXPECT_LE(ms[i], (ma[i] + mb[i]) * (1.0 + 1e-12));
    const GridSpec g = GridSpec::make(1, 64);
    for (double v : periodic_maximal(g, std::vector<double>(64, 2.0))) EXPECT_DOUBLE_EQ(v, 2.0);
}

TEST(Comparison, FiniteAndRefinementStable) {
    for (int idx : {0, 8}) {
        double r[2];
        for (int j = 0; j < 2; ++j) {
            const LineSample f = hilbert_test_field(idx, 16.0, 4096 << j);
            r[j] = comparison_ratio(f, CutoffPhi{}, default_eps_grid(f));
        }
        EXPECT_GT(r[0], 0.0);
        EXPECT_LE(std::abs(r[1] - r[0]) / r[1], 0.1) << idx;
    }
}

TEST(Convergence, FixedEpsErrorIsLinearInStep) {
    for (int idx : {1, 8}) {
        const double eps = 0.25;
        std::vector<LineSample> h;
        for (int n : {1024, 2048, 4096}) h.push_back(truncated_hilbert(hilbert_test_field(idx, 16.0, n), eps));
        // Differences between successive resolutions on the coarse grid.
        double d[2] = {0.0, 0.0};
        for (int level = 0; level < 2; ++level) {
            const LineSample fine = coarsen(h[level + 1], 1 << (level + 1));
            const LineSample coarse = coarsen(h[level], 1 << level);
            for (std::size_t i = 0; i < fine.values().size(); ++i) {
                d[level] = std::max(d[level], std::abs(fine.values()[i] - coarse.values()[i]));
            }
        }
        EXPECT_NEAR(d[0] / d[1], 2.0, 0.2) << idx;
    }
}

TEST(Convergence, MedianOscillationDecreases) {
    const LineSample g = gaussian_line_sample(16.0, 4096);
    const std::vector<int> mult{16, 8, 4, 2};
    const auto rows = convergence_study(g, 3, mult);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows.front().intervals, 1024);
    EXPECT_EQ(rows.back().intervals, 4096);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_LT(rows[i].median_osc, 0.75 * rows[i - 1].median_osc);
        EXPECT_GE(rows[i].fraction_below, rows[i - 1].fraction_below);
    }
    const auto eps = eps_sequence_for(g, mult);
    EXPECT_DOUBLE_EQ(eps.back(), 2.0 * g.step());
    EXPECT_THROW(coarsen(g, 3), std::invalid_argument);
}

TEST(LineSampleCsv, RoundTripAndErrors) {
    const LineSample f = hilbert_test_field(8, 4.0, 16);
    std::stringstream ss;
    write_line_sample_csv(ss, f);
    const LineSample g = read_line_sample_csv(ss);
    ASSERT_EQ(g.size(), f.size());
    EXPECT_EQ(g.components(), 2);
    for (std::size_t i = 0; i < f.values().size(); ++i) EXPECT_EQ(g.values()[i], f.values()[i]);

    std::istringstream even("x,re_0,im_0\n-1,0,0\n0,1,0\n1,0,0\n2,0,0\n");
    EXPECT_THROW(read_line_sample_csv(even), InputError);
    std::istringstream skewed("x,re_0,im_0\n-2,0,0\n-1,0,0\n0,1,0\n1.5,0,0\n2,0,0\n");
    try {
        read_line_sample_csv(skewed);
        FAIL() << "expected InputError";
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("line 5"), std::string::npos) << e.what();
    }
}
