#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "fraclps/errors.hpp"
#include "fraclps/grid.hpp"

using namespace fraclps;

namespace {

constexpr double kPi = std::numbers::pi;

Field mode(const GridSpec& g, int k, cplx amp = 1.0) {
    return Field::sample(g, BanachSpec::scalar(), [&](std::span<const double> x, std::span<cplx> out) {
        out[0] = amp * std::polar(1.0, 2.0 * kPi / g.period * k * x[0]);
    });
}

Field noise(const GridSpec& g, const BanachSpec& b, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<cplx> v(g.points() * b.dimension());
    for (auto& z : v) z = {u(rng), u(rng)};
    return Field(g, b, std::move(v));
}

// Direct O(N^2) transform used as an oracle.
std::vector<cplx> direct_dft(const Field& f) {
    const auto& g = f.grid();
    std::vector<cplx> out(g.points());
    double x[2], y[2];
    for (std::size_t k = 0; k < g.points(); ++k) {
        const int k0 = g.dim == 1 ? static_cast<int>(k) : static_cast<int>(k / g.n);
        const int k1 = g.dim == 1 ? 0 : static_cast<int>(k % g.n);
        cplx acc = 0.0;
        for (std::size_t j = 0; j < g.points(); ++j) {
            g.coordinates(j, {x, static_cast<std::size_t>(g.dim)});
            y[0] = x[0];
            y[1] = g.dim == 2 ? x[1] : 0.0;
            const double phase = 2.0 * kPi / g.period * (k0 * y[0] + k1 * y[1]);
            acc += f(j) * std::polar(1.0, -phase);
        }
        out[k] = acc / static_cast<double>(g.points());
    }
    return out;
}

}  // namespace

TEST(GridSpec, ValidatesShape) {
    EXPECT_THROW(GridSpec::make(3, 16), std::invalid_argument);
    EXPECT_THROW(GridSpec::make(1, 12), std::invalid_argument);
    EXPECT_THROW(GridSpec::make(1, 4), std::invalid_argument);
    EXPECT_THROW(GridSpec::make(1, 16, -1.0), std::invalid_argument);
    const GridSpec g = GridSpec::make(2, 16, 3.0);
    EXPECT_EQ(g.points(), 256u);
    double x[2];
    g.coordinates(17, x);
    EXPECT_DOUBLE_EQ(x[0], 3.0 / 16);
    EXPECT_DOUBLE_EQ(x[1], 3.0 / 16);
}

TEST(BanachSpec, NormMatchesDefinition) {
    const std::vector<cplx> v{{3.0, 4.0}, {-1.0, 0.0}, {0.0, 2.0}};
    for (double r : {1.0, 1.5, 2.0, 3.0, 7.0}) {
        const double expect = std::pow(std::pow(5.0, r) + 1.0 + std::pow(2.0, r), 1.0 / r);
        EXPECT_NEAR(BanachSpec::sequence(3, r).norm(v), expect, 1e-13 * expect) << r;
    }
    EXPECT_DOUBLE_EQ(BanachSpec::sequence(3, HUGE_VAL).norm(v), 5.0);
    EXPECT_DOUBLE_EQ(BanachSpec::scalar().norm(std::vector<cplx>{{3.0, -4.0}}), 5.0);
    EXPECT_THROW(BanachSpec::sequence(3, 0.5), std::invalid_argument);
}

TEST(BanachSpec, HomogeneousAndSubadditive) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    for (double r : {1.0, 2.0, 4.0, HUGE_VAL}) {
        const BanachSpec b = BanachSpec::sequence(5, r);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<cplx> a(5), c(5), s(5), sc(5);
            const cplx lam(nd(rng), nd(rng));
            for (int j = 0; j < 5; ++j) {
                a[j] = {nd(rng), nd(rng)};
                c[j] = {nd(rng), nd(rng)};
                s[j] = a[j] + c[j];
                sc[j] = lam * a[j];
            }
            EXPECT_LE(b.norm(s), b.norm(a) + b.norm(c) + 1e-12);
            EXPECT_NEAR(b.norm(sc), std::abs(lam) * b.norm(a), 1e-12 * b.norm(sc));
        }
    }
}

TEST(Transform, ConstantField) {
    const GridSpec g = GridSpec::make(1, 16);
    const Field f(g, BanachSpec::scalar(), std::vector<cplx>(16, cplx(2.5, -1.0)));
    const Spectrum s = forward_transform(f);
    EXPECT_NEAR(std::abs(s.coefficients()[0] - cplx(2.5, -1.0)), 0.0, 1e-15);
    for (std::size_t k = 1; k < 16; ++k) EXPECT_LT(std::abs(s.coefficients()[k]), 1e-15);
}

TEST(Transform, SingleExponential) {
    const GridSpec g = GridSpec::make(1, 16);
    const Spectrum s = forward_transform(mode(g, 1));
    const int k1[] = {1};
    EXPECT_NEAR(std::abs(s.coefficient(k1) - 1.0), 0.0, 1e-15);
    for (std::size_t k = 0; k < 16; ++k) {
        if (k != 1) EXPECT_LT(std::abs(s.coefficients()[k]), 1e-15);
    }
}

TEST(Transform, MatchesDirectSummation) {
    for (int dim : {1, 2}) {
        const GridSpec g = GridSpec::make(dim, dim == 1 ? 32 : 8, 3.7);
        const Field f = noise(g, BanachSpec::scalar(), 11 + dim);
        const auto oracle = direct_dft(f);
        const Spectrum s = forward_transform(f);
        for (std::size_t k = 0; k < g.points(); ++k) EXPECT_LT(std::abs(s.coefficients()[k] - oracle[k]), 1e-13);
    }
}

TEST(Transform, RoundTripOnHundredFields) {
    const std::vector<std::pair<GridSpec, BanachSpec>> shapes{
        {GridSpec::make(1, 64), BanachSpec::scalar()},
        {GridSpec::make(1, 64), BanachSpec::sequence(3, 2.0)},
        {GridSpec::make(2, 16), BanachSpec::scalar()},
        {GridSpec::make(2, 16), BanachSpec::sequence(2, 4.0)},
    };
    for (const auto& [g, b] : shapes) {
        double worst = 0.0;
        for (unsigned seed = 0; seed < 100; ++seed) {
            const Field f = noise(g, b, seed);
            worst = std::max(worst, relative_l2_distance(inverse_transform(forward_transform(f)), f));
        }
        EXPECT_LE(worst, 1e-12);
    }
}

TEST(Transform, InverseExamples) {
    const GridSpec g = GridSpec::make(1, 32);
    const Field zero = inverse_transform(Spectrum(g, BanachSpec::scalar(), std::vector<cplx>(32)));
    for (const auto& v : zero.values()) EXPECT_EQ(v, cplx(0.0));
    std::vector<cplx> c(32);
    c[0] = 1.0;
    const Field one = inverse_transform(Spectrum(g, BanachSpec::scalar(), c));
    for (const auto& v : one.values()) EXPECT_NEAR(std::abs(v - 1.0), 0.0, 1e-15);
}

TEST(Transform, Parseval) {
    for (int dim : {1, 2}) {
        const GridSpec g = GridSpec::make(dim, dim == 1 ? 128 : 16, 2.0);
        const Field f = noise(g, BanachSpec::sequence(2, 2.0), 5);
        // Direct-summation energy of the field.
        double direct = 0.0;
        for (const auto& v : f.values()) direct += std::norm(v);
        direct *= g.cell_measure();
        EXPECT_NEAR(forward_transform(f).parseval_energy(), direct, 1e-10 * direct);
        EXPECT_NEAR(l2_energy(f), direct, 1e-12 * direct);
    }
}

TEST(LpNorm, Examples) {
    const GridSpec g = GridSpec::make(1, 64);
    const Field one(g, BanachSpec::scalar(), std::vector<cplx>(64, 1.0));
    EXPECT_NEAR(lp_norm(one, 2.0), std::sqrt(2.0 * kPi), 1e-13);
    EXPECT_EQ(lp_norm(Field(g, BanachSpec::scalar()), 3.0), 0.0);
    const Field e = mode(g, 1);
    for (double p : {1.0, 1.5, 2.0, 4.0, 9.0}) EXPECT_NEAR(lp_norm(e, p), std::pow(2.0 * kPi, 1.0 / p), 1e-12);
    EXPECT_NEAR(lp_norm(e, HUGE_VAL), 1.0, 1e-15);
    EXPECT_THROW(lp_norm(e, 0.5), std::invalid_argument);
}

TEST(LpNorm, HomogeneousAndMonotoneOnUnitTorus) {
    const GridSpec g = GridSpec::make(1, 128, 1.0);
    const Field f = noise(g, BanachSpec::sequence(3, 3.0), 9);
    const cplx c(-2.0, 1.5);
    double prev = 0.0;
    for (double p : {1.0, 1.5, 2.0, 3.0, 6.0, HUGE_VAL}) {
        const double n = lp_norm(f, p);
        EXPECT_NEAR(lp_norm(c * f, p), std::abs(c) * n, 1e-13 * std::abs(c) * n);
        EXPECT_GE(n, prev - 1e-14);
        prev = n;
    }
}

TEST(E0Project, Examples) {
    const GridSpec g = GridSpec::make(1, 32);
    const Field c(g, BanachSpec::scalar(), std::vector<cplx>(32, cplx(1.0, 2.0)));
    EXPECT_LT(relative_l2_distance(e0_project(c), c), 1e-15);
    EXPECT_LT(lp_norm(e0_project(mode(g, 1)), HUGE_VAL), 1e-15);
    const Field f = Field::sample(g, BanachSpec::scalar(), [](std::span<const double> x, std::span<cplx> out) {
        out[0] = 3.0 + std::polar(1.0, 2.0 * x[0]);
    });
    const Field mean = e0_project(f);
    for (const auto& v : mean.values()) EXPECT_NEAR(std::abs(v - 3.0), 0.0, 1e-14);
}

TEST(E0Project, IdempotentAndContractive) {
    const GridSpec g = GridSpec::make(2, 16);
    const Field f = noise(g, BanachSpec::sequence(2, 1.0), 3);
    const Field e = e0_project(f);
    EXPECT_LT(relative_l2_distance(e0_project(e), e), 1e-12);
    for (double p : {1.0, 2.0, 4.0, HUGE_VAL}) EXPECT_LE(lp_norm(e, p), lp_norm(f, p) * (1 + 1e-12));
}

TEST(RandomBandLimited, SpectrumAndRealness) {
    const GridSpec g = GridSpec::make(1, 64);
    const Field f = random_band_limited(g, BanachSpec::scalar(), 5, 42, true, 0.5);
    for (const auto& v : f.values()) EXPECT_EQ(v.imag(), 0.0);
    const Spectrum s = forward_transform(f);
    EXPECT_NEAR(std::abs(s.coefficients()[0] - 0.5), 0.0, 1e-14);
    for (std::size_t k = 0; k < 64; ++k) {
        if (std::abs(g.wavenumber(static_cast<int>(k))) > 5) EXPECT_LT(std::abs(s.coefficients()[k]), 1e-14);
    }
    const Field again = random_band_limited(g, BanachSpec::scalar(), 5, 42, true, 0.5);
    EXPECT_EQ(relative_l2_distance(f, again), 0.0);
    EXPECT_THROW(random_band_limited(g, BanachSpec::scalar(), 32, 1), std::invalid_argument);
}

TEST(RefineGrid, KeepsSamples) {
    const GridSpec g = GridSpec::make(1, 32);
    const Field f = random_band_limited(g, BanachSpec::scalar(), 6, 1);
    const Field r = refine_grid(f);
    ASSERT_EQ(r.grid().n, 64);
    for (std::size_t j = 0; j < 32; ++j) EXPECT_LT(std::abs(r(2 * j) - f(j)), 1e-13);
}

TEST(SpectralBand, FindsExtremeModes) {
    const GridSpec g = GridSpec::make(1, 64);
    const Field f = mode(g, 3) + mode(g, -7);
    const Band b = spectral_band(f);
    EXPECT_DOUBLE_EQ(b.min, 3.0);
    EXPECT_DOUBLE_EQ(b.max, 7.0);
}

TEST(FieldCsv, RoundTrip) {
    const GridSpec g = GridSpec::make(2, 8, 1.5);
    const Field f = noise(g, BanachSpec::sequence(2, 3.0), 4);
    std::stringstream ss;
    write_field_csv(ss, f);
    const Field back = read_field_csv(ss, 3.0);
    EXPECT_EQ(back.grid().dim, 2);
    EXPECT_EQ(back.grid().n, 8);
    EXPECT_NEAR(back.grid().period, 1.5, 1e-14);
    EXPECT_EQ(back.banach(), f.banach());
    EXPECT_EQ(relative_l2_distance(back, f), 0.0);
}

TEST(FieldCsv, MalformedRowsNameTheLine) {
    std::stringstream bad("x,re_0,im_0\n0,1,0\n0.5,nope,0\n");
    try {
        read_field_csv(bad);
        FAIL() << "expected InputError";
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
    std::stringstream short_row("x,re_0,im_0\n0,1\n");
    EXPECT_THROW(read_field_csv(short_row), InputError);
    std::stringstream header("t,re_0,im_0\n0,1,0\n");
    EXPECT_THROW(read_field_csv(header), InputError);
}

TEST(Field, RejectsNonFinite) {
    const GridSpec g = GridSpec::make(1, 8);
    std::vector<cplx> v(8);
    v[3] = NAN;
    EXPECT_THROW(Field(g, BanachSpec::scalar(), v), std::invalid_argument);
}
