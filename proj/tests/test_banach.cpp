#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "fraclps/banach.hpp"
#include "fraclps/errors.hpp"
#include "fraclps/squarefuncs.hpp"

using namespace fraclps;

namespace {

const GridSpec kGrid = GridSpec::make(1, 256);

double ratio_at(const Field& f, double alpha, double q, double p, bool cotype = true) {
    const TimeGrid tg = square_time_grid(f, q, alpha);
    return cotype ? cotype_ratio(f, FracOrder::of(alpha), q, p, tg) : type_ratio(f, FracOrder::of(alpha), q, p, tg);
}

ProbeConfig small_config() {
    ProbeConfig cfg;
    cfg.alpha = 1.0;
    cfg.n = 256;
    cfg.m_list = {2, 4, 8};
    cfg.trials = 3;
    cfg.seed = 77;
    return cfg;
}

}  // namespace

TEST(Frequencies, Dyadic) {
    EXPECT_EQ(dyadic_frequencies(3, 1, 64), (std::vector<int>{1, 2, 4}));
    EXPECT_EQ(dyadic_frequencies(4, 3, 64), (std::vector<int>{3, 6, 12, 24}));
    EXPECT_THROW(dyadic_frequencies(6, 1, 64), std::invalid_argument);  // 32 is the Nyquist index
    EXPECT_NO_THROW(dyadic_frequencies(5, 1, 64));
}

TEST(Frequencies, GeometricNestedAndDistinct) {
    const std::vector<int> k = geometric_frequencies(64, 1, 2047);
    ASSERT_EQ(k.size(), 64u);
    EXPECT_EQ(k.front(), 1);
    EXPECT_EQ(k.back(), 2047);
    for (std::size_t j = 1; j < k.size(); ++j) EXPECT_GT(k[j], k[j - 1]);
    EXPECT_EQ(geometric_frequencies(3, 5, 7), (std::vector<int>{5, 6, 7}));
    EXPECT_THROW(geometric_frequencies(4, 5, 7), std::invalid_argument);
}

TEST(LacunaryField, Examples) {
    const std::vector<double> amp{1.0, 2.0}, sign{1.0, -1.0};
    const std::vector<int> k{1, 3};
    const Field f = make_lacunary_field(kGrid, 2.0, amp, sign, k);
    EXPECT_EQ(f.banach().dimension(), 2);
    EXPECT_NEAR(std::abs(f.at(0)[0] - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(f.at(0)[1] + 2.0), 0.0, 1e-15);
    const std::vector<int> bad{1, 128};
    EXPECT_THROW(make_lacunary_field(kGrid, 2.0, amp, sign, bad), std::invalid_argument);
    const std::vector<int> dup{3, 3};
    EXPECT_THROW(make_lacunary_field(kGrid, 2.0, amp, sign, dup), std::invalid_argument);
}

TEST(CotypeRatio, SingleModeAndTwoModes) {
    const std::vector<double> one{1.0}, plus{1.0};
    const std::vector<int> k1{1};
    EXPECT_NEAR(ratio_at(make_lacunary_field(kGrid, 2.0, one, plus, k1), 1.0, 2.0, 2.0), 0.5, 1e-6);
    const std::vector<double> amp{1.0, 0.7}, sign{1.0, -1.0};
    const std::vector<int> k2{1, 2};
    const Field f = make_lacunary_field(kGrid, 2.0, amp, sign, k2);
    EXPECT_NEAR(ratio_at(f, 1.0, 2.0, 2.0), 0.5, 1e-6);
    EXPECT_NEAR(ratio_at(7.0 * f, 1.0, 2.0, 2.0), ratio_at(f, 1.0, 2.0, 2.0), 1e-12);
    EXPECT_THROW(ratio_at(Field(kGrid, BanachSpec::scalar()), 1.0, 2.0, 2.0), std::invalid_argument);
}

TEST(TypeRatio, Examples) {
    const std::vector<double> one{1.0}, plus{1.0};
    const std::vector<int> k1{1};
    EXPECT_NEAR(ratio_at(make_lacunary_field(kGrid, 2.0, one, plus, k1), 1.0, 2.0, 2.0, false), 2.0, 4e-6);
    const Field c(kGrid, BanachSpec::scalar(), std::vector<cplx>(kGrid.points(), 3.0));
    EXPECT_NEAR(type_ratio(c, FracOrder::of(1.0), 2.0, 2.0, square_time_grid(Band{1.0, 8.0}, 2.0, 1.0)), 1.0, 1e-14);
}

TEST(CotypeRatio, SmallerExponentDominatesAtOrderOne) {
    ProbeConfig cfg = small_config();
    for (int trial = 0; trial < 3; ++trial) {
        const Field f = probe_trial_field(cfg, 8, trial);
        EXPECT_GE(ratio_at(f, 1.0, 2.0, 2.0), ratio_at(f, 1.0, 4.0, 2.0)) << trial;
    }
}

TEST(Probe, DeterministicAndRunningMaximum) {
    const ProbeConfig cfg = small_config();
    const ProbeResult a = run_cotype_probe(cfg);
    const ProbeResult b = run_cotype_probe(cfg);
    ASSERT_EQ(a.rows.size(), 3u);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_EQ(a.rows[i].rho, b.rows[i].rho);
        EXPECT_EQ(a.rows[i].trials, 3 * static_cast<int>(i + 1));
        if (i > 0) EXPECT_GE(a.rows[i].rho, a.rows[i - 1].rho);
    }
    EXPECT_EQ(a.direction, "cotype");
    std::ostringstream x, y;
    write_probe_csv(x, a);
    write_probe_csv(y, b);
    EXPECT_EQ(x.str(), y.str());
    // Trials differ across seeds, trial 0 does not.
    ProbeConfig other = cfg;
    other.seed = 78;
    EXPECT_EQ(probe_trial_field(cfg, 4, 0).values()[5], probe_trial_field(other, 4, 0).values()[5]);
    EXPECT_NE(probe_trial_field(cfg, 4, 1).values()[5], probe_trial_field(other, 4, 1).values()[5]);
}

TEST(Probe, HilbertSpaceCaseIsBounded) {
    const ProbeConfig cfg = small_config();
    const ProbeResult c = run_cotype_probe(cfg);
    EXPECT_EQ(c.verdict(cfg), "bounded") << c.trend();
    EXPECT_NEAR(c.trend(), 1.0, 1e-6);
    const ProbeResult t = run_type_probe(cfg);
    EXPECT_EQ(t.direction, "type");
    EXPECT_EQ(t.verdict(cfg), "bounded") << t.trend();
}

TEST(Probe, VerdictThresholds) {
    ProbeConfig cfg;
    ProbeResult r;
    r.rows = {{2, 1.0, 1}, {4, 1.3, 2}};
    EXPECT_EQ(r.verdict(cfg), "inconclusive");
    r.rows[1].rho = 1.6;
    EXPECT_EQ(r.verdict(cfg), "growing");
    r.rows[1].rho = 1.1;
    EXPECT_EQ(r.verdict(cfg), "bounded");
}

TEST(Probe, ValidationNamesTheField) {
    auto message = [](ProbeConfig cfg) {
        try {
            cfg.validate();
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    ProbeConfig cfg;
    cfg.r = 0.5;
    EXPECT_NE(message(cfg).find("probe.r"), std::string::npos);
    cfg = {};
    cfg.m_list = {4, 2};
    EXPECT_NE(message(cfg).find("probe.m_list"), std::string::npos);
    cfg = {};
    cfg.n = 1000;
    EXPECT_NE(message(cfg).find("probe.n"), std::string::npos);
    cfg = {};
    cfg.trials = 0;
    EXPECT_NE(message(cfg).find("probe.trials"), std::string::npos);
    EXPECT_EQ(message(ProbeConfig{}), "");
    ProbeConfig type_cfg = small_config();
    type_cfg.q = 4.0;
    EXPECT_THROW(run_type_probe(type_cfg), ConfigError);
}
