#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "ghe/errors.hpp"
#include "ghe/inversion.hpp"
#include "ghe/mc_oracle.hpp"
#include "oracles.hpp"

using namespace ghe;
using namespace ghe::testing;

namespace {

SimConfig sim(std::size_t paths, int steps, std::uint64_t seed = 11, bool anti = false) {
    return SimConfig{paths, steps, seed, anti};
}

// Sample mean and its standard error.
struct Moments {
    double sum = 0.0, sum2 = 0.0;
    std::size_t n = 0;
    void add(double v) {
        sum += v;
        sum2 += v * v;
        ++n;
    }
    double mean() const { return sum / n; }
    double se() const { return std::sqrt((sum2 / n - mean() * mean()) / (n - 1)); }
};

}  // namespace

TEST(Simulation, BrownianTerminalMean) {
    const HejdParams p(0.07, 0.09, {}, {});
    Moments m;
    simulate_hejd(p, 2.0, sim(20000, 10), [&](std::size_t, const std::vector<double>& x) { m.add(x.back()); });
    EXPECT_EQ(m.n, 20000u);
    EXPECT_LT(std::abs(m.mean() - 0.14), 3 * m.se());
}

TEST(Simulation, MartingaleMoment) {
    // Needs min alpha_plus > 2 so that e^{X} has a variance.
    const HejdParams nig = stored_nig().with_drift(martingale_drift(stored_nig(), 0.03, 0.0));
    for (const HejdParams& p : {kou_basic(), nig}) {
        Moments m;
        simulate_hejd(p, 1.0, sim(40000, 20), [&](std::size_t, const std::vector<double>& x) { m.add(std::exp(x.back())); });
        EXPECT_LT(std::abs(m.mean() - std::exp(0.03)), 3 * m.se());
    }
}

TEST(Simulation, LaplaceExponentAtOneHalf) {
    // One exact step per path covers the whole year.
    const HejdParams p = stored_nig();
    Moments m;
    simulate_hejd(p, 1.0, sim(1000000, 1), [&](std::size_t, const std::vector<double>& x) { m.add(std::exp(0.5 * x[1])); });
    EXPECT_LT(std::abs(m.mean() - std::exp(laplace_exponent(p, cplx(0.5)).real())), 3 * m.se());
}

TEST(Simulation, FixedSeedIsBitIdentical) {
    std::vector<double> a, b;
    simulate_hejd(kou_stress(), 0.5, sim(50, 40, 5), [&](std::size_t, const std::vector<double>& x) { a.insert(a.end(), x.begin(), x.end()); });
    simulate_hejd(kou_stress(), 0.5, sim(50, 40, 5), [&](std::size_t, const std::vector<double>& x) { b.insert(b.end(), x.begin(), x.end()); });
    EXPECT_EQ(a, b);
    std::vector<double> c;
    simulate_hejd(kou_stress(), 0.5, sim(50, 40, 6), [&](std::size_t, const std::vector<double>& x) { c.insert(c.end(), x.begin(), x.end()); });
    EXPECT_NE(a, c);
}

TEST(Simulation, AntitheticPairsReflectTheGaussianPart) {
    const HejdParams p(0.1, 0.04, {}, {});
    std::vector<std::vector<double>> paths;
    simulate_hejd(p, 1.0, sim(4, 8, 3, true), [&](std::size_t, const std::vector<double>& x) { paths.push_back(x); });
    ASSERT_EQ(paths.size(), 4u);
    for (std::size_t k = 0; k < paths[0].size(); ++k) EXPECT_NEAR(paths[0][k] + paths[1][k], 2 * 0.1 * k / 8.0, 1e-14);
}

TEST(Simulation, VarianceGammaCharacteristicFunction) {
    KobolModel vg = calibrated_vg();
    vg.drift = 0.0;
    const std::vector<double> us{1.0, 2.0};
    std::vector<Moments> re(2), im(2);
    simulate_vg(vg.C, vg.G, vg.M, 0.0, 1.0, sim(40000, 50), [&](std::size_t, const std::vector<double>& x) {
        for (std::size_t k = 0; k < us.size(); ++k) {
            re[k].add(std::cos(us[k] * x.back()));
            im[k].add(std::sin(us[k] * x.back()));
        }
    });
    for (std::size_t k = 0; k < us.size(); ++k) {
        const cplx cf = std::exp(laplace_exponent(TargetModel(vg), cplx(0.0, us[k]), 0.03, 0.0));
        EXPECT_LT(std::abs(re[k].mean() - cf.real()), 3 * re[k].se()) << us[k];
        EXPECT_LT(std::abs(im[k].mean() - cf.imag()), 3 * im[k].se()) << us[k];
    }
}

TEST(Simulation, SymmetricNigHasNoSkew) {
    std::vector<double> xs;
    simulate_nig(10.0, 0.0, 0.3, 0.0, 1.0, sim(40000, 20), [&](std::size_t, const std::vector<double>& x) { xs.push_back(x.back()); });
    Moments m;
    for (double x : xs) m.add(x);
    const double s = std::sqrt(m.sum2 / m.n - m.mean() * m.mean());
    Moments z3;
    for (double x : xs) z3.add(std::pow((x - m.mean()) / s, 3));
    EXPECT_LT(std::abs(z3.mean()), 3 * z3.se());
}

TEST(Simulation, InverseGaussianMoments) {
    for (auto [mean, shape] : {std::pair{0.5, 2.0}, std::pair{3e-5, 9e-10}, std::pair{2.0, 0.1}}) {
        std::mt19937_64 rng(99);
        Moments m, c;
        std::vector<double> xs(200000);
        for (double& x : xs) {
            x = sample_inverse_gaussian(mean, shape, rng);
            m.add(x);
        }
        for (double x : xs) c.add((x - m.mean()) * (x - m.mean()));
        EXPECT_LT(std::abs(m.mean() - mean), 3 * m.se()) << mean;
        EXPECT_LT(std::abs(c.mean() - std::pow(mean, 3) / shape), 3 * c.se()) << mean;
    }
}

TEST(Simulation, ModelConversion) {
    const auto vg = sim_model(calibrated_vg(), 0.03, 0.0);
    ASSERT_TRUE(std::holds_alternative<VgProcess>(vg));
    EXPECT_NEAR(std::get<VgProcess>(vg).drift, target_martingale_drift(calibrated_vg(), 0.03, 0.0), 0);
    const auto kou = sim_model(KouModel{1.0, 3.0, 1.0, 2.0, 0.04, {}}, 0.03, 0.0);
    EXPECT_NEAR(laplace_exponent(std::get<HejdParams>(kou), cplx(1.0)).real(), 0.03, 1e-14);
    EXPECT_THROW(sim_model(MeixnerModel{}, 0.03, 0.0), UnsupportedError);
    EXPECT_THROW(sim_model(KobolModel{1, 2, 3, 0.5, 0, {}}, 0.03, 0.0), UnsupportedError);
}

TEST(McValue, ValidationAndStepGrid) {
    const ContractSpec c{ContractKind::EDID, 100, 0, 80, 1.0, 0.03, 0.0};
    EXPECT_THROW(mc_value(c, kou_basic(), sim(0, 10)), ValidationError);
    EXPECT_THROW(mc_value(c, kou_basic(), sim(10, 0)), ValidationError);
    ContractSpec odd = c;
    odd.T = 0.123;
    EXPECT_THROW(mc_value(odd, kou_basic(), sim(10, 10)), ValidationError);
    ContractSpec other = c;
    other.r = 0.05;
    EXPECT_THROW(mc_value(std::vector<ContractSpec>{c, other}, kou_basic(), sim(10, 10)), ValidationError);
}

TEST(McValue, KnockedAtStart) {
    const ContractSpec c{ContractKind::EDID, 100, 0, 100, 1.0, 0.03, 0.0};
    const auto e = mc_value(c, kou_basic(), sim(1000, 50));
    EXPECT_DOUBLE_EQ(e.mean, std::exp(-0.03));
    EXPECT_EQ(e.std_error, 0.0);
}

TEST(McValue, InAndOutDigitalsAreComplementaryPathByPath) {
    const ContractSpec in{ContractKind::EDID, 100, 0, 85, 1.0, 0.03, 0.0};
    ContractSpec out = in;
    out.kind = ContractKind::EDOD;
    const auto e = mc_estimate({in, out}, {Combination{{{0, 1.0}, {1, 1.0}}}}, kou_stress(), sim(5000, 100)).front();
    EXPECT_NEAR(e.mean, std::exp(-0.03), 1e-15);
    EXPECT_LT(e.std_error, 1e-12);
}

TEST(McValue, DeterministicAcrossThreadCounts) {
    std::vector<ContractSpec> cs{{ContractKind::EDID, 100, 0, 85, 1.0, 0.03, 0.0},
                                 {ContractKind::ADID, 100, 0, 85, 1.0, 0.03, 0.0},
                                 {ContractKind::DOP, 100, 105, 85, 1.0, 0.03, 0.0},
                                 {ContractKind::AUID, 100, 0, 120, 1.0, 0.03, 0.0}};
    const auto a = mc_value(cs, kou_stress(), sim(3000, 100, 4, true), 1);
    const auto b = mc_value(cs, kou_stress(), sim(3000, 100, 4, true), 3);
    const auto c = mc_value(cs, kou_stress(), sim(3000, 100, 4, true), 1);
    for (std::size_t i = 0; i < cs.size(); ++i) {
        EXPECT_EQ(a[i].mean, b[i].mean);
        EXPECT_EQ(a[i].std_error, b[i].std_error);
        EXPECT_EQ(a[i].mean, c[i].mean);
        EXPECT_EQ(a[i].n_effective, 1500u);
        EXPECT_NEAR(a[i].ci95_high - a[i].mean, 1.96 * a[i].std_error, 1e-12 * std::abs(a[i].mean));
    }
}

TEST(McValue, FinerMonitoringFindsMoreKnockIns) {
    // Discrete monitoring misses crossings between grid points, so the
    // knock-in estimate rises toward the continuous-barrier value.
    const HejdParams p = kou_basic();
    const ContractSpec c{ContractKind::EDID, 100, 0, 90, 0.25, 0.03, 0.0};
    const double exact = value_contract(c, p, InversionConfig{}, {}).price;
    double prev = 0.0;
    for (int steps : {500, 2000, 8000}) {
        const auto e = mc_value(c, p, sim(200000, steps, 21));
        EXPECT_GT(e.mean, prev) << steps;
        EXPECT_LT(e.mean, exact) << steps;
        prev = e.mean;
    }
    EXPECT_GT(prev, exact - 0.01);
}

TEST(McGreeks, BlackScholesDigitalDelta) {
    const double sigma = 0.2, r = 0.03;
    const HejdParams p = black_scholes(sigma, r, 0.0);
    const ContractSpec c{ContractKind::EDID, 100, 0, 85, 1.0, r, 0.0};
    auto closed = [&](double S0) { return std::exp(-r) * bm_hit_prob(p.mu(), sigma, std::log(85.0 / S0), 1.0); };
    const double delta = (closed(100 + 1e-4) - closed(100 - 1e-4)) / 2e-4;
    const auto e = mc_greek_fd(c, p, sim(100000, 2000, 8), GreekKind::delta, 0.02);
    EXPECT_LT(std::abs(e.mean - delta), 3 * e.std_error) << e.mean << " vs " << delta;
}

TEST(McGreeks, CommonRandomNumbersReduceVariance) {
    const ContractSpec c{ContractKind::DOP, 3500, 3500, 2100, 1.0, 0.03, 0.0};
    const auto crn = mc_greek_fd(c, stored_nig(), sim(4000, 250, 2), GreekKind::delta, 0.01, true);
    const auto ind = mc_greek_fd(c, stored_nig(), sim(4000, 250, 2), GreekKind::delta, 0.01, false);
    EXPECT_LT(crn.std_error, ind.std_error);
    EXPECT_LT(crn.std_error, 0.5 * ind.std_error);
}

TEST(McGreeks, ThetaMatchesInvertedTheta) {
    const HejdParams p = stored_nig();
    const ContractSpec c{ContractKind::DOP, 4200, 3500, 2100, 1.0, 0.03, 0.0};
    const double theta = *value_contract(c, p, InversionConfig{}, {GreekKind::theta}).theta;
    const auto e = mc_greek_fd(c, p, sim(40000, 1000, 5), GreekKind::theta, 0.05);
    EXPECT_LT(std::abs(e.mean - theta), 3 * e.std_error) << e.mean << " vs " << theta;
}

TEST(McGreeks, BumpAcrossBarrierIsRejected) {
    const ContractSpec c{ContractKind::EDID, 100, 0, 99.5, 1.0, 0.03, 0.0};
    EXPECT_THROW(mc_greek_fd(c, kou_basic(), sim(10, 10), GreekKind::delta, 0.01), ValidationError);
}

TEST(McCrossCheck, SupremumLawMatchesInvertedTransform) {
    const HejdParams p = kou_basic();
    const double T = 0.25;
    const std::vector<double> zs{0.05, 0.1, 0.2};
    const int steps = 4000;
    // The grid maximum undershoots the continuous one by about beta sigma sqrt(dt),
    // beta = -zeta(1/2)/sqrt(2 pi); the sample levels are shifted to compensate.
    const double shift = 0.5826 * std::sqrt(p.sigma2() / steps);
    std::vector<Moments> m(zs.size());
    simulate_hejd(p, T, sim(100000, steps, 17), [&](std::size_t, const std::vector<double>& x) {
        const double sup = *std::max_element(x.begin(), x.end());
        for (std::size_t k = 0; k < zs.size(); ++k) m[k].add(sup <= zs[k] - shift ? 1.0 : 0.0);
    });
    InversionConfig cfg;
    for (std::size_t k = 0; k < zs.size(); ++k) {
        const double v = abate_whitt_invert([&](cplx q) { return sup_dist_lt(solve_roots(p, q), zs[k]); }, T, cfg);
        EXPECT_LT(std::abs(m[k].mean() - v), 3 * m[k].se()) << zs[k] << ": " << m[k].mean() << " vs " << v;
    }
}
