#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "commands.hpp"

using namespace ghe;
using namespace ghe::cli;

namespace {

const char* nig_hejd = R"(
schema_version: 1
model:
  hejd:
    mu: 0.15
    sigma2: 0.042
    up:   {intensity: 5.1, weights: [.005, .005, .01, .06, .12, .19, .61], rates: [5, 10, 15, 25, 30, 60, 80]}
    down: {intensity: 6.4, weights: [.05, .03, .11, .08, .10, .40, .23], rates: [5, 10, 15, 25, 30, 60, 80]}
market: {r: 0.03, d: 0.0}
contract: {kind: DOP, units: percent, reference: 3500, strike: 100, barrier: 60, maturity: 1.0, spots: [64, 100]}
)";

const char* vg_target = R"(
schema_version: 1
model:
  target: {type: vg, C: 0.925, G: 4.667, M: 11.876}
fit:
  alpha_plus_grid: [5, 10, 15, 25, 30, 60, 80]
  alpha_minus_grid: [2, 5, 10, 30, 50, 80, 100]
market: {r: 0.03}
contract: {kind: ADID, units: currency, reference: 3500, barrier: 2100, maturity: 1.0, spots: [64, 90, 126]}
)";

RunConfig parse(const std::string& text) { return parse_config(YAML::Load(text)); }

std::string config_error(const std::string& text) {
    try {
        parse(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);)
        if (!l.empty() && l[0] != '#') out.push_back(l);
    return out;
}

std::string with(std::string text, const std::string& from, const std::string& to) {
    const auto at = text.find(from);
    EXPECT_NE(at, std::string::npos) << from;
    return text.replace(at, from.size(), to);
}

}  // namespace

TEST(Config, ParsesExplicitParametersAndPercentUnits) {
    const RunConfig cfg = parse(nig_hejd);
    ASSERT_TRUE(cfg.hejd);
    EXPECT_EQ(cfg.hejd->up().size(), 7u);
    const ContractSpec c = contract_at(*cfg.contract, 80, cfg.r, cfg.d);
    EXPECT_DOUBLE_EQ(c.S0, 2800);
    EXPECT_DOUBLE_EQ(c.K, 3500);
    EXPECT_DOUBLE_EQ(c.H, 2100);
}

TEST(Config, MartingaleDriftKeyword) {
    const RunConfig cfg = parse(with(nig_hejd, "mu: 0.15", "mu: martingale"));
    EXPECT_NEAR(laplace_exponent(*cfg.hejd, 1.0).real(), 0.03, 1e-13);
}

TEST(Config, SpotRange) {
    const RunConfig cfg = parse(with(nig_hejd, "spots: [64, 100]", "spots: {from: 64, to: 122, step: 2}"));
    ASSERT_EQ(cfg.contract->spots_pct.size(), 30u);
    EXPECT_DOUBLE_EQ(cfg.contract->spots_pct.back(), 122);
}

TEST(Config, ErrorsNameTheOffendingKey) {
    EXPECT_NE(config_error(with(nig_hejd, "sigma2: 0.042", "sigma_2: 0.042")).find("model.hejd.sigma_2"),
              std::string::npos);
    EXPECT_NE(config_error(with(nig_hejd, "sigma2: 0.042", "sigma2: abc")).find("model.hejd.sigma2"),
              std::string::npos);
    EXPECT_NE(config_error(with(nig_hejd, "market: {r: 0.03, d: 0.0}", "")).find("'market'"), std::string::npos);
    EXPECT_NE(config_error(with(nig_hejd, "schema_version: 1", "schema_version: 2")).find("schema_version"),
              std::string::npos);
    EXPECT_NE(config_error(with(nig_hejd, "kind: DOP", "kind: DOX")).find("contract.kind"), std::string::npos);
    EXPECT_NE(config_error(with(nig_hejd, "units: percent", "units: both")).find("contract.units"), std::string::npos);
    EXPECT_NE(config_error(std::string(nig_hejd) + "mc: {n_paths: 10, steps: 5}\n").find("mc.steps"),
              std::string::npos);
}

TEST(Config, ExactlyOneModel) {
    const std::string both = with(nig_hejd, "model:\n", "model:\n  target: {type: vg, C: 1, G: 5, M: 10}\n");
    EXPECT_NE(config_error(both).find("exactly one"), std::string::npos);
}

TEST(Config, TargetNeedsFitToPrice) {
    RunConfig cfg = parse(vg_target);
    cfg.fit.reset();
    std::ostringstream out;
    EXPECT_THROW(cmd_price(cfg, false, out), ConfigError);
}

TEST(CmdPrice, SingleSpotGivesOneRow) {
    const RunConfig cfg = parse(with(nig_hejd, "spots: [64, 100]", "spots: 100"));
    std::ostringstream out;
    cmd_price(cfg, false, out);
    const auto rows = lines(out.str());
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0], "spot_pct,price,delta,gamma,theta,near_barrier_flag,error");
    EXPECT_EQ(rows[1].rfind("100,184.7", 0), 0u) << rows[1];
}

TEST(CmdPrice, SpotBelowBarrierIsAnErrorRow) {
    const RunConfig cfg = parse(with(nig_hejd, "spots: [64, 100]", "spots: [50, 62, 100]"));
    std::ostringstream out;
    cmd_price(cfg, true, out);
    const auto rows = lines(out.str());
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[1].rfind("50,,,,,,\"", 0), 0u) << rows[1];
    EXPECT_NE(rows[2].find(",1,"), std::string::npos) << rows[2];  // 62% is within 5% of the barrier
    EXPECT_EQ(rows[3].back(), ',');
}

TEST(CmdFit, PassthroughIsAnIdentity) {
    const RunConfig cfg = parse(nig_hejd);
    std::ostringstream params, report;
    cmd_fit(cfg, params, report);
    const auto rep = lines(report.str());
    ASSERT_EQ(rep.size(), 2u);
    std::vector<std::string> f;
    std::stringstream ss(rep[1]);
    for (std::string x; std::getline(ss, x, ',');) f.push_back(x);
    ASSERT_EQ(f.size(), 9u);
    EXPECT_EQ(f[3], "7");
    EXPECT_EQ(f[4], "7");
    EXPECT_LT(std::stod(f[7]), 1e-10);
    const RunConfig back = parse_config(YAML::Load(params.str()));
    EXPECT_NEAR(back.hejd->sigma2(), 0.042, 1e-12);
    EXPECT_EQ(back.hejd->mu(), 0.15);
}

TEST(CmdFit, VgOnTheSevenBySevenGrids) {
    const RunConfig cfg = parse(vg_target);
    std::ostringstream params, report;
    cmd_fit(cfg, params, report);
    const auto rep = lines(report.str());
    EXPECT_EQ(rep[1].rfind("vg,7,7,", 0), 0u) << rep[1];
    const RunConfig back = parse_config(YAML::Load(params.str()));
    ASSERT_TRUE(back.hejd);
    EXPECT_FALSE(back.fit);
    const auto& grid = cfg.fit->alpha_plus_grid;
    for (double a : back.hejd->up().rates) EXPECT_NE(std::find(grid.begin(), grid.end(), a), grid.end()) << a;
    EXPECT_NEAR(laplace_exponent(*back.hejd, 1.0).real(), 0.03, 1e-12);
}

TEST(CmdFit, RoundTripPricesBitIdentically) {
    const RunConfig cfg = parse(vg_target);
    std::ostringstream params, report, direct, again;
    cmd_fit(cfg, params, report);
    cmd_price(cfg, false, direct);
    cmd_price(parse_config(YAML::Load(params.str())), false, again);
    EXPECT_EQ(direct.str(), again.str());
}

TEST(CmdMcCheck, ZeroPathsRejected) {
    const RunConfig cfg = parse(std::string(nig_hejd) + "mc: {n_paths: 0}\n");
    std::ostringstream out;
    EXPECT_THROW(cmd_mc_check(cfg, out), ConfigError);
}

TEST(CmdMcCheck, SeedChangesIntervalsNotVerdicts) {
    const std::string base = with(nig_hejd, "spots: [64, 100]", "spots: [76, 100, 122]") +
                             "mc: {n_paths: 20000, n_steps_per_year: 1000, seed: 1, continuity_correction: true}\n";
    std::ostringstream a, b;
    EXPECT_EQ(cmd_mc_check(parse(base), a), 0);
    EXPECT_EQ(cmd_mc_check(parse(with(base, "seed: 1", "seed: 2")), b), 0);
    const auto ra = lines(a.str()), rb = lines(b.str());
    ASSERT_EQ(ra.size(), 4u);
    for (std::size_t i = 1; i < ra.size(); ++i) EXPECT_NE(ra[i], rb[i]);
    std::ostringstream c;
    cmd_mc_check(parse(base), c);
    EXPECT_EQ(a.str(), c.str());
}

TEST(CmdReproduceTables, GridsAndUnits) {
    std::ostringstream csv, human;
    cmd_reproduce_tables(InversionConfig{}, 1, false, csv, human);
    const auto rows = lines(csv.str());
    ASSERT_EQ(rows.size(), 1u + 30u + 32u);
    EXPECT_EQ(rows[1].rfind("nig_dop,64,151.157", 0), 0u) << rows[1];
    EXPECT_EQ(rows[31].rfind("vg_adid,64,", 0), 0u) << rows[31];
    EXPECT_NE(human.str().find("delta x10,"), std::string::npos);
}

#ifdef GHE_BINARY
namespace {

int run(const std::string& args) {
    const int status = std::system((std::string(GHE_BINARY) + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
}

std::string write_temp(const std::string& name, const std::string& text) {
    const std::string path = ::testing::TempDir() + name;
    std::ofstream(path) << text;
    return path;
}

}  // namespace

TEST(Binary, ExitCodes) {
    EXPECT_EQ(run("price --config " + write_temp("ok.yaml", nig_hejd)), 0);
    EXPECT_EQ(run("price --config " + write_temp("below.yaml", with(nig_hejd, "[64, 100]", "[50]"))), 0);
    EXPECT_EQ(run("price --config " + write_temp("bad.yaml", with(nig_hejd, "sigma2:", "sigma3:"))), 1);
    EXPECT_EQ(run("price --config /nonexistent.yaml"), 1);
    EXPECT_EQ(run("frobnicate"), 1);
}
#endif
