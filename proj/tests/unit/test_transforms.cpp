#include <gtest/gtest.h>

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fixtures.hpp"
#include "ghe/errors.hpp"
#include "ghe/inversion.hpp"
#include "ghe/transforms.hpp"
#include "oracles.hpp"

using namespace ghe;
using namespace ghe::testing;

namespace {

ContractSpec make(ContractKind k, double S0, double K, double H, double r = 0.03) {
    return ContractSpec{k, S0, K, H, 1.0, r, 0.0};
}

// Density of X at an independent Exp(q) time, assembled from the sup and inf
// laws: X(tau) = S + I with S, I independent mixed exponentials.
double exp_time_density(const RootFactorization& f, double x) {
    cplx v = 0.0;
    for (std::size_t i = 0; i < f.rho_plus.size(); ++i)
        for (std::size_t j = 0; j < f.rho_minus.size(); ++j) {
            const cplx ri = f.rho_plus[i], rj = f.rho_minus[j];
            // int_{s > max(0, x)} ri e^{-ri s} (-rj) e^{rj (s - x)} ds
            const double lo = std::max(0.0, x);
            v += f.A_plus[i] * f.A_minus[j] * ri * (-rj) * std::exp(-rj * x) * std::exp((rj - ri) * lo) / (ri - rj);
        }
    return v.real();
}

}  // namespace

TEST(Contract, Validation) {
    EXPECT_THROW(validate(make(ContractKind::EDID, 100, 0, 100)), ValidationError);
    EXPECT_THROW(validate(make(ContractKind::EUID, 100, 0, 90)), ValidationError);
    EXPECT_THROW(validate(make(ContractKind::DOP, 100, 80, 90)), ValidationError);
    EXPECT_THROW(validate(ContractSpec{ContractKind::EDID, 100, 0, 90, 0.0, 0.03, 0}), ValidationError);
    EXPECT_NO_THROW(validate(make(ContractKind::DOP, 100, 100, 60)));
    EXPECT_NO_THROW(validate(make(ContractKind::EUID, 100, 0, 100)));
    EXPECT_EQ(contract_kind_from_string("DIP"), ContractKind::DIP);
    EXPECT_THROW(contract_kind_from_string("XYZ"), ValidationError);
}

TEST(Transforms, DigitalIdentities) {
    const HejdParams p = stored_nig();
    const ContractSpec c = make(ContractKind::EDID, 3000, 0, 2100);
    for (cplx q : {cplx(1.0), cplx(0.4, 5.0)}) {
        const auto f = solve_roots(p, q + c.r);
        EXPECT_LT(std::abs(lt_edid(c, f, q) + lt_edod(c, f, q) - 1.0 / (q + c.r)), 1e-15);
        EXPECT_LT(std::abs(lt_adid(c, f, q) - (q + c.r) / q * lt_edid(c, f, q)), 1e-15);
    }
    // Barrier far below the spot.
    EXPECT_LT(std::abs(lt_edid(make(ContractKind::EDID, 1.0, 0, 1e-12), p, 1.0)), 1e-12);
    EXPECT_LT(std::abs(lt_euid(make(ContractKind::EUID, 1.0, 0, 1e12), p, 1.0)), 1e-12);
}

TEST(Transforms, EuidAtBarrierIsImmediate) {
    const HejdParams p = stored_vg();
    const cplx q(0.7, 0.0);
    EXPECT_NEAR(std::abs(lt_euid(make(ContractKind::EUID, 100, 0, 100), p, q) - 1.0 / (q + 0.03)), 0.0, 1e-8);
}

TEST(Transforms, EuidMirrorsEdid) {
    const HejdParams p = stored_vg();
    const ContractSpec up = make(ContractKind::EUID, 100, 0, 130);
    ContractSpec down = make(ContractKind::EDID, 100, 0, 100.0 * 100.0 / 130.0);
    for (cplx q : {cplx(1.0), cplx(0.3, 4.0)})
        EXPECT_LT(std::abs(lt_euid(up, p, q) - lt_edid(down, p.mirrored(), q)), 1e-12);
    InversionConfig cfg;
    EXPECT_NEAR(value_contract(up, p, cfg, {}).price, value_contract(down, p.mirrored(), cfg, {}).price, 1e-8);
}

TEST(Transforms, ConjugateSymmetryAndRealAxis) {
    const HejdParams p = stored_nig();
    const std::vector<ContractSpec> cs{make(ContractKind::EDID, 3000, 0, 2100), make(ContractKind::DOP, 3000, 3500, 2100),
                                       make(ContractKind::DOP, 3800, 3500, 2100), make(ContractKind::DIP, 3000, 3500, 2100),
                                       make(ContractKind::AUID, 3000, 0, 3600)};
    for (const auto& c : cs) {
        const cplx q(0.9, 3.3);
        EXPECT_LT(std::abs(lt_price(c, p, std::conj(q)) - std::conj(lt_price(c, p, q))),
                  1e-12 * std::abs(lt_price(c, p, q)));
        const cplx v = lt_price(c, p, 1.1);
        EXPECT_LT(std::abs(v.imag()), 1e-12 * std::max(1.0, std::abs(v)));
    }
}

TEST(CB, Limits) {
    const HejdParams p = stored_nig();
    const auto f = solve_roots(p, cplx(1.03));
    const double h = std::log(0.7);
    EXPECT_LT(std::abs(c_b(0, h + 1e-12, h, f)), 1e-9);
    EXPECT_LT(std::abs(c_b(1, h + 1e-12, h, f)), 1e-9);
    // Both branches agree at ell = 0.
    for (int b : {0, 1}) EXPECT_LT(std::abs(c_b(b, 1e-9, h, f) - c_b(b, -1e-9, h, f)), 1e-7);
    // Complex argument too.
    const auto g = solve_roots(p, cplx(1.0, 6.0));
    for (int b : {0, 1}) EXPECT_LT(std::abs(c_b(b, 1e-9, h, g) - c_b(b, -1e-9, h, g)), 1e-7);
    // ell -> infinity recovers P[inf X(tau) > h] = 1 - (q + r) EDID^.
    cplx inf_tail = 0.0;
    for (std::size_t j = 0; j < f.rho_minus.size(); ++j) inf_tail += f.A_minus[j] * std::exp(-f.rho_minus[j] * h);
    EXPECT_LT(std::abs(c_b(0, 40.0, h, f) - (1.0 - inf_tail)), 1e-12);
    EXPECT_THROW(c_b(0, h, h, f), DomainError);
    EXPECT_THROW(c_b(0, 0.1, 0.2, f), DomainError);
}

TEST(DB, Limits) {
    const HejdParams p = stored_vg();
    const auto f = solve_roots(p, cplx(1.03));
    const double h = std::log(0.7);
    cplx inf_tail = 0.0;
    for (std::size_t j = 0; j < f.rho_minus.size(); ++j) inf_tail += f.A_minus[j] * std::exp(-f.rho_minus[j] * h);
    EXPECT_LT(std::abs(d_b(0, h, 40.0, f) - inf_tail), 1e-12);
    EXPECT_LT(std::abs(lt_dip(make(ContractKind::DIP, 1.0, 1.2, 1e-10), p, 1.0)), 1e-9);
    EXPECT_THROW(d_b(0, h, h - 0.1, f), DomainError);
}

TEST(CB, MatchesExpTimeDensity) {
    // C^(b) and D^(b) integrate e^{bx} against the killed / knocked density
    // of X(tau); their sum over the two events is the unrestricted integral.
    const HejdParams p = stored_nig();
    const double qr = 1.03;
    const auto f = solve_roots(p, cplx(qr));
    const double h = std::log(0.6);
    for (double ell : {std::log(0.8), 0.0, std::log(1.25)})
        for (int b : {0, 1}) {
            auto integrand = [&](double x) { return std::exp(b * x) * exp_time_density(f, x); };
            const double full = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, -12.0, 0.0, 15, 1e-13) +
                                (ell > 0 ? boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, ell, 15, 1e-13)
                                         : -boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, ell, 0.0, 15, 1e-13));
            const cplx sum = c_b(b, ell, h, f) + d_b(b, h, ell, f);
            EXPECT_NEAR(sum.real(), full, 1e-9) << "ell=" << ell << " b=" << b;
        }
}

TEST(Transforms, DopBoundedByStrike) {
    const HejdParams p = stored_nig();
    // K just above H and S0 large: small but positive.
    const double q = 1.0;
    const double v = lt_dop(make(ContractKind::DOP, 10000, 2101, 2100), p, q).real();
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 2101 / q);
}

TEST(Transforms, BlackScholesLimitDigitals) {
    const double sigma = 0.25, r = 0.03, d = 0.01;
    const HejdParams p = black_scholes(sigma, r, d);
    InversionConfig cfg;
    for (double S0 : {80.0, 100.0, 140.0}) {
        const double h = std::log(70.0 / S0);
        ContractSpec c{ContractKind::EDID, S0, 0, 70, 1.0, r, d};
        EXPECT_NEAR(value_contract(c, p, cfg, {}).price, std::exp(-r) * bm_hit_prob(p.mu(), sigma, h, 1.0), 1e-6);
        c.kind = ContractKind::ADID;
        EXPECT_NEAR(value_contract(c, p, cfg, {}).price, bm_discounted_hit(p.mu(), sigma, h, 1.0, r), 1e-6);
    }
}

TEST(Transforms, BlackScholesLimitPuts) {
    const double sigma = 0.2, r = 0.03;
    const HejdParams p = black_scholes(sigma, r, 0.0);
    InversionConfig cfg;
    for (double S0 : {2300.0, 3000.0, 3500.0, 4200.0}) {
        ContractSpec c{ContractKind::DOP, S0, 3500, 2100, 1.0, r, 0.0};
        const double dop = bm_down_out_put(S0, 3500, 2100, 1.0, r, p.mu(), sigma);
        EXPECT_NEAR(value_contract(c, p, cfg, {}).price, dop, 1e-6 * dop);
        c.kind = ContractKind::DIP;
        const double dip = bm_put(S0, 3500, 1.0, r, p.mu(), sigma) - dop;
        EXPECT_NEAR(value_contract(c, p, cfg, {}).price, dip, 1e-6 * dip);
    }
}
