#include "ghe/greeks.hpp"

#include <cmath>

#include "ghe/errors.hpp"

namespace ghe {

namespace {

// Down-and-out put pieces in units with K = 1. ls = log(S0/K), le = log(H/K).
// Every S0 power is folded into the exponent so that deep Bromwich nodes,
// where |rho| is large, never form S0^rho or H^rho on their own.
struct DopPieces {
    const RootFactorization& f;
    double ls;
    double le;
    cplx Q;

    cplx dplus(int b) const {
        cplx s = 0.0;
        for (std::size_t i = 0; i < f.rho_plus.size(); ++i)
            s += double(b) * f.A_plus[i] / (double(b) - f.rho_plus[i]);
        return 1.0 - s;
    }
    cplx dminus() const {
        cplx s = 0.0;
        for (std::size_t j = 0; j < f.rho_minus.size(); ++j) s += f.A_minus[j] / (1.0 - f.rho_minus[j]);
        return 1.0 - s;
    }

    // s^{rho_j} B_j^{(b)}, case S0 > K.
    cplx B(int b, std::size_t j) const {
        const double bb = b;
        const cplx rj = f.rho_minus[j];
        const cplx e_h = std::exp(rj * ls + (bb - rj) * le);
        const cplx e_k = std::exp(rj * ls);
        cplx s = 0.0;
        for (std::size_t i = 0; i < f.rho_plus.size(); ++i) {
            const cplx ri = f.rho_plus[i];
            s += f.A_plus[i] * ((-ri) * std::exp(rj * ls + (ri - rj) * le) / ((rj - ri) * (bb - ri)) -
                                bb * e_h / ((bb - rj) * (bb - ri)) + rj * e_k / ((rj - ri) * (bb - rj)));
        }
        return (s + (e_h - e_k) / (bb - rj)) / Q;
    }

    // s^{rho_j} F_j^{(b)}, case S0 <= K.
    cplx F(int b, std::size_t j) const {
        const double bb = b;
        const cplx rj = f.rho_minus[j];
        cplx s = 0.0;
        for (std::size_t i = 0; i < f.rho_plus.size(); ++i) {
            const cplx ri = f.rho_plus[i];
            s += f.A_plus[i] * (-ri) * std::exp(rj * ls + (ri - rj) * le) / ((rj - ri) * (bb - ri));
        }
        return (s + dplus(b) * std::exp(rj * ls + (bb - rj) * le) / (bb - rj)) / Q;
    }

    // s^{rho_i} G_i^{(b)}, case S0 <= K.
    cplx G(int b, std::size_t i) const {
        const cplx ri = f.rho_plus[i];
        cplx s = 0.0;
        for (std::size_t j = 0; j < f.rho_minus.size(); ++j) s += f.A_minus[j] * f.rho_minus[j] / (f.rho_minus[j] - ri);
        return std::exp(ri * ls) / ((double(b) - ri) * Q) * s;
    }

    // order 0: transform / K, 1: delta, 2: gamma * K.
    cplx eval(int order) const {
        const double s0 = std::exp(ls);
        auto power_factor = [&](cplx rho) {
            if (order == 0) return rho;
            if (order == 1) return rho * rho / s0;
            return rho * rho * (rho - 1.0) / (s0 * s0);
        };
        cplx v = 0.0;
        if (ls > 0.0) {
            for (std::size_t j = 0; j < f.rho_minus.size(); ++j)
                v += f.A_minus[j] * power_factor(f.rho_minus[j]) * (B(0, j) - B(1, j));
            return v;
        }
        for (std::size_t j = 0; j < f.rho_minus.size(); ++j)
            v += f.A_minus[j] * power_factor(f.rho_minus[j]) * (F(0, j) - F(1, j));
        for (std::size_t i = 0; i < f.rho_plus.size(); ++i)
            v += f.A_plus[i] * power_factor(f.rho_plus[i]) * (G(0, i) - G(1, i));
        const cplx dd = dplus(1) * dminus() / Q;
        if (order == 0) v += 1.0 / Q - s0 * dd;
        if (order == 1) v -= dd;
        return v;
    }
};

// Digital greeks: V = (1/Q) sum A e^{-rho h} with h = log(H/S0), so each term
// is a power of S0.
cplx digital_greek(const std::vector<cplx>& A, const std::vector<cplx>& rho, double S0, double h, cplx Q,
                   int order) {
    cplx v = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        const cplx fac = order == 1 ? rho[i] / S0 : rho[i] * (rho[i] - 1.0) / (S0 * S0);
        v += fac * A[i] * std::exp(-rho[i] * h);
    }
    return v / Q;
}

// DIP: every term of S0^b D^(b) carries S0^{rho_j}.
cplx dip_greek(const ContractSpec& c, const RootFactorization& f, cplx Q, int order) {
    const double h = c.h(), k = c.ell();
    const auto& rp = f.rho_plus;
    const auto& rm = f.rho_minus;
    cplx dp[2];
    for (int b = 0; b < 2; ++b) {
        cplx s = 0.0;
        for (std::size_t i = 0; i < rp.size(); ++i) s += double(b) * f.A_plus[i] / (double(b) - rp[i]);
        dp[b] = 1.0 - s;
    }
    cplx v = 0.0;
    for (std::size_t j = 0; j < rm.size(); ++j) {
        cplx term[2];
        for (int b = 0; b < 2; ++b) {
            const double bb = b;
            cplx s = 0.0;
            for (std::size_t i = 0; i < rp.size(); ++i)
                s += rp[i] * rm[j] / ((rm[j] - rp[i]) * (bb - rp[i])) * f.A_plus[i] * f.A_minus[j] *
                     std::exp((bb - rp[i]) * k + (rp[i] - rm[j]) * h);
            s += dp[b] * f.A_minus[j] * rm[j] / (rm[j] - bb) * std::exp((bb - rm[j]) * h);
            term[b] = s;
        }
        const cplx tj = c.K * term[0] - c.S0 * term[1];
        const cplx fac = order == 1 ? rm[j] / c.S0 : rm[j] * (rm[j] - 1.0) / (c.S0 * c.S0);
        v += fac * tj;
    }
    return v / Q;
}

cplx spot_greek(const ContractSpec& c, const HejdParams& p, const RootFactorization& f, cplx q, int order) {
    validate(c);
    if (!(p.sigma2() > 0.0)) throw UnsupportedError("delta/gamma transforms require sigma2 > 0");
    const cplx Q = q + c.r;
    switch (c.kind) {
        case ContractKind::EDID: return digital_greek(f.A_minus, f.rho_minus, c.S0, c.h(), Q, order);
        case ContractKind::ADID: return Q / q * digital_greek(f.A_minus, f.rho_minus, c.S0, c.h(), Q, order);
        case ContractKind::EDOD: return -digital_greek(f.A_minus, f.rho_minus, c.S0, c.h(), Q, order);
        case ContractKind::EUID: return digital_greek(f.A_plus, f.rho_plus, c.S0, c.h(), Q, order);
        case ContractKind::AUID: return Q / q * digital_greek(f.A_plus, f.rho_plus, c.S0, c.h(), Q, order);
        case ContractKind::DIP: return dip_greek(c, f, Q, order);
        case ContractKind::DOP: {
            // S0 = K falls into the S0 <= K branch, which is continuous there.
            const DopPieces pieces{f, std::log(c.S0 / c.K), std::log(c.H / c.K), Q};
            const cplx v = pieces.eval(order);
            return order == 2 ? v / c.K : v;
        }
    }
    throw ValidationError("spot_greek: unknown kind");
}

}  // namespace

cplx lt_theta(const ContractSpec& c, const RootFactorization& f, cplx q) {
    // Theta(T) = dV/dT, so its transform is q V^(q) - V(0).
    return q * lt_price(c, f, q) - initial_value(c);
}

cplx lt_delta(const ContractSpec& c, const HejdParams& p, const RootFactorization& f, cplx q) {
    return spot_greek(c, p, f, q, 1);
}

cplx lt_gamma(const ContractSpec& c, const HejdParams& p, const RootFactorization& f, cplx q) {
    return spot_greek(c, p, f, q, 2);
}

cplx lt_greek(GreekKind g, const ContractSpec& c, const HejdParams& p, const RootFactorization& f, cplx q) {
    switch (g) {
        case GreekKind::delta: return lt_delta(c, p, f, q);
        case GreekKind::gamma: return lt_gamma(c, p, f, q);
        case GreekKind::theta: return lt_theta(c, f, q);
    }
    throw ValidationError("lt_greek: unknown greek");
}

cplx lt_theta(const ContractSpec& c, const HejdParams& p, cplx q) {
    validate(c);
    return lt_theta(c, solve_roots(p, q + c.r), q);
}

cplx lt_delta(const ContractSpec& c, const HejdParams& p, cplx q) {
    validate(c);
    return lt_delta(c, p, solve_roots(p, q + c.r), q);
}

cplx lt_gamma(const ContractSpec& c, const HejdParams& p, cplx q) {
    validate(c);
    return lt_gamma(c, p, solve_roots(p, q + c.r), q);
}

DopDeltaCoeffs dop_delta_coeffs(int b, const RootFactorization& f, double K, double H, cplx Q) {
    if (b != 0 && b != 1) throw ValidationError("dop_delta_coeffs: b must be 0 or 1");
    if (!(H > 0.0 && H < K)) throw ValidationError("dop_delta_coeffs: need 0 < H < K");
    const DopPieces pieces{f, 0.0, std::log(H / K), Q};
    DopDeltaCoeffs out;
    for (std::size_t j = 0; j < f.rho_minus.size(); ++j) {
        out.B.push_back(pieces.B(b, j));
        out.F.push_back(pieces.F(b, j));
    }
    for (std::size_t i = 0; i < f.rho_plus.size(); ++i) out.G.push_back(pieces.G(b, i));
    out.delta_plus = pieces.dplus(1);
    out.delta_minus = pieces.dminus();
    return out;
}

}  // namespace ghe
