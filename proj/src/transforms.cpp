#include "ghe/transforms.hpp"

#include <cmath>

#include "ghe/errors.hpp"

namespace ghe {

namespace {

cplx sum_weighted_exp(const std::vector<cplx>& A, const std::vector<cplx>& rho, double x) {
    // sum A_i e^{-rho_i x}
    cplx s = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) s += A[i] * std::exp(-rho[i] * x);
    return s;
}

cplx sum_of(const std::vector<cplx>& v) {
    cplx s = 0.0;
    for (const cplx& x : v) s += x;
    return s;
}

// 1 - sum_i b A_i / (b - rho_i): the weight of the atom of e^{b sup} at zero.
cplx delta_b(int b, const RootFactorization& f) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < f.rho_plus.size(); ++i) s += double(b) * f.A_plus[i] / (double(b) - f.rho_plus[i]);
    return 1.0 - s;
}

void require_kind(const ContractSpec& c, std::initializer_list<ContractKind> kinds, const char* fn) {
    for (ContractKind k : kinds)
        if (c.kind == k) return;
    throw ValidationError(std::string(fn) + ": wrong contract kind " + to_string(c.kind));
}

}  // namespace

std::string to_string(ContractKind k) {
    switch (k) {
        case ContractKind::EDID: return "EDID";
        case ContractKind::ADID: return "ADID";
        case ContractKind::EDOD: return "EDOD";
        case ContractKind::DOP: return "DOP";
        case ContractKind::DIP: return "DIP";
        case ContractKind::EUID: return "EUID";
        case ContractKind::AUID: return "AUID";
    }
    return "?";
}

ContractKind contract_kind_from_string(const std::string& s) {
    for (ContractKind k : {ContractKind::EDID, ContractKind::ADID, ContractKind::EDOD, ContractKind::DOP,
                           ContractKind::DIP, ContractKind::EUID, ContractKind::AUID})
        if (to_string(k) == s) return k;
    throw ValidationError("unknown contract kind '" + s + "'");
}

double ContractSpec::h() const { return std::log(H / S0); }
double ContractSpec::ell() const { return std::log(K / S0); }

void validate(const ContractSpec& c) {
    auto finite_pos = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!finite_pos(c.S0)) throw ValidationError("contract: S0 must be > 0");
    if (!finite_pos(c.H)) throw ValidationError("contract: H must be > 0");
    if (!finite_pos(c.T)) throw ValidationError("contract: T must be > 0");
    if (!std::isfinite(c.r) || !std::isfinite(c.d)) throw ValidationError("contract: r and d must be finite");
    if (c.is_up()) {
        if (c.H < c.S0) throw ValidationError("contract: up barrier requires H >= S0");
    } else if (!(c.H < c.S0)) {
        throw ValidationError("contract: down barrier requires H < S0");
    }
    if (c.has_strike()) {
        if (!finite_pos(c.K)) throw ValidationError("contract: K must be > 0");
        if (!(c.H < c.K)) throw ValidationError("contract: put requires H < K");
    }
}

double initial_value(const ContractSpec& c) {
    switch (c.kind) {
        case ContractKind::EDOD: return 1.0;
        case ContractKind::DOP: return std::max(c.K - c.S0, 0.0);
        default: return 0.0;
    }
}

cplx c_b(int b, double ell, double h, const RootFactorization& f) {
    if (!(h < 0.0)) throw DomainError("c_b: h must be < 0");
    if (!(ell > h)) throw DomainError("c_b: ell must exceed h");
    const auto& rp = f.rho_plus;
    const auto& rm = f.rho_minus;
    const auto& Ap = f.A_plus;
    const auto& Am = f.A_minus;
    const double bb = b;
    const cplx db = delta_b(b, f);
    cplx s = 0.0;
    if (ell < 0.0) {
        for (std::size_t j = 0; j < rm.size(); ++j)
            for (std::size_t i = 0; i < rp.size(); ++i) {
                const cplx c = rp[i] * (-rm[j]) * Ap[i] * Am[j] / ((rm[j] - rp[i]) * (bb - rp[i]));
                s += c * (std::exp((bb - rp[i]) * ell + (rp[i] - rm[j]) * h) - std::exp((bb - rm[j]) * ell));
            }
        cplx t = 0.0;
        for (std::size_t j = 0; j < rm.size(); ++j)
            t += Am[j] * (-rm[j]) / (rm[j] - bb) * (std::exp((bb - rm[j]) * h) - std::exp((bb - rm[j]) * ell));
        s += db * t;
    } else {
        for (std::size_t j = 0; j < rm.size(); ++j)
            for (std::size_t i = 0; i < rp.size(); ++i) {
                const cplx c = rp[i] * (-rm[j]) * Ap[i] * Am[j] / ((rm[j] - rp[i]) * (bb - rp[i]));
                s += c * (std::exp((bb - rp[i]) * ell + (rp[i] - rm[j]) * h) - std::exp((bb - rp[i]) * ell));
            }
        cplx t = 1.0;
        for (std::size_t j = 0; j < rm.size(); ++j)
            t += Am[j] * ((-rm[j]) / (rm[j] - bb) * std::exp((bb - rm[j]) * h) + bb / (rm[j] - bb));
        s += db * t;
        cplx u = 0.0;
        for (std::size_t i = 0; i < rp.size(); ++i) u += rp[i] / (bb - rp[i]) * Ap[i] * std::exp((bb - rp[i]) * ell);
        s += (1.0 - sum_of(Am)) * u;
    }
    return s;
}

cplx d_b(int b, double h, double k, const RootFactorization& f) {
    if (!(h < 0.0)) throw DomainError("d_b: h must be < 0");
    if (!(k > h)) throw DomainError("d_b: k must exceed h");
    const auto& rp = f.rho_plus;
    const auto& rm = f.rho_minus;
    const double bb = b;
    cplx s = 0.0;
    for (std::size_t j = 0; j < rm.size(); ++j)
        for (std::size_t i = 0; i < rp.size(); ++i)
            s += rp[i] * rm[j] / ((rm[j] - rp[i]) * (bb - rp[i])) * f.A_plus[i] * f.A_minus[j] *
                 std::exp((bb - rp[i]) * k + (rp[i] - rm[j]) * h);
    cplx t = 0.0;
    for (std::size_t j = 0; j < rm.size(); ++j) t += f.A_minus[j] * rm[j] / (rm[j] - bb) * std::exp((bb - rm[j]) * h);
    return s + delta_b(b, f) * t;
}

cplx lt_edid(const ContractSpec& c, const RootFactorization& f, cplx q) {
    require_kind(c, {ContractKind::EDID, ContractKind::ADID, ContractKind::EDOD}, "lt_edid");
    validate(c);
    return sum_weighted_exp(f.A_minus, f.rho_minus, c.h()) / (q + c.r);
}

cplx lt_adid(const ContractSpec& c, const RootFactorization& f, cplx q) {
    return (q + c.r) / q * lt_edid(c, f, q);
}

cplx lt_edod(const ContractSpec& c, const RootFactorization& f, cplx q) {
    return 1.0 / (q + c.r) - lt_edid(c, f, q);
}

cplx lt_dop(const ContractSpec& c, const RootFactorization& f, cplx q) {
    require_kind(c, {ContractKind::DOP}, "lt_dop");
    validate(c);
    const double h = c.h(), ell = c.ell();
    return (c.K * c_b(0, ell, h, f) - c.S0 * c_b(1, ell, h, f)) / (q + c.r);
}

cplx lt_dip(const ContractSpec& c, const RootFactorization& f, cplx q) {
    require_kind(c, {ContractKind::DIP}, "lt_dip");
    validate(c);
    const double h = c.h(), k = c.ell();
    return (c.K * d_b(0, h, k, f) - c.S0 * d_b(1, h, k, f)) / (q + c.r);
}

cplx lt_euid(const ContractSpec& c, const RootFactorization& f, cplx q) {
    require_kind(c, {ContractKind::EUID, ContractKind::AUID}, "lt_euid");
    validate(c);
    return sum_weighted_exp(f.A_plus, f.rho_plus, c.h()) / (q + c.r);
}

cplx lt_auid(const ContractSpec& c, const RootFactorization& f, cplx q) {
    return (q + c.r) / q * lt_euid(c, f, q);
}

cplx lt_price(const ContractSpec& c, const RootFactorization& f, cplx q) {
    switch (c.kind) {
        case ContractKind::EDID: return lt_edid(c, f, q);
        case ContractKind::ADID: return lt_adid(c, f, q);
        case ContractKind::EDOD: return lt_edod(c, f, q);
        case ContractKind::DOP: return lt_dop(c, f, q);
        case ContractKind::DIP: return lt_dip(c, f, q);
        case ContractKind::EUID: return lt_euid(c, f, q);
        case ContractKind::AUID: return lt_auid(c, f, q);
    }
    throw ValidationError("lt_price: unknown kind");
}

#define GHE_PARAMS_OVERLOAD(name)                                     \
    cplx name(const ContractSpec& c, const HejdParams& p, cplx q) {   \
        validate(c);                                                  \
        return name(c, solve_roots(p, q + c.r), q);                   \
    }
GHE_PARAMS_OVERLOAD(lt_edid)
GHE_PARAMS_OVERLOAD(lt_adid)
GHE_PARAMS_OVERLOAD(lt_edod)
GHE_PARAMS_OVERLOAD(lt_dop)
GHE_PARAMS_OVERLOAD(lt_dip)
GHE_PARAMS_OVERLOAD(lt_euid)
GHE_PARAMS_OVERLOAD(lt_auid)
GHE_PARAMS_OVERLOAD(lt_price)
#undef GHE_PARAMS_OVERLOAD

}  // namespace ghe
