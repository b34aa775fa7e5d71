#pragma once

#include <string>

#include "ghe/models.hpp"
#include "ghe/wiener_hopf.hpp"

namespace ghe {

enum class ContractKind { EDID, ADID, EDOD, DOP, DIP, EUID, AUID };

std::string to_string(ContractKind k);
ContractKind contract_kind_from_string(const std::string& s);

/// Barrier contract. K is ignored by the digitals.
struct ContractSpec {
    ContractKind kind = ContractKind::EDID;
    double S0 = 1.0;
    double K = 0.0;
    double H = 1.0;
    double T = 1.0;
    double r = 0.0;
    double d = 0.0;

    bool is_up() const { return kind == ContractKind::EUID || kind == ContractKind::AUID; }
    bool has_strike() const { return kind == ContractKind::DOP || kind == ContractKind::DIP; }
    double h() const;    // log(H / S0)
    double ell() const;  // log(K / S0)
};

/// Throws ValidationError when the contract violates its barrier/strike ordering.
void validate(const ContractSpec& c);

/// Value at T = 0 (the payoff when the barrier has not been touched).
double initial_value(const ContractSpec& c);

/// E[e^{b X(tau)} 1{inf X(tau) > h, X(tau) < ell}] for tau ~ Exp(q), from the
/// factorization at q. Branch on the sign of ell; ell = 0 uses the ell > 0 form.
cplx c_b(int b, double ell, double h, const RootFactorization& f);

/// E[e^{b X(tau)} 1{inf X(tau) < h, X(tau) < k}].
cplx d_b(int b, double h, double k, const RootFactorization& f);

/// Price transforms in maturity. `f` is the factorization at q + r.
cplx lt_edid(const ContractSpec& c, const RootFactorization& f, cplx q);
cplx lt_adid(const ContractSpec& c, const RootFactorization& f, cplx q);
cplx lt_edod(const ContractSpec& c, const RootFactorization& f, cplx q);
cplx lt_dop(const ContractSpec& c, const RootFactorization& f, cplx q);
cplx lt_dip(const ContractSpec& c, const RootFactorization& f, cplx q);
cplx lt_euid(const ContractSpec& c, const RootFactorization& f, cplx q);
cplx lt_auid(const ContractSpec& c, const RootFactorization& f, cplx q);
/// Dispatch on c.kind.
cplx lt_price(const ContractSpec& c, const RootFactorization& f, cplx q);

/// Convenience overloads that solve the roots at q + r.
cplx lt_edid(const ContractSpec& c, const HejdParams& p, cplx q);
cplx lt_adid(const ContractSpec& c, const HejdParams& p, cplx q);
cplx lt_edod(const ContractSpec& c, const HejdParams& p, cplx q);
cplx lt_dop(const ContractSpec& c, const HejdParams& p, cplx q);
cplx lt_dip(const ContractSpec& c, const HejdParams& p, cplx q);
cplx lt_euid(const ContractSpec& c, const HejdParams& p, cplx q);
cplx lt_auid(const ContractSpec& c, const HejdParams& p, cplx q);
cplx lt_price(const ContractSpec& c, const HejdParams& p, cplx q);

}  // namespace ghe
