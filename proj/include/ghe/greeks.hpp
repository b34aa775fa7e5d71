#pragma once

#include <vector>

#include "ghe/transforms.hpp"

namespace ghe {

enum class GreekKind { delta, gamma, theta };

/// Transforms of Theta = dV/dT, Delta = dV/dS0 and Gamma = d2V/dS0^2.
/// `f` is the factorization at q + r. Delta and gamma need sigma2 > 0.
cplx lt_theta(const ContractSpec& c, const RootFactorization& f, cplx q);
cplx lt_delta(const ContractSpec& c, const HejdParams& p, const RootFactorization& f, cplx q);
cplx lt_gamma(const ContractSpec& c, const HejdParams& p, const RootFactorization& f, cplx q);
cplx lt_greek(GreekKind g, const ContractSpec& c, const HejdParams& p, const RootFactorization& f, cplx q);

cplx lt_theta(const ContractSpec& c, const HejdParams& p, cplx q);
cplx lt_delta(const ContractSpec& c, const HejdParams& p, cplx q);
cplx lt_gamma(const ContractSpec& c, const HejdParams& p, cplx q);

/// Coefficient lists behind the down-and-out put delta and gamma, in units
/// where K = 1 (barrier H / K), with `Q` = q + r. B applies when S0 > K; F, G
/// and delta_plus/minus when S0 <= K.
struct DopDeltaCoeffs {
    std::vector<cplx> B;  // indexed by rho_minus
    std::vector<cplx> F;  // indexed by rho_minus
    std::vector<cplx> G;  // indexed by rho_plus
    cplx delta_plus;      // 1 - sum A_i^+ / (1 - rho_i^+)
    cplx delta_minus;     // 1 - sum A_j^- / (1 - rho_j^-)
};
DopDeltaCoeffs dop_delta_coeffs(int b, const RootFactorization& f, double K, double H, cplx Q);

}  // namespace ghe
