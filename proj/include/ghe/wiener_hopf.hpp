#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "ghe/models.hpp"

namespace ghe {

/// Roots of psi(s) = q split by half-plane, with the partial-fraction weights
/// of the sup/inf laws at an exponential time of rate q.
struct RootFactorization {
    cplx q;
    std::vector<cplx> rho_plus;
    std::vector<cplx> rho_minus;
    std::vector<cplx> A_plus;
    std::vector<cplx> A_minus;
    double residual_max = 0.0;
    // Set when clustered roots forced a solve at q * (1 + 1e-7 i) instead of q.
    bool perturbed = false;
};

/// Coefficients (lowest degree first) of (psi(s) - q) * prod(alpha_i^+ - s) * prod(alpha_j^- + s).
std::vector<cplx> cramer_polynomial(const HejdParams& params, cplx q);

/// All roots of psi(s) = q with Re q > 0. Real q uses bracketing between poles;
/// complex q uses Laguerre with deflation followed by Newton polishing.
RootFactorization solve_roots(const HejdParams& params, cplx q);

/// A^+ and A^- from the root sets, product formulas evaluated in log space.
void compute_coefficients(const HejdParams& params, RootFactorization& f);

/// Wiener-Hopf factors at real u, assembled from the roots.
cplx wh_factor_plus(const HejdParams& params, const RootFactorization& f, double u);
cplx wh_factor_minus(const HejdParams& params, const RootFactorization& f, double u);

/// int_0^inf e^{-qt} P(sup_{s<=t} X(s) <= z) dt and the analogue for P(inf > -z).
double sup_dist_lt(const HejdParams& params, double q, double z);
double inf_dist_lt(const HejdParams& params, double q, double z);
/// Same transforms at the factorization's (possibly complex) q.
cplx sup_dist_lt(const RootFactorization& f, double z);
cplx inf_dist_lt(const RootFactorization& f, double z);

/// Memoises factorizations for one parameter set. Safe for concurrent use; a
/// given q is solved at most once.
class RootCache {
public:
    explicit RootCache(HejdParams params) : params_(std::move(params)) {}

    std::shared_ptr<const RootFactorization> get(cplx q);
    std::size_t solve_count() const;
    const HejdParams& params() const { return params_; }

private:
    struct Slot {
        std::once_flag once;
        std::shared_ptr<const RootFactorization> value;
    };
    HejdParams params_;
    mutable std::mutex mutex_;
    std::map<std::pair<double, double>, std::shared_ptr<Slot>> slots_;
    std::size_t solves_ = 0;
};

}  // namespace ghe
