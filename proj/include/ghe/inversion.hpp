#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ghe/greeks.hpp"

namespace ghe {

struct InversionConfig {
    int M = 15;      // Euler binomial order
    int N = 11;      // base partial-sum length
    double A = 18.4; // discretisation / damping parameter
    // Double N (up to max_escalation times the base) while the last Euler
    // increment exceeds escalation_tol * max(1, |value|).
    bool auto_escalate = true;
    double escalation_tol = 1e-8;
    int max_escalation = 4;
};

void validate(const InversionConfig& cfg);

/// Bromwich nodes q_k = (A + 2 k pi i) / (2T), k = 0..count-1.
std::vector<cplx> inversion_nodes(double T, const InversionConfig& cfg, int count);

/// Euler-averaged partial sums from Re f(q_k), k = 0..N+M.
double euler_sum(const std::vector<double>& re_values, double T, const InversionConfig& cfg, int N);

struct InversionResult {
    double value = 0.0;
    int N_used = 0;
    double last_increment = 0.0;
};

InversionResult abate_whitt(const std::function<cplx(cplx)>& f, double T, const InversionConfig& cfg);
double abate_whitt_invert(const std::function<cplx(cplx)>& f, double T, const InversionConfig& cfg);

struct ValuationRow {
    double spot = 0.0;
    double price = 0.0;
    std::optional<double> delta;
    std::optional<double> gamma;
    std::optional<double> theta;
    bool near_barrier = false;
};

/// True when the spot is within 5% of the barrier, where greeks lose accuracy.
bool near_barrier(const ContractSpec& c);

/// Inverts the price and the requested greeks at maturity c.T, sharing one
/// factorization per node. A cache built for `params` may be passed in.
ValuationRow value_contract(const ContractSpec& c, const HejdParams& params, const InversionConfig& cfg,
                            const std::set<GreekKind>& greeks, RootCache* cache = nullptr);

struct GridRow {
    ValuationRow row;
    std::string error;  // empty on success
};

/// value_contract over spots (currency). Rows fail independently.
std::vector<GridRow> value_grid(const ContractSpec& templ, const std::vector<double>& spots,
                                const HejdParams& params, const InversionConfig& cfg,
                                const std::set<GreekKind>& greeks, int threads = 1, RootCache* cache = nullptr);

}  // namespace ghe
