#include "ghe/inversion.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "ghe/errors.hpp"

namespace ghe {

namespace {

std::vector<double> binomial_weights(int M) {
    // C(M, k) 2^{-M}, built by recurrence to stay exact in floating point.
    std::vector<double> w(M + 1);
    w[0] = std::ldexp(1.0, -M);
    for (int k = 1; k <= M; ++k) w[k] = w[k - 1] * double(M - k + 1) / double(k);
    return w;
}

}  // namespace

void validate(const InversionConfig& cfg) {
    if (cfg.M < 1) throw ValidationError("inversion: M must be >= 1");
    if (cfg.N < 1) throw ValidationError("inversion: N must be >= 1");
    if (!(cfg.A > 0.0) || !std::isfinite(cfg.A)) throw ValidationError("inversion: A must be > 0");
    if (cfg.max_escalation < 1) throw ValidationError("inversion: max_escalation must be >= 1");
}

std::vector<cplx> inversion_nodes(double T, const InversionConfig& cfg, int count) {
    if (!(T > 0.0)) throw DomainError("inversion: T must be > 0");
    std::vector<cplx> q(count);
    for (int k = 0; k < count; ++k) q[k] = cplx(cfg.A, 2.0 * k * std::numbers::pi) / (2.0 * T);
    return q;
}

double euler_sum(const std::vector<double>& re, double T, const InversionConfig& cfg, int N) {
    if (static_cast<int>(re.size()) < N + cfg.M + 1) throw ValidationError("euler_sum: too few transform values");
    const double scale = std::exp(cfg.A / 2.0) / T;
    // Partial sums s_n, n = 0..N+M.
    std::vector<double> s(N + cfg.M + 1);
    double acc = 0.5 * re[0];
    s[0] = scale * acc;
    for (int k = 1; k <= N + cfg.M; ++k) {
        acc += (k % 2 ? -1.0 : 1.0) * re[k];
        s[k] = scale * acc;
    }
    const auto w = binomial_weights(cfg.M);
    double v = 0.0;
    for (int k = 0; k <= cfg.M; ++k) v += w[k] * s[N + k];
    return v;
}

InversionResult abate_whitt(const std::function<cplx(cplx)>& f, double T, const InversionConfig& cfg) {
    validate(cfg);
    int N = cfg.N;
    const int N_max = cfg.auto_escalate ? cfg.N * cfg.max_escalation : cfg.N;
    std::vector<double> re;
    auto extend = [&](int count) {
        const auto nodes = inversion_nodes(T, cfg, count);
        for (int k = static_cast<int>(re.size()); k < count; ++k) {
            const cplx v = f(nodes[k]);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                std::ostringstream os;
                os << "inversion: non-finite transform value " << v << " at node k=" << k << ", q=" << nodes[k];
                throw NumericalError(os.str());
            }
            re.push_back(v.real());
        }
    };
    InversionResult out;
    for (;;) {
        extend(N + cfg.M + 1);
        out.value = euler_sum(re, T, cfg, N);
        out.last_increment = std::abs(out.value - euler_sum(re, T, cfg, N - 1 >= 0 ? N - 1 : 0));
        out.N_used = N;
        if (!cfg.auto_escalate || N * 2 > N_max) break;
        if (out.last_increment <= cfg.escalation_tol * std::max(1.0, std::abs(out.value))) break;
        N *= 2;
    }
    return out;
}

double abate_whitt_invert(const std::function<cplx(cplx)>& f, double T, const InversionConfig& cfg) {
    return abate_whitt(f, T, cfg).value;
}

bool near_barrier(const ContractSpec& c) {
    return c.is_up() ? c.S0 * 1.05 > c.H : c.S0 < 1.05 * c.H;
}

ValuationRow value_contract(const ContractSpec& c, const HejdParams& params, const InversionConfig& cfg,
                            const std::set<GreekKind>& greeks, RootCache* cache) {
    validate(c);
    validate(cfg);
    std::optional<RootCache> local;
    if (!cache) cache = &local.emplace(params);
    auto roots = [&](cplx q) { return cache->get(q + c.r); };

    ValuationRow row;
    row.spot = c.S0;
    row.near_barrier = near_barrier(c);
    row.price = abate_whitt_invert([&](cplx q) { return lt_price(c, *roots(q), q); }, c.T, cfg);
    for (GreekKind g : greeks) {
        const double v =
            abate_whitt_invert([&](cplx q) { return lt_greek(g, c, params, *roots(q), q); }, c.T, cfg);
        switch (g) {
            case GreekKind::delta: row.delta = v; break;
            case GreekKind::gamma: row.gamma = v; break;
            case GreekKind::theta: row.theta = v; break;
        }
    }
    return row;
}

std::vector<GridRow> value_grid(const ContractSpec& templ, const std::vector<double>& spots,
                                const HejdParams& params, const InversionConfig& cfg,
                                const std::set<GreekKind>& greeks, int threads, RootCache* cache) {
    validate(cfg);
    std::vector<GridRow> rows(spots.size());
    if (spots.empty()) return rows;
    std::optional<RootCache> local;
    if (!cache) cache = &local.emplace(params);

    // Warm the base nodes once so the parallel pass only reads.
    for (const cplx& q : inversion_nodes(templ.T, cfg, cfg.N + cfg.M + 1)) cache->get(q + templ.r);

    auto work = [&](std::size_t i) {
        ContractSpec c = templ;
        c.S0 = spots[i];
        rows[i].row.spot = spots[i];
        try {
            rows[i].row = value_contract(c, params, cfg, greeks, cache);
        } catch (const std::exception& e) {
            rows[i].error = e.what();
        }
    };
    const int n_threads = std::max(1, std::min<int>(threads, static_cast<int>(spots.size())));
    if (n_threads == 1) {
        for (std::size_t i = 0; i < spots.size(); ++i) work(i);
        return rows;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < spots.size(); i = next++) work(i);
        });
    for (auto& th : pool) th.join();
    return rows;
}

}  // namespace ghe
