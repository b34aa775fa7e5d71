#include "ghe/mc_oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

#include "ghe/errors.hpp"

namespace ghe {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr std::size_t chunk_paths = 512;

// Increment generators. Each call advances both members of an antithetic
// pair; `b` is ignored by callers when antithetic sampling is off. start()
// clears cached variates so a path depends only on its own stream.
class HejdStepper {
public:
    HejdStepper(const HejdParams& p, double dt) : p_(p), dt_(dt), sdt_(std::sqrt(p.sigma2() * dt)) {
        lam_up_ = p.up().empty() ? 0.0 : p.up().intensity;
        lam_dn_ = p.down().empty() ? 0.0 : p.down().intensity;
        cum_up_ = cumulative(p.up());
        cum_dn_ = cumulative(p.down());
    }

    void start(std::mt19937_64& rng) {
        normal_.reset();
        t_ = 0.0;
        next_jump_ = draw_wait(rng);
    }

    void step(std::mt19937_64& rng, double& a, double& b) {
        const double z = sdt_ > 0.0 ? sdt_ * normal_(rng) : 0.0;
        double jump = 0.0;
        t_ += dt_;
        while (next_jump_ <= t_) {
            jump += draw_jump(rng);
            next_jump_ += draw_wait(rng);
        }
        const double base = p_.mu() * dt_ + jump;
        a = base + z;
        b = base - z;
    }

private:
    static std::vector<double> cumulative(const ExpMixture& m) {
        std::vector<double> c(m.weights.size());
        std::partial_sum(m.weights.begin(), m.weights.end(), c.begin());
        return c;
    }

    double draw_wait(std::mt19937_64& rng) {
        const double lam = lam_up_ + lam_dn_;
        return lam > 0.0 ? -std::log1p(-uniform_(rng)) / lam : INFINITY;
    }

    double draw_jump(std::mt19937_64& rng) {
        const bool up = uniform_(rng) * (lam_up_ + lam_dn_) < lam_up_;
        const ExpMixture& m = up ? p_.up() : p_.down();
        const auto& cum = up ? cum_up_ : cum_dn_;
        const double u = uniform_(rng) * cum.back();
        const std::size_t i = std::min<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin(), cum.size() - 1);
        const double size = -std::log1p(-uniform_(rng)) / m.rates[i];
        return up ? size : -size;
    }

    const HejdParams& p_;
    double dt_, sdt_;
    double lam_up_ = 0.0, lam_dn_ = 0.0;
    std::vector<double> cum_up_, cum_dn_;
    double t_ = 0.0, next_jump_ = INFINITY;
    std::normal_distribution<double> normal_;
    std::uniform_real_distribution<double> uniform_;
};

class VgStepper {
public:
    VgStepper(const VgProcess& m, double dt)
        : dt_(dt),
          drift_(m.drift * dt),
          theta_(m.C * (1.0 / m.M - 1.0 / m.G)),
          vol_(std::sqrt(2.0 * m.C / (m.G * m.M))),
          sdt_(std::sqrt(m.sigma2 * dt)),
          clock_(m.C * dt, 1.0 / m.C) {}

    void start(std::mt19937_64&) {
        clock_.reset();
        normal_.reset();
    }

    void step(std::mt19937_64& rng, double& a, double& b) {
        const double g = clock_(rng);
        const double z = vol_ * std::sqrt(g) * normal_(rng) + (sdt_ > 0.0 ? sdt_ * normal_(rng) : 0.0);
        a = drift_ + theta_ * g + z;
        b = drift_ + theta_ * g - z;
    }

private:
    double dt_, drift_, theta_, vol_, sdt_;
    std::gamma_distribution<double> clock_;
    std::normal_distribution<double> normal_;
};

class NigStepper {
public:
    NigStepper(const NigProcess& m, double dt)
        : drift_(m.drift * dt), beta_(m.beta), sdt_(std::sqrt(m.sigma2 * dt)) {
        const double gamma = std::sqrt(m.alpha * m.alpha - m.beta * m.beta);
        mean_ = m.C * m.delta * dt / gamma;
        shape_ = std::pow(m.C * m.delta * dt, 2);
    }

    void start(std::mt19937_64&) { normal_.reset(); }

    void step(std::mt19937_64& rng, double& a, double& b) {
        const double t = sample_inverse_gaussian(mean_, shape_, rng);
        const double z = std::sqrt(t) * normal_(rng) + (sdt_ > 0.0 ? sdt_ * normal_(rng) : 0.0);
        a = drift_ + beta_ * t + z;
        b = drift_ + beta_ * t - z;
    }

private:
    double drift_, beta_, sdt_;
    double mean_ = 0.0, shape_ = 0.0;
    std::normal_distribution<double> normal_;
};

int steps_for(double T, const SimConfig& cfg) {
    const double n = T * cfg.n_steps_per_year;
    const double r = std::round(n);
    if (!(r >= 1.0) || std::abs(n - r) > 1e-9 * std::max(1.0, n)) {
        std::ostringstream os;
        os << "mc: T = " << T << " is not a whole number of steps at " << cfg.n_steps_per_year << " steps/year";
        throw ValidationError(os.str());
    }
    return static_cast<int>(r);
}

std::size_t units(const SimConfig& cfg) { return cfg.antithetic ? cfg.n_paths / 2 : cfg.n_paths; }

// Calls `fn` with the stepper for the model's type.
template <class Fn>
void with_stepper(const SimModel& model, double dt, Fn&& fn) {
    std::visit(overloaded{[&](const HejdParams& p) { fn(HejdStepper(p, dt)); },
                          [&](const VgProcess& m) { fn(VgStepper(m, dt)); },
                          [&](const NigProcess& m) { fn(NigStepper(m, dt)); }},
               model);
}

template <class Stepper>
void fill_pair(Stepper& st, std::uint64_t seed, std::size_t unit, int n, bool anti, std::vector<double>& xa,
               std::vector<double>& xb) {
    std::mt19937_64 rng = path_rng(seed, unit);
    st.start(rng);
    xa[0] = 0.0;
    if (anti) xb[0] = 0.0;
    double a = 0.0, b = 0.0;
    for (int k = 1; k <= n; ++k) {
        st.step(rng, a, b);
        xa[k] = xa[k - 1] + a;
        if (anti) xb[k] = xb[k - 1] + b;
    }
}

enum class PayoffKind { contract, european_put };

struct Payoff {
    PayoffKind type = PayoffKind::contract;
    ContractSpec c;
    int n = 0;
    double level = 0.0;  // h = log(H/S0)
    double disc = 1.0;   // e^{-rT}
};

// First grid index at which each level is breached, one pass per path.
struct HitScanner {
    std::vector<double> down_levels, up_levels;  // sorted descending / ascending
    std::vector<int> down_hit, up_hit;

    void scan(const std::vector<double>& x, int n) {
        std::fill(down_hit.begin(), down_hit.end(), -1);
        std::fill(up_hit.begin(), up_hit.end(), -1);
        double lo = INFINITY, hi = -INFINITY;
        std::size_t pd = 0, pu = 0;
        for (int k = 0; k <= n; ++k) {
            if (x[k] < lo) {
                lo = x[k];
                while (pd < down_levels.size() && lo <= down_levels[pd]) down_hit[pd++] = k;
            }
            if (x[k] > hi) {
                hi = x[k];
                while (pu < up_levels.size() && hi >= up_levels[pu]) up_hit[pu++] = k;
            }
            if (pd == down_levels.size() && pu == up_levels.size()) break;
        }
    }
};

struct Accum {
    std::vector<long double> s1, s2;
};

std::vector<MCEstimate> run(const std::vector<Payoff>& payoffs, const std::vector<Combination>& combos,
                            const SimModel& model, const SimConfig& cfg, double r, int threads) {
    validate(cfg);
    if (cfg.antithetic && cfg.n_paths % 2) throw ValidationError("mc: antithetic sampling needs an even n_paths");
    for (const auto& cb : combos)
        for (const auto& [i, w] : cb.terms)
            if (i >= payoffs.size()) throw ValidationError("mc: combination refers to a missing contract");
    const double dt = 1.0 / cfg.n_steps_per_year;
    int n_max = 0;
    for (const auto& p : payoffs) n_max = std::max(n_max, p.n);

    // Distinct monitoring levels and the payoff -> level slot map.
    std::vector<double> dl, ul;
    for (const auto& p : payoffs) {
        if (p.type != PayoffKind::contract) continue;
        (p.c.is_up() ? ul : dl).push_back(p.level);
    }
    std::sort(dl.begin(), dl.end(), std::greater<>());
    dl.erase(std::unique(dl.begin(), dl.end()), dl.end());
    std::sort(ul.begin(), ul.end());
    ul.erase(std::unique(ul.begin(), ul.end()), ul.end());
    std::vector<std::size_t> slot(payoffs.size(), 0);
    for (std::size_t i = 0; i < payoffs.size(); ++i) {
        const auto& p = payoffs[i];
        if (p.type != PayoffKind::contract) continue;
        const auto& lv = p.c.is_up() ? ul : dl;
        slot[i] = std::find(lv.begin(), lv.end(), p.level) - lv.begin();
    }

    const std::size_t n_units = units(cfg);
    const std::size_t n_chunks = (n_units + chunk_paths - 1) / chunk_paths;
    std::vector<Accum> chunks(n_chunks);

    auto payoff_value = [&](const Payoff& p, std::size_t i, const HitScanner& hs, const std::vector<double>& x) {
        const double put = p.type == PayoffKind::european_put || p.c.kind == ContractKind::DOP || p.c.kind == ContractKind::DIP
                               ? std::max(0.0, p.c.K - p.c.S0 * std::exp(x[p.n]))
                               : 0.0;
        if (p.type == PayoffKind::european_put) return p.disc * put;
        const int k = p.c.is_up() ? hs.up_hit[slot[i]] : hs.down_hit[slot[i]];
        const bool hit = k >= 0 && k <= p.n;
        switch (p.c.kind) {
            case ContractKind::EDID:
            case ContractKind::EUID: return hit ? p.disc : 0.0;
            case ContractKind::ADID:
            case ContractKind::AUID: return hit ? std::exp(-r * k * dt) : 0.0;
            case ContractKind::EDOD: return hit ? 0.0 : p.disc;
            case ContractKind::DOP: return hit ? 0.0 : p.disc * put;
            case ContractKind::DIP: return hit ? p.disc * put : 0.0;
        }
        return 0.0;
    };

    auto work = [&](std::atomic<std::size_t>& next) {
        with_stepper(model, dt, [&](auto st) {
            std::vector<double> xa(n_max + 1), xb(n_max + 1);
            HitScanner hs{dl, ul, std::vector<int>(dl.size()), std::vector<int>(ul.size())};
            std::vector<double> va(payoffs.size()), vb(payoffs.size());
            for (std::size_t c = next++; c < n_chunks; c = next++) {
                Accum acc{std::vector<long double>(combos.size(), 0.0L), std::vector<long double>(combos.size(), 0.0L)};
                const std::size_t end = std::min(n_units, (c + 1) * chunk_paths);
                for (std::size_t u = c * chunk_paths; u < end; ++u) {
                    fill_pair(st, cfg.seed, u, n_max, cfg.antithetic, xa, xb);
                    hs.scan(xa, n_max);
                    for (std::size_t i = 0; i < payoffs.size(); ++i) va[i] = payoff_value(payoffs[i], i, hs, xa);
                    if (cfg.antithetic) {
                        hs.scan(xb, n_max);
                        for (std::size_t i = 0; i < payoffs.size(); ++i) vb[i] = payoff_value(payoffs[i], i, hs, xb);
                    }
                    for (std::size_t j = 0; j < combos.size(); ++j) {
                        double y = 0.0;
                        for (const auto& [i, w] : combos[j].terms) y += w * (cfg.antithetic ? 0.5 * (va[i] + vb[i]) : va[i]);
                        acc.s1[j] += y;
                        acc.s2[j] += static_cast<long double>(y) * y;
                    }
                }
                chunks[c] = std::move(acc);
            }
        });
    };
    std::atomic<std::size_t> next{0};
    const int nt = std::max(1, std::min<int>(threads, static_cast<int>(n_chunks)));
    if (nt == 1) {
        work(next);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nt; ++t) pool.emplace_back([&] { work(next); });
        for (auto& th : pool) th.join();
    }

    std::vector<MCEstimate> out(combos.size());
    for (std::size_t j = 0; j < combos.size(); ++j) {
        long double s1 = 0.0L, s2 = 0.0L;
        for (const auto& ch : chunks) {
            s1 += ch.s1[j];
            s2 += ch.s2[j];
        }
        const long double n = static_cast<long double>(n_units);
        const long double mean = s1 / n;
        const long double var = n > 1 ? std::max(0.0L, (s2 - n * mean * mean) / (n - 1)) : 0.0L;
        MCEstimate& e = out[j];
        e.mean = static_cast<double>(mean);
        e.std_error = static_cast<double>(std::sqrt(var / n));
        e.ci95_low = e.mean - 1.96 * e.std_error;
        e.ci95_high = e.mean + 1.96 * e.std_error;
        e.n_effective = n_units;
    }
    return out;
}

Payoff make_payoff(const ContractSpec& c, const SimConfig& cfg) {
    // A path that starts on the far side of the barrier is knocked at t = 0;
    // the remaining contract rules still apply.
    ContractSpec t = c;
    if (c.S0 > 0.0 && c.H > 0.0) {
        if (!c.is_up() && c.H >= c.S0) t.S0 = 2.0 * c.H;
        if (c.is_up() && c.H < c.S0) t.S0 = 0.5 * c.H;
    }
    validate(t);
    Payoff p;
    p.c = c;
    p.n = steps_for(c.T, cfg);
    p.level = std::log(c.H / c.S0);
    p.disc = std::exp(-c.r * c.T);
    return p;
}

void check_rates(const std::vector<ContractSpec>& cs) {
    for (const auto& c : cs)
        if (c.r != cs.front().r || c.d != cs.front().d) throw ValidationError("mc: all contracts in a batch must share r and d");
}

}  // namespace

void validate(const SimConfig& cfg) {
    if (cfg.n_paths < 1) throw ValidationError("mc: n_paths must be >= 1");
    if (cfg.n_steps_per_year < 1) throw ValidationError("mc: n_steps_per_year must be >= 1");
}

SimModel sim_model(const TargetModel& target, double r, double d) {
    validate(target);
    const double drift = explicit_drift(target).value_or(0.0);
    const bool has_drift = explicit_drift(target).has_value();
    return std::visit(
        overloaded{
            [&](const KobolModel& m) -> SimModel {
                if (m.Y != 0.0) throw UnsupportedError("sim_model: only the Y = 0 (variance gamma) KoBoL case is simulated");
                return VgProcess{m.C, m.G, m.M, has_drift ? drift : target_martingale_drift(target, r, d), m.sigma2};
            },
            [&](const NigModel& m) -> SimModel {
                return NigProcess{m.alpha, m.beta, m.delta, has_drift ? drift : target_martingale_drift(target, r, d),
                                  m.sigma2, m.C};
            },
            [&](const MeixnerModel&) -> SimModel { throw UnsupportedError("sim_model: Meixner is not simulated"); },
            [&](const auto&) -> SimModel {
                const HejdParams p = to_hejd(target);
                return has_drift ? p : p.with_drift(martingale_drift(p, r, d));
            },
        },
        target);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Hashing the seed first keeps nearby seeds from sharing shifted path streams.
std::mt19937_64 path_rng(std::uint64_t seed, std::uint64_t path) {
    return std::mt19937_64(splitmix64(splitmix64(seed) + path));
}

double sample_inverse_gaussian(double mean, double shape, std::mt19937_64& rng) {
    std::normal_distribution<double> n01;
    std::uniform_real_distribution<double> u01;
    const double v = n01(rng);
    const double a = mean * v * v / (2.0 * shape);
    // Smaller root of the quadratic, m (1 + a - sqrt(a^2 + 2a)), written without cancellation.
    const double y = mean / (1.0 + a + std::sqrt(a * a + 2.0 * a));
    return u01(rng) <= mean / (mean + y) ? y : mean * mean / y;
}

void simulate(const SimModel& model, double T, const SimConfig& cfg, const PathSink& sink) {
    validate(cfg);
    if (cfg.antithetic && cfg.n_paths % 2) throw ValidationError("mc: antithetic sampling needs an even n_paths");
    const int n = steps_for(T, cfg);
    const double dt = 1.0 / cfg.n_steps_per_year;
    with_stepper(model, dt, [&](auto st) {
        std::vector<double> xa(n + 1), xb(n + 1);
        const std::size_t n_units = units(cfg);
        for (std::size_t u = 0; u < n_units; ++u) {
            fill_pair(st, cfg.seed, u, n, cfg.antithetic, xa, xb);
            if (cfg.antithetic) {
                sink(2 * u, xa);
                sink(2 * u + 1, xb);
            } else {
                sink(u, xa);
            }
        }
    });
}

void simulate_hejd(const HejdParams& params, double T, const SimConfig& cfg, const PathSink& sink) {
    simulate(SimModel(params), T, cfg, sink);
}

void simulate_vg(double C, double G, double M, double drift, double T, const SimConfig& cfg, const PathSink& sink) {
    validate(TargetModel(make_vg(C, G, M)));
    simulate(SimModel(VgProcess{C, G, M, drift, 0.0}), T, cfg, sink);
}

void simulate_nig(double alpha, double beta, double delta, double drift, double T, const SimConfig& cfg,
                  const PathSink& sink) {
    validate(TargetModel(NigModel{alpha, beta, delta, 1.0, 0.0, {}}));
    simulate(SimModel(NigProcess{alpha, beta, delta, drift, 0.0, 1.0}), T, cfg, sink);
}

std::vector<MCEstimate> mc_estimate(const std::vector<ContractSpec>& contracts, const std::vector<Combination>& combos,
                                    const SimModel& model, const SimConfig& cfg, int threads) {
    if (contracts.empty()) return std::vector<MCEstimate>(combos.size());
    check_rates(contracts);
    std::vector<Payoff> ps;
    for (const auto& c : contracts) ps.push_back(make_payoff(c, cfg));
    return run(ps, combos, model, cfg, contracts.front().r, threads);
}

std::vector<MCEstimate> mc_value(const std::vector<ContractSpec>& contracts, const SimModel& model,
                                 const SimConfig& cfg, int threads) {
    std::vector<Combination> combos(contracts.size());
    for (std::size_t i = 0; i < contracts.size(); ++i) combos[i].terms = {{i, 1.0}};
    return mc_estimate(contracts, combos, model, cfg, threads);
}

MCEstimate mc_value(const ContractSpec& contract, const SimModel& model, const SimConfig& cfg, int threads) {
    return mc_value(std::vector<ContractSpec>{contract}, model, cfg, threads).front();
}

MCEstimate mc_european_put(double S0, double K, double T, double r, double d, const SimModel& model,
                           const SimConfig& cfg, int threads) {
    if (!(S0 > 0.0) || !(K > 0.0) || !(T > 0.0)) throw ValidationError("mc_european_put: S0, K and T must be > 0");
    Payoff p;
    p.type = PayoffKind::european_put;
    p.c = ContractSpec{ContractKind::DOP, S0, K, 0.0, T, r, d};
    p.n = steps_for(T, cfg);
    p.disc = std::exp(-r * T);
    return run({p}, {Combination{{{0, 1.0}}}}, model, cfg, r, threads).front();
}

MCEstimate mc_greek_fd(const ContractSpec& contract, const SimModel& model, const SimConfig& cfg, GreekKind kind,
                       double bump, bool common_random_numbers, int threads) {
    validate(contract);
    if (!(bump > 0.0 && bump < 1.0)) throw ValidationError("mc_greek_fd: bump must lie in (0, 1)");
    ContractSpec up = contract, dn = contract;
    double scale = 0.0;
    if (kind == GreekKind::theta) {
        up.T = contract.T * (1.0 + bump);
        dn.T = contract.T * (1.0 - bump);
        scale = 2.0 * bump * contract.T;
    } else {
        up.S0 = contract.S0 * (1.0 + bump);
        dn.S0 = contract.S0 * (1.0 - bump);
        const bool crosses = contract.is_up() ? up.S0 >= contract.H : dn.S0 <= contract.H;
        if (crosses) {
            std::ostringstream os;
            os << "mc_greek_fd: bumped spot crosses the barrier H = " << contract.H << "; use a bump below "
               << std::abs(contract.H / contract.S0 - 1.0);
            throw ValidationError(os.str());
        }
        const double e = bump * contract.S0;
        scale = kind == GreekKind::delta ? 2.0 * e : e * e;
    }
    const std::vector<ContractSpec> legs{up, contract, dn};
    std::vector<std::pair<std::size_t, double>> w;
    if (kind == GreekKind::gamma)
        w = {{0, 1.0 / scale}, {1, -2.0 / scale}, {2, 1.0 / scale}};
    else
        w = {{0, 1.0 / scale}, {2, -1.0 / scale}};
    if (common_random_numbers) return mc_estimate(legs, {Combination{w}}, model, cfg, threads).front();

    // Independent legs: each on its own seed, variances add.
    MCEstimate out;
    double var = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        SimConfig c = cfg;
        c.seed = splitmix64(cfg.seed + 0x1000 + k);
        const auto e = mc_value(legs[w[k].first], model, c, threads);
        out.mean += w[k].second * e.mean;
        var += std::pow(w[k].second * e.std_error, 2);
    }
    out.std_error = std::sqrt(var);
    out.ci95_low = out.mean - 1.96 * out.std_error;
    out.ci95_high = out.mean + 1.96 * out.std_error;
    out.n_effective = units(cfg);
    return out;
}

ContractSpec continuity_corrected(const ContractSpec& c, double sigma2, int n_steps_per_year) {
    if (n_steps_per_year < 1) throw ValidationError("continuity_corrected: n_steps_per_year must be >= 1");
    // -zeta(1/2) / sqrt(2 pi)
    constexpr double beta = 0.5825971579390106;
    const double shift = std::exp(beta * std::sqrt(sigma2 / n_steps_per_year));
    ContractSpec out = c;
    out.H = c.is_up() ? c.H * shift : c.H / shift;
    return out;
}

}  // namespace ghe
