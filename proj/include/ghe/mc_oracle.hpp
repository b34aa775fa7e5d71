#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <variant>
#include <vector>

#include "ghe/greeks.hpp"
#include "ghe/models.hpp"
#include "ghe/transforms.hpp"

namespace ghe {

struct SimConfig {
    std::size_t n_paths = 100000;
    int n_steps_per_year = 5000;
    std::uint64_t seed = 1;
    /// Pairs each path with its reflection in the Gaussian draws; jumps and
    /// subordinator increments are shared within a pair.
    bool antithetic = false;
};

void validate(const SimConfig& cfg);

/// Generator used for every path; reported by the CLI for reproducibility.
inline constexpr const char* rng_description = "mt19937_64 per path, seeded splitmix64(splitmix64(seed) + path)";

struct MCEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    double ci95_low = 0.0;
    double ci95_high = 0.0;
    /// Independent samples behind the estimate (pairs when antithetic).
    std::size_t n_effective = 0;
};

/// Variance gamma as a gamma-time-changed Brownian motion, plus drift and an
/// optional independent Gaussian part.
struct VgProcess {
    double C = 1.0, G = 1.0, M = 1.0;
    double drift = 0.0;
    double sigma2 = 0.0;
};

/// NIG(alpha, beta, C delta) as an inverse-Gaussian-time-changed Brownian motion.
struct NigProcess {
    double alpha = 1.0, beta = 0.0, delta = 1.0;
    double drift = 0.0;
    double sigma2 = 0.0;
    double C = 1.0;
};

using SimModel = std::variant<HejdParams, VgProcess, NigProcess>;

/// Simulation form of a target; the drift is the target's own or the
/// martingale drift for (r, d). KoBoL with Y != 0 and Meixner are unsupported.
SimModel sim_model(const TargetModel& target, double r, double d);

std::uint64_t splitmix64(std::uint64_t x);
std::mt19937_64 path_rng(std::uint64_t seed, std::uint64_t path);

/// Michael-Schucany-Haas draw from IG(mean, shape).
double sample_inverse_gaussian(double mean, double shape, std::mt19937_64& rng);

/// Receives path index and X on the step grid, x[0] = 0.
using PathSink = std::function<void(std::size_t, const std::vector<double>&)>;

void simulate(const SimModel& model, double T, const SimConfig& cfg, const PathSink& sink);
void simulate_hejd(const HejdParams& params, double T, const SimConfig& cfg, const PathSink& sink);
void simulate_vg(double C, double G, double M, double drift, double T, const SimConfig& cfg, const PathSink& sink);
void simulate_nig(double alpha, double beta, double delta, double drift, double T, const SimConfig& cfg,
                  const PathSink& sink);

/// Linear combination of discounted contract payoffs on the same paths.
struct Combination {
    std::vector<std::pair<std::size_t, double>> terms;
};

/// Barrier monitored on the step grid only. All contracts must share r and d;
/// each T must be a whole number of steps.
std::vector<MCEstimate> mc_estimate(const std::vector<ContractSpec>& contracts, const std::vector<Combination>& combos,
                                    const SimModel& model, const SimConfig& cfg, int threads = 1);

std::vector<MCEstimate> mc_value(const std::vector<ContractSpec>& contracts, const SimModel& model,
                                 const SimConfig& cfg, int threads = 1);
MCEstimate mc_value(const ContractSpec& contract, const SimModel& model, const SimConfig& cfg, int threads = 1);

/// European put on the same paths, no barrier.
MCEstimate mc_european_put(double S0, double K, double T, double r, double d, const SimModel& model,
                           const SimConfig& cfg, int threads = 1);

/// Continuous-barrier contract matching monitoring on the step grid: H moves
/// away from the spot by exp(0.5826 sigma sqrt(dt)). Only the diffusive part
/// of the crossing is corrected.
ContractSpec continuity_corrected(const ContractSpec& c, double sigma2, int n_steps_per_year);

/// Central-difference greek. The bump is relative: S0 for delta/gamma, T for theta.
/// With common random numbers all legs share the paths; otherwise each leg
/// uses its own seed.
MCEstimate mc_greek_fd(const ContractSpec& contract, const SimModel& model, const SimConfig& cfg, GreekKind kind,
                       double bump = 0.01, bool common_random_numbers = true, int threads = 1);

}  // namespace ghe
