#pragma once

#include <utility>
#include <vector>

#include "ghe/models.hpp"

namespace ghe {

enum class Weighting { uniform, user };

struct FitConfig {
    std::vector<double> alpha_plus_grid;
    std::vector<double> alpha_minus_grid;
    /// Abscissae of the density match, both signs, none inside (-x_min, x_min).
    std::vector<double> x_grid;
    Weighting weighting = Weighting::uniform;
    /// One weight per x_grid point when weighting == user.
    std::vector<double> user_weights;
    double tolerance = 1e-12;
};

/// `per_side` log-spaced points over [lo, hi] on each half-axis.
std::vector<double> default_x_grid(int per_side = 200, double lo = 0.005, double hi = 1.0);
FitConfig make_fit_config(std::vector<double> alpha_plus, std::vector<double> alpha_minus);

void validate(const FitConfig& cfg);

struct FitReport {
    ExpMixture up;
    ExpMixture down;
    /// Root mean square of k - k_n over x_grid.
    double rmse = 0.0;
    /// Sum over both sides of |mass of k - mass of k_n| beyond the outermost grid point.
    double tail_mass_error = 0.0;
};

/// Non-negative least-squares match of k on x_grid in the weights
/// w_i = lambda p_i alpha_i. Components with zero weight are dropped.
FitReport fit_hyperexp(const TargetModel& target, const FitConfig& cfg);

/// Default (-1/min alpha_minus, 1/min alpha_plus) of the fitted mixtures' grids.
std::pair<double, double> default_adjustment_interval(const FitConfig& cfg);

/// sigma^2 + int_{-v1}^{u1} y^2 (k(y) - k_n(y))_+ dy.
double gaussian_adjustment(const TargetModel& target, const ExpMixture& up, const ExpMixture& down,
                           std::pair<double, double> interval);

/// Fitted jumps, adjusted Gaussian variance and the martingale drift for (r, d).
HejdParams fit_model(const TargetModel& target, const FitConfig& cfg, double r, double d);
HejdParams fit_model(const TargetModel& target, const FitConfig& cfg, double r, double d, FitReport& report);

}  // namespace ghe
