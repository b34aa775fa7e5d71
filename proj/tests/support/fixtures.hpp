#pragma once

#include "ghe/models.hpp"

namespace ghe::testing {

// Fitted hyper-exponential parameter sets used throughout the tests, taken as
// exact inputs (sigma2 and mu as printed, not re-derived).
inline HejdParams stored_nig() {
    ExpMixture up{5.1, {.005, .005, .01, .06, .12, .19, .61}, {5, 10, 15, 25, 30, 60, 80}};
    ExpMixture down{6.4, {.05, .03, .11, .08, .10, .40, .23}, {5, 10, 15, 25, 30, 60, 80}};
    return {0.15, 0.042, up, down};
}

inline HejdParams stored_vg() {
    ExpMixture up{2.2, {.003, .007, .21, .08, .26, .19, .25}, {5, 10, 15, 25, 30, 60, 80}};
    ExpMixture down{3.0, {.01, .09, .31, .31, .10, .08, .10}, {2, 5, 10, 30, 50, 80, 100}};
    return {0.13, 0.011, up, down};
}

// Two-sided Kou law with thin Gaussian part and heavy jump intensity.
inline HejdParams kou_stress() {
    ExpMixture up{25.0, {1.0}, {1.5}};
    ExpMixture down{40.0, {1.0}, {2.0}};
    HejdParams p(0.0, 0.0025, up, down);
    return p.with_drift(martingale_drift(p, 0.03, 0.0));
}

inline HejdParams kou_basic() {
    ExpMixture up{1.0, {1.0}, {3.0}};
    ExpMixture down{1.0, {1.0}, {2.0}};
    HejdParams p(0.0, 0.04, up, down);
    return p.with_drift(martingale_drift(p, 0.03, 0.0));
}

inline HejdParams black_scholes(double sigma, double r, double d) {
    HejdParams p(0.0, sigma * sigma, {}, {});
    return p.with_drift(r - d - 0.5 * sigma * sigma);
}

// Exponent grids of the fitted parameter sets above.
inline std::vector<double> stored_nig_grid() { return {5, 10, 15, 25, 30, 60, 80}; }
inline std::vector<double> stored_vg_grid_up() { return {5, 10, 15, 25, 30, 60, 80}; }
inline std::vector<double> stored_vg_grid_down() { return {2, 5, 10, 30, 50, 80, 100}; }

inline NigModel calibrated_nig() { return NigModel{8.858, -5.808, 0.174, 1.0, 0.0, {}}; }
inline KobolModel calibrated_vg() { return make_vg(0.925, 4.667, 11.876); }

}  // namespace ghe::testing
