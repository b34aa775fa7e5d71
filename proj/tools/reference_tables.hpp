#pragma once

#include <string>
#include <vector>

#include "ghe/models.hpp"
#include "ghe/transforms.hpp"

namespace ghe::cli {

// Fitted 7+7 hyper-exponential parameter sets as printed, used directly as
// input. The printed Gaussian column is passed through as sigma2.
inline HejdParams reference_nig_params() {
    ExpMixture up{5.1, {.005, .005, .01, .06, .12, .19, .61}, {5, 10, 15, 25, 30, 60, 80}};
    ExpMixture down{6.4, {.05, .03, .11, .08, .10, .40, .23}, {5, 10, 15, 25, 30, 60, 80}};
    return {0.15, 0.042, up, down};
}

inline HejdParams reference_vg_params() {
    ExpMixture up{2.2, {.003, .007, .21, .08, .26, .19, .25}, {5, 10, 15, 25, 30, 60, 80}};
    ExpMixture down{3.0, {.01, .09, .31, .31, .10, .08, .10}, {2, 5, 10, 30, 50, 80, 100}};
    return {0.13, 0.011, up, down};
}

struct ReferenceRow {
    double spot_pct, price, delta, gamma, theta;
};

/// Printed transform column for one grid. Values are in the printed units:
/// printed = scale * value for each quantity.
struct ReferenceTable {
    std::string name;
    ContractKind kind;
    double K, H, T, r, d;
    double reference;
    double price_scale, delta_scale, gamma_scale, theta_scale;
    std::vector<ReferenceRow> rows;
};

inline ReferenceTable reference_nig_dop() {
    return {"nig_dop", ContractKind::DOP, 3500, 2100, 1.0, 0.03, 0.0, 3500, 1.0, 10.0, 1e3, 1.0,
            {{64, 486.8, 9.07, -8.56, -360},    {66, 532.7, 4.37, -5.32, -373},   {68, 551.8, 1.27, -3.68, -369},
             {70, 552.6, -0.92, -2.65, -354},   {72, 540.4, -2.51, -1.93, -333},  {74, 518.6, -3.66, -1.37, -309},
             {76, 490.0, -4.45, -0.92, -281},   {78, 456.9, -4.96, -0.53, -250},  {80, 421.2, -5.21, -0.19, -217},
             {82, 384.6, -5.24, 0.10, -181},    {84, 348.4, -5.08, 0.33, -145},   {86, 313.8, -4.79, 0.49, -110},
             {88, 281.5, -4.41, 0.58, -77.5},   {90, 252.1, -3.99, 0.61, -49.2},  {92, 225.7, -3.56, 0.60, -25.6},
             {94, 202.2, -3.15, 0.56, -6.7},    {96, 181.5, -2.79, 0.50, 8.0},    {98, 163.1, -2.46, 0.43, 18.9},
             {100, 146.9, -2.18, 0.36, 26.9},   {102, 132.5, -1.93, 0.35, 32.4},  {104, 119.8, -1.70, 0.30, 36.2},
             {106, 108.7, -1.50, 0.27, 38.4},   {108, 98.76, -1.33, 0.23, 39.7},  {110, 90.00, -1.18, 0.20, 40.1},
             {112, 82.22, -1.05, 0.17, 39.9},   {114, 75.29, -0.93, 0.15, 39.3},  {116, 69.11, -0.84, 0.13, 38.4},
             {118, 63.57, -0.75, 0.12, 37.4},   {120, 58.60, -0.67, 0.10, 36.1},  {122, 54.13, -0.61, 0.09, 34.8}}};
}

inline ReferenceTable reference_vg_adid() {
    return {"vg_adid", ContractKind::ADID, 0, 2100, 1.0, 0.03, 0.0, 3500, 1e2, 1e5, 1e7, 1e2,
            {{64, 39.89, -104, 43.2, 19.0},  {66, 33.50, -80.3, 27.4, 18.5}, {68, 28.47, -64.2, 19.4, 17.6},
             {70, 24.41, -52.5, 14.6, 16.6}, {72, 21.06, -43.5, 11.4, 15.4}, {74, 18.27, -36.4, 9.06, 14.2},
             {76, 15.93, -30.7, 7.34, 13.1}, {78, 14.96, -26.0, 6.02, 12.1}, {80, 12.27, -22.2, 4.97, 11.1},
             {82, 10.84, -19.0, 4.13, 10.2}, {84, 9.60, -16.4, 3.46, 9.34},  {86, 8.54, -14.1, 2.90, 8.57},
             {88, 7.61, -12.3, 2.45, 7.87},  {90, 6.81, -10.7, 2.08, 7.22},  {92, 6.11, -9.3, 1.77, 6.64},
             {94, 5.50, -8.2, 1.52, 6.11},   {96, 4.96, -7.2, 1.30, 5.63},   {98, 4.49, -6.4, 1.12, 5.19},
             {100, 4.07, -5.6, 0.97, 4.79},  {102, 3.70, -5.0, 0.84, 4.42},  {104, 3.37, -4.5, 0.73, 4.09},
             {106, 3.07, -4.0, 0.64, 3.78},  {108, 2.81, -3.6, 0.56, 3.51},  {110, 2.57, -3.2, 0.49, 3.25},
             {112, 2.36, -2.9, 0.43, 3.02},  {114, 2.17, -2.6, 0.38, 2.81},  {116, 2.00, -2.3, 0.34, 2.62},
             {118, 1.84, -2.1, 0.30, 2.44},  {120, 1.70, -1.9, 0.27, 2.27},  {122, 1.58, -1.7, 0.24, 2.12},
             {124, 1.46, -1.6, 0.21, 1.98},  {126, 1.35, -1.4, 0.19, 1.86}}};
}

}  // namespace ghe::cli
