#pragma once

#include <ostream>
#include <string>

#include "run_config.hpp"

namespace ghe::cli {

/// Fits the target (or re-fits explicit HEJD parameters on their own rates)
/// and writes a config with the fitted parameters as explicit HEJD input.
/// A one-line CSV report goes to `report`.
void cmd_fit(const RunConfig& cfg, std::ostream& params_out, std::ostream& report);

/// CSV of value_grid rows: spot_pct, price, delta, gamma, theta,
/// near_barrier_flag, error. Greek columns are empty unless `with_greeks`.
void cmd_price(const RunConfig& cfg, bool with_greeks, std::ostream& out);

/// Transform value against the MC estimate per spot; pass when they are
/// within 3 standard errors. Returns the number of failing rows.
int cmd_mc_check(const RunConfig& cfg, std::ostream& out);

/// The two reference grids (NIG down-and-out put, VG first-passage digital)
/// from the stored fitted parameters. Machine CSV to `csv`, rounded tables
/// in the printed units to `human`. With `gaussian_as_sigma` the printed
/// Gaussian column is squared before use.
void cmd_reproduce_tables(const InversionConfig& inv, int threads, bool gaussian_as_sigma, std::ostream& csv,
                          std::ostream& human);

}  // namespace ghe::cli
