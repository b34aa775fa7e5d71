#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "ghe/greeks.hpp"
#include "ghe/hejd_fit.hpp"
#include "ghe/inversion.hpp"
#include "ghe/mc_oracle.hpp"
#include "ghe/models.hpp"

namespace ghe::cli {

inline constexpr int schema_version = 1;

/// Malformed or inconsistent configuration; the message names the key.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Units { percent, currency };

/// Contract template plus spot grid. Spots are always percentages of
/// `reference`; strike and barrier follow `units`.
struct ContractSection {
    ContractKind kind = ContractKind::EDID;
    Units units = Units::percent;
    double reference = 1.0;
    double strike = 0.0;
    double barrier = 0.0;
    double maturity = 1.0;
    std::vector<double> spots_pct;
};

struct RunConfig {
    /// Exactly one of these; a target needs a fit section before pricing.
    std::optional<HejdParams> hejd;
    std::optional<TargetModel> target;
    std::optional<FitConfig> fit;
    double r = 0.0;
    double d = 0.0;
    std::optional<ContractSection> contract;
    InversionConfig inversion;
    std::optional<SimConfig> mc;
    /// MC under the exact target law instead of the HEJD parameters.
    bool mc_simulate_target = false;
    /// Compare MC against the transform at the continuity-corrected barrier.
    bool mc_continuity_correction = false;
    std::set<GreekKind> greeks{GreekKind::delta, GreekKind::gamma, GreekKind::theta};
    std::string output;
    int threads = 1;
    /// The parsed document, kept so `fit` can rewrite it.
    YAML::Node document;
};

RunConfig parse_config(const YAML::Node& root);
RunConfig load_config(const std::string& path);

/// Parameters for pricing: explicit HEJD, or the target fitted with the fit section.
HejdParams pricing_params(const RunConfig& cfg, FitReport* report = nullptr);

/// Currency contract from the template at spot_pct.
ContractSpec contract_at(const ContractSection& s, double spot_pct, double r, double d);

/// YAML block for explicit HEJD parameters; doubles written at round-trip precision.
YAML::Node hejd_node(const HejdParams& p);

std::string format_double(double x);

}  // namespace ghe::cli
