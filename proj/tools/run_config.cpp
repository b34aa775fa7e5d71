#include "run_config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <initializer_list>

#include "ghe/errors.hpp"

namespace ghe::cli {

namespace {

// A mapping node with a dotted path for error messages and a closed key set.
class Section {
public:
    Section(const YAML::Node& node, std::string path, std::initializer_list<const char*> keys)
        : node_(node), path_(std::move(path)) {
        if (!node_.IsMap()) throw ConfigError(where() + ": expected a mapping");
        for (const auto& kv : node_) {
            const std::string k = kv.first.as<std::string>();
            if (std::find_if(keys.begin(), keys.end(), [&](const char* a) { return k == a; }) == keys.end())
                throw ConfigError("unknown key '" + key_path(k) + "'");
        }
    }

    bool has(const char* k) const { return bool(node_[k]); }
    YAML::Node raw(const char* k) const { return node_[k]; }
    std::string key_path(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

    YAML::Node required(const char* k) const {
        if (!has(k)) throw ConfigError("missing key '" + key_path(k) + "'");
        return node_[k];
    }

    template <class T>
    T get(const char* k) const {
        return convert<T>(required(k), key_path(k));
    }

    template <class T>
    T get_or(const char* k, T fallback) const {
        return has(k) ? convert<T>(node_[k], key_path(k)) : fallback;
    }

    template <class T>
    std::vector<T> list(const char* k) const {
        const YAML::Node n = required(k);
        if (!n.IsSequence()) throw ConfigError("key '" + key_path(k) + "': expected a list");
        std::vector<T> out;
        for (std::size_t i = 0; i < n.size(); ++i) out.push_back(convert<T>(n[i], key_path(k) + "[" + std::to_string(i) + "]"));
        return out;
    }

    Section sub(const char* k, std::initializer_list<const char*> keys) const {
        return Section(required(k), key_path(k), keys);
    }

    template <class T>
    static T convert(const YAML::Node& n, const std::string& path) {
        if (!n.IsScalar()) throw ConfigError("key '" + path + "': expected a scalar");
        try {
            return n.as<T>();
        } catch (const YAML::Exception&) {
            throw ConfigError("key '" + path + "': cannot read '" + n.Scalar() + "'");
        }
    }

private:
    std::string where() const { return path_.empty() ? "config" : "key '" + path_ + "'"; }

    YAML::Node node_;
    std::string path_;
};

ExpMixture parse_mixture(const Section& s) {
    ExpMixture m;
    m.intensity = s.get<double>("intensity");
    m.weights = s.list<double>("weights");
    m.rates = s.list<double>("rates");
    if (m.weights.size() != m.rates.size())
        throw ConfigError("key '" + s.key_path("weights") + "': length differs from rates");
    return m;
}

// Drift is a number or the word "martingale".
std::optional<double> parse_drift(const Section& s, const char* key) {
    if (!s.has(key)) return std::nullopt;
    const YAML::Node n = s.raw(key);
    if (n.IsScalar() && n.Scalar() == "martingale") return std::nullopt;
    return Section::convert<double>(n, s.key_path(key));
}

HejdParams parse_hejd(const Section& s, double r, double d) {
    const Section up = s.sub("up", {"intensity", "weights", "rates"});
    const Section down = s.sub("down", {"intensity", "weights", "rates"});
    const double sigma2 = s.get<double>("sigma2");
    s.required("mu");
    const std::optional<double> mu = parse_drift(s, "mu");
    HejdParams p(mu.value_or(0.0), sigma2, parse_mixture(up), parse_mixture(down));
    return mu ? p : p.with_drift(martingale_drift(p, r, d));
}

TargetModel parse_target(const YAML::Node& node, const std::string& path) {
    if (!node.IsMap() || !node["type"]) throw ConfigError("missing key '" + path + ".type'");
    const std::string type = Section::convert<std::string>(node["type"], path + ".type");
    if (type == "nig") {
        Section s(node, path, {"type", "alpha", "beta", "delta", "C", "sigma2", "drift"});
        return NigModel{s.get<double>("alpha"), s.get<double>("beta"), s.get<double>("delta"), s.get_or("C", 1.0),
                        s.get_or("sigma2", 0.0), parse_drift(s, "drift")};
    }
    if (type == "vg" || type == "kobol") {
        Section s(node, path, {"type", "C", "G", "M", "Y", "sigma2", "drift"});
        const double Y = type == "vg" ? 0.0 : s.get<double>("Y");
        if (type == "vg" && s.has("Y")) throw ConfigError("unknown key '" + s.key_path("Y") + "' for type vg");
        return KobolModel{s.get<double>("C"), s.get<double>("G"), s.get<double>("M"), Y, s.get_or("sigma2", 0.0),
                          parse_drift(s, "drift")};
    }
    if (type == "kou") {
        Section s(node, path, {"type", "lambda_up", "alpha_up", "lambda_down", "alpha_down", "sigma2", "drift"});
        return KouModel{s.get<double>("lambda_up"), s.get<double>("alpha_up"), s.get<double>("lambda_down"),
                        s.get<double>("alpha_down"), s.get_or("sigma2", 0.0), parse_drift(s, "drift")};
    }
    if (type == "hyperexp") {
        Section s(node, path, {"type", "up", "down", "sigma2", "drift"});
        return HyperExpModel{parse_mixture(s.sub("up", {"intensity", "weights", "rates"})),
                             parse_mixture(s.sub("down", {"intensity", "weights", "rates"})), s.get_or("sigma2", 0.0),
                             parse_drift(s, "drift")};
    }
    if (type == "meixner") {
        Section s(node, path, {"type", "alpha", "beta", "delta", "sigma2", "drift"});
        return MeixnerModel{s.get<double>("delta"), s.get<double>("alpha"), s.get<double>("beta"),
                            s.get_or("sigma2", 0.0), parse_drift(s, "drift")};
    }
    throw ConfigError("key '" + path + ".type': unknown model '" + type + "'");
}

FitConfig parse_fit(const Section& s) {
    FitConfig f;
    f.alpha_plus_grid = s.list<double>("alpha_plus_grid");
    f.alpha_minus_grid = s.list<double>("alpha_minus_grid");
    if (!s.has("x_grid")) {
        f.x_grid = default_x_grid();
    } else if (s.raw("x_grid").IsSequence()) {
        f.x_grid = s.list<double>("x_grid");
    } else {
        const Section g = s.sub("x_grid", {"per_side", "min", "max"});
        f.x_grid = default_x_grid(g.get_or("per_side", 200), g.get_or("min", 0.005), g.get_or("max", 1.0));
    }
    const std::string w = s.get_or<std::string>("weighting", "uniform");
    if (w == "uniform") {
        f.weighting = Weighting::uniform;
    } else if (w == "user") {
        f.weighting = Weighting::user;
        f.user_weights = s.list<double>("user_weights");
    } else if (w == "inverse_square") {
        // 1 / k^2 style weights are target dependent, resolved in pricing_params.
        f.weighting = Weighting::user;
    } else {
        throw ConfigError("key '" + s.key_path("weighting") + "': expected uniform, user or inverse_square");
    }
    if (w != "user" && s.has("user_weights"))
        throw ConfigError("key '" + s.key_path("user_weights") + "' requires weighting: user");
    f.tolerance = s.get_or("tolerance", f.tolerance);
    return f;
}

std::vector<double> parse_spots(const Section& s) {
    const YAML::Node n = s.required("spots");
    if (n.IsSequence()) return s.list<double>("spots");
    if (n.IsScalar()) return {s.get<double>("spots")};
    const Section g = s.sub("spots", {"from", "to", "step"});
    const double a = g.get<double>("from"), b = g.get<double>("to"), h = g.get<double>("step");
    if (!(h > 0.0) || b < a) throw ConfigError("key '" + s.key_path("spots") + "': need step > 0 and to >= from");
    std::vector<double> out;
    const int n_pts = int(std::floor((b - a) / h + 1e-9)) + 1;
    for (int i = 0; i < n_pts; ++i) out.push_back(a + i * h);
    return out;
}

ContractSection parse_contract(const Section& s) {
    ContractSection c;
    std::string kind = s.get<std::string>("kind");
    std::transform(kind.begin(), kind.end(), kind.begin(), [](unsigned char ch) { return std::toupper(ch); });
    try {
        c.kind = contract_kind_from_string(kind);
    } catch (const ValidationError& e) {
        throw ConfigError("key '" + s.key_path("kind") + "': " + e.what());
    }
    const std::string units = s.get<std::string>("units");
    if (units == "percent") {
        c.units = Units::percent;
    } else if (units == "currency") {
        c.units = Units::currency;
    } else {
        throw ConfigError("key '" + s.key_path("units") + "': expected percent or currency");
    }
    c.reference = s.get<double>("reference");
    const bool needs_strike = c.kind == ContractKind::DOP || c.kind == ContractKind::DIP;
    if (needs_strike) c.strike = s.get<double>("strike");
    else if (s.has("strike")) throw ConfigError("key '" + s.key_path("strike") + "': digitals take no strike");
    c.barrier = s.get<double>("barrier");
    c.maturity = s.get<double>("maturity");
    c.spots_pct = parse_spots(s);
    if (c.spots_pct.empty()) throw ConfigError("key '" + s.key_path("spots") + "': empty grid");
    if (!(c.reference > 0.0)) throw ConfigError("key '" + s.key_path("reference") + "': must be > 0");
    return c;
}

GreekKind parse_greek(const std::string& g, const std::string& path) {
    if (g == "delta") return GreekKind::delta;
    if (g == "gamma") return GreekKind::gamma;
    if (g == "theta") return GreekKind::theta;
    throw ConfigError("key '" + path + "': unknown greek '" + g + "'");
}

}  // namespace

RunConfig parse_config(const YAML::Node& root) {
    const Section top(root, "",
                      {"schema_version", "model", "fit", "market", "contract", "inversion", "mc", "greeks", "output",
                       "threads"});
    const int version = top.get<int>("schema_version");
    if (version != schema_version)
        throw ConfigError("key 'schema_version': unsupported version " + std::to_string(version));

    RunConfig cfg;
    cfg.document = YAML::Clone(root);
    const Section market = top.sub("market", {"r", "d"});
    cfg.r = market.get<double>("r");
    cfg.d = market.get_or("d", 0.0);

    const Section model = top.sub("model", {"hejd", "target"});
    if (model.has("hejd") == model.has("target"))
        throw ConfigError("key 'model': give exactly one of 'hejd' or 'target'");
    try {
        if (model.has("hejd")) {
            cfg.hejd = parse_hejd(model.sub("hejd", {"mu", "sigma2", "up", "down"}), cfg.r, cfg.d);
        } else {
            cfg.target = parse_target(model.raw("target"), "model.target");
            validate(*cfg.target);
        }
    } catch (const ValidationError& e) {
        throw ConfigError(std::string("key 'model': ") + e.what());
    }

    if (top.has("fit")) {
        cfg.fit = parse_fit(top.sub("fit", {"alpha_plus_grid", "alpha_minus_grid", "x_grid", "weighting",
                                            "user_weights", "tolerance"}));
        if (top.raw("fit")["weighting"] && top.raw("fit")["weighting"].Scalar() == "inverse_square") {
            if (!cfg.target) throw ConfigError("key 'fit.weighting': inverse_square needs a target model");
            for (double x : cfg.fit->x_grid) {
                const double k = levy_density(*cfg.target, x);
                cfg.fit->user_weights.push_back(1.0 / (k * k));
            }
        }
        try {
            validate(*cfg.fit);
        } catch (const ValidationError& e) {
            throw ConfigError(std::string("key 'fit': ") + e.what());
        }
    }

    if (top.has("contract"))
        cfg.contract = parse_contract(
            top.sub("contract", {"kind", "units", "reference", "strike", "barrier", "maturity", "spots"}));

    if (top.has("inversion")) {
        const Section inv = top.sub("inversion", {"M", "N", "A", "auto_escalate"});
        cfg.inversion.M = inv.get_or("M", cfg.inversion.M);
        cfg.inversion.N = inv.get_or("N", cfg.inversion.N);
        cfg.inversion.A = inv.get_or("A", cfg.inversion.A);
        cfg.inversion.auto_escalate = inv.get_or("auto_escalate", cfg.inversion.auto_escalate);
        try {
            validate(cfg.inversion);
        } catch (const ValidationError& e) {
            throw ConfigError(std::string("key 'inversion': ") + e.what());
        }
    }

    if (top.has("mc")) {
        const Section mc = top.sub("mc", {"n_paths", "n_steps_per_year", "seed", "antithetic", "simulate",
                                              "continuity_correction"});
        SimConfig s;
        const long long paths = mc.get_or<long long>("n_paths", (long long)s.n_paths);
        if (paths < 0) throw ConfigError("key 'mc.n_paths': must be >= 0");
        s.n_paths = std::size_t(paths);
        s.n_steps_per_year = mc.get_or("n_steps_per_year", s.n_steps_per_year);
        s.seed = mc.get_or<std::uint64_t>("seed", s.seed);
        s.antithetic = mc.get_or("antithetic", s.antithetic);
        const std::string sim = mc.get_or<std::string>("simulate", "hejd");
        if (sim != "hejd" && sim != "target") throw ConfigError("key 'mc.simulate': expected hejd or target");
        cfg.mc_simulate_target = sim == "target";
        if (cfg.mc_simulate_target && !cfg.target) throw ConfigError("key 'mc.simulate': target needs a target model");
        cfg.mc_continuity_correction = mc.get_or("continuity_correction", false);
        cfg.mc = s;
    }

    if (top.has("greeks")) {
        cfg.greeks.clear();
        for (const auto& g : top.list<std::string>("greeks")) cfg.greeks.insert(parse_greek(g, "greeks"));
    }
    cfg.output = top.get_or<std::string>("output", "");
    cfg.threads = top.get_or("threads", 1);
    if (cfg.threads < 1) throw ConfigError("key 'threads': must be >= 1");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    YAML::Node root;
    try {
        root = YAML::LoadFile(path);
    } catch (const YAML::BadFile&) {
        throw ConfigError("cannot open config '" + path + "'");
    } catch (const YAML::ParserException& e) {
        throw ConfigError("config '" + path + "': " + e.what());
    }
    return parse_config(root);
}

HejdParams pricing_params(const RunConfig& cfg, FitReport* report) {
    if (cfg.hejd) return *cfg.hejd;
    if (!cfg.fit) throw ConfigError("key 'fit': required to price a target model");
    FitReport local;
    HejdParams p = fit_model(*cfg.target, *cfg.fit, cfg.r, cfg.d, local);
    if (report) *report = local;
    return p;
}

ContractSpec contract_at(const ContractSection& s, double spot_pct, double r, double d) {
    const double scale = s.units == Units::percent ? s.reference / 100.0 : 1.0;
    return ContractSpec{s.kind, s.reference * spot_pct / 100.0, s.strike * scale, s.barrier * scale, s.maturity, r, d};
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

YAML::Node hejd_node(const HejdParams& p) {
    auto mixture = [](const ExpMixture& m) {
        YAML::Node n;
        n["intensity"] = format_double(m.intensity);
        for (double w : m.weights) n["weights"].push_back(format_double(w));
        for (double a : m.rates) n["rates"].push_back(format_double(a));
        if (m.rates.empty()) {
            n["weights"] = YAML::Node(YAML::NodeType::Sequence);
            n["rates"] = YAML::Node(YAML::NodeType::Sequence);
        }
        return n;
    };
    YAML::Node n;
    n["mu"] = format_double(p.mu());
    n["sigma2"] = format_double(p.sigma2());
    n["up"] = mixture(p.up());
    n["down"] = mixture(p.down());
    return n;
}

}  // namespace ghe::cli
