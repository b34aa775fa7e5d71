#include "commands.hpp"

#include <cmath>
#include <cstdio>

#include "ghe/errors.hpp"
#include "reference_tables.hpp"

namespace ghe::cli {

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

// Errors go into a quoted field; embedded quotes are doubled.
std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

std::vector<double> spots_of(const ContractSection& s) {
    std::vector<double> out;
    for (double pct : s.spots_pct) out.push_back(s.reference * pct / 100.0);
    return out;
}

const ContractSection& need_contract(const RunConfig& cfg) {
    if (!cfg.contract) throw ConfigError("missing key 'contract'");
    return *cfg.contract;
}

// The hyper-exponential target equal to explicit parameters, for a re-fit.
HyperExpModel as_target(const HejdParams& p) { return HyperExpModel{p.up(), p.down(), p.sigma2(), p.mu()}; }

}  // namespace

void cmd_fit(const RunConfig& cfg, std::ostream& params_out, std::ostream& report) {
    FitReport rep;
    HejdParams fitted;
    std::string name;
    if (cfg.hejd) {
        FitConfig fc = cfg.fit ? *cfg.fit : make_fit_config(cfg.hejd->up().rates, cfg.hejd->down().rates);
        const TargetModel t = as_target(*cfg.hejd);
        fitted = fit_model(t, fc, cfg.r, cfg.d, rep).with_drift(cfg.hejd->mu());
        name = "hejd";
    } else {
        fitted = pricing_params(cfg, &rep);
        name = model_name(*cfg.target);
    }

    YAML::Node doc = YAML::Clone(cfg.document);
    doc.remove("fit");
    doc["model"] = YAML::Node(YAML::NodeType::Map);
    doc["model"]["hejd"] = hejd_node(fitted);
    if (cfg.mc_simulate_target) doc["mc"].remove("simulate");
    YAML::Emitter em;
    em << doc;
    params_out << "# fitted from " << name << "\n" << em.c_str() << "\n";

    const FitConfig& grid = cfg.fit ? *cfg.fit : make_fit_config(cfg.hejd->up().rates, cfg.hejd->down().rates);
    report << "model,grid_up,grid_down,n_up,n_down,mu,sigma2,rmse,tail_mass_error\n"
           << name << ',' << grid.alpha_plus_grid.size() << ',' << grid.alpha_minus_grid.size() << ','
           << fitted.up().size() << ',' << fitted.down().size() << ',' << format_double(fitted.mu())
           << ',' << format_double(fitted.sigma2()) << ',' << format_double(rep.rmse) << ','
           << format_double(rep.tail_mass_error) << '\n';
}

void cmd_price(const RunConfig& cfg, bool with_greeks, std::ostream& out) {
    const ContractSection& cs = need_contract(cfg);
    const HejdParams p = pricing_params(cfg);
    const ContractSpec templ = contract_at(cs, 100.0, cfg.r, cfg.d);
    const std::set<GreekKind> greeks = with_greeks ? cfg.greeks : std::set<GreekKind>{};
    const auto rows = value_grid(templ, spots_of(cs), p, cfg.inversion, greeks, cfg.threads);

    out << "# schema_version=" << schema_version << " kind=" << to_string(cs.kind) << '\n'
        << "spot_pct,price,delta,gamma,theta,near_barrier_flag,error\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& g = rows[i];
        out << format_double(cs.spots_pct[i]) << ',';
        if (g.error.empty())
            out << format_double(g.row.price) << ',' << opt(g.row.delta) << ',' << opt(g.row.gamma) << ','
                << opt(g.row.theta) << ',' << (g.row.near_barrier ? 1 : 0) << ",\n";
        else
            out << ",,,,," << quoted(g.error) << '\n';
    }
}

int cmd_mc_check(const RunConfig& cfg, std::ostream& out) {
    const ContractSection& cs = need_contract(cfg);
    if (!cfg.mc) throw ConfigError("missing key 'mc'");
    try {
        validate(*cfg.mc);
    } catch (const ValidationError& e) {
        throw ConfigError(std::string("key 'mc': ") + e.what());
    }
    const HejdParams p = pricing_params(cfg);
    const SimModel sim = cfg.mc_simulate_target ? sim_model(*cfg.target, cfg.r, cfg.d) : SimModel{p};

    std::vector<ContractSpec> valid;
    std::vector<std::string> errors(cs.spots_pct.size());
    std::vector<double> lt(cs.spots_pct.size(), NAN), lt_grid(cs.spots_pct.size(), NAN);
    std::vector<std::size_t> index;
    for (std::size_t i = 0; i < cs.spots_pct.size(); ++i) {
        const ContractSpec c = contract_at(cs, cs.spots_pct[i], cfg.r, cfg.d);
        try {
            validate(c);
            lt[i] = value_contract(c, p, cfg.inversion, {}).price;
            if (cfg.mc_continuity_correction)
                lt_grid[i] = value_contract(continuity_corrected(c, p.sigma2(), cfg.mc->n_steps_per_year), p,
                                            cfg.inversion, {})
                                 .price;
            valid.push_back(c);
            index.push_back(i);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    }
    const auto est = valid.empty() ? std::vector<MCEstimate>{} : mc_value(valid, sim, *cfg.mc, cfg.threads);

    out << "# schema_version=" << schema_version << " kind=" << to_string(cs.kind) << " rng=\"" << rng_description
        << "\" seed=" << cfg.mc->seed << " n_paths=" << cfg.mc->n_paths << " n_steps_per_year="
        << cfg.mc->n_steps_per_year << " antithetic=" << (cfg.mc->antithetic ? 1 : 0)
        << " continuity_correction=" << (cfg.mc_continuity_correction ? 1 : 0) << '\n'
        << "spot_pct,transform,transform_corrected,mc_mean,mc_std_error,ci95_low,ci95_high,n_effective,pass,error\n";
    int failures = 0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < cs.spots_pct.size(); ++i) {
        out << format_double(cs.spots_pct[i]) << ',';
        if (k < index.size() && index[k] == i) {
            const MCEstimate& e = est[k++];
            const double target = cfg.mc_continuity_correction ? lt_grid[i] : lt[i];
            const bool pass = std::abs(target - e.mean) <= 3.0 * e.std_error;
            failures += !pass;
            out << format_double(lt[i]) << ',' << (cfg.mc_continuity_correction ? format_double(lt_grid[i]) : "")
                << ',' << format_double(e.mean) << ',' << format_double(e.std_error) << ','
                << format_double(e.ci95_low) << ',' << format_double(e.ci95_high) << ',' << e.n_effective << ','
                << (pass ? 1 : 0) << ",\n";
        } else {
            out << ",,,,,,,," << quoted(errors[i]) << '\n';
        }
    }
    return failures;
}

void cmd_reproduce_tables(const InversionConfig& inv, int threads, bool gaussian_as_sigma, std::ostream& csv,
                          std::ostream& human) {
    struct Job {
        ReferenceTable table;
        HejdParams params;
    };
    auto read = [&](const HejdParams& p) { return gaussian_as_sigma ? p.with_sigma2(p.sigma2() * p.sigma2()) : p; };
    const std::vector<Job> jobs{{reference_nig_dop(), read(reference_nig_params())},
                                {reference_vg_adid(), read(reference_vg_params())}};
    const std::set<GreekKind> all{GreekKind::delta, GreekKind::gamma, GreekKind::theta};

    csv << "# schema_version=" << schema_version << '\n'
        << "table,spot_pct,price,delta,gamma,theta,near_barrier_flag,error\n";
    for (const Job& job : jobs) {
        const ReferenceTable& t = job.table;
        const ContractSpec templ{t.kind, t.reference, t.K, t.H, t.T, t.r, t.d};
        std::vector<double> spots;
        for (const auto& row : t.rows) spots.push_back(t.reference * row.spot_pct / 100.0);
        const auto rows = value_grid(templ, spots, job.params, inv, all, threads);

        char line[256];
        human << t.name << " (" << to_string(t.kind) << ", K=" << t.K << ", H=" << t.H << ", T=" << t.T
              << ", r=" << t.r << ", sigma2=" << job.params.sigma2() << "); printed units: price x" << t.price_scale << ", delta x" << t.delta_scale
              << ", gamma x" << t.gamma_scale << ", theta x" << t.theta_scale << "\n";
        std::snprintf(line, sizeof line, "%5s %10s %10s %8s | %9s %9s | %9s %9s | %9s %9s\n", "spot", "price", "ref",
                      "rel%", "delta", "ref", "gamma", "ref", "theta", "ref");
        human << line;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& g = rows[i];
            const ReferenceRow& ref = t.rows[i];
            csv << t.name << ',' << format_double(ref.spot_pct) << ',';
            if (!g.error.empty()) {
                csv << ",,,,," << quoted(g.error) << '\n';
                human << ref.spot_pct << " error: " << g.error << '\n';
                continue;
            }
            const ValuationRow& v = g.row;
            csv << format_double(v.price) << ',' << opt(v.delta) << ',' << opt(v.gamma) << ',' << opt(v.theta) << ','
                << (v.near_barrier ? 1 : 0) << ",\n";
            const double price = v.price * t.price_scale;
            std::snprintf(line, sizeof line, "%5.0f %10.4g %10.4g %8.2f | %9.3g %9.3g | %9.3g %9.3g | %9.3g %9.3g\n",
                          ref.spot_pct, price, ref.price, 100.0 * (price - ref.price) / ref.price,
                          *v.delta * t.delta_scale, ref.delta, *v.gamma * t.gamma_scale, ref.gamma,
                          *v.theta * t.theta_scale, ref.theta);
            human << line;
        }
        human << '\n';
    }
}

}  // namespace ghe::cli
