#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include <CLI11.hpp>

#include "commands.hpp"
#include "ghe/errors.hpp"

using namespace ghe;
using namespace ghe::cli;

namespace {

enum Exit { ok = 0, config_error = 1, numerical_failure = 2 };

// Output file from --out, then the config's output key, else stdout.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (path.empty()) return;
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_) throw ConfigError("cannot write '" + path + "'");
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Barrier option pricing for hyper-exponential Levy models"};
    app.require_subcommand(1);
    std::string config_path, out_path;
    std::optional<int> threads;
    std::optional<std::uint64_t> seed;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* c = sub->add_option("--config", config_path, "YAML run configuration");
        if (needs_config) c->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_path, "Output path (default: config 'output', else stdout)");
        sub->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    };
    auto* fit = app.add_subcommand("fit", "Fit HEJD parameters; writes an explicit-parameter config");
    auto* price = app.add_subcommand("price", "Prices over the spot grid as CSV");
    auto* greeks = app.add_subcommand("greeks", "Prices and greeks over the spot grid as CSV");
    auto* mc = app.add_subcommand("mc-check", "Transform values against Monte Carlo estimates");
    auto* tables = app.add_subcommand("reproduce-tables", "Reference NIG/VG grids from the stored fitted parameters");
    for (auto* s : {fit, price, greeks, mc}) add_common(s, true);
    add_common(tables, false);
    mc->add_option("--seed", seed, "Overrides mc.seed");
    std::string gaussian = "sigma2";
    tables->add_option("--gaussian-column", gaussian, "Read the stored Gaussian column as sigma2 or as sigma")
        ->check(CLI::IsMember({"sigma2", "sigma"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? ok : config_error;
    }

    try {
        if (tables->parsed()) {
            InversionConfig inv;
            int n = threads.value_or(1);
            if (!config_path.empty()) {
                const RunConfig cfg = load_config(config_path);
                inv = cfg.inversion;
                if (!threads) n = cfg.threads;
            }
            Sink sink(out_path);
            cmd_reproduce_tables(inv, n, gaussian == "sigma", sink.stream(), out_path.empty() ? std::cerr : std::cout);
            return ok;
        }

        RunConfig cfg = load_config(config_path);
        if (threads) cfg.threads = *threads;
        if (seed) {
            if (!cfg.mc) throw ConfigError("--seed given but config has no 'mc' section");
            cfg.mc->seed = *seed;
        }
        Sink sink(out_path.empty() ? cfg.output : out_path);
        if (fit->parsed()) {
            cmd_fit(cfg, sink.stream(), out_path.empty() && cfg.output.empty() ? std::cerr : std::cout);
        } else if (price->parsed() || greeks->parsed()) {
            cmd_price(cfg, greeks->parsed(), sink.stream());
        } else if (mc->parsed()) {
            const int failures = cmd_mc_check(cfg, sink.stream());
            if (failures) std::cerr << failures << " row(s) outside 3 standard errors\n";
        }
        return ok;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const ValidationError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const UnsupportedError& e) {
        std::cerr << "unsupported: " << e.what() << '\n';
        return config_error;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return numerical_failure;
    }
}
