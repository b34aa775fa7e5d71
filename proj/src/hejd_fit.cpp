#include "ghe/hejd_fit.hpp"

#include <cmath>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ghe/errors.hpp"
#include "ghe/nnls.hpp"

namespace ghe {

namespace {

void check_grid(const std::vector<double>& g, const char* name) {
    if (g.empty()) throw ValidationError(std::string("fit: ") + name + " is empty");
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!(g[i] > 0.0) || !std::isfinite(g[i])) throw ValidationError(std::string("fit: ") + name + " entries must be > 0");
        if (i && !(g[i] > g[i - 1])) throw ValidationError(std::string("fit: ") + name + " must be strictly increasing");
    }
}

struct SideFit {
    ExpMixture mix;
    double sq_err = 0.0;
    double tail_err = 0.0;
};

SideFit fit_side(const TargetModel& target, const FitConfig& cfg, Side side) {
    const auto& alphas = side == Side::up ? cfg.alpha_plus_grid : cfg.alpha_minus_grid;
    std::vector<double> ys, wts;
    for (std::size_t k = 0; k < cfg.x_grid.size(); ++k) {
        const double x = cfg.x_grid[k];
        if ((side == Side::up) != (x > 0.0)) continue;
        ys.push_back(std::abs(x));
        wts.push_back(cfg.weighting == Weighting::user ? std::sqrt(cfg.user_weights[k]) : 1.0);
    }
    SideFit out;
    if (ys.empty()) return out;
    const double sign = side == Side::up ? 1.0 : -1.0;

    Eigen::MatrixXd A(ys.size(), alphas.size());
    Eigen::VectorXd b(ys.size());
    for (std::size_t k = 0; k < ys.size(); ++k) {
        b[k] = wts[k] * levy_density(target, sign * ys[k]);
        for (std::size_t i = 0; i < alphas.size(); ++i) A(k, i) = wts[k] * std::exp(-alphas[i] * ys[k]);
    }
    Eigen::VectorXd w = nnls(A, b, cfg.tolerance).x;
    // Round-off sized weights are dropped; each changes k_n by at most tolerance * max w.
    const double cut = cfg.tolerance * w.maxCoeff();
    for (Eigen::Index i = 0; i < w.size(); ++i)
        if (w[i] <= cut) w[i] = 0.0;

    double lam = 0.0;
    for (std::size_t i = 0; i < alphas.size(); ++i) lam += w[i] / alphas[i];
    if (lam > 0.0) {
        out.mix.intensity = lam;
        for (std::size_t i = 0; i < alphas.size(); ++i)
            if (w[i] > 0.0) {
                out.mix.rates.push_back(alphas[i]);
                out.mix.weights.push_back(w[i] / alphas[i] / lam);
            }
        double s = 0.0;
        for (double p : out.mix.weights) s += p;
        for (double& p : out.mix.weights) p /= s;
    } else if (b.cwiseAbs().maxCoeff() > 0.0) {
        throw NumericalError("fit: all-zero solution on the " + std::string(side == Side::up ? "up" : "down") +
                             " side; target density is negligible on the grid");
    }
    for (std::size_t k = 0; k < ys.size(); ++k) {
        const double e = levy_density(target, sign * ys[k]) - (out.mix.empty() ? 0.0 : out.mix.density(ys[k]));
        out.sq_err += e * e;
    }

    double ymax = 0.0;
    for (double y : ys) ymax = std::max(ymax, y);
    boost::math::quadrature::exp_sinh<double> tail;
    const double target_tail = tail.integrate([&](double t) { return levy_density(target, sign * (ymax + t)); });
    double fit_tail = 0.0;
    for (std::size_t i = 0; i < out.mix.size(); ++i)
        fit_tail += out.mix.intensity * out.mix.weights[i] * std::exp(-out.mix.rates[i] * ymax);
    out.tail_err = std::abs(target_tail - fit_tail);
    return out;
}

}  // namespace

std::vector<double> default_x_grid(int per_side, double lo, double hi) {
    if (per_side < 2 || !(lo > 0.0) || !(hi > lo)) throw ValidationError("default_x_grid: need per_side >= 2 and 0 < lo < hi");
    std::vector<double> pos(per_side);
    for (int k = 0; k < per_side; ++k) pos[k] = lo * std::pow(hi / lo, double(k) / (per_side - 1));
    std::vector<double> g;
    for (auto it = pos.rbegin(); it != pos.rend(); ++it) g.push_back(-*it);
    g.insert(g.end(), pos.begin(), pos.end());
    return g;
}

FitConfig make_fit_config(std::vector<double> alpha_plus, std::vector<double> alpha_minus) {
    FitConfig c;
    c.alpha_plus_grid = std::move(alpha_plus);
    c.alpha_minus_grid = std::move(alpha_minus);
    c.x_grid = default_x_grid();
    return c;
}

void validate(const FitConfig& cfg) {
    check_grid(cfg.alpha_plus_grid, "alpha_plus_grid");
    check_grid(cfg.alpha_minus_grid, "alpha_minus_grid");
    if (cfg.x_grid.empty()) throw ValidationError("fit: x_grid is empty");
    for (std::size_t i = 0; i < cfg.x_grid.size(); ++i) {
        if (cfg.x_grid[i] == 0.0 || !std::isfinite(cfg.x_grid[i])) throw ValidationError("fit: x_grid must exclude 0");
        if (i && !(cfg.x_grid[i] > cfg.x_grid[i - 1])) throw ValidationError("fit: x_grid must be strictly increasing");
    }
    if (cfg.weighting == Weighting::user) {
        if (cfg.user_weights.size() != cfg.x_grid.size())
            throw ValidationError("fit: user_weights must have one entry per x_grid point");
        for (double w : cfg.user_weights)
            if (!(w >= 0.0)) throw ValidationError("fit: user_weights must be >= 0");
    }
    if (!(cfg.tolerance > 0.0)) throw ValidationError("fit: tolerance must be > 0");
}

FitReport fit_hyperexp(const TargetModel& target, const FitConfig& cfg) {
    validate(target);
    validate(cfg);
    const SideFit up = fit_side(target, cfg, Side::up);
    const SideFit dn = fit_side(target, cfg, Side::down);
    if (up.mix.empty() && dn.mix.empty()) throw NumericalError("fit: all-zero solution");
    FitReport r;
    r.up = up.mix;
    r.down = dn.mix;
    r.rmse = std::sqrt((up.sq_err + dn.sq_err) / double(cfg.x_grid.size()));
    r.tail_mass_error = up.tail_err + dn.tail_err;
    return r;
}

std::pair<double, double> default_adjustment_interval(const FitConfig& cfg) {
    check_grid(cfg.alpha_plus_grid, "alpha_plus_grid");
    check_grid(cfg.alpha_minus_grid, "alpha_minus_grid");
    return {1.0 / cfg.alpha_minus_grid.front(), 1.0 / cfg.alpha_plus_grid.front()};
}

double gaussian_adjustment(const TargetModel& target, const ExpMixture& up, const ExpMixture& down,
                           std::pair<double, double> interval) {
    validate(target);
    const auto [v1, u1] = interval;
    if (!(v1 >= 0.0) || !(u1 >= 0.0)) throw ValidationError("gaussian_adjustment: interval must contain 0");
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    auto part = [&](double y, const ExpMixture& m, double sign) {
        const double kn = m.empty() ? 0.0 : m.density(y);
        return y * y * std::max(0.0, levy_density(target, sign * y) - kn);
    };
    double s2 = gaussian_variance(target);
    if (u1 > 0.0) s2 += GK::integrate([&](double y) { return part(y, up, 1.0); }, 0.0, u1, 15, 1e-8);
    if (v1 > 0.0) s2 += GK::integrate([&](double y) { return part(y, down, -1.0); }, 0.0, v1, 15, 1e-8);
    if (!std::isfinite(s2)) throw NumericalError("gaussian_adjustment: divergent integral");
    return s2;
}

HejdParams fit_model(const TargetModel& target, const FitConfig& cfg, double r, double d, FitReport& report) {
    report = fit_hyperexp(target, cfg);
    const double s2 = gaussian_adjustment(target, report.up, report.down, default_adjustment_interval(cfg));
    const HejdParams jumps(0.0, s2, report.up, report.down);
    return jumps.with_drift(martingale_drift(jumps, r, d));
}

HejdParams fit_model(const TargetModel& target, const FitConfig& cfg, double r, double d) {
    FitReport report;
    return fit_model(target, cfg, r, d, report);
}

}  // namespace ghe
