#include "ghe/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "ghe/errors.hpp"

namespace ghe {

namespace {

constexpr double kWeightSumTol = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw ValidationError(std::string(what) + " must be finite");
}

void validate_mixture(const ExpMixture& m, std::string_view side) {
    const std::string s(side);
    check_finite(m.intensity, "intensity");
    if (m.intensity < 0.0) throw ValidationError(s + " intensity must be >= 0");
    if (m.weights.size() != m.rates.size())
        throw ValidationError(s + " weights and rates differ in length");
    if (m.intensity > 0.0 && m.rates.empty())
        throw ValidationError(s + " intensity > 0 requires at least one component");
    if (m.rates.empty()) return;
    double sum = 0.0;
    for (std::size_t i = 0; i < m.rates.size(); ++i) {
        check_finite(m.weights[i], "weight");
        check_finite(m.rates[i], "rate");
        if (m.weights[i] < 0.0) throw ValidationError(s + " weights must be >= 0");
        if (m.rates[i] <= 0.0) throw ValidationError(s + " rates must be > 0");
        if (i > 0 && !(m.rates[i] > m.rates[i - 1]))
            throw ValidationError(s + " rates must be strictly increasing and distinct");
        sum += m.weights[i];
    }
    if (std::abs(sum - 1.0) > kWeightSumTol)
        throw ValidationError(s + " weights must sum to 1 (got " + std::to_string(sum) + ")");
}

ExpMixture drop_zero_weights(ExpMixture m) {
    if (m.intensity == 0.0) return ExpMixture{};
    ExpMixture out;
    out.intensity = m.intensity;
    for (std::size_t i = 0; i < m.rates.size(); ++i) {
        if (m.weights[i] > 0.0) {
            out.weights.push_back(m.weights[i]);
            out.rates.push_back(m.rates[i]);
        }
    }
    return out;
}

cplx mixture_exponent(const ExpMixture& m, cplx s, double sign) {
    // lambda * sum p_i (alpha_i / (alpha_i - sign*s) - 1)
    cplx acc = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const cplx den = m.rates[i] - sign * s;
        if (den == cplx(0.0)) throw DomainError("laplace_exponent: s is a pole");
        acc += m.weights[i] * (sign * s) / den;
    }
    return m.intensity * acc;
}

cplx mixture_exponent_derivative(const ExpMixture& m, cplx s, double sign) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const cplx den = m.rates[i] - sign * s;
        acc += m.weights[i] * m.rates[i] / (den * den);
    }
    return sign * m.intensity * acc;
}

double mixture_density(const ExpMixture& m, double y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) acc += m.weights[i] * m.rates[i] * std::exp(-m.rates[i] * y);
    return m.intensity * acc;
}

}  // namespace

double ExpMixture::min_rate() const {
    return rates.empty() ? std::numeric_limits<double>::infinity() : rates.front();
}

double ExpMixture::density(double y) const { return mixture_density(*this, y); }

HejdParams::HejdParams(double mu, double sigma2, ExpMixture up, ExpMixture down) {
    check_finite(mu, "mu");
    check_finite(sigma2, "sigma2");
    if (sigma2 < 0.0) throw ValidationError("sigma2 must be >= 0");
    validate_mixture(up, "up");
    validate_mixture(down, "down");
    mu_ = mu;
    sigma2_ = sigma2;
    up_ = drop_zero_weights(std::move(up));
    down_ = drop_zero_weights(std::move(down));
}

HejdParams HejdParams::with_drift(double mu) const {
    HejdParams p = *this;
    check_finite(mu, "mu");
    p.mu_ = mu;
    return p;
}

HejdParams HejdParams::with_sigma2(double sigma2) const {
    if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) throw ValidationError("sigma2 must be >= 0");
    HejdParams p = *this;
    p.sigma2_ = sigma2;
    return p;
}

HejdParams HejdParams::mirrored() const {
    HejdParams p = *this;
    p.mu_ = -mu_;
    std::swap(p.up_, p.down_);
    return p;
}

bool HejdParams::has_exponential_moment() const { return up_.empty() || up_.min_rate() > 1.0; }

void validate(const TargetModel& model) {
    std::visit(overloaded{
                   [](const KouModel& m) {
                       if (m.lambda_up < 0 || m.lambda_down < 0) throw ValidationError("Kou: intensities must be >= 0");
                       if (!(m.alpha_up > 0) || !(m.alpha_down > 0)) throw ValidationError("Kou: rates must be > 0");
                       if (m.sigma2 < 0) throw ValidationError("Kou: sigma2 must be >= 0");
                   },
                   [](const HyperExpModel& m) {
                       validate_mixture(m.up, "up");
                       validate_mixture(m.down, "down");
                       if (m.sigma2 < 0) throw ValidationError("HyperExp: sigma2 must be >= 0");
                   },
                   [](const KobolModel& m) {
                       if (!(m.C > 0) || !(m.G > 0) || !(m.M > 0))
                           throw ValidationError("KoBoL: C, G, M must be > 0");
                       if (!(m.Y >= 0.0 && m.Y < 2.0)) throw ValidationError("KoBoL: Y must lie in [0, 2)");
                       if (m.sigma2 < 0) throw ValidationError("KoBoL: sigma2 must be >= 0");
                   },
                   [](const NigModel& m) {
                       if (!(m.alpha > std::abs(m.beta))) throw ValidationError("NIG: alpha must exceed |beta|");
                       if (!(m.delta > 0) || !(m.C > 0)) throw ValidationError("NIG: delta and C must be > 0");
                       if (m.sigma2 < 0) throw ValidationError("NIG: sigma2 must be >= 0");
                   },
                   [](const MeixnerModel& m) {
                       if (!(m.delta > 0) || !(m.alpha > 0)) throw ValidationError("Meixner: delta, alpha must be > 0");
                       if (!(std::abs(m.beta) < std::numbers::pi))
                           throw ValidationError("Meixner: beta must lie in (-pi, pi)");
                       if (m.sigma2 < 0) throw ValidationError("Meixner: sigma2 must be >= 0");
                   },
               },
               model);
}

std::string model_name(const TargetModel& model) {
    return std::visit(overloaded{
                          [](const KouModel&) { return std::string("kou"); },
                          [](const HyperExpModel&) { return std::string("hyperexp"); },
                          [](const KobolModel& m) { return std::string(m.Y == 0.0 ? "vg" : "kobol"); },
                          [](const NigModel&) { return std::string("nig"); },
                          [](const MeixnerModel&) { return std::string("meixner"); },
                      },
                      model);
}

double gaussian_variance(const TargetModel& model) {
    return std::visit([](const auto& m) { return m.sigma2; }, model);
}

std::optional<double> explicit_drift(const TargetModel& model) {
    return std::visit([](const auto& m) { return m.drift; }, model);
}

bool is_hyper_exponential(const TargetModel& model) {
    return std::holds_alternative<KouModel>(model) || std::holds_alternative<HyperExpModel>(model);
}

HejdParams to_hejd(const TargetModel& model) {
    if (const auto* k = std::get_if<KouModel>(&model)) {
        ExpMixture up{k->lambda_up, {1.0}, {k->alpha_up}};
        ExpMixture down{k->lambda_down, {1.0}, {k->alpha_down}};
        return {k->drift.value_or(0.0), k->sigma2, up, down};
    }
    if (const auto* h = std::get_if<HyperExpModel>(&model)) return {h->drift.value_or(0.0), h->sigma2, h->up, h->down};
    throw UnsupportedError("to_hejd: " + model_name(model) + " is not hyper-exponential");
}

double levy_density(const HejdParams& params, double x) {
    if (x == 0.0) throw DomainError("levy_density: x = 0");
    return x > 0.0 ? mixture_density(params.up(), x) : mixture_density(params.down(), -x);
}

double levy_density(const TargetModel& model, double x) {
    if (x == 0.0) throw DomainError("levy_density: x = 0");
    const double y = std::abs(x);
    const bool up = x > 0.0;
    return std::visit(
        overloaded{
            [&](const KouModel& m) {
                return up ? m.lambda_up * m.alpha_up * std::exp(-m.alpha_up * y)
                          : m.lambda_down * m.alpha_down * std::exp(-m.alpha_down * y);
            },
            [&](const HyperExpModel& m) { return mixture_density(up ? m.up : m.down, y); },
            [&](const KobolModel& m) {
                const double rate = up ? m.M : m.G;
                return m.C * std::exp(-rate * y) / std::pow(y, m.Y + 1.0);
            },
            [&](const NigModel& m) {
                // k(x) = (C delta alpha / pi) e^{beta x} K_1(alpha |x|) / |x|
                const double pref = m.C * m.delta * m.alpha / std::numbers::pi;
                const double z = m.alpha * y;
                if (z < 100.0) return pref * std::exp(m.beta * x) * std::cyl_bessel_k(1.0, z) / y;
                // Large-argument expansion of K_1 with e^{-z} folded into the exponent.
                const double w = 1.0 / (8.0 * z);
                const double series = 1.0 + 3.0 * w * (1.0 - 5.0 * w / 2.0 * (1.0 - 21.0 * w / 3.0 * (1.0 - 45.0 * w / 4.0)));
                return pref * std::exp(m.beta * x - z) * std::sqrt(std::numbers::pi / (2.0 * z)) * series / y;
            },
            [&](const MeixnerModel& m) {
                const double a = std::numbers::pi * y / m.alpha;
                // delta e^{beta x / alpha} / (|x| sinh(pi |x| / alpha)), written with
                // e^{-a} to stay finite for large |x|.
                return 2.0 * m.delta * std::exp(m.beta * x / m.alpha - a) / (y * -std::expm1(-2.0 * a));
            },
        },
        model);
}

double representing_measure_density(const TargetModel& model, double u, Side side) {
    if (!(u > 0.0)) throw DomainError("representing_measure_density: u must be > 0");
    const bool up = side == Side::up;
    return std::visit(
        overloaded{
            [&](const KouModel&) -> double {
                throw UnsupportedError("Kou measure is atomic; use representing_measure");
            },
            [&](const HyperExpModel&) -> double {
                throw UnsupportedError("hyper-exponential measure is atomic; use representing_measure");
            },
            [&](const KobolModel& m) -> double {
                const double edge = up ? m.M : m.G;
                if (u < edge) return 0.0;
                return m.C * std::pow(u - edge, m.Y) / std::tgamma(1.0 + m.Y);
            },
            [&](const NigModel& m) -> double {
                const double shift = up ? m.beta : -m.beta;
                const double v = (u + shift) / m.alpha;
                if (v <= 1.0) return 0.0;
                return m.C * m.delta * m.alpha / std::numbers::pi * std::sqrt(v * v - 1.0);
            },
            [&](const MeixnerModel& m) -> double {
                // 2 delta * #{n >= 0 : u >= (2 pi n + pi -/+ beta) / alpha}
                const double b = up ? m.beta : -m.beta;
                const double first = (std::numbers::pi - b) / m.alpha;
                if (u < first) return 0.0;
                const double step = 2.0 * std::numbers::pi / m.alpha;
                const double count = std::floor((u - first) / step) + 1.0;
                return 2.0 * m.delta * count;
            },
        },
        model);
}

DiscreteMeasure representing_measure(const HejdParams& params, Side side) {
    const ExpMixture& m = params.side(side);
    DiscreteMeasure out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        out.locations.push_back(m.rates[i]);
        out.masses.push_back(m.intensity * m.weights[i] * m.rates[i]);
    }
    return out;
}

MeasureCheck validate_levy_measure(const DiscreteMeasure& up, const DiscreteMeasure& down) {
    MeasureCheck check;
    for (const DiscreteMeasure* m : {&up, &down}) {
        if (m->locations.size() != m->masses.size())
            throw ValidationError("validate_levy_measure: locations and masses differ in length");
        for (std::size_t i = 0; i < m->locations.size(); ++i) {
            const double u = m->locations[i];
            const double w = m->masses[i];
            if (!(u > 0.0)) throw ValidationError("validate_levy_measure: locations must be > 0");
            if (!(w > 0.0)) throw ValidationError("validate_levy_measure: masses must be > 0");
            if (i > 0 && !(u > m->locations[i - 1]))
                throw ValidationError("validate_levy_measure: locations must be strictly increasing");
            check.integral += w * std::min(1.0 / u, 1.0 / (u * u * u));
        }
    }
    check.finite = std::isfinite(check.integral);
    return check;
}

cplx laplace_exponent(const HejdParams& params, cplx s) {
    return params.mu() * s + 0.5 * params.sigma2() * s * s + mixture_exponent(params.up(), s, 1.0) +
           mixture_exponent(params.down(), s, -1.0);
}

cplx laplace_exponent_derivative(const HejdParams& params, cplx s) {
    return params.mu() + params.sigma2() * s + mixture_exponent_derivative(params.up(), s, 1.0) +
           mixture_exponent_derivative(params.down(), s, -1.0);
}

double martingale_drift(const HejdParams& params, double r, double d) {
    if (!params.has_exponential_moment())
        throw DomainError("martingale_drift: min(alpha_plus) <= 1, E[exp(X(1))] is infinite");
    const double jumps = laplace_exponent(params.with_drift(0.0).with_sigma2(0.0), cplx(1.0)).real();
    return r - d - 0.5 * params.sigma2() - jumps;
}

cplx jump_exponent(const TargetModel& model, cplx s) {
    return std::visit(
        overloaded{
            [&](const KouModel& m) -> cplx {
                return m.lambda_up * s / (m.alpha_up - s) - m.lambda_down * s / (m.alpha_down + s);
            },
            [&](const HyperExpModel& m) -> cplx {
                return mixture_exponent(m.up, s, 1.0) + mixture_exponent(m.down, s, -1.0);
            },
            [&](const KobolModel& m) -> cplx {
                if (m.Y == 0.0) return -m.C * (std::log(1.0 - s / m.M) + std::log(1.0 + s / m.G));
                if (m.Y == 1.0) throw UnsupportedError("jump_exponent: KoBoL with Y = 1");
                return m.C * std::tgamma(-m.Y) *
                       (std::pow(m.M - s, m.Y) - std::pow(m.M, m.Y) + std::pow(m.G + s, m.Y) - std::pow(m.G, m.Y));
            },
            [&](const NigModel& m) -> cplx {
                const double gamma = std::sqrt(m.alpha * m.alpha - m.beta * m.beta);
                const cplx bs = m.beta + s;
                return m.C * m.delta * (gamma - std::sqrt(m.alpha * m.alpha - bs * bs));
            },
            [&](const MeixnerModel& m) -> cplx {
                return 2.0 * m.delta * (std::log(std::cos(m.beta / 2.0)) - std::log(std::cos((m.alpha * s + m.beta) / 2.0)));
            },
        },
        model);
}

double target_martingale_drift(const TargetModel& model, double r, double d) {
    const double jumps = jump_exponent(model, cplx(1.0)).real();
    if (!std::isfinite(jumps)) throw DomainError("target_martingale_drift: E[exp(X(1))] is infinite");
    return r - d - 0.5 * gaussian_variance(model) - jumps;
}

cplx laplace_exponent(const TargetModel& model, cplx s, double r, double d) {
    const double b = explicit_drift(model).value_or(target_martingale_drift(model, r, d));
    return b * s + 0.5 * gaussian_variance(model) * s * s + jump_exponent(model, s);
}

}  // namespace ghe
