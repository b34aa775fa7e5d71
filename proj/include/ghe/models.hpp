#pragma once

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ghe {

using cplx = std::complex<double>;

enum class Side { up, down };

/// One half-axis of a hyper-exponential jump law: jumps arrive at rate
/// `intensity`; a jump is exponential with rate `rates[i]` with probability
/// `weights[i]`.
struct ExpMixture {
    double intensity = 0.0;
    std::vector<double> weights;
    std::vector<double> rates;

    std::size_t size() const { return rates.size(); }
    bool empty() const { return rates.empty() || intensity == 0.0; }
    double min_rate() const;

    /// Density restricted to the half-axis, evaluated at y > 0.
    double density(double y) const;
};

/// Hyper-exponential jump-diffusion: drift, Gaussian variance and one
/// exponential mixture per direction. Validated on construction; components
/// with zero weight are removed.
class HejdParams {
public:
    HejdParams() = default;
    HejdParams(double mu, double sigma2, ExpMixture up, ExpMixture down);

    double mu() const { return mu_; }
    double sigma2() const { return sigma2_; }
    const ExpMixture& up() const { return up_; }
    const ExpMixture& down() const { return down_; }
    const ExpMixture& side(Side s) const { return s == Side::up ? up_ : down_; }

    HejdParams with_drift(double mu) const;
    HejdParams with_sigma2(double sigma2) const;
    /// Parameters of -X: mixtures swapped, drift negated.
    HejdParams mirrored() const;

    /// True when min(alpha_plus) > 1, i.e. E[exp(X(1))] is finite.
    bool has_exponential_moment() const;

private:
    double mu_ = 0.0;
    double sigma2_ = 0.0;
    ExpMixture up_;
    ExpMixture down_;
};

struct KouModel {
    double lambda_up = 0.0;
    double alpha_up = 1.0;
    double lambda_down = 0.0;
    double alpha_down = 1.0;
    double sigma2 = 0.0;
    std::optional<double> drift;
};

struct HyperExpModel {
    ExpMixture up;
    ExpMixture down;
    double sigma2 = 0.0;
    std::optional<double> drift;
};

/// KoBoL / CGMY; Y = 0 is variance gamma.
struct KobolModel {
    double C = 1.0;
    double G = 1.0;
    double M = 1.0;
    double Y = 0.0;
    double sigma2 = 0.0;
    std::optional<double> drift;
};

struct NigModel {
    double alpha = 1.0;
    double beta = 0.0;
    double delta = 1.0;
    double C = 1.0;
    double sigma2 = 0.0;
    std::optional<double> drift;
};

struct MeixnerModel {
    double delta = 1.0;
    double alpha = 1.0;
    double beta = 0.0;
    double sigma2 = 0.0;
    std::optional<double> drift;
};

using TargetModel = std::variant<KouModel, HyperExpModel, KobolModel, NigModel, MeixnerModel>;

inline KobolModel make_vg(double C, double G, double M) { return KobolModel{C, G, M, 0.0, 0.0, {}}; }

/// Throws ValidationError if the target's parameters violate their invariants.
void validate(const TargetModel& model);

std::string model_name(const TargetModel& model);
double gaussian_variance(const TargetModel& model);
std::optional<double> explicit_drift(const TargetModel& model);

/// True for Kou / HyperExp targets, whose representing measures are atomic.
bool is_hyper_exponential(const TargetModel& model);
/// The HEJD equivalent of a Kou / HyperExp target (drift taken from the target,
/// zero if unset). Throws UnsupportedError for other models.
HejdParams to_hejd(const TargetModel& model);

/// Lévy density k(x). Throws DomainError at x = 0.
double levy_density(const TargetModel& model, double x);
double levy_density(const HejdParams& params, double x);

/// Density at u > 0 of the measure mu_+ (side up) or of the reflection of
/// mu_- (side down), so that k(x) = int exp(-u|x|) mu(du) on each half-axis.
/// Only for absolutely continuous measures (KoBoL, NIG, Meixner).
double representing_measure_density(const TargetModel& model, double u, Side side);

struct DiscreteMeasure {
    std::vector<double> locations;
    std::vector<double> masses;
};

/// Atoms of the representing measure of one side of an HEJD law:
/// locations alpha_i, masses lambda p_i alpha_i.
DiscreteMeasure representing_measure(const HejdParams& params, Side side);

struct MeasureCheck {
    double integral = 0.0;
    bool finite = true;
};

/// Evaluates int min(1/|u|, 1/|u|^3) mu(du) over both sides, the condition for
/// the mixture in k to be a Lévy density.
MeasureCheck validate_levy_measure(const DiscreteMeasure& up, const DiscreteMeasure& down);

/// psi(s) = log E[exp(s X(1))], analytically continued. Throws DomainError at a pole.
cplx laplace_exponent(const HejdParams& params, cplx s);
cplx laplace_exponent_derivative(const HejdParams& params, cplx s);

/// Drift making psi(1) = r - d. The drift stored in `params` is ignored.
double martingale_drift(const HejdParams& params, double r, double d);

/// Exponent of the pure-jump part of a target model (no drift, no Gaussian part).
/// KoBoL with 1 < Y < 2 and NIG use their usual centred closed forms.
cplx jump_exponent(const TargetModel& model, cplx s);

/// Drift b making b + sigma2/2 + jump_exponent(1) = r - d.
double target_martingale_drift(const TargetModel& model, double r, double d);

/// Full exponent of the target: drift (explicit or martingale) + Gaussian + jumps.
cplx laplace_exponent(const TargetModel& model, cplx s, double r, double d);

}  // namespace ghe
