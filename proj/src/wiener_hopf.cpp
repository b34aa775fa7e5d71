#include "ghe/wiener_hopf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "ghe/errors.hpp"

namespace ghe {

namespace {

using Poly = std::vector<cplx>;  // lowest degree first

Poly mul_linear(const Poly& p, cplx c0, cplx c1) {
    // p(s) * (c0 + c1 s)
    Poly out(p.size() + 1, cplx(0.0));
    for (std::size_t k = 0; k < p.size(); ++k) {
        out[k] += c0 * p[k];
        out[k + 1] += c1 * p[k];
    }
    return out;
}

void add_into(Poly& acc, const Poly& p, cplx scale = 1.0) {
    if (acc.size() < p.size()) acc.resize(p.size(), cplx(0.0));
    for (std::size_t k = 0; k < p.size(); ++k) acc[k] += scale * p[k];
}

// One root of p by Laguerre's method, starting at x. Returns false when the
// iteration budget runs out.
bool laguerre(const Poly& a, cplx& x) {
    constexpr int kMr = 8;
    constexpr int kMt = 10;
    static const double frac[kMr + 1] = {0.0, 0.5, 0.25, 0.75, 0.13, 0.38, 0.62, 0.88, 1.0};
    const int m = static_cast<int>(a.size()) - 1;
    const double eps = std::numeric_limits<double>::epsilon();
    for (int iter = 1; iter <= kMr * kMt; ++iter) {
        cplx b = a[m];
        double err = std::abs(b);
        cplx d = 0.0;
        cplx f = 0.0;
        const double abx = std::abs(x);
        for (int j = m - 1; j >= 0; --j) {
            f = x * f + d;
            d = x * d + b;
            b = x * b + a[j];
            err = std::abs(b) + abx * err;
        }
        err *= eps;
        if (std::abs(b) <= err) return true;
        const cplx g = d / b;
        const cplx g2 = g * g;
        const cplx h = g2 - 2.0 * f / b;
        const cplx sq = std::sqrt(static_cast<double>(m - 1) * (static_cast<double>(m) * h - g2));
        cplx gp = g + sq;
        const cplx gm = g - sq;
        if (std::abs(gp) < std::abs(gm)) gp = gm;
        const cplx dx = std::abs(gp) > 0.0 ? static_cast<double>(m) / gp
                                           : std::polar(1.0 + abx, static_cast<double>(iter));
        const cplx x1 = x - dx;
        if (x == x1) return true;
        if (iter % kMt != 0)
            x = x1;
        else
            x -= frac[iter / kMt] * dx;
    }
    return false;
}

std::vector<cplx> polynomial_roots(const Poly& coeffs) {
    Poly a = coeffs;
    while (a.size() > 1 && a.back() == cplx(0.0)) a.pop_back();
    const int m = static_cast<int>(a.size()) - 1;
    std::vector<cplx> roots;
    roots.reserve(m);
    Poly ad = a;
    for (int j = m; j >= 1; --j) {
        cplx x = 0.0;
        Poly sub(ad.begin(), ad.begin() + j + 1);
        if (!laguerre(sub, x)) throw NumericalError("Laguerre iteration did not converge");
        if (std::abs(x.imag()) <= 2.0 * std::numeric_limits<double>::epsilon() * std::abs(x.real()))
            x = cplx(x.real(), 0.0);
        roots.push_back(x);
        cplx b = ad[j];
        for (int jj = j - 1; jj >= 0; --jj) {
            const cplx c = ad[jj];
            ad[jj] = b;
            b = x * b + c;
        }
    }
    // Polish against the undeflated polynomial.
    for (cplx& r : roots) laguerre(a, r);
    return roots;
}

cplx residual(const HejdParams& params, cplx s, cplx q) { return laplace_exponent(params, s) - q; }

// Newton steps on psi(s) - q itself, which is better conditioned than the
// expanded polynomial. Keeps the best iterate.
cplx polish_newton(const HejdParams& params, cplx s, cplx q) {
    cplx best = s;
    double best_res = std::abs(residual(params, s, q));
    for (int it = 0; it < 30 && best_res > 0.0; ++it) {
        const cplx f = residual(params, s, q);
        const cplx fp = laplace_exponent_derivative(params, s);
        if (fp == cplx(0.0)) break;
        const cplx step = f / fp;
        s -= step;
        const double res = std::abs(residual(params, s, q));
        if (res < best_res) {
            best_res = res;
            best = s;
        }
        if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(s)) break;
    }
    return best;
}

std::size_t expected_count(const HejdParams& params, Side side) {
    const std::size_t n = params.side(side).empty() ? 0 : params.side(side).size();
    if (params.sigma2() > 0.0) return n + 1;
    const double mu = params.mu();
    if (side == Side::up) return mu > 0.0 ? n + 1 : n;
    return mu < 0.0 ? n + 1 : n;
}

// Real roots of psi(s) = q on one half-line for real q > 0, one per interval
// between consecutive poles.
std::vector<double> real_roots_side(const HejdParams& params, double q, Side side) {
    const double sign = side == Side::up ? 1.0 : -1.0;
    const ExpMixture& mix = params.side(side);
    std::vector<double> poles = mix.empty() ? std::vector<double>{} : mix.rates;
    auto f = [&](double t) { return residual(params, cplx(sign * t), cplx(q)).real(); };

    const std::size_t want = expected_count(params, side);
    std::vector<double> out;
    boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 3);

    auto solve = [&](double lo, double hi) {
        std::uintmax_t iters = 200;
        auto r = boost::math::tools::toms748_solve(f, lo, hi, tol, iters);
        double t = 0.5 * (r.first + r.second);
        t = std::abs(polish_newton(params, cplx(sign * t), cplx(q)).real());
        out.push_back(t);
    };
    auto right_of_pole = [&](double p) {
        double d = 1e-13 * p;
        double lo = p + d;
        while (f(lo) >= 0.0 && d > 1e-300) {
            d *= 0.5;
            lo = p + d;
        }
        return lo;
    };
    auto left_of_pole = [&](double p) {
        double d = 1e-13 * p;
        double hi = p - d;
        while (f(hi) <= 0.0 && d > 1e-300) {
            d *= 0.5;
            hi = p - d;
        }
        return hi;
    };

    if (poles.empty()) {
        if (want == 0) return out;
        double hi = 1.0;
        for (int k = 0; k < 200 && f(hi) <= 0.0; ++k) hi *= 2.0;
        solve(0.0, hi);
        return out;
    }
    solve(0.0, left_of_pole(poles[0]));
    for (std::size_t i = 0; i + 1 < poles.size(); ++i) solve(right_of_pole(poles[i]), left_of_pole(poles[i + 1]));
    if (want > poles.size()) {
        const double lo = right_of_pole(poles.back());
        double hi = 2.0 * poles.back();
        for (int k = 0; k < 200 && f(hi) <= 0.0; ++k) hi *= 2.0;
        solve(lo, hi);
    }
    return out;
}

bool has_cluster(const std::vector<cplx>& rs) {
    for (std::size_t i = 0; i < rs.size(); ++i)
        for (std::size_t j = i + 1; j < rs.size(); ++j) {
            const double scale = std::max({1.0, std::abs(rs[i]), std::abs(rs[j])});
            if (std::abs(rs[i] - rs[j]) < 1e-9 * scale) return true;
        }
    return false;
}

struct RawSolve {
    RootFactorization f;
    bool ok = false;
    std::string why;
};

RawSolve solve_complex(const HejdParams& params, cplx q) {
    RawSolve out;
    out.f.q = q;
    std::vector<cplx> roots = polynomial_roots(cramer_polynomial(params, q));
    for (cplx& r : roots) r = polish_newton(params, r, q);
    if (has_cluster(roots)) {
        out.why = "clustered roots";
        return out;
    }
    for (const cplx& r : roots) {
        if (r.real() > 0.0)
            out.f.rho_plus.push_back(r);
        else if (r.real() < 0.0)
            out.f.rho_minus.push_back(r);
        else {
            out.why = "root on the imaginary axis";
            return out;
        }
    }
    if (out.f.rho_plus.size() != expected_count(params, Side::up) ||
        out.f.rho_minus.size() != expected_count(params, Side::down)) {
        std::ostringstream os;
        os << "root count " << out.f.rho_plus.size() << "+" << out.f.rho_minus.size() << ", expected "
           << expected_count(params, Side::up) << "+" << expected_count(params, Side::down);
        out.why = os.str();
        return out;
    }
    auto by_real = [](const cplx& a, const cplx& b) { return std::abs(a.real()) < std::abs(b.real()); };
    std::sort(out.f.rho_plus.begin(), out.f.rho_plus.end(), by_real);
    std::sort(out.f.rho_minus.begin(), out.f.rho_minus.end(), by_real);
    out.ok = true;
    return out;
}

double max_residual(const HejdParams& params, const RootFactorization& f) {
    double m = 0.0;
    for (const auto* rs : {&f.rho_plus, &f.rho_minus})
        for (const cplx& r : *rs) m = std::max(m, std::abs(residual(params, r, f.q)));
    return m;
}

}  // namespace

std::vector<cplx> cramer_polynomial(const HejdParams& params, cplx q) {
    const ExpMixture& up = params.up();
    const ExpMixture& dn = params.down();
    const std::size_t np = up.empty() ? 0 : up.size();
    const std::size_t nm = dn.empty() ? 0 : dn.size();

    Poly P{1.0};
    for (std::size_t i = 0; i < np; ++i) P = mul_linear(P, up.rates[i], -1.0);
    Poly N{1.0};
    for (std::size_t j = 0; j < nm; ++j) N = mul_linear(N, dn.rates[j], 1.0);

    Poly PN{1.0};
    {
        Poly tmp{0.0};
        tmp.assign(P.size() + N.size() - 1, cplx(0.0));
        for (std::size_t a = 0; a < P.size(); ++a)
            for (std::size_t b = 0; b < N.size(); ++b) tmp[a + b] += P[a] * N[b];
        PN = tmp;
    }
    const double lam = (np ? up.intensity : 0.0) + (nm ? dn.intensity : 0.0);
    Poly quad{-(lam + q), params.mu(), 0.5 * params.sigma2()};
    Poly acc;
    {
        Poly tmp(quad.size() + PN.size() - 1, cplx(0.0));
        for (std::size_t a = 0; a < quad.size(); ++a)
            for (std::size_t b = 0; b < PN.size(); ++b) tmp[a + b] += quad[a] * PN[b];
        acc = tmp;
    }
    for (std::size_t i = 0; i < np; ++i) {
        Poly t = N;
        for (std::size_t k = 0; k < np; ++k)
            if (k != i) t = mul_linear(t, up.rates[k], -1.0);
        add_into(acc, t, up.intensity * up.weights[i] * up.rates[i]);
    }
    for (std::size_t j = 0; j < nm; ++j) {
        Poly t = P;
        for (std::size_t k = 0; k < nm; ++k)
            if (k != j) t = mul_linear(t, dn.rates[k], 1.0);
        add_into(acc, t, dn.intensity * dn.weights[j] * dn.rates[j]);
    }
    // Trim exact zeros at the top (sigma2 = 0 and possibly mu = 0).
    while (acc.size() > 1 && acc.back() == cplx(0.0)) acc.pop_back();
    double amax = 0.0;
    for (const cplx& c : acc) amax = std::max(amax, std::abs(c));
    if (acc.size() <= 1 || amax == 0.0) throw NumericalError("cramer_polynomial: degenerate polynomial");
    return acc;
}

void compute_coefficients(const HejdParams& params, RootFactorization& f) {
    auto side_coeffs = [](const std::vector<cplx>& rho, const std::vector<double>& poles, double pole_sign) {
        // A_i = prod_v (1 - rho_i / (sign*alpha_v)) / prod_{v != i} (1 - rho_i / rho_v)
        std::vector<cplx> A(rho.size());
        for (std::size_t i = 0; i < rho.size(); ++i) {
            cplx lg = 0.0;
            for (double a : poles) lg += std::log(1.0 - rho[i] / (pole_sign * a));
            for (std::size_t v = 0; v < rho.size(); ++v)
                if (v != i) lg -= std::log(1.0 - rho[i] / rho[v]);
            A[i] = std::exp(lg);
        }
        return A;
    };
    const std::vector<double> none;
    f.A_plus = side_coeffs(f.rho_plus, params.up().empty() ? none : params.up().rates, 1.0);
    f.A_minus = side_coeffs(f.rho_minus, params.down().empty() ? none : params.down().rates, -1.0);
}

RootFactorization solve_roots(const HejdParams& params, cplx q) {
    if (!(q.real() > 0.0)) throw DomainError("solve_roots: Re q must be > 0");
    RootFactorization f;
    if (q.imag() == 0.0) {
        f.q = q;
        for (double t : real_roots_side(params, q.real(), Side::up)) f.rho_plus.emplace_back(t, 0.0);
        for (double t : real_roots_side(params, q.real(), Side::down)) f.rho_minus.emplace_back(-t, 0.0);
    } else {
        RawSolve raw = solve_complex(params, q);
        if (!raw.ok) {
            const cplx qp = q * cplx(1.0, 1e-7);
            RawSolve retry = solve_complex(params, qp);
            if (!retry.ok) {
                std::ostringstream os;
                os << "solve_roots failed at q = " << q << ": " << raw.why << "; retry at " << qp << ": "
                   << retry.why;
                throw NumericalError(os.str());
            }
            retry.f.perturbed = true;
            raw = std::move(retry);
        }
        f = std::move(raw.f);
    }
    compute_coefficients(params, f);
    f.residual_max = max_residual(params, f);
    // At far Bromwich nodes some roots sit within ~1/|q| of a pole, where a
    // correctly rounded root already leaves a residual of order eps |rho psi'(rho)|.
    const double tol = 1e-10 * std::max(1.0, std::abs(f.q));
    for (const auto* rs : {&f.rho_plus, &f.rho_minus})
        for (const cplx& r : *rs) {
            const double res = std::abs(residual(params, r, f.q));
            const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(r) *
                                 std::abs(laplace_exponent_derivative(params, r));
            if (!(res <= tol + floor)) {
                std::ostringstream os;
                os << "solve_roots: residual " << res << " exceeds " << tol + floor << " at root " << r
                   << ", q = " << q;
                throw NumericalError(os.str());
            }
        }
    return f;
}

cplx wh_factor_plus(const HejdParams& params, const RootFactorization& f, double u) {
    const cplx iu(0.0, u);
    cplx v = 1.0;
    if (!params.up().empty())
        for (double a : params.up().rates) v *= 1.0 - iu / a;
    for (const cplx& r : f.rho_plus) v /= 1.0 - iu / r;
    return v;
}

cplx wh_factor_minus(const HejdParams& params, const RootFactorization& f, double u) {
    const cplx iu(0.0, u);
    cplx v = 1.0;
    if (!params.down().empty())
        for (double a : params.down().rates) v *= 1.0 + iu / a;
    for (const cplx& r : f.rho_minus) v /= 1.0 - iu / r;
    return v;
}

cplx sup_dist_lt(const RootFactorization& f, double z) {
    if (z < 0.0) throw DomainError("sup_dist_lt: z must be >= 0");
    cplx s = 0.0;
    for (std::size_t i = 0; i < f.rho_plus.size(); ++i) s += f.A_plus[i] * std::exp(-f.rho_plus[i] * z);
    return (1.0 - s) / f.q;
}

cplx inf_dist_lt(const RootFactorization& f, double z) {
    if (z < 0.0) throw DomainError("inf_dist_lt: z must be >= 0");
    cplx s = 0.0;
    for (std::size_t j = 0; j < f.rho_minus.size(); ++j) s += f.A_minus[j] * std::exp(f.rho_minus[j] * z);
    return (1.0 - s) / f.q;
}

double sup_dist_lt(const HejdParams& params, double q, double z) {
    if (z < 0.0) throw DomainError("sup_dist_lt: z must be >= 0");
    return sup_dist_lt(solve_roots(params, q), z).real();
}

double inf_dist_lt(const HejdParams& params, double q, double z) {
    if (z < 0.0) throw DomainError("inf_dist_lt: z must be >= 0");
    return inf_dist_lt(solve_roots(params, q), z).real();
}

std::shared_ptr<const RootFactorization> RootCache::get(cplx q) {
    std::shared_ptr<Slot> slot;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto& s = slots_[{q.real(), q.imag()}];
        if (!s) s = std::make_shared<Slot>();
        slot = s;
    }
    std::call_once(slot->once, [&] {
        auto value = std::make_shared<const RootFactorization>(solve_roots(params_, q));
        std::lock_guard<std::mutex> lock(mutex_);
        ++solves_;
        slot->value = std::move(value);
    });
    return slot->value;
}

std::size_t RootCache::solve_count() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return solves_;
}

}  // namespace ghe
