#include "ineq/young.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace ineq {

struct YoungFn::Impl {
    using Family = YoungFn::Family;
    virtual ~Impl() = default;
    virtual double value(double x) const = 0;
    virtual double deriv(double x) const = 0;
    virtual double deriv2(double x) const {
        const double h = 1e-6 * (std::abs(x) + 1.0);
        return (deriv(x + h) - deriv(std::max(0.0, x - h))) /
               (x + h - std::max(0.0, x - h));
    }
    virtual Family family() const = 0;
    // Closed-form conjugate / derivative-inverse when the family permits;
    // NaN means "use the generic path".
    virtual double closed_conjugate(double) const { return std::nan(""); }
    virtual double closed_deriv_inverse(double) const { return std::nan(""); }
    virtual double q() const { throw std::logic_error("not a power family"); }
};

namespace {

struct PowerImpl final : YoungFn::Impl {
    double q_, c_;
    bool scaled_;
    PowerImpl(double q, double c, bool scaled) : q_(q), c_(c), scaled_(scaled) {}
    double value(double x) const override { return c_ * std::pow(std::abs(x), q_); }
    double deriv(double x) const override { return c_ * q_ * std::pow(x, q_ - 1.0); }
    double deriv2(double x) const override {
        return c_ * q_ * (q_ - 1.0) * std::pow(x, q_ - 2.0);
    }
    Family family() const override {
        return scaled_ ? Family::ScaledPower : Family::Power;
    }
    double closed_conjugate(double y) const override {
        if (y <= 0) return 0.0;
        const double xs = std::pow(y / (c_ * q_), 1.0 / (q_ - 1.0));
        return xs * y - value(xs);
    }
    double closed_deriv_inverse(double lambda) const override {
        if (lambda <= 0) return 0.0;
        return std::pow(lambda / (c_ * q_), 1.0 / (q_ - 1.0));
    }
    double q() const override { return q_; }
};

struct PlusSquareImpl final : YoungFn::Impl {
    YoungFn base;
    explicit PlusSquareImpl(YoungFn b) : base(std::move(b)) {}
    double value(double x) const override { return base(x) + x * x; }
    double deriv(double x) const override { return base.deriv(x) + 2.0 * x; }
    double deriv2(double x) const override { return base.deriv2(x) + 2.0; }
    Family family() const override { return Family::PlusSquare; }
};

struct CustomImpl final : YoungFn::Impl {
    Fn v, d, d2;
    CustomImpl(Fn v_, Fn d_, Fn d2_)
        : v(std::move(v_)), d(std::move(d_)), d2(std::move(d2_)) {}
    double value(double x) const override { return v(std::abs(x)); }
    double deriv(double x) const override { return d(x); }
    double deriv2(double x) const override {
        return d2 ? d2(x) : Impl::deriv2(x);
    }
    Family family() const override { return Family::Custom; }
};

// Phi = f* + x^2 with f(x) = A x^beta below the knot and Psi beyond.
struct SplicedImpl final : YoungFn::Impl {
    PotentialHandle psi;
    double x1, beta, A, dknot;   // dknot = f'(x1) = Psi'(x1)

    SplicedImpl(PotentialHandle p, double knot, double b)
        : psi(std::move(p)), x1(knot), beta(b) {
        A = psi.value(x1) / std::pow(x1, beta);
        dknot = psi.deriv(x1);
    }

    double f(double x) const {
        x = std::abs(x);
        return x < x1 ? A * std::pow(x, beta) : psi.value(x);
    }
    // Inverse of f' (continuous increasing; C^1 at the knot by choice of beta).
    double f_deriv_inverse(double y) const {
        if (y <= 0) return 0.0;
        if (y <= dknot)
            return std::pow(y / (A * beta), 1.0 / (beta - 1.0));
        return solve_increasing([this](double x) { return psi.deriv(x); },
                                y, 2.0 * x1);
    }
    double fstar(double y) const {
        y = std::abs(y);
        if (y == 0.0) return 0.0;
        const double xs = f_deriv_inverse(y);
        return xs * y - f(xs);
    }

    double value(double x) const override { return fstar(x) + x * x; }
    double deriv(double x) const override { return f_deriv_inverse(x) + 2.0 * x; }
    Family family() const override { return Family::Spliced; }
};

} // namespace

YoungFn::YoungFn(std::shared_ptr<const Impl> impl, double alpha, double theta)
    : impl_(std::move(impl)), alpha_(alpha), theta_(theta) {}

YoungFn YoungFn::power(double q) {
    if (!(q > 1.0)) throw std::invalid_argument("power Young function needs q > 1");
    return YoungFn(std::make_shared<PowerImpl>(q, 1.0, false), q, q);
}

YoungFn YoungFn::scaled_power(double q, double c) {
    if (!(q > 1.0) || !(c > 0.0))
        throw std::invalid_argument("scaled power needs q > 1, c > 0");
    return YoungFn(std::make_shared<PowerImpl>(q, c, true), q, q);
}

YoungFn YoungFn::plus_square(const YoungFn& base) {
    return YoungFn(std::make_shared<PlusSquareImpl>(base),
                   std::min(2.0, base.alpha()), std::max(2.0, base.theta()));
}

YoungFn YoungFn::custom(Fn value, Fn deriv, Fn deriv2,
                        double alpha, double theta) {
    return YoungFn(std::make_shared<CustomImpl>(std::move(value), std::move(deriv),
                                                std::move(deriv2)),
                   alpha, theta);
}

double YoungFn::operator()(double x) const { return impl_->value(x); }
double YoungFn::deriv(double x) const { return x <= 0 ? 0.0 : impl_->deriv(x); }
double YoungFn::deriv2(double x) const { return impl_->deriv2(x); }
YoungFn::Family YoungFn::family() const { return impl_->family(); }
double YoungFn::power_exponent() const { return impl_->q(); }

double YoungFn::spliced_beta() const {
    const auto* s = dynamic_cast<const SplicedImpl*>(impl_.get());
    if (!s) throw std::logic_error("not a spliced Young function");
    return s->beta;
}

double conjugate(const YoungFn& phi, double y) {
    y = std::abs(y);
    if (y == 0.0) return 0.0;
    const double closed = phi.impl().closed_conjugate(y);
    if (!std::isnan(closed)) return closed;
    // First-order condition Phi'(x) = y, solved by bracketed bisection.
    double xs;
    try {
        xs = solve_increasing([&phi](double x) { return phi.deriv(x); }, y, 1.0);
    } catch (const std::runtime_error&) {
        throw std::runtime_error("conjugate: not superlinear");
    }
    return xs * y - phi(xs);
}

double right_derivative_inverse(const YoungFn& phi, double lambda) {
    if (lambda <= 0.0) return 0.0;
    const double closed = phi.impl().closed_deriv_inverse(lambda);
    if (!std::isnan(closed)) return closed;
    // Bracket by doubling, then safeguarded Newton (Phi' is increasing).
    double lo = 0.0, hi = 1.0;
    int guard = 0;
    while (phi.deriv(hi) < lambda) {
        lo = hi;
        hi *= 2.0;
        if (++guard > 4200)
            throw std::runtime_error("right_derivative_inverse: lambda above range");
    }
    double x = hi;
    for (int i = 0; i < 100; ++i) {
        const double g = phi.deriv(x) - lambda;
        if (g >= 0.0) hi = x; else lo = x;
        if (hi - lo <= 1e-13 * (hi + 1e-300)) break;
        const double d2 = phi.deriv2(x);
        double xn = (d2 > 0.0 && std::isfinite(d2)) ? x - g / d2
                                                    : 0.5 * (lo + hi);
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        if (std::abs(xn - x) <= 1e-14 * (std::abs(x) + 1e-300)) { x = xn; break; }
        x = xn;
    }
    return x;
}

double modification(const YoungFn& phi, double x) {
    const double ax = std::abs(x);
    if (ax <= 1.0) return ax * ax;
    return phi(ax) / phi(1.0);
}

double omega(const Fn& h, double t) {
    if (t <= 0.0) return 0.0;
    const auto ratio = [&](double s) {
        const double hs = h(s);
        if (!(hs > 0.0)) return 0.0;
        return h(t * s) / hs;
    };
    return sup_over_positive_reals(ratio);
}

double omega_conjugate(const Fn& h, double r) {
    if (r <= 0.0) return 0.0;
    // omega is convex superlinear; maximize r*t - omega(t) on a log grid,
    // extending the range until the objective decreases, then refine.
    const auto obj = [&](double t) { return r * t - omega(h, t); };
    double best = 0.0, barg = 0.0;
    double hi = 1e-6;
    for (int pass = 0; pass < 80; ++pass) {
        double lo = hi;
        hi *= 4.0;
        for (double t : geom_grid(lo, hi, 12)) {
            const double v = obj(t);
            if (v > best) { best = v; barg = t; }
        }
        if (barg > 0 && barg < lo / 4.0) break;   // maximum left behind
    }
    if (barg == 0.0) return 0.0;
    const double refined = golden_max(obj, barg / 4.0, barg * 4.0, 1e-12);
    return std::max(best, obj(refined));
}

GrowthVerdict check_growth(const YoungFn& phi, double alpha, double theta) {
    GrowthVerdict v;
    for (double x : log_grid(1e-6, 1e6, 512)) {
        const double p = phi(x);
        const double xd = x * phi.deriv(x);
        const double slack = 1e-9 * (std::abs(xd) + std::abs(p));
        if (xd + slack < alpha * p) {
            v.holds = false; v.x_fail = x;
            v.which = "x*Phi'(x) >= alpha*Phi(x)";
            return v;
        }
        if (xd - slack > theta * p) {
            v.holds = false; v.x_fail = x;
            v.which = "x*Phi'(x) <= theta*Phi(x)";
            return v;
        }
    }
    return v;
}

namespace {

// Max of table[i]*table[j]/table[i+j] over a shared multiplicative grid
// (exponent arithmetic keeps products exactly on the extended table).
// The scan covers arguments >= 1 only: for functions with different growth
// rates near 0 and at infinity the unrestricted sup is always infinite
// (x -> 0, y -> oo), while the constants are applied at arguments >= 1.
double grid_ratio_sup(const std::vector<double>& tab, int n, bool product_over) {
    // tab has 2n+1 entries for exponents [0, 2n]; scan i,j in [0, n].
    double best = 0.0;
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            const double num = product_over ? tab[i + j] : tab[i] * tab[j];
            const double den = product_over ? tab[i] * tab[j] : tab[i + j];
            if (den > 0.0 && std::isfinite(num))
                best = std::max(best, num / den);
        }
    }
    return best;
}

double stable_sup(const std::function<double(int)>& make_n) {
    const double a = make_n(128);
    const double b = make_n(192);
    if (!std::isfinite(b) || b > a * 1.01) return kInf;
    return b;
}

} // namespace

SubmultConstants submultiplicativity_constants(const YoungFn& phi) {
    SubmultConstants out;
    const double step = std::pow(10.0, 1.0 / 32.0);   // 32 points per decade

    const auto build = [&](const std::function<double(double)>& f, int n) {
        std::vector<double> tab(2 * n + 1);
        for (int k = 0; k <= 2 * n; ++k)
            tab[k] = f(std::pow(step, k));
        return tab;
    };

    out.Gamma = stable_sup([&](int n) {
        return grid_ratio_sup(build([&](double x) { return phi(x); }, n), n, false);
    });
    out.Gamma1 = stable_sup([&](int n) {
        return grid_ratio_sup(build([&](double x) { return phi.deriv(x); }, n), n,
                              false);
    });
    out.Gamma2 = stable_sup([&](int n) {
        return grid_ratio_sup(
            build([&](double x) { return right_derivative_inverse(phi, x); }, n),
            n, true);
    });
    out.Gamma3 = stable_sup([&](int n) {
        return grid_ratio_sup(build([&](double x) { return conjugate(phi, x); }, n),
                              n, true);
    });
    return out;
}

YoungFn build_phi_from_psi(const PotentialHandle& psi, double alpha, double x1) {
    if (!(psi.value(x1) > 1.0))
        throw std::invalid_argument("build_phi_from_psi: Psi(x1) <= 1");
    if (!(psi.deriv(x1) > 1.0))
        throw std::invalid_argument("build_phi_from_psi: Psi'(x1) <= 1");
    // Envelope alpha <= x Psi'/Psi <= 2 on [x1, +inf), checked on a grid.
    for (double x : geom_grid(x1, 1e4 * x1, 257)) {
        const double r = x * psi.deriv(x) / psi.value(x);
        if (r < alpha - 1e-8)
            throw std::invalid_argument(
                "build_phi_from_psi: Psi(x)/x^alpha not non-decreasing at x=" +
                std::to_string(x));
        if (r > 2.0 + 1e-8)
            throw std::invalid_argument(
                "build_phi_from_psi: Psi(x)/x^2 not non-increasing at x=" +
                std::to_string(x));
    }
    const double beta = x1 * psi.deriv(x1) / psi.value(x1);
    const double alpha_star = alpha / (alpha - 1.0);
    return YoungFn(std::make_shared<SplicedImpl>(psi, x1, beta), 2.0, alpha_star);
}

} // namespace ineq
