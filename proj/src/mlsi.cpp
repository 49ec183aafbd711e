#include "ineq/mlsi.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace ineq {

namespace {

// int_a^b e^{V(u)/(q-1)} du with respect to the density of nu.
double weight_integral(const PotentialSpec& nu, double a, double b, double q) {
    if (!(a < b)) return 0.0;
    if (a < nu.support_lo() || b > nu.support_hi()) return kInf;
    const double e = 1.0 / (q - 1.0);
    // Magnitude-scaled tolerance: the integrand peaks at an endpoint and can
    // be exponentially large, which an absolute tolerance cannot afford.
    const double peak =
        std::max(std::exp(e * nu.V(a)), std::exp(e * nu.V(b))) * (b - a);
    const double tol = std::max(1e-12, 1e-12 * peak);
    return integrate([&](double x) { return std::exp(e * nu.V(x)); }, a, b, tol);
}

double sup_abs_V(const PotentialSpec& mu, double a, double b) {
    double best = 0.0;
    const int n = 4096;
    for (int i = 0; i <= n; ++i) {
        const double x = a + (b - a) * i / n;
        best = std::max(best, std::abs(mu.V(x)));
    }
    return best;
}

// Supremum of x Phi''(x)/Phi'(x) on a wide log grid (the eta exponent).
double eta_estimate(const YoungFn& phi) {
    double best = 1.0;
    for (double x : log_grid(1e-6, 1e6, 64)) {
        const double d = phi.deriv(x);
        if (d > 0.0) best = std::max(best, x * phi.deriv2(x) / d);
    }
    return best;
}

struct RatioTrend {
    double slope = 0.0;     // extrapolated log-log growth rate
    double max_value = 0.0; // max of the ratio over the grid
    bool drift_ok = false;
    double r2_min = kInf;   // range of V''/V'^2 over the grid
    double r2_max = -kInf;
};

// Sample the ratio V/denominator(|V'|) on a deep geometric grid (potential
// levels ~13..1e5 above the start; everything here is symbolic, so depth is
// free) and fit the log-log slope, extrapolated from last half vs quarter.
// The depth matters for borderline pairs whose ratio tends to a constant
// with a slowly decaying power correction.
RatioTrend ratio_trend(const PotentialSpec& mu, const Fn& denom_of_vp) {
    RatioTrend out;
    const double start =
        std::max({mu.median(), mu.smooth_threshold(), 1e-3}) + 1e-3;
    const double vref = mu.V(start);
    const auto level = [&](double t) { return mu.V(start + t) - vref; };
    double t_lo, t_hi;
    try {
        t_lo = solve_increasing(level, 13.0, 1.0, 1e-10);
        t_hi = solve_increasing(level, 1e5, t_lo, 1e-10);
    } catch (const std::exception&) {
        return out; // potential does not reach the levels: no drift
    }

    const int n = 64;
    std::vector<double> lx, lr;
    out.drift_ok = true;
    const double shift =
        (mu.support_lo() < 0.0 && mu.support_hi() > 0.0) ? mu.V(0.0) : 0.0;
    for (double t : geom_grid(t_lo, t_hi, n)) {
        const double x = start + t;
        const double vp = mu.Vp(x);
        if (!(vp > 0.0)) { out.drift_ok = false; return out; }
        const double r2 = mu.Vpp(x) / (vp * vp);
        out.r2_min = std::min(out.r2_min, r2);
        out.r2_max = std::max(out.r2_max, r2);
        const double den = denom_of_vp(vp);
        const double r = (mu.V(x) - shift) / den;
        out.max_value = std::max(out.max_value, r);
        if (r > 0.0 && std::isfinite(r)) {
            lx.push_back(std::log(x));
            lr.push_back(std::log(r));
        }
    }
    if (lx.size() < 8) { out.drift_ok = false; return out; }

    const auto lsq_slope = [&](std::size_t from) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double cnt = static_cast<double>(lx.size() - from);
        for (std::size_t i = from; i < lx.size(); ++i) {
            sx += lx[i]; sy += lr[i];
            sxx += lx[i] * lx[i]; sxy += lx[i] * lr[i];
        }
        return (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    };
    const double s_half = lsq_slope(lx.size() / 2);
    const double s_quarter = lsq_slope(3 * lx.size() / 4);
    out.slope = 2.0 * s_quarter - s_half;
    return out;
}

constexpr double kSlopeTol = 0.02;

} // namespace

EpsilonCertificate epsilon_certificate(const PotentialSpec& mu, double q,
                                       double window_K) {
    const double m = mu.median();
    EpsilonCertificate cert;
    cert.q = q;
    cert.K = window_K;
    cert.C = sup_abs_V(mu, m, m + window_K);

    double delta = kInf;
    const double far = std::max(mu.trunc_hi(), m + window_K + 1.0);
    const int n = 4096;
    for (int i = 0; i <= n; ++i) {
        const double x = m + window_K + (far - m - window_K) * i / n;
        delta = std::min(delta, mu.Vp(x));
    }
    if (!(delta > 0.0))
        throw std::runtime_error("epsilon_certificate: no drift certificate");
    cert.delta = delta;
    cert.epsilon =
        1.0 / (1.0 / delta +
               window_K / (q - 1.0) * std::exp(2.0 * cert.C / (q - 1.0)));

    // Empirical infimum of (q-1) n(x)^{-1/(q-1)} / int_m^x n^{-1/(q-1)}.
    std::vector<double> xs;
    for (int j = 1; j <= 64; ++j) {
        const double u = 0.5 + 0.49 * j / 64.0;
        xs.push_back(mu.quantile(u));
    }
    for (int k = 2; k <= 40; ++k)
        xs.push_back(mu.quantile(1.0 - std::pow(2.0, -k)));
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    const double e = 1.0 / (q - 1.0);
    double cum = 0.0, prev = m, inf_ratio = kInf;
    for (double x : xs) {
        if (!(x > prev)) continue;
        const double piece_tol = std::max(
            1e-13, 1e-13 * std::exp(e * mu.V(x)) * (x - prev));
        cum += integrate([&](double u) { return std::exp(e * mu.V(u)); },
                         prev, x, piece_tol);
        prev = x;
        if (cum > 0.0)
            inf_ratio = std::min(
                inf_ratio, (q - 1.0) * std::exp(e * mu.V(x)) / cum);
    }
    cert.epsilon_grid = inf_ratio;
    return cert;
}

BqResult b_q(const PotentialSpec& mu, const PotentialSpec& nu, double q) {
    if (!(q >= 2.0)) throw std::invalid_argument("b_q: need q >= 2");
    const double m = mu.median();

    const auto integrand = [&](Side side) {
        return [&, side](double x) {
            const double t = mu.tail(x, side);
            if (!(t > 0.0)) return 0.0;
            const double w = side == Side::right
                                 ? weight_integral(nu, m, x, q)
                                 : weight_integral(nu, x, m, q);
            return t * std::log(1.0 / t) * std::pow(w, q - 1.0);
        };
    };
    const auto right = detail::criterion_sup(mu, Side::right, integrand(Side::right));
    const auto left = detail::criterion_sup(mu, Side::left, integrand(Side::left));

    BqResult res;
    CriterionReport& rep = res.report;
    rep.kind = CriterionKind::mlsi_q;
    rep.b_plus = right.value;
    rep.b_minus = left.value;
    rep.argmax_location = right.value >= left.value ? right.arg : left.arg;

    const bool diverges = detail::decide_divergence(
        mu, CriterionKind::mlsi_q, q,
        right.grid_trend_diverges || left.grid_trend_diverges,
        &rep.grid_evidence_only);
    const double best = std::max(rep.b_plus, rep.b_minus);
    rep.finite = !diverges;
    rep.lower_bound = best;
    if (diverges) {
        if (right.grid_trend_diverges || !left.grid_trend_diverges)
            rep.b_plus = kInf;
        if (left.grid_trend_diverges) rep.b_minus = kInf;
        rep.upper_bound = kInf;
    } else {
        rep.upper_bound = best;
    }

    const CriterionReport poi = poincare_bounds(mu, nu);
    const double cp_lo = std::max(poi.b_plus, poi.b_minus);
    res.kappa_upper =
        diverges || !poi.finite
            ? kInf
            : 235.0 * poi.upper_bound + std::pow(2.0, q + 1.0) * best;
    res.kappa_lower = 2.0 * cp_lo;

    try {
        const double K = mu.quantile(0.95) - m;
        res.certificate = epsilon_certificate(mu, q, K);
        res.has_certificate = true;
        const double eps = res.certificate.epsilon;
        const double term = 3.0 * std::min(std::pow(eps, q - 2.0), 1.0) /
                            (4.0 * std::pow(q - 1.0, q - 1.0)) * best;
        res.kappa_lower = std::max(res.kappa_lower, term);
    } catch (const std::exception&) {
        res.has_certificate = false;
    }
    return res;
}

VariationalPair gamma_beta(const YoungFn& phi, const Fn& density, double m,
                           double x, double a) {
    VariationalPair out;
    out.x = x;
    out.a = a;
    const auto G = [&](double lam) {
        return integrate(
            [&](double u) {
                const double n = density(u);
                if (!(n > 0.0)) return kInf;
                return right_derivative_inverse(phi, lam / n);
            },
            m, x, 1e-12);
    };
    if (!std::isfinite(G(1.0))) return out; // degenerate density
    out.gamma = solve_increasing(G, a, 1.0, 1e-10);
    out.beta = integrate(
        [&](double u) {
            const double n = density(u);
            if (!(n > 0.0)) return 0.0;
            return phi(right_derivative_inverse(phi, out.gamma / n)) * n;
        },
        m, x, 1e-12);
    return out;
}

double orlicz_gauge(const YoungFn& phi, const Fn& density, double m, double x) {
    const double lo = std::min(m, x), hi = std::max(m, x);
    const auto I = [&](double del) {
        const auto f = [&](double u) {
            const double n = density(u);
            if (!(n > 0.0)) return kInf;
            return 2.0 * right_derivative_inverse(phi, 1.0 / (del * n));
        };
        // The integrand peaks where the density is smallest (an endpoint);
        // scale the tolerance to keep huge off-solution integrals cheap.
        const double peak =
            std::max({f(lo), f(hi), f(0.5 * (lo + hi))});
        const double tol =
            std::isfinite(peak) ? std::max(1e-11, 1e-11 * peak) : 1e-11;
        return integrate(f, lo, hi, tol);
    };
    double d = 1.0;
    int guard = 0;
    while (I(d) > 1.0) {
        d *= 2.0;
        if (++guard > 2000) return kInf;
    }
    double dlo = d * 0.5;
    guard = 0;
    while (dlo > 0.0 && I(dlo) <= 1.0) {
        d = dlo;
        dlo *= 0.5;
        if (++guard > 2000) return d;
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (dlo + d);
        if (I(mid) <= 1.0)
            d = mid;
        else
            dlo = mid;
        if (d - dlo <= 1e-10 * d) break;
    }
    return d;
}

double gauge_upper_bound(const YoungFn& phi, const PotentialSpec& mu, double x,
                         double window_K) {
    const double m = mu.median();
    const double theta = phi.theta();
    if (!(x > m)) throw std::invalid_argument("gauge_upper_bound: need x > m");

    // Hypotheses beyond the window: V' > 0 and V''/V'^2 <= 1/theta.
    const double a = m + window_K;
    const double b = std::max({x * 1.25, mu.trunc_hi(), a + 1.0});
    const int n = 2048;
    for (int i = 0; i <= n; ++i) {
        const double t = a + (b - a) * i / n;
        const double vp = mu.Vp(t);
        if (!(vp > 0.0)) {
            std::ostringstream os;
            os << "gauge_upper_bound: V' <= 0 at x = " << t;
            throw std::runtime_error(os.str());
        }
        if (mu.Vpp(t) / (vp * vp) > 1.0 / theta + 1e-9) {
            std::ostringstream os;
            os << "gauge_upper_bound: V''/V'^2 > 1/theta at x = " << t;
            throw std::runtime_error(os.str());
        }
    }

    const double C = sup_abs_V(mu, m, a);
    const double window_branch = std::exp(C) / phi.deriv(1.0 / (4.0 * window_K));
    if (x <= a) return window_branch;
    const double tail_branch =
        std::exp(mu.V(x)) /
        phi.deriv(mu.Vp(x) / (4.0 * theta * (theta - 1.0)));
    return std::max(window_branch, tail_branch);
}

CPhiResult c_phi(const YoungFn& phi, const PotentialSpec& mu,
                 const PotentialSpec& nu) {
    const auto growth = check_growth(phi, 2.0, phi.theta());
    if (!growth.holds)
        throw std::invalid_argument("c_phi: envelope check failed: " +
                                    growth.which);
    const double m = mu.median();
    const Fn n_nu = [&](double u) { return nu.density(u); };

    const auto integrand = [&](Side side) {
        return [&, side](double x) {
            const double t = mu.tail(x, side);
            if (!(t > 0.0)) return 0.0;
            const double g = orlicz_gauge(phi, n_nu, m, x);
            return t * std::log(1.0 / t) * g;
        };
    };
    const auto right = detail::criterion_sup(mu, Side::right, integrand(Side::right));
    const auto left = detail::criterion_sup(mu, Side::left, integrand(Side::left));

    CPhiResult res;
    CriterionReport& rep = res.report;
    rep.kind = CriterionKind::mlsi_phi;
    rep.b_plus = right.value;
    rep.b_minus = left.value;
    rep.argmax_location = right.value >= left.value ? right.arg : left.arg;

    // Finiteness from the limsup classifier; grid trend only as fallback.
    bool diverges;
    const auto cls = classify_phi(mu, phi, ClassifyMode::critphi_sufficient);
    if (cls.verdict == Verdict::yes) {
        diverges = false;
    } else if (cls.verdict == Verdict::no) {
        diverges = true;
    } else {
        diverges = right.grid_trend_diverges || left.grid_trend_diverges;
        rep.grid_evidence_only = true;
    }
    if (mu.compact_support()) diverges = false;

    const double best = std::max(rep.b_plus, rep.b_minus);
    rep.finite = !diverges;
    rep.lower_bound = best;
    rep.upper_bound = diverges ? kInf : best;
    if (diverges) {
        if (right.grid_trend_diverges || !left.grid_trend_diverges)
            rep.b_plus = kInf;
        if (left.grid_trend_diverges) rep.b_minus = kInf;
    }

    const CriterionReport poi = poincare_bounds(mu, nu);
    res.kappa_lower = 2.0 * std::max(poi.b_plus, poi.b_minus);
    res.kappa_upper =
        diverges || !poi.finite
            ? kInf
            : 235.0 * poi.upper_bound +
                  16.0 * phi.theta() * phi(1.0) * best;
    return res;
}

AlphaTildeBound alpha_tilde_upper(const YoungFn& phi, const PotentialSpec& mu,
                                  double x, double x0) {
    if (std::isnan(x0)) x0 = mu.median();
    if (!(x > x0))
        throw std::invalid_argument("alpha_tilde_upper: need x > anchor");

    AlphaTildeBound out;
    out.x0 = x0;
    // Relative tolerance: during the bracketing search the mass can be huge,
    // and an absolute tolerance would force needless quadrature depth.
    const auto mass = [&](double c) {
        return integrate_rel(
            [&](double u) {
                return right_derivative_inverse(phi, c * std::exp(mu.V(u)));
            },
            x0, x, 1e-10);
    };
    out.c_x = solve_increasing(mass, 1.0, 1.0, 1e-10);
    const double c = out.c_x;

    // f_x on a fine grid: cumulative integral of Phi'^{-1}(c e^V).
    const int nn = 4096;
    std::vector<double> nodes(nn + 1), fvals(nn + 1);
    double cum = 0.0, prevt = x0, prevd = 0.0;
    for (int i = 0; i <= nn; ++i) {
        const double t = x0 + (x - x0) * i / nn;
        const double d = right_derivative_inverse(phi, c * std::exp(mu.V(t)));
        if (i > 0) cum += 0.5 * (prevd + d) * (t - prevt);
        nodes[i] = t;
        fvals[i] = cum;
        prevt = t;
        prevd = d;
    }
    const GridFunction f(nodes, fvals);

    const auto body = [&](double t) {
        const double fv = f(t);
        if (!(fv > 1e-280)) return 0.0;
        const double fp = right_derivative_inverse(phi, c * std::exp(mu.V(t)));
        const double r = fp / fv;
        if (r > 1e30) return 0.0; // vanishing-f spike, negligible mass
        return modification(phi, r) * fv * fv * mu.density(t);
    };
    out.value = integrate_rel(body, x0, x, 1e-10);

    const double vx = mu.V(x), vpx = mu.Vp(x);
    out.envelope = std::exp(-vx) * phi.deriv(vpx);
    out.ratio = out.envelope > 0.0 ? out.value / out.envelope : kInf;
    out.cx_bound_as_printed = c <= std::exp(-vx) * phi.deriv(2.0 * std::exp(vpx));
    out.cx_bound_tight = c <= std::exp(-vx) * phi.deriv(2.0 * vpx);
    return out;
}

Classification classify_q(const PotentialSpec& mu, double q) {
    Classification out;
    const auto trend =
        ratio_trend(mu, [q](double vp) { return std::pow(vp, q); });
    out.hyp_drift_ok = trend.drift_ok;
    if (!trend.drift_ok) {
        out.hypothesis_failure = "liminf V' > 0 fails";
        return out;
    }
    // Theorem-level condition lim V''/V'^2 = 0, checked as smallness far out.
    out.hyp_curvature_ok = std::max(std::abs(trend.r2_min),
                                    std::abs(trend.r2_max)) < 0.25;
    if (!out.hyp_curvature_ok) {
        out.hypothesis_failure = "V''/V'^2 not vanishing at infinity";
        return out;
    }
    out.slope = trend.slope;
    if (trend.slope > kSlopeTol) {
        out.verdict = Verdict::no;
        out.limsup_estimate = kInf;
    } else {
        out.verdict = Verdict::yes;
        out.limsup_estimate = trend.max_value;
    }
    return out;
}

Classification classify_phi(const PotentialSpec& mu, const YoungFn& phi,
                            ClassifyMode mode) {
    Classification out;
    const auto trend =
        ratio_trend(mu, [&phi](double vp) { return phi(vp); });
    out.hyp_drift_ok = trend.drift_ok;
    if (!trend.drift_ok) {
        out.hypothesis_failure = "liminf V' > 0 fails";
        return out;
    }
    const double cap = mode == ClassifyMode::critphi_necessary
                           ? 1.0 / std::max(phi.theta(), eta_estimate(phi))
                           : 1.0 / phi.theta();
    out.hyp_curvature_ok =
        trend.r2_min > -1.0 + 1e-12 && trend.r2_max < cap + 1e-9;
    if (!out.hyp_curvature_ok) {
        out.hypothesis_failure = "V''/V'^2 outside (-1, 1/theta) window";
        return out;
    }
    out.slope = trend.slope;
    if (trend.slope > kSlopeTol) {
        out.verdict = Verdict::no;
        out.limsup_estimate = kInf;
    } else {
        out.verdict = Verdict::yes;
        out.limsup_estimate = trend.max_value;
    }
    return out;
}

} // namespace ineq
