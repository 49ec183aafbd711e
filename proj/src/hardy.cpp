#include "ineq/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace ineq {
namespace detail {

SideSup criterion_sup(const PotentialSpec& mu, Side side, const Fn& integrand) {
    const double m = mu.median();

    // Tail masses 2^-k (deep) and 1/2 - 2^-k (near the median), k = 1..40.
    std::vector<double> xs;
    for (int k = 1; k <= 40; ++k) {
        const double deep = std::pow(2.0, -k);
        const double shallow = 0.5 - deep;
        for (double t : {deep, shallow}) {
            if (!(t > 0.0 && t < 0.5)) continue;
            const double u = side == Side::right ? 1.0 - t : t;
            const double x = mu.quantile(u);
            if ((side == Side::right && x > m) || (side == Side::left && x < m))
                xs.push_back(x);
        }
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    SideSup out;
    if (xs.empty()) return out;

    std::vector<double> vals(xs.size());
    std::size_t best = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        vals[i] = integrand(xs[i]);
        if (vals[i] > vals[best]) best = i;
    }
    out.value = vals[best];
    out.arg = xs[best];

    // Golden refinement between the grid neighbors of the best point.
    const double lo = best > 0 ? xs[best - 1] : xs[best];
    const double hi = best + 1 < xs.size() ? xs[best + 1] : xs[best];
    if (lo < hi) {
        const double xstar = golden_max(integrand, lo, hi, 1e-10);
        const double v = integrand(xstar);
        if (v > out.value) { out.value = v; out.arg = xstar; }
    }

    // Growth trend at the deepest quantiles (largest |x - m|).
    std::vector<double> deep_vals;
    if (side == Side::right)
        deep_vals.assign(vals.end() - std::min<std::size_t>(5, vals.size()),
                         vals.end());
    else {
        deep_vals.assign(vals.begin(),
                         vals.begin() + std::min<std::size_t>(5, vals.size()));
        std::reverse(deep_vals.begin(), deep_vals.end());
    }
    bool growing = deep_vals.size() >= 3;
    for (std::size_t i = 1; i < deep_vals.size(); ++i)
        growing = growing && deep_vals[i] >= deep_vals[i - 1];
    if (deep_vals.size() >= 2)
        growing = growing &&
                  deep_vals.back() > deep_vals[deep_vals.size() - 2] * 1.01;
    out.grid_trend_diverges = growing;
    return out;
}

int surrogate_divergence(const PotentialSpec& mu, CriterionKind kind,
                         double exponent_parameter) {
    if (mu.compact_support()) return -1;
    if (mu.family() == PotentialSpec::Family::Custom) return 0;
    const double P = mu.leading_exponent();
    if (!(P > 0.0)) return +1;
    // Criterion integrand behaves like x^e with the exponents below.
    double e;
    switch (kind) {
        case CriterionKind::hardy:
            e = -(P - 1.0) * exponent_parameter;
            break;
        case CriterionKind::poincare:
            e = 2.0 - 2.0 * P;
            break;
        case CriterionKind::log_sobolev:
            e = 2.0 - P;
            break;
        case CriterionKind::mlsi_q:
            e = P - (P - 1.0) * exponent_parameter;
            break;
        default:
            return 0;
    }
    return e > 1e-12 ? +1 : -1;
}

bool decide_divergence(const PotentialSpec& mu, CriterionKind kind,
                       double exponent_parameter, bool grid_trend,
                       bool* grid_evidence_only) {
    const int s = surrogate_divergence(mu, kind, exponent_parameter);
    if (grid_evidence_only) *grid_evidence_only = (s == 0);
    if (s == +1) return true;
    if (s == -1) return false;
    return grid_trend;
}

} // namespace detail

namespace {

// int_a^b n^{-1/(p-1)} for the density n of nu (p = 2 gives int 1/n).
double inverse_density_integral(const PotentialSpec& nu, double a, double b,
                                double p) {
    if (!(a < b)) return 0.0;
    const double e = 1.0 / (p - 1.0);
    if (a < nu.support_lo() || b > nu.support_hi()) return kInf;
    // The integrand peaks at an endpoint (V is unimodal); scale the quadrature
    // tolerance by the magnitude so deep-tail weights stay cheap.
    const double peak =
        std::max(std::exp(e * nu.V(a)), std::exp(e * nu.V(b))) * (b - a);
    const double tol = std::max(1e-12, 1e-12 * peak);
    return integrate([&](double x) { return std::exp(e * nu.V(x)); }, a, b, tol);
}

CriterionReport weighted_two_sided(const PotentialSpec& mu,
                                   const PotentialSpec& nu,
                                   CriterionKind kind, bool log_weight) {
    const double m = mu.median();

    const auto integrand = [&](Side side) {
        return [&, side](double x) {
            const double t = mu.tail(x, side);
            if (!(t > 0.0)) return 0.0;
            const double w = side == Side::right
                                 ? inverse_density_integral(nu, m, x, 2.0)
                                 : inverse_density_integral(nu, x, m, 2.0);
            const double weight = log_weight ? std::log(1.0 / t) : 1.0;
            return t * weight * w;
        };
    };

    const auto right = detail::criterion_sup(mu, Side::right, integrand(Side::right));
    const auto left = detail::criterion_sup(mu, Side::left, integrand(Side::left));

    CriterionReport rep;
    rep.kind = kind;
    rep.b_plus = right.value;
    rep.b_minus = left.value;
    rep.argmax_location = right.value >= left.value ? right.arg : left.arg;

    const bool diverges = detail::decide_divergence(
        mu, kind, 0.0, right.grid_trend_diverges || left.grid_trend_diverges,
        &rep.grid_evidence_only);
    const double best = std::max(rep.b_plus, rep.b_minus);
    if (diverges) {
        rep.b_plus = right.grid_trend_diverges ? kInf : rep.b_plus;
        rep.b_minus = left.grid_trend_diverges ? kInf : rep.b_minus;
        if (!right.grid_trend_diverges && !left.grid_trend_diverges)
            rep.b_plus = kInf;   // surrogate-only divergence
        rep.lower_bound = best;
        rep.upper_bound = kInf;
        rep.finite = false;
    } else {
        rep.lower_bound = best;
        rep.upper_bound = log_weight ? best : 4.0 * best;
        rep.finite = true;
    }
    return rep;
}

} // namespace

CriterionReport muckenhoupt(const PotentialSpec& mu, const PotentialSpec& nu,
                            double p) {
    if (!(p > 1.0)) throw std::invalid_argument("muckenhoupt: need p > 1");

    const double lo = std::max(0.0, mu.support_lo());
    const double hi = std::min(mu.trunc_hi(), nu.support_hi());

    const auto integrand = [&](double x) {
        const double t = mu.tail(x, Side::right);
        if (!(t > 0.0)) return 0.0;
        const double w = inverse_density_integral(nu, lo, x, p);
        return t * std::pow(w, p - 1.0);
    };

    // Quantile grid of mu restricted to x > 0, refined around the best.
    std::vector<double> xs;
    for (int k = 1; k <= 40; ++k) {
        for (double t : {std::pow(2.0, -k), 0.5 - std::pow(2.0, -k),
                         1.0 - std::pow(2.0, -k)}) {
            if (!(t > 0.0 && t < 1.0)) continue;
            const double x = mu.quantile(t);
            if (x > lo && x < hi) xs.push_back(x);
        }
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    CriterionReport rep;
    rep.kind = CriterionKind::hardy;
    if (xs.empty()) return rep;

    std::vector<double> vals(xs.size());
    std::size_t best = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        vals[i] = integrand(xs[i]);
        if (vals[i] > vals[best]) best = i;
    }
    double B = vals[best];
    double arg = xs[best];
    const double rlo = best > 0 ? xs[best - 1] : xs[best];
    const double rhi = best + 1 < xs.size() ? xs[best + 1] : xs[best];
    if (rlo < rhi) {
        const double xstar = golden_max(integrand, rlo, rhi, 1e-10);
        const double v = integrand(xstar);
        if (v > B) { B = v; arg = xstar; }
    }

    bool growing = vals.size() >= 3;
    for (std::size_t i = vals.size() - std::min<std::size_t>(5, vals.size()) + 1;
         i < vals.size() && growing; ++i)
        growing = vals[i] >= vals[i - 1];
    growing = growing && vals.back() > vals[vals.size() - 2] * 1.01;

    const bool diverges = detail::decide_divergence(
        mu, CriterionKind::hardy, p, growing, &rep.grid_evidence_only);

    rep.b_plus = diverges ? kInf : B;
    rep.b_minus = 0.0;
    rep.argmax_location = arg;
    rep.lower_bound = B;
    rep.upper_bound =
        diverges ? kInf
                 : std::pow(p, p) / std::pow(p - 1.0, p - 1.0) * B;
    rep.finite = !diverges;
    return rep;
}

CriterionReport poincare_bounds(const PotentialSpec& mu,
                                const PotentialSpec& nu) {
    return weighted_two_sided(mu, nu, CriterionKind::poincare, false);
}

CriterionReport bobkov_gotze(const PotentialSpec& mu, const PotentialSpec& nu) {
    return weighted_two_sided(mu, nu, CriterionKind::log_sobolev, true);
}

} // namespace ineq
