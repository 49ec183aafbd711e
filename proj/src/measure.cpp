#include "ineq/measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ineq {

// ---------------------------------------------------------------------------
// GridFunction
// ---------------------------------------------------------------------------

GridFunction::GridFunction(std::vector<double> n, std::vector<double> v)
    : nodes(std::move(n)), values(std::move(v)) {
    if (nodes.size() != values.size() || nodes.size() < 2)
        throw std::invalid_argument("GridFunction: need matching vectors, >= 2 nodes");
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (!(nodes[i] > nodes[i - 1]))
            throw std::invalid_argument("GridFunction: nodes not strictly increasing");
}

double GridFunction::operator()(double x) const {
    if (x <= nodes.front()) return values.front();
    if (x >= nodes.back()) return values.back();
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - nodes.begin()) - 1;
    const double t = (x - nodes[i]) / (nodes[i + 1] - nodes[i]);
    return values[i] + t * (values[i + 1] - values[i]);
}

// ---------------------------------------------------------------------------
// PotentialSpec
// ---------------------------------------------------------------------------

double PotentialSpec::V0(double x) const {
    switch (family_) {
        case Family::Gaussian: return 0.5 * x * x;
        case Family::DoubleExp: return std::abs(x);
        case Family::Uniform: return 0.0;
        default: break;
    }
    double v = 0.0;
    for (const auto& t : terms_) v += t.coeff * std::pow(std::abs(x), t.exponent);
    return v;
}

double PotentialSpec::V0p(double x) const {
    switch (family_) {
        case Family::Gaussian: return x;
        case Family::DoubleExp: return x >= 0 ? 1.0 : -1.0;
        case Family::Uniform: return 0.0;
        default: break;
    }
    const double s = x >= 0 ? 1.0 : -1.0;
    double v = 0.0;
    for (const auto& t : terms_)
        v += s * t.coeff * t.exponent * std::pow(std::abs(x), t.exponent - 1.0);
    return v;
}

double PotentialSpec::V0pp(double x) const {
    switch (family_) {
        case Family::Gaussian: return 1.0;
        case Family::DoubleExp: return 0.0;
        case Family::Uniform: return 0.0;
        default: break;
    }
    double v = 0.0;
    for (const auto& t : terms_)
        v += t.coeff * t.exponent * (t.exponent - 1.0) *
             std::pow(std::abs(x), t.exponent - 2.0);
    return v;
}

double PotentialSpec::V(double x) const { return V0(x) + logZ_; }
double PotentialSpec::Vp(double x) const { return V0p(x); }
double PotentialSpec::Vpp(double x) const { return V0pp(x); }

double PotentialSpec::density(double x) const {
    if (x < support_lo_ || x > support_hi_) return 0.0;
    return std::exp(-V(x));
}

double PotentialSpec::leading_exponent() const {
    switch (family_) {
        case Family::Gaussian: return 2.0;
        case Family::DoubleExp: return 1.0;
        case Family::Uniform: return kInf;   // compact support
        default: break;
    }
    double lead = 0.0;
    for (const auto& t : terms_)
        if (t.coeff > 0.0) lead = std::max(lead, t.exponent);
    return lead;
}

bool PotentialSpec::compact_support() const {
    return std::isfinite(support_lo_) && std::isfinite(support_hi_);
}

void PotentialSpec::finalize() {
    // Truncation: march outwards until the unnormalized density drops
    // below e^{-60} of its central scale, with the potential increasing.
    const double anchor = std::clamp(0.0, support_lo_, support_hi_);
    const double vref = V0(anchor);
    const auto march = [&](double dir) {
        double x = anchor + dir;
        int guard = 0;
        while (V0(x) - vref < 60.0 || dir * V0p(x) <= 0.0) {
            x += dir * std::abs(x - anchor);
            if (++guard > 300)
                throw std::invalid_argument("potential: non-integrable tail");
        }
        return x;
    };
    trunc_lo_ = std::isfinite(support_lo_) ? support_lo_ : march(-1.0);
    trunc_hi_ = std::isfinite(support_hi_) ? support_hi_ : march(1.0);

    Z_ = integrate([this](double x) { return std::exp(-V0(x)); },
                   trunc_lo_, trunc_hi_, 1e-13);
    if (!(Z_ > 0.0) || !std::isfinite(Z_))
        throw std::invalid_argument("potential: normalization is not finite/positive");
    logZ_ = std::log(Z_);

    // Median by bisection on the CDF.
    double lo = trunc_lo_, hi = trunc_hi_;
    for (int i = 0; i < 120; ++i) {
        const double mid = 0.5 * (lo + hi);
        (tail(mid, Side::left) < 0.5 ? lo : hi) = mid;
        if (hi - lo < 1e-12 * (std::abs(lo) + std::abs(hi) + 1.0)) break;
    }
    median_ = 0.5 * (lo + hi);
}

PotentialSpec PotentialSpec::power_law(double p) {
    if (!(p > 0.0)) throw std::invalid_argument("power_law: need p > 0");
    PotentialSpec m;
    m.family_ = Family::PowerLaw;
    m.terms_ = {{1.0, p}};
    m.finalize();
    return m;
}

PotentialSpec PotentialSpec::gaussian() {
    PotentialSpec m;
    m.family_ = Family::Gaussian;
    m.finalize();
    return m;
}

PotentialSpec PotentialSpec::double_exp() {
    PotentialSpec m;
    m.family_ = Family::DoubleExp;
    m.finalize();
    return m;
}

PotentialSpec PotentialSpec::uniform(double a, double b) {
    if (!(a < b)) throw std::invalid_argument("uniform: need a < b");
    PotentialSpec m;
    m.family_ = Family::Uniform;
    m.support_lo_ = a;
    m.support_hi_ = b;
    m.finalize();
    return m;
}

PotentialSpec PotentialSpec::custom(std::vector<Term> terms,
                                    double support_lo, double support_hi,
                                    double smooth_threshold) {
    PotentialSpec m;
    m.family_ = Family::Custom;
    m.terms_ = std::move(terms);
    for (const auto& t : m.terms_)
        if (!(t.exponent >= 1.0) && t.coeff != 0.0)
            throw std::invalid_argument("custom: term exponents must be >= 1");
    m.support_lo_ = support_lo;
    m.support_hi_ = support_hi;
    m.smooth_threshold_ = smooth_threshold;
    m.finalize();
    return m;
}

double PotentialSpec::integrate_density_weighted(const Fn& f, double a, double b,
                                                 double abs_tol) const {
    a = std::max(a, trunc_lo_);
    b = std::min(b, trunc_hi_);
    if (!(a < b)) return 0.0;
    return integrate([&](double x) { return f(x) * density(x); }, a, b, abs_tol);
}

double PotentialSpec::tail(double x, Side side) const {
    double v;
    if (side == Side::right) {
        if (x <= trunc_lo_) return 1.0;
        if (x >= trunc_hi_) return 0.0;
        v = integrate([this](double t) { return density(t); }, x, trunc_hi_, 1e-12);
        if (v < 1e-3 && v > 0.0)   // refine small tails to relative accuracy
            v = integrate([this](double t) { return density(t); }, x, trunc_hi_,
                          v * 1e-8);
    } else {
        if (x >= trunc_hi_) return 1.0;
        if (x <= trunc_lo_) return 0.0;
        v = integrate([this](double t) { return density(t); }, trunc_lo_, x, 1e-12);
        if (v < 1e-3 && v > 0.0)
            v = integrate([this](double t) { return density(t); }, trunc_lo_, x,
                          v * 1e-8);
    }
    return std::clamp(v, 0.0, 1.0);
}

double PotentialSpec::quantile(double u) const {
    if (!(u > 0.0 && u < 1.0))
        throw std::invalid_argument("quantile: u must be in (0,1)");
    double lo = trunc_lo_, hi = trunc_hi_;
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (tail(mid, Side::left) < u ? lo : hi) = mid;
        if (hi - lo < 1e-11 * (std::abs(lo) + std::abs(hi) + 1.0)) break;
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Tabulated CDF (sampling and quantile grids)
// ---------------------------------------------------------------------------

struct PotentialSpec::CdfTable {
    std::vector<double> xs;
    std::vector<double> cum;   // normalized to [0, 1]

    double invert(double u) const {
        const auto it = std::lower_bound(cum.begin(), cum.end(), u);
        if (it == cum.begin()) return xs.front();
        if (it == cum.end()) return xs.back();
        const std::size_t i = static_cast<std::size_t>(it - cum.begin());
        const double du = cum[i] - cum[i - 1];
        const double t = du > 0 ? (u - cum[i - 1]) / du : 0.5;
        return xs[i - 1] + t * (xs[i] - xs[i - 1]);
    }
};

std::shared_ptr<const PotentialSpec::CdfTable> PotentialSpec::cdf_table() const {
    if (cdf_) return cdf_;
    auto tab = std::make_shared<CdfTable>();
    const int n = 65537;
    tab->xs.resize(n);
    tab->cum.resize(n);
    const double h = (trunc_hi_ - trunc_lo_) / (n - 1);
    double prev = density(trunc_lo_);
    tab->xs[0] = trunc_lo_;
    tab->cum[0] = 0.0;
    for (int i = 1; i < n; ++i) {
        tab->xs[i] = trunc_lo_ + i * h;
        const double cur = density(tab->xs[i]);
        tab->cum[i] = tab->cum[i - 1] + 0.5 * (prev + cur) * h;
        prev = cur;
    }
    const double total = tab->cum.back();
    for (auto& c : tab->cum) c /= total;
    cdf_ = tab;
    return cdf_;
}

std::vector<double> PotentialSpec::quantile_nodes(int n, double eps) const {
    auto tab = cdf_table();
    std::vector<double> nodes(n);
    for (int i = 0; i < n; ++i) {
        const double u = eps + (1.0 - 2.0 * eps) * i / (n - 1);
        nodes[i] = tab->invert(u);
    }
    // Deep-tail table resolution can collapse neighbors; enforce strictness.
    for (int i = 1; i < n; ++i)
        if (nodes[i] <= nodes[i - 1])
            nodes[i] = nodes[i - 1] +
                       1e-12 * (std::abs(nodes[i - 1]) + 1.0);
    return nodes;
}

// ---------------------------------------------------------------------------
// Functionals
// ---------------------------------------------------------------------------

namespace {

double xlogx(double v) { return v > 0.0 ? v * std::log(v) : 0.0; }

// Integrate t -> w(g(t)) dmu over the whole line, g piecewise linear with
// constant extension.
double integrate_composed(const PotentialSpec& mu, const GridFunction& g,
                          const Fn& w) {
    const std::size_t nseg = g.nodes.size() - 1;
    const double tol = 1e-13;
    double total = 0.0;
    total += w(g.values.front()) *
             std::max(0.0, mu.tail(g.lo(), Side::left));
    total += w(g.values.back()) *
             std::max(0.0, mu.tail(g.hi(), Side::right));
    for (std::size_t i = 0; i < nseg; ++i)
        total += mu.integrate_density_weighted(
            [&](double x) { return w(g(x)); }, g.nodes[i], g.nodes[i + 1],
            tol / static_cast<double>(nseg));
    return total;
}

} // namespace

double entropy(const PotentialSpec& mu, const GridFunction& f_squared) {
    for (double v : f_squared.values)
        if (v < 0.0) throw std::invalid_argument("entropy: f^2 must be >= 0");
    const double mean =
        integrate_composed(mu, f_squared, [](double v) { return v; });
    if (mean <= 0.0) return 0.0;
    const double moment =
        integrate_composed(mu, f_squared, [](double v) { return xlogx(v); });
    return std::max(0.0, moment - xlogx(mean));
}

double variance(const PotentialSpec& mu, const GridFunction& f) {
    const double mean = integrate_composed(mu, f, [](double v) { return v; });
    const double second =
        integrate_composed(mu, f, [](double v) { return v * v; });
    return std::max(0.0, second - mean * mean);
}

LaplaceTail laplace_tail_estimate(const PotentialSpec& mu, double x) {
    if (x < mu.smooth_threshold())
        throw std::invalid_argument("laplace_tail_estimate: x below smoothness threshold");
    const double vp = mu.Vp(x);
    if (!(vp > 0.0))
        throw std::invalid_argument("laplace_tail_estimate: V'(x) must be positive");

    // Bound V''/V'^2 on [x, +inf) from a wide geometric grid.
    double rmin = kInf, rmax = -kInf;
    const double far = std::max(4.0 * mu.trunc_hi(), 100.0 * std::abs(x) + 100.0);
    for (double t : geom_grid(std::max(x, 1e-8), far, 2048)) {
        const double d = mu.Vp(t);
        if (!(d > 0.0)) continue;
        const double r = mu.Vpp(t) / (d * d);
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
    }
    // Conservative eps: the grid inf can miss the true inf on the ray, but
    // r -> 0 from above for every built-in family, so cap eps at 1.
    const double eps_valid = 1.0 + std::min(rmin, 0.0);
    if (!(eps_valid > 0.0))
        throw std::runtime_error("laplace_tail_estimate: V''/V'^2 dips below -1");
    const double A = std::max(rmax, 1e-12);

    LaplaceTail out;
    out.asymptotic = std::exp(-mu.V(x)) / vp;
    out.bracket_lo = out.asymptotic / (1.0 + A);
    out.bracket_hi = out.asymptotic / eps_valid;
    return out;
}

} // namespace ineq
