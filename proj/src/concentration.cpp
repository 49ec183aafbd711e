#include "ineq/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace ineq {

double hq_conjugate(double q, double x) {
    if (!(q >= 2.0) || !(x >= 0.0))
        throw std::invalid_argument("hq_conjugate: need q >= 2, x >= 0");
    if (x <= 2.0) return 0.25 * x * x;
    if (x <= q) return x - 1.0;
    return (q - 1.0) * std::pow(x / q, q / (q - 1.0));
}

double numeric_conjugate(const Fn& h, double y) {
    const auto obj = [&](double t) { return t * y - h(t); };
    double best = 0.0, barg = 0.0; // t = 0 gives 0
    double lo = 1e-8, hi = 1e8;
    for (int round = 0; round < 3; ++round) {
        for (double t : log_grid(lo, hi, 96)) {
            const double v = obj(t);
            if (v > best) { best = v; barg = t; }
        }
        if (barg < hi / 10.0 || round == 2) break;
        lo = hi / 10.0;
        hi *= 1e6;
    }
    if (barg > 0.0) {
        const double t = golden_max(obj, barg / 1.1, barg * 1.1, 1e-12);
        best = std::max(best, obj(t));
    }
    return best;
}

namespace {

// Affine stretch in the conjugate right after the quadratic branch (present
// exactly when H has a kink at 1, e.g. H_q with q > 2).
bool conjugate_has_affine_piece(const Fn& h) {
    const double d = 0.08;
    const double a = numeric_conjugate(h, 2.0 + d);
    const double b = numeric_conjugate(h, 2.0 + 2.0 * d);
    const double c = numeric_conjugate(h, 2.0 + 3.0 * d);
    return std::abs(a + c - 2.0 * b) < 1e-7 * (std::abs(b) + 1.0);
}

double enlargement_rate(double kappa, const ModifiedH& h, bool* surrogate) {
    const Fn hf = [&](double x) { return h(x); };
    bool sur = conjugate_has_affine_piece(hf);
    // With affine pieces in H*, Theorem-style strict convexity fails; the
    // surrogate I <= 2H* costs a factor omega_H(4)/omega_H(2) in the
    // effective constant.
    const double w = sur ? omega(hf, 4.0) : omega(hf, 2.0);
    const double keff = w * kappa;
    if (surrogate) *surrogate = sur;
    return keff * omega_conjugate(hf, 1.0 / keff);
}

} // namespace

ConcentrationProfile make_profile(double kappa, double a, const ModifiedH& h) {
    ConcentrationProfile p;
    p.kappa = kappa;
    p.a = a;
    p.K = a * kappa;
    p.h = h;
    p.enlargement_K = enlargement_rate(kappa, h, nullptr);
    return p;
}

double herbst_tail(const ConcentrationProfile& profile, double r) {
    if (!(r > 0.0)) return 1.0;
    const Fn hf = [&](double x) { return profile.h(x); };
    const double w = omega_conjugate(hf, 2.0 * r / profile.K);
    return std::exp(-profile.K * w);
}

EnlargementBound enlargement_bound(double kappa, const ModifiedH& h,
                                   double r) {
    EnlargementBound out;
    out.K_enl = enlargement_rate(kappa, h, &out.surrogate_used);
    out.probability_bound = std::exp(-out.K_enl * std::max(r, 0.0));
    return out;
}

TailCurve monte_carlo_tail(const PotentialSpec& mu, int n,
                           const std::vector<double>& weights, double a,
                           const ModifiedH& h, double kappa,
                           const std::vector<double>& r_grid,
                           std::int64_t samples, std::uint64_t seed) {
    if (static_cast<int>(weights.size()) != n)
        throw std::invalid_argument("monte_carlo_tail: weights size != n");
    double budget = 0.0;
    for (double w : weights) budget += h(std::abs(w));
    if (budget > a + 1e-12)
        throw std::invalid_argument(
            "monte_carlo_tail: gradient budget violated");

    // 4096-knot inverse CDF table for reproducible sampling. Knots are
    // uniform in the middle and geometric in both tails: uniform spacing
    // cannot resolve tail masses below 1/knots, which would inflate the
    // sampled tail probabilities this harness is meant to check.
    const int kn = 4096;
    const int tail_kn = kn / 4;
    const double ueps = 1e-9;
    std::vector<double> us;
    us.reserve(kn + 3);
    for (int i = 0; i <= tail_kn; ++i)
        us.push_back(ueps * std::pow(0.25 / ueps,
                                     static_cast<double>(i) / tail_kn));
    for (int i = 1; i < kn / 2; ++i)
        us.push_back(0.25 + 0.5 * static_cast<double>(i) / (kn / 2));
    for (int i = tail_kn; i >= 0; --i)
        us.push_back(1.0 - ueps * std::pow(0.25 / ueps,
                                           static_cast<double>(i) / tail_kn));
    std::vector<double> qs(us.size());
    for (std::size_t i = 0; i < us.size(); ++i) qs[i] = mu.quantile(us[i]);
    const auto draw = [&](double u) {
        u = std::clamp(u, us.front(), us.back());
        const auto it = std::upper_bound(us.begin(), us.end(), u);
        const std::size_t i =
            std::min(us.size() - 1,
                     static_cast<std::size_t>(
                         std::max<std::ptrdiff_t>(1, it - us.begin())));
        const double t = (u - us[i - 1]) / (us[i] - us[i - 1]);
        return qs[i - 1] + (qs[i] - qs[i - 1]) * t;
    };

    const double mean_x = mu.integrate_density_weighted(
        [](double x) { return x; }, mu.trunc_lo(), mu.trunc_hi());
    double mean_F = 0.0;
    for (double w : weights) mean_F += w * mean_x;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<std::int64_t> hits(r_grid.size(), 0);
    for (std::int64_t s = 0; s < samples; ++s) {
        double F = 0.0;
        for (int i = 0; i < n; ++i) F += weights[i] * draw(U(rng));
        const double dev = F - mean_F;
        for (std::size_t j = 0; j < r_grid.size(); ++j)
            if (dev >= r_grid[j]) ++hits[j];
    }

    const ConcentrationProfile prof = make_profile(kappa, a, h);
    const double z = 2.5758293035489004; // 99% two-sided normal quantile
    TailCurve out;
    out.r = r_grid;
    for (std::size_t j = 0; j < r_grid.size(); ++j) {
        const double N = static_cast<double>(samples);
        const double p = static_cast<double>(hits[j]) / N;
        const double den = 1.0 + z * z / N;
        const double center = (p + z * z / (2.0 * N)) / den;
        const double half =
            z * std::sqrt(p * (1.0 - p) / N + z * z / (4.0 * N * N)) / den;
        out.empirical.push_back(p);
        out.ci_low.push_back(std::max(0.0, center - half));
        out.ci_high.push_back(std::min(1.0, center + half));
        out.bound.push_back(herbst_tail(prof, r_grid[j]));
        if (out.ci_high.back() > out.bound.back()) out.pass = false;
    }
    return out;
}

EnlargementDecomposition enlargement_decomposition(const YoungFn& phi,
                                                   double r) {
    EnlargementDecomposition out;
    if (!(r > 0.0)) return out;
    const Fn hf = [&](double x) { return modification(phi, x); };
    const Fn pstar = [&](double y) { return conjugate(phi, y); };

    // Splitting constant: 4 on the quadratic branch (|x| <= x0 = 2),
    // Phi*(x)/H*(x) beyond.
    double c = 4.0;
    for (double x : log_grid(2.0, 1e4, 32)) {
        const double hs = numeric_conjugate(hf, x);
        if (hs > 0.0) c = std::max(c, pstar(x) / hs);
    }
    out.c = c;
    out.x0 = 2.0;
    out.ball_radius_sq = c * r;

    const Fn om = [&](double t) { return omega(pstar, t); };
    const double tinv = solve_increasing(om, 1.0 / r, 1.0, 1e-8);
    out.orlicz_radius = tinv > 0.0 ? 1.0 / tinv : kInf;
    return out;
}

} // namespace ineq
