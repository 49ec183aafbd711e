#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ineq/hardy.hpp"
#include "ineq/mlsi.hpp"
#include "ineq/oracle.hpp"

using namespace ineq;

namespace {

PotentialSpec half_exponential() {
    return PotentialSpec::custom({{1.0, 1.0}}, 0.0, kInf);
}

void check_monotone_history(const RatioEstimate& est) {
    for (std::size_t i = 1; i < est.refinement_history.size(); ++i)
        CHECK(est.refinement_history[i] >=
              est.refinement_history[i - 1] * (1.0 - 1e-6));
}

} // namespace

TEST_CASE("best_poincare_ratio: spectral benchmarks and refinement") {
    const auto ga = PotentialSpec::gaussian();
    const auto eg = best_poincare_ratio(ga, ga, ga.quantile_nodes(2000));
    // Ornstein-Uhlenbeck spectral gap: best constant is exactly 1, and the
    // discretization optimizes over a subspace, so it approaches from below.
    CHECK(eg.value >= 0.98);
    CHECK(eg.value <= 1.0 + 1e-6);
    check_monotone_history(eg);
    CHECK(eg.grid_size >= 2000);

    const auto de = PotentialSpec::double_exp();
    const auto ed = best_poincare_ratio(de, de, de.quantile_nodes(2000));
    const auto rep = poincare_bounds(de, de);
    const double lo = std::max(rep.b_plus, rep.b_minus);
    CHECK(ed.value >= lo * (1.0 - 1e-6));
    CHECK(ed.value <= 4.0 * lo * (1.0 + 1e-6));
    check_monotone_history(ed);
}

TEST_CASE("best_poincare_ratio: pinned uniform problem hits 4/pi^2") {
    const auto un = PotentialSpec::uniform(0.0, 1.0);
    const auto est =
        best_poincare_ratio(un, un, un.quantile_nodes(2000), /*pin_left=*/true);
    const double exact = 4.0 / (M_PI * M_PI);
    CHECK(est.value == doctest::Approx(exact).epsilon(0.01));
    // Witness resembles sin(pi t / 2): increasing from the pinned end.
    CHECK(est.witness(0.0) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(std::abs(est.witness(1.0)) > 0.9);
}

TEST_CASE("best_hardy_ratio: containment in the Muckenhoupt sandwich") {
    const auto un = PotentialSpec::uniform(0.0, 1.0);
    const auto he = half_exponential();
    for (const auto& mu : {un, he}) {
        for (double p : {1.5, 2.0, 3.0}) {
            const auto rep = muckenhoupt(mu, mu, p);
            const auto est = best_hardy_ratio(mu, mu, p);
            CHECK(est.value >= rep.lower_bound * (1.0 - 1e-3));
            CHECK(est.value <= rep.upper_bound * (1.0 + 1e-6));
            check_monotone_history(est);
        }
    }
}

TEST_CASE("best_mlsi_ratio: perturbative direction recovers 2 C_P") {
    const auto ga = PotentialSpec::gaussian();
    const ModifiedH h{YoungFn::power(2.0)};
    const auto poi = best_poincare_ratio(ga, ga, ga.quantile_nodes(800));
    const auto est =
        best_mlsi_ratio(ga, ga, h, MlsiFamily::paper_test_functions, 0);
    // f = 1 + t g with the Poincare witness g gives ratio -> 2 * (Rayleigh
    // quotient of g); require at least 95% of that.
    CHECK(est.value >= 1.9 * poi.value);
}

TEST_CASE("best_mlsi_ratio: sampled ratios below the theorem upper bound") {
    const auto mu = PotentialSpec::power_law(1.5);
    const double q = 3.0;
    const ModifiedH h{YoungFn::power(q)};
    const auto bq = b_q(mu, mu, q);
    REQUIRE(std::isfinite(bq.kappa_upper));
    for (MlsiFamily fam : {MlsiFamily::paper_test_functions,
                           MlsiFamily::indicator_ramps,
                           MlsiFamily::random_smooth}) {
        const auto est = best_mlsi_ratio(mu, mu, h, fam, 30);
        for (double r : est.refinement_history)
            CHECK(r <= bq.kappa_upper * (1.0 + 1e-9));
        check_monotone_history(est);
    }

    // Gaussian with the quadratic modification: log-Sobolev regime.
    const auto ga = PotentialSpec::gaussian();
    const ModifiedH h2{YoungFn::power(2.0)};
    const auto b2 = b_q(ga, ga, 2.0);
    REQUIRE(std::isfinite(b2.kappa_upper));
    const auto ramps =
        best_mlsi_ratio(ga, ga, h2, MlsiFamily::indicator_ramps, 0);
    CHECK(ramps.value > 0.0);
    CHECK(ramps.value <= b2.kappa_upper * (1.0 + 1e-9));
}

TEST_CASE("best_mlsi_ratio: deterministic under a fixed seed") {
    const auto ga = PotentialSpec::gaussian();
    const ModifiedH h{YoungFn::power(2.0)};
    const auto a = best_mlsi_ratio(ga, ga, h, MlsiFamily::random_smooth, 10, 42);
    const auto b = best_mlsi_ratio(ga, ga, h, MlsiFamily::random_smooth, 10, 42);
    CHECK(a.value == b.value);
    const auto c = best_mlsi_ratio(ga, ga, h, MlsiFamily::random_smooth, 10, 43);
    CHECK(a.value != c.value);
}

TEST_CASE("beta_oracle: closed forms, scaling, gamma_beta agreement") {
    const Fn unit = [](double) { return 1.0; };
    const double b2 = beta_oracle(YoungFn::power(2.0), unit, 0.0, 1.0, 1.0);
    CHECK(b2 == doctest::Approx(1.0).epsilon(1e-4));

    const double b3 = beta_oracle(YoungFn::power(3.0), unit, 0.0, 2.0, 1.0);
    CHECK(b3 == doctest::Approx(0.25).epsilon(1e-3));

    // Homogeneity: doubling the mass multiplies the value by 2^q.
    const double b3s = beta_oracle(YoungFn::power(3.0), unit, 0.0, 2.0, 2.0);
    CHECK(b3s == doctest::Approx(8.0 * b3).epsilon(1e-3));

    const auto de = PotentialSpec::double_exp();
    const Fn nd = [&](double u) { return de.density(u); };
    const auto vp =
        gamma_beta(YoungFn::power(3.0), nd, de.median(), 2.0, 0.7);
    const double bo =
        beta_oracle(YoungFn::power(3.0), nd, de.median(), 2.0, 0.7);
    CHECK(bo == doctest::Approx(vp.beta).epsilon(1e-3));
}

TEST_CASE("dual_entropy_sup: closed form, limits, sampling domination") {
    const QMass q{1.0, 0.25};
    const double closed = dual_entropy_sup(q, 1.5);
    CHECK(closed == doctest::Approx(0.25 * std::log(3.0)).epsilon(1e-12));

    // No budget left as K approaches Q(X) from above.
    CHECK(dual_entropy_sup(q, 1.0 + 1e-12) <= 1e-9);
    CHECK_THROWS_AS(dual_entropy_sup(q, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(dual_entropy_sup(QMass{1.0, 0.0}, 1.5),
                    std::invalid_argument);

    const double mc = dual_entropy_mc(q, 1.5);
    CHECK(mc > 0.0);
    CHECK(mc <= closed + 1e-9);
}

TEST_CASE("prop_min_lower_bound: bracket, sandwich, divergence") {
    // log(1 + 1/(2t)) is pinched between (3/4)log(1/t) and log(1/t).
    for (double t : {0.01, 0.1, 0.4}) {
        const double mid = t * std::log1p(1.0 / (2.0 * t));
        CHECK(0.75 * t * std::log(1.0 / t) <= mid * (1.0 + 1e-12));
        CHECK(mid <= t * std::log(1.0 / t) * (1.0 + 1e-12));
    }

    const auto mu = PotentialSpec::power_law(1.5);
    const ModifiedH h{YoungFn::plus_square(YoungFn::power(3.0))};
    const auto cp = c_phi(h.base, mu, mu);
    REQUIRE(std::isfinite(cp.kappa_upper));
    const double lb = prop_min_lower_bound(mu, mu, h, mu.quantile(0.9));
    CHECK(lb > 0.0);
    CHECK(lb <= cp.kappa_upper);

    CHECK_THROWS_AS(prop_min_lower_bound(mu, mu, h, mu.median() - 1.0),
                    std::invalid_argument);

    // Below the finiteness boundary the lower bound grows along x.
    const auto thin = PotentialSpec::power_law(1.2);
    const ModifiedH h2{YoungFn::power(2.0)};
    const double l1 = prop_min_lower_bound(thin, thin, h2, thin.quantile(0.9));
    const double l2 = prop_min_lower_bound(thin, thin, h2, thin.quantile(0.99));
    const double l3 =
        prop_min_lower_bound(thin, thin, h2, thin.quantile(0.999));
    CHECK(l2 > l1);
    CHECK(l3 > l2);
    CHECK(l3 > 2.0 * l1);
}

TEST_CASE("anchored test-function chains against the weight integral") {
    const auto mu = PotentialSpec::power_law(1.5);
    const double q = 3.0;
    const double m = mu.median();
    const auto I = [&](double x) {
        return integrate_rel(
            [&](double u) { return std::exp(mu.V(u) / (q - 1.0)); }, m, x,
            1e-10);
    };

    // The quadrature value at the explicit test function upper-bounds the
    // infimum, so value * 2^{q-2} I^{q-1} >= 1 follows from the chain.
    for (double x : {3.0, 5.0, 8.0}) {
        const auto at = alpha_tilde_upper(YoungFn::power(q), mu, x);
        const double rhs = std::pow(2.0, q - 2.0) * std::pow(I(x), q - 1.0);
        CHECK(at.value * rhs >= 1.0 - 1e-6);
    }

    // Reverse chain: under a drift certificate the reciprocal of the value
    // dominates the epsilon-weighted power of the weight integral. The value
    // is taken at one explicit test function, not at the infimum, so allow
    // its optimality gap (measured at ~0.65-0.77 here) via a 0.6 factor.
    const auto cert = epsilon_certificate(mu, q, mu.quantile(0.95) - m);
    const double eps = std::min(std::pow(cert.epsilon, q - 2.0), 1.0);
    for (double x : {3.0, 5.0, 8.0}) {
        const double bound =
            eps / std::pow(q - 1.0, q - 1.0) * std::pow(I(x), q - 1.0);
        CHECK(1.0 / alpha_tilde_upper(YoungFn::power(q), mu, x).value >=
              bound * 0.6);
    }
}
