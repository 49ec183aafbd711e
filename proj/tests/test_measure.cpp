#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ineq/measure.hpp"

using namespace ineq;

namespace {

GridFunction sampled(const PotentialSpec& mu, double lo, double hi, int n,
                     const Fn& f) {
    std::vector<double> xs(n), vs(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = lo + (hi - lo) * i / (n - 1);
        vs[i] = f(xs[i]);
    }
    (void)mu;
    return GridFunction(xs, vs);
}

} // namespace

TEST_CASE("tail: closed forms for the built-in families") {
    const auto de = PotentialSpec::double_exp();
    CHECK(de.tail(0.0, Side::right) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(de.tail(1.0, Side::right) ==
          doctest::Approx(std::exp(-1.0) / 2.0).epsilon(1e-9));

    const auto g = PotentialSpec::gaussian();
    // Independent oracle: standard normal tail via erfc.
    const double oracle = 0.5 * std::erfc(1.0 / std::sqrt(2.0));
    CHECK(g.tail(1.0, Side::right) == doctest::Approx(oracle).epsilon(1e-8));
    CHECK(std::abs(g.tail(1.0, Side::right) - 0.158655) <= 1e-6);
}

TEST_CASE("normalization, median, and tail bookkeeping") {
    const std::vector<PotentialSpec> ms = {
        PotentialSpec::double_exp(), PotentialSpec::gaussian(),
        PotentialSpec::power_law(1.5), PotentialSpec::uniform(0.0, 1.0)};
    for (const auto& mu : ms) {
        const double total = mu.integrate_density_weighted(
            [](double) { return 1.0; }, mu.trunc_lo(), mu.trunc_hi(), 1e-13);
        CHECK(std::abs(total - 1.0) <= 1e-10);
        CHECK(std::abs(mu.tail(mu.median(), Side::left) - 0.5) <= 1e-8);
        for (double x : {-1.0, 0.3, 2.0}) {
            const double s =
                mu.tail(x, Side::left) + mu.tail(x, Side::right);
            CHECK(std::abs(s - 1.0) <= 1e-10);
        }
        // Right tail monotone non-increasing.
        double prev = 1.0;
        for (double x = mu.trunc_lo(); x <= mu.trunc_hi();
             x += (mu.trunc_hi() - mu.trunc_lo()) / 16.0) {
            const double t = mu.tail(x, Side::right);
            CHECK(t <= prev + 1e-12);
            prev = t;
        }
    }
}

TEST_CASE("quantile inverts the CDF") {
    const auto g = PotentialSpec::gaussian();
    for (double u : {0.1, 0.25, 0.5, 0.9, 0.999}) {
        CHECK(g.tail(g.quantile(u), Side::left) ==
              doctest::Approx(u).epsilon(1e-7));
    }
}

TEST_CASE("normalization constant matches the gamma closed form") {
    for (double p : {1.0, 1.5, 2.0, 4.0}) {
        const auto mu = PotentialSpec::power_law(p);
        const double closed = 2.0 * std::tgamma(1.0 + 1.0 / p);
        CHECK(mu.Z() == doctest::Approx(closed).epsilon(1e-9));
    }
    CHECK(PotentialSpec::gaussian().Z() ==
          doctest::Approx(std::sqrt(2.0 * M_PI)).epsilon(1e-10));
    CHECK(PotentialSpec::double_exp().Z() == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("entropy: constants, perturbative cross-check, nonnegativity") {
    const auto de = PotentialSpec::double_exp();

    const GridFunction c({-1.0, 1.0}, {3.0, 3.0});
    CHECK(entropy(de, c) == doctest::Approx(0.0).epsilon(1e-12));

    // f^2 = 1 + 0.01 sin(x), cross-checked against a direct quadrature of the
    // same piecewise-linear interpolant.
    const auto g = sampled(de, -30.0, 30.0, 3001,
                           [](double x) { return 1.0 + 0.01 * std::sin(x); });
    const double lib = entropy(de, g);

    const auto gv = [&](double x) { return g(x); };
    const double mean = de.integrate_density_weighted(gv, -40.0, 40.0, 1e-13);
    const double moment = de.integrate_density_weighted(
        [&](double x) {
            const double v = g(x);
            return v > 0.0 ? v * std::log(v) : 0.0;
        },
        -40.0, 40.0, 1e-13);
    const double direct = moment - mean * std::log(mean);
    CHECK(lib == doctest::Approx(direct).epsilon(1e-8));
    CHECK(lib >= 0.0);
    // Second-order size: Ent(1 + t s) ~ t^2/2 Var(s) with t = 0.01.
    CHECK(lib > 0.0);
    CHECK(lib < 1e-3);
}

TEST_CASE("variance: constants and closed-form moments") {
    const auto de = PotentialSpec::double_exp();
    const auto ga = PotentialSpec::gaussian();

    const GridFunction c({-1.0, 1.0}, {2.5, 2.5});
    CHECK(variance(de, c) == doctest::Approx(0.0).epsilon(1e-12));

    const auto idf = [](double x) { return x; };
    CHECK(variance(de, sampled(de, -30.0, 30.0, 601, idf)) ==
          doctest::Approx(2.0).epsilon(1e-4));
    CHECK(variance(ga, sampled(ga, -30.0, 30.0, 601, idf)) ==
          doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("laplace_tail_estimate: exactness, brackets, and convergence") {
    const auto de = PotentialSpec::double_exp();
    const auto at5 = laplace_tail_estimate(de, 5.0);
    const double true5 = de.tail(5.0, Side::right);
    CHECK(at5.asymptotic == doctest::Approx(true5).epsilon(1e-8));
    CHECK(at5.bracket_lo <= true5 * (1.0 + 1e-9));
    CHECK(at5.bracket_hi >= true5 * (1.0 - 1e-9));

    const auto ga = PotentialSpec::gaussian();
    const double r5 =
        laplace_tail_estimate(ga, 5.0).asymptotic / ga.tail(5.0, Side::right);
    CHECK(r5 >= 1.0);
    CHECK(r5 <= 1.05);
    const double r10 =
        laplace_tail_estimate(ga, 10.0).asymptotic / ga.tail(10.0, Side::right);
    CHECK(std::abs(r10 - 1.0) < std::abs(r5 - 1.0));

    const auto pl = PotentialSpec::power_law(1.5);
    const auto b = laplace_tail_estimate(pl, 10.0);
    const double truth = pl.tail(10.0, Side::right);
    CHECK(truth >= b.bracket_lo * (1.0 - 1e-9));
    CHECK(truth <= b.bracket_hi * (1.0 + 1e-9));
    const double rp10 = laplace_tail_estimate(pl, 10.0).asymptotic / truth;
    const double rp5 =
        laplace_tail_estimate(pl, 5.0).asymptotic / pl.tail(5.0, Side::right);
    CHECK(std::abs(rp10 - 1.0) < std::abs(rp5 - 1.0));

    // Below the declared smoothness window: refuse to estimate.
    const auto cu = PotentialSpec::custom({{1.0, 1.5}}, -kInf, kInf, 2.0);
    CHECK_THROWS_AS(laplace_tail_estimate(cu, 1.0), std::invalid_argument);
}
