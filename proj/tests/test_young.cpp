#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "ineq/concentration.hpp"
#include "ineq/young.hpp"

using namespace ineq;

namespace {

double phi_inverse(const YoungFn& phi, double y) {
    return solve_increasing([&](double t) { return phi(t); }, y, 1.0, 1e-13);
}

double conjugate_inverse(const YoungFn& phi, double y) {
    return solve_increasing([&](double t) { return conjugate(phi, t); }, y, 1.0,
                            1e-13);
}

YoungFn quartic_custom() {
    return YoungFn::custom(
        [](double x) { return x * x + x * x * x * x; },
        [](double x) { return 2.0 * x + 4.0 * x * x * x; },
        [](double x) { return 2.0 + 12.0 * x * x; }, 2.0, 4.0);
}

YoungFn spliced_15() {
    PotentialHandle psi;
    psi.value = [](double x) { return std::pow(std::abs(x), 1.5); };
    psi.deriv = [](double x) { return 1.5 * std::sqrt(std::abs(x)); };
    return build_phi_from_psi(psi, 1.5, 2.0);
}

} // namespace

TEST_CASE("conjugate: closed form, pairing inequality, grid oracle") {
    CHECK(conjugate(YoungFn::power(2.0), 2.0) == doctest::Approx(1.0).epsilon(1e-12));

    const YoungFn p3 = YoungFn::power(3.0);
    for (double x : {0.5, 1.0, 10.0}) {
        const double v = phi_inverse(p3, x) * conjugate_inverse(p3, x);
        CHECK(v >= x * (1.0 - 1e-9));
        CHECK(v <= 2.0 * x * (1.0 + 1e-9));
    }

    // Custom Phi(x) = x^2 + x^4 against a brute-force 10^6-point grid.
    const YoungFn c = quartic_custom();
    const double lib = conjugate(c, 1.0);
    double brute = 0.0;
    const int n = 1000000;
    for (int i = 0; i <= n; ++i) {
        const double x = 2.0 * i / n;
        brute = std::max(brute, x * 1.0 - c(x));
    }
    CHECK(lib == doctest::Approx(brute).epsilon(1e-8));
}

TEST_CASE("right_derivative_inverse: closed forms and bisection residual") {
    CHECK(right_derivative_inverse(YoungFn::power(2.0), 4.0) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(right_derivative_inverse(YoungFn::power(3.0), 3.0) ==
          doctest::Approx(1.0).epsilon(1e-12));

    const YoungFn c = quartic_custom();
    const double lambda = 5.0;
    const double xs = right_derivative_inverse(c, lambda);
    CHECK(std::abs(c.deriv(xs) - lambda) <= 1e-10);
}

TEST_CASE("modification: square branch, power branch, knot continuity") {
    const YoungFn p4 = YoungFn::power(4.0);
    CHECK(modification(p4, 0.5) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(modification(p4, 2.0) == doctest::Approx(16.0).epsilon(1e-12));
    CHECK(modification(p4, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p4(1.0) / p4(1.0) == doctest::Approx(1.0));
    CHECK(modification(p4, 1.0 - 1e-9) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(modification(p4, 1.0 + 1e-9) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("omega: growth envelope of the modification") {
    const ModifiedH h3{YoungFn::power(3.0)};
    const Fn hf3 = [&](double x) { return h3(x); };

    // Brute-force sup of H(2s)/H(s) over an s-grid.
    double brute = 0.0;
    for (double s : log_grid(1e-4, 1e4, 200))
        brute = std::max(brute, h3(2.0 * s) / h3(s));
    CHECK(omega(hf3, 2.0) == doctest::Approx(8.0).epsilon(1e-8));
    CHECK(omega(hf3, 2.0) == doctest::Approx(brute).epsilon(1e-6));

    CHECK(omega(hf3, 0.0) == 0.0);

    const ModifiedH h2{YoungFn::power(2.0)};
    const Fn hf2 = [&](double x) { return h2(x); };
    CHECK(omega(hf2, 0.5) == doctest::Approx(0.25).epsilon(1e-8));
}

TEST_CASE("omega_conjugate: quadratic case and H_q branches") {
    const Fn square = [](double t) { return t * t; };
    CHECK(omega_conjugate(square, 2.0) == doctest::Approx(1.0).epsilon(1e-8));

    const ModifiedH h3{YoungFn::power(3.0)};
    const Fn hf3 = [&](double x) { return h3(x); };
    // Small r: the square branch dominates, conjugate is r^2/4.
    CHECK(omega_conjugate(hf3, 0.1) ==
          doctest::Approx(0.1 * 0.1 / 4.0).epsilon(1e-6));
    // r = q: matches the closed-form piecewise conjugate of max(t^2, t^q).
    CHECK(omega_conjugate(hf3, 3.0) ==
          doctest::Approx(hq_conjugate(3.0, 3.0)).epsilon(1e-8));
    CHECK(omega_conjugate(hf3, 2.5) ==
          doctest::Approx(hq_conjugate(3.0, 2.5)).epsilon(1e-8));
}

TEST_CASE("check_growth: exact powers and the plus-square envelope") {
    CHECK(check_growth(YoungFn::power(3.0), 3.0, 3.0).holds);

    const auto bad = check_growth(YoungFn::power(3.0), 3.5, 3.0);
    CHECK_FALSE(bad.holds);
    CHECK(bad.which == "x*Phi'(x) >= alpha*Phi(x)");

    CHECK(check_growth(YoungFn::plus_square(YoungFn::power(3.0)), 2.0, 3.0).holds);
}

TEST_CASE("submultiplicativity constants") {
    const YoungFn p3 = YoungFn::power(3.0);
    const auto s = submultiplicativity_constants(p3);
    CHECK(s.Gamma == doctest::Approx(1.0).epsilon(1e-9));
    // Gamma1 = q for powers, and the analytic bound theta^2 Gamma / alpha = 3.
    CHECK(s.Gamma1 == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(s.Gamma1 <=
          p3.theta() * p3.theta() * s.Gamma / p3.alpha() * (1.0 + 1e-9));
    CHECK(std::isfinite(s.Gamma2));
    CHECK(std::isfinite(s.Gamma3));

    const auto ps = submultiplicativity_constants(
        YoungFn::plus_square(YoungFn::power(3.0)));
    CHECK(std::isfinite(ps.Gamma));
    // For x^3 + x^2 the ratio is (x+1)(y+1)/(xy+1), maximal (= 2) at x = y = 1.
    CHECK(ps.Gamma == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("build_phi_from_psi: spliced construction") {
    const YoungFn phi = spliced_15();
    CHECK(phi.spliced_beta() == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(check_growth(phi, 2.0, 3.0).holds);   // alpha* = 3 for alpha = 1.5

    // C^1 splice: the inner-power derivative meets Psi' at the knot.
    const double x1 = 2.0;
    const double psi_x1 = std::pow(x1, 1.5);
    const double psi_p_x1 = 1.5 * std::sqrt(x1);
    const double left = phi.spliced_beta() * psi_x1 / x1;
    CHECK(std::abs(left - psi_p_x1) < 1e-10);

    // Precondition failures name the condition.
    PotentialHandle small;
    small.value = [](double x) { return 0.1 * std::abs(x); };
    small.deriv = [](double) { return 0.1; };
    CHECK_THROWS_WITH_AS(build_phi_from_psi(small, 1.0, 1.0),
                         "build_phi_from_psi: Psi(x1) <= 1",
                         std::invalid_argument);
}

TEST_CASE("invariant: double conjugate recovers Phi") {
    for (const YoungFn& phi :
         {YoungFn::power(2.5), YoungFn::plus_square(YoungFn::power(3.0))}) {
        const Fn conj = [&](double y) { return conjugate(phi, y); };
        for (double x : {0.1, 0.5, 1.0, 2.0, 10.0}) {
            const double back = numeric_conjugate(conj, x);
            CHECK(back == doctest::Approx(phi(x)).epsilon(1e-6));
        }
    }
}

TEST_CASE("invariant: pairing inequality for every built Young function") {
    const std::vector<YoungFn> all = {
        YoungFn::power(2.0), YoungFn::power(3.0), YoungFn::scaled_power(2.5, 0.7),
        YoungFn::plus_square(YoungFn::power(3.0)), quartic_custom(), spliced_15()};
    for (const auto& phi : all) {
        for (double x : log_grid(1e-3, 1e3, 4)) {
            const double v = phi_inverse(phi, x) * conjugate_inverse(phi, x);
            CHECK(v >= x * (1.0 - 1e-7));
            CHECK(v <= 2.0 * x * (1.0 + 1e-7));
        }
    }
}

TEST_CASE("invariant: the three Lemma-style envelope characterizations agree") {
    const std::vector<YoungFn> all = {YoungFn::power(3.0),
                                      YoungFn::plus_square(YoungFn::power(3.0)),
                                      spliced_15()};
    for (const auto& phi : all) {
        const double alpha = phi.alpha();
        const double alpha_star = alpha / (alpha - 1.0);
        const auto xs = log_grid(1e-3, 1e3, 8);
        // (a) Phi(x)/x^alpha non-decreasing.
        for (std::size_t i = 1; i < xs.size(); ++i) {
            const double a = phi(xs[i - 1]) / std::pow(xs[i - 1], alpha);
            const double b = phi(xs[i]) / std::pow(xs[i], alpha);
            CHECK(b >= a * (1.0 - 1e-7));
        }
        for (double x : xs) {
            // (b) x Phi'(x) >= alpha Phi(x).
            CHECK(x * phi.deriv(x) >= alpha * phi(x) * (1.0 - 1e-7));
            // (c) y (Phi*)'(y) <= alpha* Phi*(y), with (Phi*)' = Phi'^{-1}.
            const double cs = conjugate(phi, x);
            if (cs > 0.0)
                CHECK(x * right_derivative_inverse(phi, x) <=
                      alpha_star * cs * (1.0 + 1e-7));
        }
    }
}

TEST_CASE("invariant: Young's inequality with equality at y = Phi'(x)") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.05, 8.0);
    const std::vector<YoungFn> all = {YoungFn::power(3.0), quartic_custom(),
                                      YoungFn::plus_square(YoungFn::power(3.0))};
    for (const auto& phi : all) {
        for (int k = 0; k < 50; ++k) {
            const double x = U(rng), y = U(rng);
            const double lhs = x * y;
            const double rhs = phi(x) + conjugate(phi, y);
            CHECK(lhs <= rhs * (1.0 + 1e-10) + 1e-12);

            const double ystar = phi.deriv(x);
            const double gap = phi(x) + conjugate(phi, ystar) - x * ystar;
            CHECK(std::abs(gap) <= 1e-8 * (1.0 + x * ystar));
        }
    }
}

TEST_CASE("invariant: omega is submultiplicative") {
    const ModifiedH h{YoungFn::power(3.0)};
    const Fn hf = [&](double x) { return h(x); };
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.2, 5.0);
    for (int k = 0; k < 25; ++k) {
        const double a = U(rng), b = U(rng);
        CHECK(omega(hf, a * b) <=
              omega(hf, a) * omega(hf, b) * (1.0 + 1e-6) + 1e-12);
    }
}
