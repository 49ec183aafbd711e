#pragma once

#include <cstdint>
#include <vector>

#include "ineq/measure.hpp"
#include "ineq/young.hpp"

namespace ineq {

// Conjugate of the modification of x^q:
//   x^2/4 on [0,2], x-1 on [2,q], (q-1)(x/q)^{q/(q-1)} beyond.
double hq_conjugate(double q, double x);

// Numeric Legendre transform sup_t { ty - h(t) } of a scalar function.
double numeric_conjugate(const Fn& h, double y);

struct ConcentrationProfile {
    double kappa = 1.0;          // MLSI constant used (certified upper bound)
    double a = 1.0;              // gradient budget sum H(dF_i) <= a
    double K = 1.0;              // = a * kappa
    double enlargement_K = 0.0;  // Theorem-5.2-style rate, surrogate-adjusted
    ModifiedH h;
};

ConcentrationProfile make_profile(double kappa, double a, const ModifiedH& h);

// exp(-K omega_H*(2r/K)).
double herbst_tail(const ConcentrationProfile& profile, double r);

struct EnlargementBound {
    double probability_bound = 1.0;  // exp(-K_enl r)
    double K_enl = 0.0;
    bool surrogate_used = false;     // affine pieces in H* forced the surrogate
};

EnlargementBound enlargement_bound(double kappa, const ModifiedH& h, double r);

struct TailCurve {
    std::vector<double> r;
    std::vector<double> empirical;
    std::vector<double> ci_low;
    std::vector<double> ci_high;   // Wilson 99%
    std::vector<double> bound;
    bool pass = true;              // ci_high <= bound at every grid point
};

// i.i.d. mu^n sampling by tabulated inverse CDF; F = sum w_i x_i with the
// budget sum H(w_i) <= a checked before sampling.
TailCurve monte_carlo_tail(const PotentialSpec& mu, int n,
                           const std::vector<double>& weights, double a,
                           const ModifiedH& h, double kappa,
                           const std::vector<double>& r_grid,
                           std::int64_t samples, std::uint64_t seed);

struct EnlargementDecomposition {
    double ball_radius_sq = 0.0;   // c * r
    double orlicz_radius = 0.0;    // 1 / omega_{Phi*}^{-1}(1/r)
    double c = 0.0;                // per-coordinate splitting constant
    double x0 = 2.0;               // H* branch transition in the dual variable
};

EnlargementDecomposition enlargement_decomposition(const YoungFn& phi,
                                                   double r);

} // namespace ineq
