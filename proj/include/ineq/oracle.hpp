#pragma once

#include <cstdint>
#include <vector>

#include "ineq/measure.hpp"
#include "ineq/young.hpp"

namespace ineq {

struct RatioEstimate {
    double value = 0.0;
    GridFunction witness;
    std::size_t grid_size = 0;
    std::vector<double> refinement_history;
};

// Best Var_mu(f) / int (f')^2 dnu over piecewise-linear f on the grid,
// solved as the top eigenvalue of the discretized pencil. With pin_left the
// numerator is int f^2 dmu and f is forced to 0 at the first node (Hardy
// variant).
RatioEstimate best_poincare_ratio(const PotentialSpec& mu,
                                  const PotentialSpec& nu,
                                  const std::vector<double>& grid,
                                  bool pin_left = false);

// Lower bound on the best Hardy constant for exponent p: the ratio
// int f^p dmu / int (f')^p dnu at the Muckenhoupt test functions
// f_c = min(w, w(c)), w(t) = int_0^t n^{-1/(p-1)}, maximized over c.
RatioEstimate best_hardy_ratio(const PotentialSpec& mu,
                               const PotentialSpec& nu, double p,
                               int candidates = 200);

enum class MlsiFamily { random_smooth, paper_test_functions, indicator_ramps };

// Max of Ent_mu(f^2) / int H(f'/f) f^2 dnu over the sampled family; a lower
// bound on the best MLSI constant. Deterministic under a fixed seed.
RatioEstimate best_mlsi_ratio(const PotentialSpec& mu, const PotentialSpec& nu,
                              const ModifiedH& h, MlsiFamily family,
                              int samples, std::uint64_t seed = 1234567);

// Discretized inf{ int_m^x Phi(g) dnu : g >= 0, int g = a } via the
// stationarity profile g = Phi'^{-1}(lambda/n) plus a projected descent pass.
double beta_oracle(const YoungFn& phi, const Fn& density, double m, double x,
                   double a, int grid = 2000);

struct QMass {
    double QX;
    double QA;
};

// Closed form Q(A) log(1 + (K - Q(X))/Q(A)) of the constrained entropy dual.
double dual_entropy_sup(const QMass& q, double K);

// Best sampled value of int_A h dQ over random feasible nonnegative step
// functions (int e^h dQ <= K); never exceeds dual_entropy_sup.
double dual_entropy_mc(const QMass& q, double K, int samples = 10000,
                       std::uint64_t seed = 99);

// mu([x,oo)) log(1 + 1/(2 mu([x,oo)))) / alpha~_x^+, with alpha~_x^+ taken
// from the alpha_tilde_upper quadrature: a certified lower bound on kappa.
double prop_min_lower_bound(const PotentialSpec& mu, const PotentialSpec& nu,
                            const ModifiedH& h, double x);

} // namespace ineq
