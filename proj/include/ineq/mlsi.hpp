#pragma once

#include <string>

#include "ineq/hardy.hpp"
#include "ineq/young.hpp"

namespace ineq {

// Drift certificate for the epsilon-condition
//   (q-1) n(x)^{-1/(q-1)} >= eps int_m^x n^{-1/(q-1)}.
struct EpsilonCertificate {
    double epsilon = 0.0;       // 1 / (1/delta + K/(q-1) e^{2C/(q-1)})
    double epsilon_grid = 0.0;  // empirical infimum of the ratio on a grid
    double q = 2.0;
    double K = 0.0;             // bounded-window length
    double C = 0.0;             // sup |V| on the window
    double delta = 0.0;         // inf of the drift beyond the window
};

EpsilonCertificate epsilon_certificate(const PotentialSpec& mu, double q,
                                       double window_K);

struct BqResult {
    CriterionReport report;       // b_plus/b_minus carry B_q^+/B_q^-
    double kappa_upper = kInf;    // 235 C_P + 2^{q+1} max(B_q^+,B_q^-)
    double kappa_lower = 0.0;     // max(2 C_P, eps-weighted B_q term)
    bool has_certificate = false;
    EpsilonCertificate certificate;
};

BqResult b_q(const PotentialSpec& mu, const PotentialSpec& nu, double q);

// gamma_{x,a} and beta_x(a) of the constrained variational problem
//   beta_x(a) = inf{ int_m^x Phi(g) dnu : g >= 0, int g = a }.
struct VariationalPair {
    double gamma = 0.0;
    double beta = 0.0;
    double x = 0.0;
    double a = 0.0;
};

VariationalPair gamma_beta(const YoungFn& phi, const Fn& density, double m,
                           double x, double a);

// Orlicz gauge ||1_{[m,x]}/n||_{2 Phi'_r^{-1}}; +inf when unreachable.
double orlicz_gauge(const YoungFn& phi, const Fn& density, double m, double x);

// Upper bound of the gauge from window/drift data:
//   max( e^C / Phi'(1/(4K)), e^{V(x)} / Phi'(V'(x)/(4 theta(theta-1))) ).
double gauge_upper_bound(const YoungFn& phi, const PotentialSpec& mu, double x,
                         double window_K);

struct CPhiResult {
    CriterionReport report;       // b_plus/b_minus carry C_+(Phi)/C_-(Phi)
    double kappa_upper = kInf;    // 235 C_P + 16 theta Phi(1) max(C_-,C_+)
    double kappa_lower = 0.0;     // 2 max(B_+,B_-) of the Poincare criterion
};

CPhiResult c_phi(const YoungFn& phi, const PotentialSpec& mu,
                 const PotentialSpec& nu);

// Direct quadrature of the explicit test function bounding alpha~_x^+.
struct AlphaTildeBound {
    double value = 0.0;           // int_m^x H_Phi(g'/g) g^2 dnu at the test g
    double envelope = 0.0;        // e^{-V(x)} Phi'(V'(x)), constant left symbolic
    double ratio = 0.0;           // value / envelope
    double c_x = 0.0;
    double x0 = 0.0;              // anchor where the test function leaves 0
    bool cx_bound_as_printed = false;   // c_x <= e^{-V(x)} Phi'(2 e^{V'(x)})
    bool cx_bound_tight = false;        // c_x <= e^{-V(x)} Phi'(2 V'(x))
};

AlphaTildeBound alpha_tilde_upper(const YoungFn& phi, const PotentialSpec& mu,
                                  double x, double x0 = std::nan(""));

enum class ClassifyMode { critq, critphi_sufficient, critphi_necessary };
enum class Verdict { yes, no, inapplicable };

struct Classification {
    Verdict verdict = Verdict::inapplicable;
    double limsup_estimate = kInf;   // max of the criterion ratio far out
    double slope = 0.0;              // extrapolated log-log growth rate
    bool hyp_drift_ok = false;
    bool hyp_curvature_ok = false;
    std::string hypothesis_failure;
};

Classification classify_q(const PotentialSpec& mu, double q);
Classification classify_phi(const PotentialSpec& mu, const YoungFn& phi,
                            ClassifyMode mode);

} // namespace ineq
