#pragma once

#include "ineq/measure.hpp"

namespace ineq {

enum class CriterionKind { hardy, poincare, log_sobolev, mlsi_q, mlsi_phi };

struct CriterionReport {
    CriterionKind kind = CriterionKind::hardy;
    double b_plus = 0.0;             // supremum on the right of the median
    double b_minus = 0.0;            // supremum on the left
    double lower_bound = 0.0;
    double upper_bound = kInf;
    double argmax_location = 0.0;
    bool finite = false;
    bool grid_evidence_only = false; // divergence decided without a symbolic surrogate
};

namespace detail {

struct SideSup {
    double value = 0.0;
    double arg = 0.0;
    bool grid_trend_diverges = false;
};

// Supremum of an integrand over one side of the median, evaluated on the
// quantile grid {1/2 - 2^-k} u {2^-k} and golden-refined around the best
// point. The divergence flag records a monotone >1% growth trend at the
// deepest quantiles.
SideSup criterion_sup(const PotentialSpec& mu, Side side, const Fn& integrand);

// Symbolic tail surrogate: +1 diverges, -1 finite, 0 unknown.
// `exponent_parameter` is p for hardy and q for mlsi_q; ignored otherwise.
int surrogate_divergence(const PotentialSpec& mu, CriterionKind kind,
                         double exponent_parameter);

// Combine grid evidence with the surrogate per the divergence policy.
bool decide_divergence(const PotentialSpec& mu, CriterionKind kind,
                       double exponent_parameter, bool grid_trend,
                       bool* grid_evidence_only);

} // namespace detail

// Muckenhoupt constant B for the weighted Hardy inequality on [0, +inf):
//   B = sup_{x>0} mu([x,inf)) (int_0^x n^{-1/(p-1)})^{p-1},
// bracket [B, p^p/(p-1)^{p-1} B] for the best Hardy constant.
CriterionReport muckenhoupt(const PotentialSpec& mu, const PotentialSpec& nu,
                            double p);

// Spectral-gap criterion: B_+ = sup_{x>m} mu([x,inf)) int_m^x 1/n and the
// mirrored B_-; the best Poincare constant lies in [max(B+,B-), 4 max].
CriterionReport poincare_bounds(const PotentialSpec& mu, const PotentialSpec& nu);

// Log-Sobolev criterion quantity with the log(1/tail) weight.
CriterionReport bobkov_gotze(const PotentialSpec& mu, const PotentialSpec& nu);

} // namespace ineq
