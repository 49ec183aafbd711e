#pragma once

#include <memory>
#include <vector>

#include "ineq/numerics.hpp"

namespace ineq {

// Piecewise-linear function on a strictly increasing node grid.
// Evaluation extends constantly beyond the end nodes.
struct GridFunction {
    std::vector<double> nodes;
    std::vector<double> values;

    GridFunction() = default;
    GridFunction(std::vector<double> n, std::vector<double> v);

    double operator()(double x) const;
    double lo() const { return nodes.front(); }
    double hi() const { return nodes.back(); }
};

enum class Side { left, right };

// Probability measure d mu = e^{-V(x)} dx / Z on an interval of R,
// defined by a potential with first and second derivatives.
class PotentialSpec {
public:
    enum class Family { PowerLaw, Gaussian, DoubleExp, Uniform, Custom };

    // One term coeff * |x|^exponent of a custom potential.
    struct Term {
        double coeff;
        double exponent;
    };

    static PotentialSpec power_law(double p);
    static PotentialSpec gaussian();
    static PotentialSpec double_exp();
    static PotentialSpec uniform(double a, double b);
    static PotentialSpec custom(std::vector<Term> terms,
                                double support_lo = -kInf,
                                double support_hi = kInf,
                                double smooth_threshold = 0.0);

    Family family() const { return family_; }

    double V(double x) const;      // potential including log Z
    double Vp(double x) const;
    double Vpp(double x) const;
    double density(double x) const;   // e^{-V}, zero outside the support

    double Z() const { return Z_; }
    double median() const { return median_; }
    double support_lo() const { return support_lo_; }
    double support_hi() const { return support_hi_; }
    double smooth_threshold() const { return smooth_threshold_; }

    // Largest |x| exponent of the potential (symbolic tail surrogate).
    double leading_exponent() const;
    bool compact_support() const;

    double tail(double x, Side side) const;
    double quantile(double u) const;

    // n nodes with equal mu-mass spacing covering quantiles [eps, 1-eps].
    std::vector<double> quantile_nodes(int n, double eps = 1e-9) const;

    // Integration bounds beyond which the density is negligible.
    double trunc_lo() const { return trunc_lo_; }
    double trunc_hi() const { return trunc_hi_; }

    double integrate_density_weighted(const Fn& f, double a, double b,
                                      double abs_tol = 1e-12) const;

private:
    PotentialSpec() = default;
    void finalize();

    Family family_ = Family::Custom;
    std::vector<Term> terms_;
    double support_lo_ = -kInf, support_hi_ = kInf;
    double smooth_threshold_ = 0.0;
    double logZ_ = 0.0, Z_ = 1.0;
    double median_ = 0.0;
    double trunc_lo_ = 0.0, trunc_hi_ = 0.0;

    double V0(double x) const;     // potential without log Z
    double V0p(double x) const;
    double V0pp(double x) const;

    struct CdfTable;
    std::shared_ptr<const CdfTable> cdf_table() const;
    mutable std::shared_ptr<const CdfTable> cdf_;
};

// Ent_mu(g) = int g log g dmu - (int g dmu) log(int g dmu), 0 log 0 = 0.
double entropy(const PotentialSpec& mu, const GridFunction& f_squared);

// Var_mu(f) = int f^2 dmu - (int f dmu)^2.
double variance(const PotentialSpec& mu, const GridFunction& f);

struct LaplaceTail {
    double asymptotic;     // e^{-V(x)} / V'(x)
    double bracket_lo;
    double bracket_hi;
};

// Tail estimate of Lemma-type Laplace asymptotics, with a rigorous bracket
// from grid bounds on V''/V'^2 over [x, +inf).
LaplaceTail laplace_tail_estimate(const PotentialSpec& mu, double x);

} // namespace ineq
