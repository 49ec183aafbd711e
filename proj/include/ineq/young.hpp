#pragma once

#include <memory>
#include <string>

#include "ineq/numerics.hpp"

namespace ineq {

// A nice Young function: even, convex, vanishing only at 0, superlinear.
// Declared growth exponents (alpha, theta) bound the envelope
//   Phi(x)/x^alpha non-decreasing, Phi(x)/x^theta non-increasing,
// and are re-verified by check_growth.
class YoungFn {
public:
    enum class Family { Power, ScaledPower, PlusSquare, Spliced, Custom };

    struct Impl;

    static YoungFn power(double q);
    static YoungFn scaled_power(double q, double c);
    static YoungFn plus_square(const YoungFn& base);
    static YoungFn custom(Fn value, Fn deriv, Fn deriv2,
                          double alpha, double theta);

    double operator()(double x) const;   // Phi(|x|)
    double deriv(double x) const;        // right derivative Phi'_r, x >= 0
    double deriv2(double x) const;

    double alpha() const { return alpha_; }
    double theta() const { return theta_; }
    Family family() const;

    // Exponent q for Power / ScaledPower, throws otherwise.
    double power_exponent() const;

    // Inner exponent beta of a Spliced function, throws otherwise.
    double spliced_beta() const;

    const Impl& impl() const { return *impl_; }

    YoungFn(std::shared_ptr<const Impl> impl, double alpha, double theta);

private:
    std::shared_ptr<const Impl> impl_;
    double alpha_;
    double theta_;
};

// Legendre transform Phi*(y) = sup_{x>=0} { xy - Phi(x) }, y >= 0.
double conjugate(const YoungFn& phi, double y);

// Left inverse of the right derivative: inf{ x >= 0 : Phi'_r(x) >= lambda }.
double right_derivative_inverse(const YoungFn& phi, double lambda);

// H_Phi(x) = x^2 on [0,1], Phi(|x|)/Phi(1) beyond.
double modification(const YoungFn& phi, double x);

// The modification as a callable, used by concentration and the oracles.
struct ModifiedH {
    YoungFn base = YoungFn::power(2.0);   // H = x^2 unless told otherwise
    double operator()(double x) const { return modification(base, x); }
};

// omega_H(t) = sup_{s>0} H(ts)/H(s); +inf signals Delta_2 failure.
double omega(const Fn& h, double t);

// Legendre transform of t -> omega(h, t).
double omega_conjugate(const Fn& h, double r);

struct GrowthVerdict {
    bool holds = true;
    double x_fail = 0.0;
    std::string which;   // violated inequality, empty when holds
};

// Check alpha*Phi(x) <= x*Phi'_r(x) <= theta*Phi(x) on a log grid.
GrowthVerdict check_growth(const YoungFn& phi, double alpha, double theta);

struct SubmultConstants {
    double Gamma  = kInf;   // Gamma  Phi(xy)  >= Phi(x)Phi(y)
    double Gamma1 = kInf;   // Gamma1 Phi'(xy) >= Phi'(x)Phi'(y)
    double Gamma2 = kInf;   // Phi*'(xy) <= Gamma2 Phi*'(x)Phi*'(y)
    double Gamma3 = kInf;   // Phi*(xy)  <= Gamma3 Phi*(x)Phi*(y)
};

SubmultConstants submultiplicativity_constants(const YoungFn& phi);

// Even convex potential handle with first derivative, used to splice a
// Young function out of a potential tail.
struct PotentialHandle {
    Fn value;
    Fn deriv;
};

// Phi = f* + x^2 where f(x) = Psi(x1)(x/x1)^beta below x1 and Psi beyond,
// beta = x1 Psi'(x1)/Psi(x1). Declared envelope is (2, alpha*).
YoungFn build_phi_from_psi(const PotentialHandle& psi, double alpha, double x1);

} // namespace ineq
