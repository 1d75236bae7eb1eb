#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace hetnet::numerics {

// Euler-Mascheroni constant.
inline constexpr double euler_constant = 0.57721566490153286;

struct QuadratureSpec {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_subdivisions = 2000;

    void validate() const;  // throws std::domain_error
};

// Thrown when the adaptive scheme cannot reach the requested tolerance.
// Keeps the best estimate so diagnostics can still show how far it got.
class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& what, double best_estimate, double error_bound)
        : std::runtime_error(what), best_(best_estimate), err_(error_bound) {}
    double best_estimate() const noexcept { return best_; }
    double error_bound() const noexcept { return err_; }

private:
    double best_;
    double err_;
};

// Gamma function for finite positive arguments.
double gamma_fn(double x);

// log of gamma_fn, usable where products of gamma values would overflow.
double log_gamma(double x);

// Lower incomplete gamma integral_0^x u^{s-1} e^{-u} du for s in (0,1), x >= 0.
// Series expansion below x = s+1, Lentz continued fraction on the upper tail above.
double lower_inc_gamma(double s, double x);

// Interference attenuation kernel: the incomplete-gamma combination
//   gamma(1 - 2/alpha, T*t) + (e^{-T*t} - 1) * (T*t)^{-2/alpha},
// a function of the product T*t only.  Small products go through a
// cancellation-free power series; T = 0 gives 0, the T -> inf limit is
// Gamma(1 - 2/alpha).
double z_function(double t, double T, double alpha);

// Integral of f over (0, inf) for integrands that vanish at both ends faster
// than 1/t.  Internally substitutes t = e^y, locates the support of the
// transformed integrand on the log axis, and runs globally adaptive
// Gauss-Kronrod refinement until the error bound meets the spec.  Intended for
// integrands that vary on log-t scales of order one or wider (every kernel in
// this library does); support narrower than that can be missed by the scan.
double integrate_semi_infinite(const std::function<double(double)>& f,
                               const QuadratureSpec& spec = {});

}  // namespace hetnet::numerics
