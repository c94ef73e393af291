#pragma once

#include <functional>
#include <stdexcept>
#include <string>

// Adaptive Gauss-Kronrod quadrature (G7/K15) with deterministic panel order,
// compensated accumulation, substitution maps for semi-infinite integrals and
// a fitted exponential tail for integrands that decay like e^{-t}.

namespace caskit::quad {

// Tolerances, truncation and summation-order policy for every integral and
// Matsubara sum in the library.  Both tolerances are dimensionless: rel_tol
// applies per panel, abs_tol is a noise floor relative to the leading
// whole-interval estimate.  Summation is always fixed ascending order, so
// results are bit-identical for a given spec.
struct QuadratureSpec {
    double rel_tol = 1.0e-9;
    double abs_tol = 1.0e-14;
    int max_panel_depth = 24;
    double matsubara_rel_tail = 1.0e-10;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
            throw std::invalid_argument("QuadratureSpec: tolerances must be > 0");
        if (max_panel_depth < 4)
            throw std::invalid_argument("QuadratureSpec: max_panel_depth must be >= 4");
        if (!(matsubara_rel_tail > 0.0))
            throw std::invalid_argument("QuadratureSpec: matsubara_rel_tail must be > 0");
    }
};

struct NonConvergenceError : std::runtime_error {
    explicit NonConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

struct IntegralResult {
    double value = 0.0;
    double error = 0.0; // accumulated Kronrod-Gauss discrepancy
};

// Adaptive integral of f over the finite interval [a, b].
IntegralResult integrate(const std::function<double(double)>& f, double a, double b,
                         const QuadratureSpec& spec);

// Integral over [0, inf) through the map x = scale*u/(1-u), u in [0,1).
// The integrand must decay fast enough that f(x)*scale/(1-u)^2 -> 0 as u -> 1.
IntegralResult integrate_semi_infinite(const std::function<double(double)>& f, double scale,
                                       const QuadratureSpec& spec);

// Integral over [t0, inf) of an integrand decaying roughly like e^{-t}:
// fixed-width adaptive panels marched until they stop contributing, then a
// geometric tail fitted from the last two panels.
IntegralResult integrate_exp_decay(const std::function<double(double)>& f, double t0,
                                   double panel_width, const QuadratureSpec& spec);

// One non-adaptive K15 application (exposed for oracle code in tests).
IntegralResult kronrod15(const std::function<double(double)>& f, double a, double b);

} // namespace caskit::quad
