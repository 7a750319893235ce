#pragma once

#include <functional>
#include <stdexcept>

namespace nlpw::quad {

/// Settings for the double-exponential (tanh-sinh) rule on (0,1).
struct QuadratureConfig {
    int max_levels = 12;          // trapezoid refinement depth
    double abs_tol = 1e-12;
    double rel_tol = 1e-11;
    double divergence_cap = 1e12; // running values beyond this mean divergence
};

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool divergent = false;
};

/// Thrown when the integrand returns NaN (or infinity away from the
/// endpoints); distinct from a divergence verdict.
class input_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Thrown when the refinement levels are exhausted without either meeting
/// the tolerance or triggering the divergence detector.
class tolerance_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Integrand on the open interval (0,1).  It is called as f(y, 1-y) where
/// both arguments are exact to full precision near their respective
/// endpoints, so power singularities at 0 or 1 can be evaluated without
/// cancellation.  Integrands that do not care may ignore the second value.
using UnitIntegrand = std::function<double(double, double)>;

/// tanh-sinh quadrature of f over (0,1).  Integrable power singularities
/// (exponent > -1) at either endpoint converge at the configured tolerance;
/// non-integrable ones yield divergent = true.
QuadResult integrate_unit(const UnitIntegrand& f, const QuadratureConfig& cfg = {});

/// Fixed-order Gauss-Legendre on [a,b], nodes in {2,...,16}.  For smooth
/// integrands only; no error estimate.
double gauss_legendre(const std::function<double(double)>& f, double a, double b, int nodes);

} // namespace nlpw::quad
