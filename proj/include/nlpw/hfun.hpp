#pragma once

#include "nlpw/params.hpp"
#include "nlpw/quad.hpp"

namespace nlpw::hfun {

/// Thrown when an integrand bracket is non-positive away from the known
/// singular endpoint y -> 1 (parameters outside the admissible range).
class pole_error : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Value of H(m,p,q,r) together with quadrature diagnostics.  When the
/// integral diverges (possible at m = 0 once r-1 >= q or r >= p+1) the
/// value is the +infinity sentinel and divergent is set.
struct HEval {
    double m = 0.0;
    double value = 0.0;
    double error_estimate = 0.0;
    bool divergent = false;
};

/// R(m,q,r) = (1 - m^q) / (1 + m^(r-1)); strictly decreasing from R(0) = 1
/// to R(1) = 0.  Requires m in [0,1].
double r_factor(double m, double q, double r);

/// Integrand of H: the sum of the two power brackets
///   [1 - R (1 - y^(r-1)) - y^q]^(-1/p) + m [1 - R (1 + m^(r-1) y^(r-1)) - m^q y^q]^(-1/p),
/// evaluated through a cancellation-free positive-term rearrangement.
/// Defined for y in [0,1) except (m,y) = (0,0).
double h_integrand(double m, const Params& params, double y);

/// H(m,p,q,r): tanh-sinh integration of the two-term split over [0,1].
/// Values of m within 1e-12 of 1 are snapped to m = 1 before integrating.
HEval h_integral(double m, const Params& params, const quad::QuadratureConfig& cfg = {});

/// K(m) = H(m, p, q, q/2+1) through the factored A/B brackets
///   A = (1 - y^(q/2)) (m^(q/2) + y^(q/2)),  B = m^(q/2) (1 - y^(q/2)) (1 + m^(q/2) y^(q/2)).
double k_integral(double m, double p, double q, const quad::QuadratureConfig& cfg = {});

/// Auxiliary functions from the r-monotonicity argument; sampled by the
/// verification suite to confirm their positivity on (0,1).
enum class AuxFunction { g, f, e };

/// Evaluates g(m,p,q,r,y), f(m,p,q,r) or e(m,p,q,r) exactly as displayed.
/// f and e ignore y.  Requires m in (0,1] and, for g, y in (0,1].
double aux_value(AuxFunction which, double m, const Params& params, double y = 0.5);

} // namespace nlpw::hfun
