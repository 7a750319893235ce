#pragma once

#include <cmath>
#include <stdexcept>

namespace nlpw {

/// Exponent triple (p, q, r) of the nonlocal Rayleigh quotient, together
/// with the conjugate exponent p' = p/(p-1) and a flag telling whether the
/// triple lies in the range covered by the saturation theorem:
///   2p/(p+2) <= q <= p   and   q/2 + 1 <= r <= q + q/p.
struct Params {
    double p;
    double q;
    double r;
    double p_conj;
    bool in_theorem_range;

    Params(double p_, double q_, double r_) : p(p_), q(q_), r(r_) {
        if (!(p > 1.0) || !(q > 1.0) || !(r > 1.0)) {
            throw std::domain_error("Params: exponents p, q, r must all exceed 1");
        }
        p_conj = p / (p - 1.0);
        in_theorem_range = theorem_range(p, q, r);
    }

    // r == p+1 is the corner where the nonlocal penalty exponent p/(r-1)
    // degenerates to 1; several code paths special-case it.
    bool r_is_p_plus_one() const { return std::abs(r - (p + 1.0)) <= 1e-12; }

    static bool theorem_range(double p, double q, double r) {
        const double eps = 1e-12;
        return q >= 2.0 * p / (p + 2.0) - eps && q <= p + eps &&
               r >= q / 2.0 + 1.0 - eps && r <= q + q / p + eps;
    }
};

} // namespace nlpw
