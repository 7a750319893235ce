#include "nlpw/hfun.hpp"

#include <cmath>
#include <limits>

namespace nlpw::hfun {

namespace {

void check_m(double m) {
    if (!(m >= 0.0) || !(m <= 1.0)) {
        throw std::domain_error("hfun: m must lie in [0,1]");
    }
}

// 1 - y^a without cancellation, given both y and 1-y.
double one_minus_pow(double y, double omy, double a) {
    if (y <= 0.0) return 1.0;
    if (omy <= 0.0) return 0.0;
    const double ly = omy < 0.5 ? std::log1p(-omy) : std::log(y);
    return -std::expm1(a * ly);
}

// y^(r-1) - y^q = y^(r-1) (1 - y^(q-r+1)), stable at both endpoints for
// r - 1 <= q; falls back to the direct difference otherwise.
double pow_gap(double y, double omy, double r, double q) {
    const double e = q - (r - 1.0);
    if (e >= 0.0) {
        return std::pow(y, r - 1.0) * one_minus_pow(y, omy, e);
    }
    return std::pow(y, r - 1.0) - std::pow(y, q);
}

struct Brackets {
    double b1;
    double b2; // meaningful only for m > 0
};

// The two H brackets in the positive-term form
//   b1 = [ (y^(r-1) - y^q) + m^(r-1)(1 - y^q) + m^q (1 - y^(r-1)) ] / (1 + m^(r-1))
//   b2 = (1 - m^q) m^(r-1) (1 - y^(r-1)) / (1 + m^(r-1)) + m^q (1 - y^q),
// algebraically identical to the displayed ones but free of cancellation
// for every m in [0,1] and y in (0,1).
Brackets brackets(double m, double q, double r, double y, double omy) {
    const double uq = one_minus_pow(y, omy, q);
    const double ur = one_minus_pow(y, omy, r - 1.0);
    const double gap = pow_gap(y, omy, r, q);
    if (m == 0.0) {
        return {gap, 0.0};
    }
    const double mr = std::pow(m, r - 1.0);
    const double mq = std::pow(m, q);
    const double denom = 1.0 + mr;
    const double b1 = (gap + mr * uq + mq * ur) / denom;
    const double omq = m > 0.9 ? -std::expm1(q * std::log(m)) : 1.0 - mq; // 1 - m^q
    const double b2 = omq * mr * ur / denom + mq * uq;
    return {b1, b2};
}

} // namespace

double r_factor(double m, double q, double r) {
    check_m(m);
    if (m == 0.0) return 1.0;
    if (m == 1.0) return 0.0;
    const double omq = m > 0.9 ? -std::expm1(q * std::log(m)) : 1.0 - std::pow(m, q);
    return omq / (1.0 + std::pow(m, r - 1.0));
}

double h_integrand(double m, const Params& params, double y) {
    check_m(m);
    if (!(y >= 0.0) || !(y < 1.0)) {
        throw std::domain_error("h_integrand: y must lie in [0,1)");
    }
    if (m == 0.0 && y == 0.0) {
        throw std::domain_error("h_integrand: undefined at (m,y) = (0,0)");
    }
    const auto [b1, b2] = brackets(m, params.q, params.r, y, 1.0 - y);
    if (!(b1 > 0.0) || (m > 0.0 && !(b2 > 0.0))) {
        throw pole_error("h_integrand: non-positive bracket away from y -> 1");
    }
    double h = std::pow(b1, -1.0 / params.p);
    if (m > 0.0) h += m * std::pow(b2, -1.0 / params.p);
    return h;
}

HEval h_integral(double m, const Params& params, const quad::QuadratureConfig& cfg) {
    check_m(m);
    if (1.0 - m <= 1e-12) m = 1.0; // the second bracket has no headroom there
    HEval out;
    out.m = m;

    const double p = params.p, q = params.q, r = params.r;

    // Identically-zero first bracket at m = 0 when r - 1 >= q: the integral
    // is divergent by inspection, not worth feeding to the quadrature.
    if (m == 0.0 && r - 1.0 >= q - 1e-14) {
        out.value = std::numeric_limits<double>::infinity();
        out.error_estimate = std::numeric_limits<double>::infinity();
        out.divergent = true;
        return out;
    }

    const auto first = quad::integrate_unit(
        [&](double y, double omy) {
            return std::pow(brackets(m, q, r, y, omy).b1, -1.0 / p);
        },
        cfg);
    out.value = first.value;
    out.error_estimate = first.error_estimate;
    out.divergent = first.divergent;

    if (!out.divergent && m > 0.0) {
        const auto second = quad::integrate_unit(
            [&](double y, double omy) {
                return m * std::pow(brackets(m, q, r, y, omy).b2, -1.0 / p);
            },
            cfg);
        out.value += second.value;
        out.error_estimate += second.error_estimate;
        out.divergent = out.divergent || second.divergent;
    }
    if (out.divergent) {
        out.value = std::numeric_limits<double>::infinity();
        out.error_estimate = std::numeric_limits<double>::infinity();
    }
    return out;
}

double k_integral(double m, double p, double q, const quad::QuadratureConfig& cfg) {
    check_m(m);
    if (!(p > 1.0) || !(q > 1.0)) {
        throw std::domain_error("k_integral: exponents must exceed 1");
    }
    if (1.0 - m <= 1e-12) m = 1.0;
    const double mh = std::pow(m, 0.5 * q); // m^(q/2)

    const auto first = quad::integrate_unit(
        [&](double y, double omy) {
            const double yh = std::pow(y, 0.5 * q);
            const double a = one_minus_pow(y, omy, 0.5 * q) * (mh + yh);
            return std::pow(a, -1.0 / p);
        },
        cfg);
    double value = first.value;
    bool divergent = first.divergent;

    if (!divergent && m > 0.0) {
        const auto second = quad::integrate_unit(
            [&](double y, double omy) {
                const double yh = std::pow(y, 0.5 * q);
                const double b = mh * one_minus_pow(y, omy, 0.5 * q) * (1.0 + mh * yh);
                return m * std::pow(b, -1.0 / p);
            },
            cfg);
        value += second.value;
        divergent = divergent || second.divergent;
    }
    if (divergent) {
        // K is integrable on the whole admissible range; reaching this
        // indicates parameters far outside it.
        throw std::domain_error("k_integral: divergent integral");
    }
    return value;
}

double aux_value(AuxFunction which, double m, const Params& params, double y) {
    if (!(m > 0.0) || !(m <= 1.0)) {
        throw std::domain_error("aux_value: m must lie in (0,1]");
    }
    const double p = params.p, q = params.q, r = params.r;
    const double s = q * (p + 1.0) / p; // recurring exponent q(p+1)/p
    const double logm = std::log(m);

    switch (which) {
    case AuxFunction::g: {
        if (!(y > 0.0) || !(y <= 1.0)) {
            throw std::domain_error("aux_value: y must lie in (0,1] for g");
        }
        const double yr = std::pow(y, r - 1.0);
        const double mr = std::pow(m, r - 1.0);
        const double logy = std::log(y);
        const double first = -(1.0 - yr) * mr * logm - yr * (1.0 + mr) * logy;
        const double second = ((yr - 1.0) * logm + (1.0 + mr) * yr * logy) * std::pow(m, r - s);
        return first + second;
    }
    case AuxFunction::f: {
        const double mr = std::pow(m, r - 1.0);
        const double ms = std::pow(m, r - s);
        return -(mr + ms) * logm - (1.0 / (r - 1.0)) * (1.0 + mr) * (ms - 1.0);
    }
    case AuxFunction::e: {
        const double lead = std::pow(m, s - 1.0);
        return lead * (-logm + 1.0 / (r - 1.0)) - logm - 1.0 / (r - 1.0);
    }
    }
    throw std::logic_error("aux_value: unreachable");
}

} // namespace nlpw::hfun
