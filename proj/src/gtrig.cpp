#include "nlpw/gtrig.hpp"

#include <cmath>
#include <stdexcept>

#if defined(__unix__) || defined(__APPLE__)
#include <math.h> // lgamma_r
#endif

namespace nlpw::gtrig {

namespace {

double log_gamma(double x) {
#if defined(__unix__) || defined(__APPLE__)
    int sign = 0;
    return ::lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

void check_exponents(double p, double q) {
    if (!(p > 1.0) || !(q > 1.0)) {
        throw std::domain_error("gtrig: exponents p, q must exceed 1");
    }
}

} // namespace

double pi_pq(double p, double q) {
    check_exponents(p, q);
    const double ip = 1.0 - 1.0 / p; // 1/p'
    const double iq = 1.0 / q;
    return (2.0 / q) * std::exp(log_gamma(ip) + log_gamma(iq) - log_gamma(ip + iq));
}

double arcsin_pq(double p, double q, double x) {
    check_exponents(p, q);
    if (!(x >= 0.0) || !(x <= 1.0)) {
        throw std::domain_error("arcsin_pq: x must lie in [0,1]");
    }
    if (x == 0.0) return 0.0;

    quad::QuadratureConfig cfg;
    cfg.abs_tol = 1e-13;
    cfg.rel_tol = 1e-13;

    if (x <= 0.9) {
        // Integrand is analytic on [0,x]; substitute t = x s.
        const auto res = quad::integrate_unit(
            [p, q, x](double s, double) {
                return x * std::pow(1.0 - std::pow(x * s, q), -1.0 / p);
            },
            cfg);
        return res.value;
    }

    // Near the top compute the complementary piece F(1) - F(x) with the
    // substitution t = 1 - (1-x) sigma, which turns the boundary layer at
    // t -> 1 into a clean power singularity at sigma -> 0.
    const double omx = 1.0 - x;
    double tail = 0.0;
    if (omx > 0.0) {
        const auto res = quad::integrate_unit(
            [p, q, omx](double sigma, double) {
                const double omt = omx * sigma;
                const double bracket = -std::expm1(q * std::log1p(-omt));
                return omx * std::pow(bracket, -1.0 / p);
            },
            cfg);
        tail = res.value;
    }
    return 0.5 * pi_pq(p, q) - tail;
}

namespace {

// Inverse of arcsin_pq on [0, pi_half]: bracketed Newton with bisection
// fallback; the derivative (1-x^q)^(-1/p) blows up at x = 1, so steps that
// leave the bracket or stall fall back to bisection.
double invert_f(double p, double q, double t, double pi_half) {
    if (t <= 0.0) return 0.0;
    if (pi_half - t <= 1e-14) return 1.0;

    double lo = 0.0, hi = 1.0;
    double x = std::min(0.999, t / pi_half); // crude but bracketed start
    double fx = arcsin_pq(p, q, x) - t;
    const double tol = 5e-13;

    for (int it = 0; it < 200; ++it) {
        if (std::abs(fx) <= tol) break;
        if (fx > 0.0) {
            hi = x;
        } else {
            lo = x;
        }
        const double deriv = std::pow(1.0 - std::pow(x, q), -1.0 / p);
        double next = x - fx / deriv;
        if (!(next > lo) || !(next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (hi - lo < 1e-16) {
            x = 0.5 * (lo + hi);
            break;
        }
        x = next;
        fx = arcsin_pq(p, q, x) - t;
    }
    return x;
}

struct SinCos {
    double s;
    double c;
};

// sin and cos on the fundamental half period [0, pi_pq], after reduction.
SinCos base_half(double p, double q, double u, double pi_full) {
    const double pi_half = 0.5 * pi_full;
    if (u <= pi_half) {
        const double s = invert_f(p, q, u, pi_half);
        const double c = std::pow(std::max(0.0, 1.0 - std::pow(s, q)), 1.0 / p);
        return {s, c};
    }
    const double s = invert_f(p, q, pi_full - u, pi_half);
    const double c = -std::pow(std::max(0.0, 1.0 - std::pow(s, q)), 1.0 / p);
    return {s, c};
}

SinCos sincos_pq(double p, double q, double t) {
    const double pi_full = pi_pq(p, q);
    const double period = 2.0 * pi_full;
    double u = std::fmod(t, period);
    if (u < 0.0) u += period;
    if (u <= pi_full) return base_half(p, q, u, pi_full);
    // sin(u) = -sin(2 pi - u) and cos(u) = cos_half(2 pi - u) by oddness
    // plus periodicity.
    const SinCos sc = base_half(p, q, period - u, pi_full);
    return {-sc.s, sc.c};
}

} // namespace

double sin_pq(double p, double q, double t) {
    check_exponents(p, q);
    return sincos_pq(p, q, t).s;
}

double cos_pq(double p, double q, double t) {
    check_exponents(p, q);
    return sincos_pq(p, q, t).c;
}

} // namespace nlpw::gtrig
