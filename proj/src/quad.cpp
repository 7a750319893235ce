#include "nlpw/quad.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace nlpw::quad {

namespace {

constexpr double kPi = 3.14159265358979323846;
// Largest |t| probed by the tanh-sinh rule.  At t = 6 the distance from the
// nearer endpoint is exp(-pi*sinh(6)) ~ 1e-275, still a normal double.
constexpr double kTMax = 6.0;

struct Point {
    double x;    // abscissa in (0, 1/2], reflected for the other side
    double omx;  // 1 - x, exact
    double w;    // weight (without the step factor h)
};

// Abscissa/weight of the tanh-sinh map at t > 0, written so that the
// distance to the endpoint is computed without cancellation.
Point de_point(double t) {
    const double z = 0.5 * kPi * std::sinh(t);
    const double e = std::exp(-2.0 * z); // in (0,1) for t > 0
    Point pt;
    pt.omx = e / (1.0 + e);           // distance to the near endpoint
    pt.x = 1.0 / (1.0 + e);           // the far coordinate
    const double denom = 1.0 + e;
    pt.w = kPi * std::cosh(t) * e / (denom * denom);
    return pt;
}

void check_sample(double v, double t) {
    if (std::isnan(v)) throw input_error("integrand returned NaN");
    // Infinities within the central region cannot come from an endpoint
    // singularity; treat them as bad input rather than divergence.
    if (std::isinf(v) && std::abs(t) <= 1.0) {
        throw input_error("integrand returned a non-finite interior value");
    }
}

} // namespace

QuadResult integrate_unit(const UnitIntegrand& f, const QuadratureConfig& cfg) {
    if (cfg.max_levels < 3 || !(cfg.abs_tol > 0.0) || !(cfg.rel_tol > 0.0) ||
        !(cfg.divergence_cap > 0.0)) {
        throw std::invalid_argument("integrate_unit: bad QuadratureConfig");
    }

    const double eps = std::numeric_limits<double>::epsilon();
    const double h0 = 0.5;
    double prev = std::numeric_limits<double>::quiet_NaN();
    double prev2 = std::numeric_limits<double>::quiet_NaN();
    double value = 0.0;
    int grow_streak = 0;
    bool tails_converged = false;

    for (int level = 0; level < cfg.max_levels; ++level) {
        const double h = h0 / static_cast<double>(1 << level);
        double sum = 0.25 * kPi * f(0.5, 0.5); // t = 0: w(0) = pi/4
        check_sample(sum, 0.0);

        bool level_tails_ok = true;
        bool blown = false;

        // side 0 walks toward y = 1, side 1 toward y = 0.
        for (int side = 0; side < 2 && !blown; ++side) {
            int consec_small = 0;
            bool side_ok = false;
            for (int k = 1;; ++k) {
                const double t = k * h;
                if (t > kTMax) break;
                const Point pt = de_point(t);
                const double v = (side == 0) ? f(pt.x, pt.omx) : f(pt.omx, pt.x);
                if (std::isnan(v)) throw input_error("integrand returned NaN");
                if (std::isinf(v)) {
                    if (t <= 1.0) {
                        throw input_error("integrand returned a non-finite interior value");
                    }
                    // Endpoint blow-up too strong to sum: divergent.
                    blown = true;
                    break;
                }
                const double term = pt.w * v;
                sum += term;
                if (std::abs(sum) * h > 10.0 * cfg.divergence_cap) {
                    blown = true;
                    break;
                }
                // Absolute floor so that integrands with a vanishing total
                // still terminate their tails.
                if (std::abs(term) <= std::max(eps * std::abs(sum), 0.01 * cfg.abs_tol)) {
                    if (++consec_small >= 2) {
                        side_ok = true;
                        break;
                    }
                } else {
                    consec_small = 0;
                }
            }
            if (!side_ok) level_tails_ok = false;
        }

        value = h * sum;
        if (blown) {
            return {value, std::numeric_limits<double>::infinity(), true};
        }

        if (level >= 1) {
            const double d1 = std::abs(value - prev);
            if (std::abs(value) > 1.1 * std::abs(prev)) {
                if (++grow_streak >= 3 && std::abs(value) > cfg.divergence_cap) {
                    return {value, std::numeric_limits<double>::infinity(), true};
                }
            } else {
                grow_streak = 0;
            }
            if (level_tails_ok) {
                tails_converged = true;
                if (level >= 2 && d1 <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value))) {
                    // The level differences contract at least quadratically,
                    // so d1^2/d2 estimates the remaining error; d1 is an
                    // upper bound, 4 eps |value| the rounding floor.
                    const double d2 = std::abs(prev - prev2);
                    double est = d1;
                    if (d2 > 0.0) est = std::min(d1, d1 * d1 / d2);
                    est = std::max(est, 4.0 * eps * std::abs(value));
                    return {value, est, false};
                }
            }
        }
        prev2 = prev;
        prev = value;
    }

    if (!tails_converged) {
        // The endpoint contributions never decayed: the spectral decay that
        // every integrable power singularity produces is absent.
        return {value, std::numeric_limits<double>::infinity(), true};
    }
    throw tolerance_error("integrate_unit: tolerance not met within max_levels");
}

namespace {

struct GLTable {
    std::vector<double> nodes;   // on (-1, 1)
    std::vector<double> weights;
};

// Nodes as roots of the Legendre polynomial, found by Newton iteration.
GLTable build_gl(int n) {
    GLTable t;
    t.nodes.resize(n);
    t.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        t.nodes[i] = -x;
        t.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        t.weights[i] = w;
        t.weights[n - 1 - i] = w;
    }
    return t;
}

const GLTable& gl_table(int n) {
    static const std::array<GLTable, 17> tables = [] {
        std::array<GLTable, 17> a;
        for (int k = 2; k <= 16; ++k) a[k] = build_gl(k);
        return a;
    }();
    return tables[n];
}

} // namespace

double gauss_legendre(const std::function<double(double)>& f, double a, double b, int nodes) {
    if (!(a < b)) throw std::domain_error("gauss_legendre: requires a < b");
    if (nodes < 2 || nodes > 16) throw std::domain_error("gauss_legendre: nodes must be in [2,16]");
    const GLTable& t = gl_table(nodes);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < nodes; ++i) {
        s += t.weights[i] * f(mid + half * t.nodes[i]);
    }
    return s * half;
}

} // namespace nlpw::quad
