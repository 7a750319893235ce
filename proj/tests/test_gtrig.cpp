#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nlpw/gtrig.hpp"
#include "nlpw/quad.hpp"

using namespace nlpw;

TEST_CASE("pi_pq classical value") {
    CHECK(std::abs(gtrig::pi_pq(2.0, 2.0) - M_PI) <= 1e-12);
}

TEST_CASE("pi_pq(4,4) against the quadrature oracle") {
    // oracle: direct tanh-sinh integration of the defining integral
    const auto r = quad::integrate_unit([](double t, double omt) {
        const double bracket = -std::expm1(4.0 * std::log1p(-omt));
        return std::pow(t > 0.0 ? bracket : 1.0, -0.25);
    });
    CHECK(std::abs(gtrig::pi_pq(4.0, 4.0) - 2.0 * r.value) <= 1e-11);
    // cross-check: Gamma reflection gives pi*sqrt(2)/2
    CHECK(gtrig::pi_pq(4.0, 4.0) == doctest::Approx(M_PI * std::sqrt(2.0) / 2.0).epsilon(1e-13));
}

TEST_CASE("pi_pq(3,2) equals B(2/3,1/2) by quadrature") {
    const auto r = quad::integrate_unit([](double t, double omt) {
        const double bracket = t > 0.0 ? -std::expm1(2.0 * std::log1p(-omt)) : 1.0;
        return std::pow(bracket, -1.0 / 3.0);
    });
    CHECK(std::abs(gtrig::pi_pq(3.0, 2.0) - 2.0 * r.value) <= 1e-11);
}

TEST_CASE("pi_pq domain errors") {
    CHECK_THROWS_AS(gtrig::pi_pq(1.0, 2.0), std::domain_error);
    CHECK_THROWS_AS(gtrig::pi_pq(2.0, 0.5), std::domain_error);
}

TEST_CASE("arcsin_pq endpoints and classical values") {
    CHECK(gtrig::arcsin_pq(3.0, 2.5, 0.0) == 0.0);
    CHECK(std::abs(gtrig::arcsin_pq(2.0, 2.0, 1.0) - M_PI / 2.0) <= 1e-12);
    CHECK(std::abs(gtrig::arcsin_pq(2.0, 2.0, 0.5) - M_PI / 6.0) <= 1e-12);
    CHECK_THROWS_AS(gtrig::arcsin_pq(2.0, 2.0, -0.1), std::domain_error);
    CHECK_THROWS_AS(gtrig::arcsin_pq(2.0, 2.0, 1.1), std::domain_error);
}

TEST_CASE("arcsin_pq is monotone and ends at pi_pq/2") {
    const double p = 2.7, q = 1.8;
    double prev = -1.0;
    for (int i = 0; i <= 20; ++i) {
        const double x = i / 20.0;
        const double v = gtrig::arcsin_pq(p, q, x);
        CHECK(v > prev);
        prev = v;
    }
    CHECK(std::abs(prev - 0.5 * gtrig::pi_pq(p, q)) <= 1e-12);
}

TEST_CASE("arcsin_pq is continuous across its internal branch switch") {
    for (double p : {1.5, 2.4, 3.8}) {
        for (double q : {1.7, 2.9}) {
            const double lo = gtrig::arcsin_pq(p, q, 0.9 - 1e-9);
            const double hi = gtrig::arcsin_pq(p, q, 0.9 + 1e-9);
            CHECK(hi > lo);
            CHECK(hi - lo <= 1e-7);
        }
    }
}

TEST_CASE("sin_pq classical case matches std::sin") {
    for (int i = -8; i <= 8; ++i) {
        const double t = 0.7 * i;
        CHECK(std::abs(gtrig::sin_pq(2.0, 2.0, t) - std::sin(t)) <= 1e-11);
        CHECK(std::abs(gtrig::cos_pq(2.0, 2.0, t) - std::cos(t)) <= 1e-11);
    }
}

TEST_CASE("sin_pq special points") {
    CHECK(gtrig::sin_pq(3.0, 2.0, 0.0) == 0.0);
    CHECK(std::abs(gtrig::sin_pq(2.0, 2.0, M_PI / 2.0) - 1.0) <= 1e-12);
    CHECK(gtrig::cos_pq(2.0, 2.0, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    const double p = 3.2, q = 2.1;
    CHECK(std::abs(gtrig::cos_pq(p, q, 0.5 * gtrig::pi_pq(p, q))) <= 1e-6);
}

TEST_CASE("inverse round trips") {
    const double pqs[] = {1.5, 2.0, 3.3};
    for (double p : pqs) {
        for (double q : pqs) {
            for (int i = 0; i <= 10; ++i) {
                const double x = i / 10.0;
                const double t = gtrig::arcsin_pq(p, q, x);
                CHECK(std::abs(gtrig::sin_pq(p, q, t) - x) <= 1e-10);
            }
            const double pih = 0.5 * gtrig::pi_pq(p, q);
            for (int i = 0; i < 25; ++i) {
                const double t = (pih - 1e-6) * i / 24.0;
                const double x = gtrig::sin_pq(p, q, t);
                const double err = std::abs(gtrig::arcsin_pq(p, q, x) - t);
                // A double-valued inverse cannot beat the spacing of the
                // F-images of adjacent representable x; allow that span
                // where it exceeds the nominal tolerance (only relevant in
                // the last percent of the quarter period for small p).
                const double xm = std::max(0.0, std::nextafter(x, 0.0));
                const double xp = std::min(1.0, std::nextafter(x, 2.0));
                const double span = gtrig::arcsin_pq(p, q, xp) - gtrig::arcsin_pq(p, q, xm);
                INFO("p=", p, " q=", q, " t=", t);
                CHECK(err <= std::max(1e-10, 1.5 * span + 1e-12));
            }
        }
    }
}

TEST_CASE("pythagorean identity on the quarter period") {
    const double pqs[] = {1.4, 2.6, 4.0};
    for (double p : pqs) {
        for (double q : pqs) {
            const double pih = 0.5 * gtrig::pi_pq(p, q);
            for (int i = 0; i <= 30; ++i) {
                const double t = pih * i / 30.0;
                const double s = gtrig::sin_pq(p, q, t);
                const double c = gtrig::cos_pq(p, q, t);
                CHECK(std::abs(std::pow(c, p) + std::pow(s, q) - 1.0) <= 1e-10);
            }
        }
    }
}

TEST_CASE("symmetry, oddness, periodicity") {
    const double p = 2.4, q = 3.1;
    const double pi = gtrig::pi_pq(p, q);
    for (int i = 0; i <= 12; ++i) {
        const double t = -1.3 + 0.55 * i;
        const double s = gtrig::sin_pq(p, q, t);
        CHECK(std::abs(gtrig::sin_pq(p, q, pi - t) - s) <= 1e-12);
        CHECK(std::abs(gtrig::sin_pq(p, q, -t) + s) <= 1e-12);
        CHECK(std::abs(gtrig::sin_pq(p, q, t + 2.0 * pi) - s) <= 1e-12);
        CHECK(std::abs(s) <= 1.0);
    }
}
