#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nlpw/saturation.hpp"

using namespace nlpw;

TEST_CASE("closed form of the critical value at r = p+1") {
    CHECK(saturation::critical_alpha_closed_rp1(2.0, 2.0) ==
          doctest::Approx(0.75 * M_PI * M_PI).epsilon(1e-14));
    const double pi33 = 4.0 * M_PI / (3.0 * std::sqrt(3.0));
    CHECK(saturation::critical_alpha_closed_rp1(3.0, 3.0) ==
          doctest::Approx((7.0 / 8.0) * 2.0 * std::pow(pi33, 3)).epsilon(1e-13));
    // factor identity against the twisted constant
    for (double p : {2.0, 2.7, 3.5}) {
        CHECK(saturation::critical_alpha_closed_rp1(p, p) ==
              doctest::Approx((std::pow(2.0, p) - 1.0) / std::pow(2.0, p) *
                              eigen::lambda_twisted(p, p))
                  .epsilon(1e-13));
    }
}

TEST_CASE("lower bound for the critical value") {
    CHECK(saturation::critical_alpha_lower_bound(Params(2.0, 2.0, 2.0)) ==
          doctest::Approx(3.0 * M_PI * M_PI / 8.0).epsilon(1e-14));
    // tight at r = p+1
    CHECK(saturation::critical_alpha_lower_bound(Params(2.0, 2.0, 3.0)) ==
          doctest::Approx(0.75 * M_PI * M_PI).epsilon(1e-14));
    for (double p : {2.0, 3.0}) {
        const Params pr(p, p, p + 1.0);
        CHECK(saturation::critical_alpha_lower_bound(pr) <=
              saturation::critical_alpha_closed_rp1(p, p) + 1e-12);
    }
}

TEST_CASE("empty sweep returns an empty report") {
    const auto rep = saturation::sweep(Params(2.0, 2.0, 3.0), {}, 64);
    CHECK(rep.alpha_grid.empty());
    CHECK(rep.lambda_samples.empty());
    CHECK(rep.monotone_ok);
    CHECK(std::isnan(rep.alpha_c));
    CHECK(rep.closed_form.has_value());
}

TEST_CASE("sweep across the critical value of (2,2,3)") {
    const Params pr(2.0, 2.0, 3.0);
    const auto rep = saturation::sweep(pr, {0.0, 2.0, 4.0, 6.0, 8.0, 10.0}, 128);
    REQUIRE(rep.lambda_samples.size() == 6);
    CHECK(rep.monotone_ok);
    CHECK(rep.lipschitz_ok);
    const double lt = M_PI * M_PI;
    // alpha_C = 3 pi^2/4 ~ 7.4: strictly below the plateau up to 6, on it from 8
    for (size_t i = 0; i < 4; ++i) {
        CHECK(rep.lambda_samples[i] < lt - 0.5);
        // exact branch value pi^2/4 + alpha
        CHECK(rep.lambda_samples[i] ==
              doctest::Approx(M_PI * M_PI / 4.0 + rep.alpha_grid[i]).epsilon(1e-3));
        CHECK(rep.samples[i].diagnostics.zero_count == 0);
        CHECK(rep.samples[i].diagnostics.even_defect <= 1e-5);
    }
    for (size_t i = 4; i < 6; ++i) {
        CHECK(std::abs(rep.lambda_samples[i] - lt) <= 1e-2);
        CHECK(rep.samples[i].diagnostics.zero_count == 1);
        CHECK(rep.samples[i].diagnostics.odd_defect <= 1e-6);
        CHECK(std::abs(rep.samples[i].diagnostics.r_average) <= 1e-6);
    }
}

TEST_CASE("bisection locates alpha_C of (2,2,3)") {
    const Params pr(2.0, 2.0, 3.0);
    const auto crit = saturation::find_critical_alpha(pr, 128, 0.02);
    const double exact = 0.75 * M_PI * M_PI;
    CHECK(crit.bracket.first <= crit.alpha_c);
    CHECK(crit.alpha_c <= crit.bracket.second);
    CHECK(std::abs(crit.alpha_c - exact) <= 0.1);
    CHECK(crit.alpha_c > 0.0);
    CHECK(saturation::critical_alpha_lower_bound(pr) <= crit.alpha_c + 0.02 + 1e-12);
}

TEST_CASE("sweep records unconverged samples without aborting") {
    const Params pr(2.5, 2.2, 2.4);
    eigen::SolverConfig cfg;
    cfg.max_iterations = 2; // force per-sample failure
    const auto rep = saturation::sweep(pr, {0.5, 1.0}, 64, cfg);
    REQUIRE(rep.samples.size() == 2);
    for (const auto& sm : rep.samples) {
        CHECK_FALSE(sm.solver_converged);
        CHECK(std::isfinite(sm.lambda));
    }
}

TEST_CASE("find_critical_alpha validates inputs") {
    CHECK_THROWS_AS(saturation::find_critical_alpha(Params(2.0, 1.2, 4.0), 64, 1e-2),
                    std::domain_error);
    CHECK_THROWS_AS(saturation::find_critical_alpha(Params(2.0, 2.0, 3.0), 64, 0.0),
                    std::domain_error);
}

TEST_CASE("saturate fills the report") {
    const Params pr(2.0, 2.0, 3.0);
    const auto rep = saturation::saturate(pr, 0.0, 10.0, 6, 128, 0.05);
    CHECK(rep.alpha_grid.size() == 6);
    CHECK(rep.alpha_grid.front() == 0.0);
    CHECK(rep.alpha_grid.back() == 10.0);
    CHECK(!std::isnan(rep.alpha_c));
    CHECK(rep.alpha_c_bracket.first <= rep.alpha_c);
    CHECK(rep.alpha_c <= rep.alpha_c_bracket.second);
    CHECK(rep.lower_bound <= rep.alpha_c + 0.05 + 1e-12);
    REQUIRE(rep.closed_form.has_value());
    CHECK(std::abs(*rep.closed_form - 0.75 * M_PI * M_PI) <= 1e-12);
    CHECK(std::abs(rep.alpha_c - *rep.closed_form) <= 0.1);
}
