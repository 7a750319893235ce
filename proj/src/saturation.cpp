#include "nlpw/saturation.hpp"

#include <cmath>

#include "nlpw/gtrig.hpp"

namespace nlpw::saturation {

double critical_alpha_closed_rp1(double p, double q) {
    const double f = (std::pow(2.0, p) - 1.0) / std::pow(2.0, p);
    return f * eigen::lambda_twisted(p, q);
}

double critical_alpha_lower_bound(const Params& params) {
    const double p = params.p, q = params.q, r = params.r;
    const double pc = params.p_conj;
    const double factor = (std::pow(2.0, p) - 1.0) / std::pow(2.0, p / (r - 1.0) + p - 1.0);
    return factor * (q / pc) * std::pow(2.0 * pc / (pc + q), 1.0 - p / q) *
           std::pow(gtrig::pi_pq(p, q), p);
}

namespace {

double solve_lambda(const Params& params, double alpha, const eigen::detail::StartSet& starts,
                    const eigen::SolverConfig& cfg, const eigen::GridFunction* warm) {
    try {
        return eigen::detail::solve_with_starts(params, alpha, starts, cfg, warm).lambda;
    } catch (const eigen::no_convergence& e) {
        return e.best.lambda; // bisection only needs lambda to mesh accuracy
    }
}

} // namespace

CriticalAlpha find_critical_alpha(const Params& params, int n, double tol_alpha,
                                  const eigen::SolverConfig& cfg) {
    if (!params.in_theorem_range) {
        throw std::domain_error("find_critical_alpha: parameters outside the theorem range");
    }
    if (!(tol_alpha > 0.0)) {
        throw std::domain_error("find_critical_alpha: tol_alpha must be positive");
    }

    const double lambda_t = eigen::lambda_twisted(params.p, params.q);

    // Mesh error measured at alpha = 0 from the n vs n/2 gap; the predicate
    // threshold is 10x that, so the equality plateau is never confused
    // with discretization noise.
    const auto starts = eigen::detail::make_starts(params, n);
    const auto starts_half = eigen::detail::make_starts(params, n / 2);
    const double l_n = solve_lambda(params, 0.0, starts, cfg, nullptr);
    const double l_half = solve_lambda(params, 0.0, starts_half, cfg, nullptr);
    const double mesh_err = std::max(std::abs(l_n - l_half), 1e-12 * std::max(1.0, lambda_t));
    const double delta = 10.0 * mesh_err;

    auto below_plateau = [&](double alpha) {
        return lambda_t - solve_lambda(params, alpha, starts, cfg, nullptr) > delta;
    };

    double hi = 1.0;
    int doublings = 0;
    while (below_plateau(hi)) {
        hi *= 2.0;
        if (++doublings > 60) {
            throw std::runtime_error("find_critical_alpha: failed to bracket the plateau");
        }
    }
    double lo = 0.0;
    while (hi - lo > tol_alpha) {
        const double mid = 0.5 * (lo + hi);
        if (below_plateau(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    CriticalAlpha out;
    out.alpha_c = 0.5 * (lo + hi);
    out.bracket = {lo, hi};
    out.gap_threshold = delta;
    return out;
}

SaturationReport sweep(const Params& params, const std::vector<double>& alphas, int n,
                       const eigen::SolverConfig& cfg) {
    SaturationReport rep;
    rep.params = params;
    rep.lower_bound = critical_alpha_lower_bound(params);
    if (params.r_is_p_plus_one()) {
        rep.closed_form = critical_alpha_closed_rp1(params.p, params.q);
    }
    if (alphas.empty()) return rep;

    const auto starts = eigen::detail::make_starts(params, n);
    const double lip =
        std::pow(2.0, params.p * (params.q - params.r + 1.0) / (params.q * (params.r - 1.0)));
    const double slack = 1e-6 * std::max(1.0, eigen::lambda_twisted(params.p, params.q));

    eigen::GridFunction warm;
    bool have_warm = false;
    for (double alpha : alphas) {
        SweepSample sample;
        sample.alpha = alpha;
        try {
            auto res = eigen::detail::solve_with_starts(params, alpha, starts, cfg,
                                                        have_warm ? &warm : nullptr);
            sample.lambda = res.lambda;
            sample.diagnostics = eigen::symmetry_diagnostics(res.minimizer, params.r);
            warm = std::move(res.minimizer);
            have_warm = true;
        } catch (const eigen::no_convergence& e) {
            sample.lambda = e.best.lambda;
            sample.solver_converged = false;
            sample.diagnostics = eigen::symmetry_diagnostics(e.best.minimizer, params.r);
        }
        rep.alpha_grid.push_back(alpha);
        rep.lambda_samples.push_back(sample.lambda);
        rep.samples.push_back(std::move(sample));
    }

    for (size_t i = 1; i < rep.lambda_samples.size(); ++i) {
        const double dl = rep.lambda_samples[i] - rep.lambda_samples[i - 1];
        const double da = rep.alpha_grid[i] - rep.alpha_grid[i - 1];
        if (dl < -2.0 * slack) rep.monotone_ok = false;
        if (dl > lip * da + 2.0 * slack) rep.lipschitz_ok = false;
    }
    return rep;
}

SaturationReport saturate(const Params& params, double alpha_min, double alpha_max, int steps,
                          int n, double tol_alpha, const eigen::SolverConfig& cfg) {
    std::vector<double> alphas;
    if (steps == 1) {
        alphas.push_back(alpha_min);
    } else {
        for (int i = 0; i < steps; ++i) {
            alphas.push_back(alpha_min + (alpha_max - alpha_min) * i / (steps - 1.0));
        }
    }
    SaturationReport rep = sweep(params, alphas, n, cfg);
    const auto crit = find_critical_alpha(params, n, tol_alpha, cfg);
    rep.alpha_c = crit.alpha_c;
    rep.alpha_c_bracket = crit.bracket;
    return rep;
}

} // namespace nlpw::saturation
