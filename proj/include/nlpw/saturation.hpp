#pragma once

#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "nlpw/eigen.hpp"
#include "nlpw/params.hpp"

namespace nlpw::saturation {

struct SweepSample {
    double alpha = 0.0;
    double lambda = 0.0;
    bool solver_converged = true;
    eigen::SymmetryDiagnostics diagnostics;
};

struct SaturationReport {
    Params params{2.0, 2.0, 2.0};
    std::vector<double> alpha_grid;
    std::vector<double> lambda_samples;
    std::vector<SweepSample> samples; // per-alpha detail, same order
    double alpha_c = std::numeric_limits<double>::quiet_NaN();
    std::pair<double, double> alpha_c_bracket{std::numeric_limits<double>::quiet_NaN(),
                                              std::numeric_limits<double>::quiet_NaN()};
    double lower_bound = 0.0;
    std::optional<double> closed_form; // present when r = p+1
    bool monotone_ok = true;
    bool lipschitz_ok = true;
};

/// Closed form of the critical parameter at r = p+1:
///   ((2^p - 1)/2^p) lambda_T(p,q).
/// Inside the theorem range r = p+1 forces q = p; the value is reported
/// for any p, q > 1 without enforcing that.
double critical_alpha_closed_rp1(double p, double q);

/// Lower bound for the critical parameter:
///   ((2^p - 1)/2^(p/(r-1)+p-1)) (q/p') (2p'/(p'+q))^(1-p/q) pi_pq^p,
/// tight at r = p+1.
double critical_alpha_lower_bound(const Params& params);

struct CriticalAlpha {
    double alpha_c = 0.0;
    std::pair<double, double> bracket{0.0, 0.0};
    double gap_threshold = 0.0; // the delta used by the bisection predicate
};

/// Bisection for the smallest alpha at which lambda_alpha reaches the
/// twisted constant, using the predicate lambda_T - lambda_alpha > delta
/// with delta tied to the measured mesh error (10x the n vs n/2 gap).
CriticalAlpha find_critical_alpha(const Params& params, int n, double tol_alpha,
                                  const eigen::SolverConfig& cfg = {});

/// Solves along the ascending alpha grid, reusing each minimizer as a warm
/// start for the next sample, and checks monotonicity plus the Lipschitz
/// bound with constant 2^(p(q-r+1)/(q(r-1))).  Solver failures are recorded
/// per sample without aborting the sweep.
SaturationReport sweep(const Params& params, const std::vector<double>& alphas, int n,
                       const eigen::SolverConfig& cfg = {});

/// Sweep plus critical-parameter location and bound bookkeeping; the
/// full report behind the `saturate` command.
SaturationReport saturate(const Params& params, double alpha_min, double alpha_max, int steps,
                          int n, double tol_alpha, const eigen::SolverConfig& cfg = {});

} // namespace nlpw::saturation
