#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlpw/params.hpp"
#include "nlpw/quad.hpp"

namespace nlpw::eigen {

/// Continuous piecewise-linear function on a uniform mesh of [-1,1] with n
/// elements (n even, >= 16) and homogeneous Dirichlet values.  Only the
/// n-1 interior nodal values are stored.
struct GridFunction {
    int n = 0;
    std::vector<double> values; // interior nodes, left to right

    GridFunction() = default;
    GridFunction(int n_, std::vector<double> vals);
    explicit GridFunction(int n_) : GridFunction(n_, std::vector<double>(n_ - 1, 0.0)) {}

    double h() const { return 2.0 / n; }
    double node(int i) const { return -1.0 + i * h(); }
    double at_node(int i) const {
        return (i <= 0 || i >= n) ? 0.0 : values[static_cast<size_t>(i) - 1];
    }
};

/// Outcome of one minimization of the quotient.
struct EigenResult {
    double lambda = 0.0;
    GridFunction minimizer;   // normalized to unit q-norm
    double gamma = 0.0;       // integral |u|^(r-2) u of the minimizer
    double grad_norm = 0.0;
    std::string start_label;
    int iterations = 0;
    bool converged = false;
};

/// Thrown when no start converges within the iteration budget; carries the
/// best iterate found.
class no_convergence : public std::runtime_error {
  public:
    no_convergence(std::string msg, EigenResult best_)
        : std::runtime_error(std::move(msg)), best(std::move(best_)) {}
    EigenResult best;
};

struct SolverConfig {
    int max_iterations = 20000;
    double grad_tol = 1e-8;     // stop when ||grad|| <= grad_tol * max(1, |lambda|)
    double armijo_c = 1e-4;
    int restart_every = 0;      // 0 = n/2
    std::uint64_t seed = 0;
    bool precondition = true;   // tridiagonal Laplacian metric for the CG direction
    int starts = 4;             // 2 = symmetric starts only, 4 = add perturbed pair
};

/// Twisted constant lambda_T(p,q) = (q/p') (2p'/(p'+q))^(1-p/q) pi_pq^p;
/// independent of r.
double lambda_twisted(double p, double q);

/// Dirichlet constant at alpha = 0 on (-1,1): lambda_T / 2^p, the quotient
/// of the half-period bump sin_pq((pi_pq/2)(x+1)).
double lambda_dirichlet(double p, double q);

/// Q_alpha[u]: (|u'|_p^p + alpha |gamma|^(p/(r-1))) / |u|_q^p with the
/// derivative term exact per element and the q/r integrals by 4-node
/// Gauss-Legendre per element, split at interior zeros of the interpolant.
double rayleigh_quotient(const GridFunction& u, const Params& params, double alpha);

/// Nodal gradient of the quotient, exactly consistent with the quadrature
/// used by rayleigh_quotient (finite differences of the quotient reproduce
/// it to rounding).
std::vector<double> rayleigh_gradient(const GridFunction& u, const Params& params, double alpha);

/// Minimizes Q_alpha by Polak-Ribiere conjugate gradients with Armijo
/// backtracking from the even bump, the odd profile, and a randomized
/// perturbation of each; returns the best local minimum (ties within 1e-10
/// prefer the even start).
EigenResult minimize_lambda_alpha(const Params& params, double alpha, int n,
                                  const SolverConfig& cfg = {});

/// Representation of the eigenvalue through H for a sign-changing
/// minimizer with ratio m: (q/p') qnorm^(q-p) H(m,p,q,r)^p.
double lambda_from_representation(double m, double q_norm, const Params& params,
                                  const quad::QuadratureConfig& cfg = {});

/// q-norm of the max-normalized sign-changing minimizer:
///   [ ((r-1+p')/(q+p')) gamma + (1 - R(m,q,r)) 2p'/(p'+q) ]^(1/q).
double qnorm_from_representation(double m, double gamma, const Params& params);

struct SymmetryDiagnostics {
    double even_defect = 0.0; // q-norm of u(x) - u(-x)
    double odd_defect = 0.0;  // q-norm of u(x) + u(-x)
    double r_average = 0.0;   // integral |u|^(r-2) u
    int zero_count = 0;       // strict sign changes of the nodal values
    double min_location = 0.0;
    double max_location = 0.0;
};

SymmetryDiagnostics symmetry_diagnostics(const GridFunction& u, double r);

/// Mapping of the eigenvalue and of alpha from (-1,1) to (a,b):
///   lambda(a,b) = lambda_factor * lambda(-1,1) evaluated at alpha_tilde.
struct RescaleResult {
    double lambda_factor = 1.0;
    double alpha_tilde = 0.0;
};

RescaleResult rescale_interval(const Params& params, double alpha, double a, double b);

namespace detail {

/// Value pieces of the quotient (shared by tests and the solver).
struct QuotientParts {
    double dirichlet = 0.0; // integral |u'|^p
    double qint = 0.0;      // integral |u|^q
    double gamma = 0.0;     // integral |u|^(r-2) u
    double numerator = 0.0;
    double quotient = 0.0;
};

QuotientParts evaluate_quotient(const GridFunction& u, const Params& params, double alpha,
                                std::vector<double>* grad);

/// Precomputed start vectors, reusable across solves with the same (p,q,n).
struct StartSet {
    GridFunction even;
    GridFunction odd;
};

StartSet make_starts(const Params& params, int n);

/// Solver entry with explicit starts; extra_start (optional) is tried
/// first, labelled "warm".
EigenResult solve_with_starts(const Params& params, double alpha, const StartSet& starts,
                              const SolverConfig& cfg, const GridFunction* extra_start);

} // namespace detail

} // namespace nlpw::eigen
