#pragma once

#include <optional>
#include <string>
#include <vector>

#include "khess/dirichlet.hpp"
#include "khess/radial.hpp"

namespace khess {

// C(N,k) R^{-2k}.
double lower_bound(int dim, int k, double R);
// 4^k C(N,k) R^{-2k}.
double upper_bound(int dim, int k, double R);

struct IterationConfig {
    // Divergence threshold on sup|u_n|; defaults to 1e6 sup|u_1|.
    std::optional<double> sup_cap;
    int n_max = 500;
    // Converged when sup|u_n - u_{n-1}| <= fixed_point_tol (1 + sup|u_n|).
    double fixed_point_tol = 1e-9;
    // Bisection stops at this bracket width; defaults to 1e-3 of the
    // initial bracket.
    std::optional<double> bisect_tol;

    void validate() const;
};

enum class IterationStatus { converged, converged_slow, diverged };

std::string to_string(IterationStatus s);

struct IterationResult {
    IterationStatus status = IterationStatus::diverged;
    double lambda = 0.0;
    int iterations = 0;
    // Last iterate (the fixed point when converged).
    RadialProfile profile;
    // Previous iterate; f_n = 1 + lambda |u_{n-1}|^k produced `profile`.
    std::vector<double> previous;
    std::vector<double> sup_trace;
    // Geometric-mean ratio of successive increments of sup|u_n|^k over the
    // final iterations; about lambda / lambda_1 in the linear regime.
    double growth_ratio = 0.0;
};

// u_0 = 0, S_k(D^2 u_n) = 1 + lambda |u_{n-1}|^k, u_n = 0 on |x| = R.
// Throws InconsistencyError if some u_n exceeds u_{n-1} beyond rounding.
// Exhausting n_max yields diverged when the increments of sup|u_n|^k no
// longer shrink and converged_slow otherwise.
IterationResult iterate_fixed_lambda(double lambda, double R, int dim, int k, const IterationConfig& cfg,
                                     const SolverConfig& scfg);

// Same, on a prebuilt quadrature grid (reused across probes).
IterationResult iterate_fixed_lambda(double lambda, const RadialQuadrature& quad, int dim, int k,
                                     const IterationConfig& cfg);

struct ProbeRecord {
    double lambda = 0.0;
    IterationStatus status = IterationStatus::diverged;
    int iterations = 0;
    double sup_norm = 0.0;
    double growth_ratio = 0.0;
};

struct SpectralEstimate {
    int dim = 0;
    int order = 0;
    double radius = 0.0;
    double lambda_lo = 0.0;
    double lambda_hi = 0.0;
    double lambda_best = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double bisect_tol = 0.0;
    RadialProfile eigenfunction;  // sup norm 1, nonpositive, zero at r = R
    std::vector<double> residual;  // |S_k(D^2 psi) - lambda_best |psi|^k| per node
    double residual_max = 0.0;
    double rayleigh = 0.0;
    std::optional<double> holder;  // seminorm at alpha = 2 - N/k when k > N/2
    std::vector<ProbeRecord> probes;
    std::vector<std::string> log;
};

// Bisection on [lower_bound, upper_bound] with convergence of the iteration
// as the predicate. InconsistencyError if the lower end does not converge or
// the upper end does not diverge.
SpectralEstimate estimate_lambda1(double R, int dim, int k, const IterationConfig& cfg, const SolverConfig& scfg);

// -int u S_k(D^2 u) r^{N-1} dr / int |u|^{k+1} r^{N-1} dr (the sphere
// measure cancels). DomainError on an identically zero profile.
double rayleigh_quotient(const RadialProfile& p);

struct MinimumPrincipleReport {
    bool boundary_nonnegative = false;
    bool is_supersolution = false;
    std::size_t failing_nodes = 0;
    double interior_min = 0.0;
    double argmin = 0.0;
    // Verified supersolution with negative interior minimum: lambda_1 <= lambda.
    bool demonstrates_bound = false;
    // Same, but for lambda below a reference estimate of lambda_1.
    bool violation = false;
};

// Classical supersolution test of S_k(D^2 u) + lambda u |u|^{k-1} = 0 at
// every node, via classical_supersolution_at on the assembled radial Hessian.
MinimumPrincipleReport minimum_principle_probe(const RadialProfile& p, double lambda,
                                               std::optional<double> reference_lambda = std::nullopt);

// Supersolution margin S_k(D^2 u) + C u |u|^{k-1} of the quartic profile at
// every node (must be <= 0 for the test function to work).
std::vector<double> quartic_margins(const RadialProfile& p, double C);

struct MonotonicityResult {
    bool holds = false;
    double lambda_r1 = 0.0;
    double lambda_r2 = 0.0;
    double tolerance = 0.0;
};

// estimate(R2) <= estimate(R1) + 2 bisect_tol for R1 <= R2. The two
// estimates run concurrently when threads > 1.
MonotonicityResult domain_monotonicity_check(int dim, int k, double R1, double R2, const IterationConfig& cfg,
                                             const SolverConfig& scfg, int threads = 1);

// Thread cap from KHESS_THREADS, defaulting to the hardware concurrency.
int thread_budget();

}  // namespace khess
