#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "khess/radial.hpp"

namespace khess {

// Nonnegative radial source f(r).
class SourceTerm {
public:
    enum class Kind { constant, sampled, polynomial, closure };

    static SourceTerm constant(double c);
    // Piecewise-linear interpolation of (r_i, f_i); r must be increasing.
    static SourceTerm sampled(std::vector<double> r, std::vector<double> f);
    // c0 + c1 r + c2 r^2 + ...
    static SourceTerm polynomial(std::vector<double> coeffs);
    static SourceTerm closure(std::function<double(double)> fn, std::string label = "closure");

    // "const:<c>", "poly:<c0,c1,...>"; file sources are read by the io layer.
    static SourceTerm parse(const std::string& spec);

    Kind kind() const { return kind_; }
    double operator()(double r) const;
    std::vector<double> at(const std::vector<double>& r) const;
    std::string describe() const;

    const std::vector<double>& sample_radii() const { return r_; }
    const std::vector<double>& sample_values() const { return f_; }

    // Exact nodal samples when the source is sampled on exactly this grid.
    bool sampled_on(const std::vector<double>& r) const;

private:
    Kind kind_ = Kind::constant;
    double c_ = 0.0;
    std::vector<double> r_;
    std::vector<double> f_;
    std::vector<double> coeffs_;
    std::function<double(double)> fn_;
    std::string label_;
};

enum class Quadrature { trapezoid, simpson };

Quadrature parse_quadrature(const std::string& name);
std::string to_string(Quadrature q);

struct SolverConfig {
    int grid_size = 512;  // number of intervals; >= 64
    Quadrature quadrature = Quadrature::trapezoid;
    double tol_residual = 1e-4;
    int refine_max = 3;
    bool graded = false;  // spacing shrinks geometrically (ratio 0.9 per M/64 cells) toward r = R

    void validate() const;
};

// Grid nodes r_0 = r0 < ... < r_M = R for a given config.
std::vector<double> solver_grid(double r0, double R, const SolverConfig& cfg);

// Product-integration weights for I(r_i) = int_{r0}^{r_i} s^{N-1} f(s) ds
// with f replaced by its piecewise-linear (trapezoid) or piecewise-quadratic
// (simpson, pairs of cells) interpolant. Exact for those interpolants.
class RadialQuadrature {
public:
    RadialQuadrature(std::vector<double> r, int dim, Quadrature q);

    const std::vector<double>& grid() const { return r_; }
    Quadrature kind() const { return q_; }
    // Cumulative integrals at every node (I(r_0) = 0).
    std::vector<double> cumulative(const std::vector<double>& f) const;

private:
    struct Cell {
        std::size_t first;  // index of the first interpolation node
        double w[3];        // weights on nodes first, first+1, first+2
    };
    std::vector<double> r_;
    int dim_;
    Quadrature q_;
    std::vector<Cell> cells_;
};

// Solves S_k(D^2 u) = f on the given grid from nodal source values, without
// residual control. r.front() must be 0 for the ball problem; an annulus
// (r.front() > 0) needs inner_value <= 0 and solves for the flux constant.
RadialProfile solve_on_grid(const RadialQuadrature& quad, const std::vector<double>& f, int dim, int k,
                            std::optional<double> inner_value = std::nullopt);

struct DirichletSolution {
    RadialProfile profile;
    double residual_max = 0.0;  // max |S_k(hp, hpp_fd) - f| / (1 + |f|) over interior nodes
    int grid_size = 0;
    int refinements = 0;
};

// Residual of a solved profile with hpp replaced by a second-order finite
// difference of hp: max over interior nodes of |s_k_radial - f|/(1 + |f|).
double dirichlet_residual(const RadialProfile& p, const std::vector<double>& f);

// Ball B_R. PreconditionError on negative source samples, ConvergenceError
// when tol_residual is still unmet after refine_max grid doublings.
DirichletSolution solve_radial_dirichlet_report(const SourceTerm& f, double R, int dim, int k,
                                                const SolverConfig& cfg);
RadialProfile solve_radial_dirichlet(const SourceTerm& f, double R, int dim, int k, const SolverConfig& cfg);

// Annulus r_in < |x| < R with u(R) = 0 and u(r_in) = inner_value.
DirichletSolution solve_annulus_dirichlet(const SourceTerm& f, double r_in, double R, double inner_value, int dim,
                                          int k, const SolverConfig& cfg);

// sup over node pairs of |h(r) - h(s)| / |r - s|^alpha.
double holder_seminorm(const RadialProfile& p, double alpha);

// h(r) >= -C3 (R - r) at every node with R - r < d0.
bool verify_boundary_growth(const RadialProfile& p, double C3, double d0);

// [sub <= super at r = R] implies [sub <= super at every node].
bool classical_comparison_check(const RadialProfile& sub, const RadialProfile& super, double c);

struct HopfReport {
    double delta = 0.0;
    double m = 0.0;
    double C0 = 0.0;
    double C1 = 0.0;
    double barrier_s_k_max = 0.0;   // max S_k of the barrier over its annulus nodes, must be < 0
    double annulus_margin = 0.0;    // min (w - psi) over sampled annulus points
    double linear_margin = 0.0;     // min (-C1 d - psi(R - d)) for d in (0, delta/2]
    bool pass = false;
};

// Interior-ball barrier at the boundary point R e_1 with centre (R - delta) e_1.
// C0 = max psi on |x - z0| = delta/2 divided by exp(-m delta) - exp(-m delta/2),
// C1 = m C0 exp(-m delta). m defaults to 2 (N-k)/(k delta) + 2/delta.
// PreconditionError when psi is not negative on the inner sphere.
HopfReport verify_hopf_estimate(const RadialProfile& psi, double delta, std::optional<double> m = std::nullopt);

}  // namespace khess
