#pragma once

#include <cstddef>
#include <vector>

#include "khess/symfun.hpp"

namespace khess {

// Sampled radial function h(r) on r_0 < ... < r_M = radius, with first and
// second derivatives at the nodes. r_0 is 0 for ball profiles and positive
// for annular ones.
struct RadialProfile {
    double radius = 0.0;
    int dim = 0;
    int order = 0;
    std::vector<double> r;
    std::vector<double> h;
    std::vector<double> hp;
    std::vector<double> hpp;
    bool k_convex = false;

    std::size_t size() const { return r.size(); }

    // Throws DomainError on unequal array lengths, non-increasing grid,
    // non-finite samples, or an inconsistent radius.
    void validate() const;
};

struct BarrierParams {
    double C0 = 1.0;
    double C1 = 0.0;
    double C2 = 0.0;
    double C3 = 0.0;
    double M = 0.0;
    double m = 0.0;      // exponential rate of the interior-ball barrier
    double t = 0.0;      // rate of the boundary barriers
    double delta = 0.0;  // tube / interior-ball radius
    double d0 = 0.0;
    double rho = 0.0;
};

std::vector<double> uniform_grid(double r0, double r1, int intervals);

// Hessian spectrum of w(x) = h(|x|) away from the origin: hpp once and hp/r
// with multiplicity N-1.
EigenSpectrum radial_hessian_spectrum(double hp, double hpp, double r, int dim);

// (hp/r)^{k-1} C(N-1,k-1) [hpp + (hp/r)(N-k)/k].
double s_k_radial(double hp, double hpp, double r, int dim, int k);

// hpp (hp/r)^{k-1} C(N-1,k-1) + (hp/r)^k C(N-1,k). Same value as
// s_k_radial through the binomial expansion; kept as a separate code path.
double s_k_radial_expanded(double hp, double hpp, double r, int dim, int k);

// Limit at the origin of a smooth radial function (hp/r -> hpp(0)).
double s_k_radial_origin(double hpp0, int dim, int k);

// Scale (1 + |hp/r| + |hpp|)^k used to size residual tolerances.
double radial_scale(double hp, double hpp, double r, int k);

// S_j of x -> c + Crho |x|^alpha away from 0:
// (Crho alpha r^{alpha-2})^j (N-1)!/(j!(N-j)!) [(alpha-2) j + N].
double s_j_radial_power(double c_rho, double alpha, double r, int dim, int j);

// S_k of the profile at node i, using the origin limit when r_i = 0.
double profile_s_k(const RadialProfile& p, std::size_t i);
EigenSpectrum profile_spectrum(const RadialProfile& p, std::size_t i);

// h at an arbitrary radius in [r_0, radius] by cubic Hermite interpolation
// of (h, hp). Throws DomainError outside the grid.
double profile_value_at(const RadialProfile& p, double r);

// True when every node spectrum lies in the closed cone Gamma_k up to the
// slack tol * radial_scale.
bool profile_is_k_convex(const RadialProfile& p, double tol = 1e-10);

// Second-order finite differences of h on an arbitrary grid: centred in the
// interior, one-sided three-point stencils at the ends.
std::vector<double> fd_first_derivative(const std::vector<double>& r, const std::vector<double>& h);
std::vector<double> fd_second_derivative(const std::vector<double>& r, const std::vector<double>& h);

// Profile from samples only; derivatives by finite differences.
RadialProfile profile_from_samples(std::vector<double> r, std::vector<double> h, int dim, int k);

// u(x) = -(R^2 - |x|^2)^2 / 4 with analytic derivatives on a uniform grid.
RadialProfile quartic_test_profile(double radius, int dim, int k, int grid_size);

// w = C0 (exp(-m delta) - exp(-m r)) on the annulus [delta/2, delta].
// Requires C0 > 0, delta > 0 and m > 2(N-k)/(k delta); throws
// PreconditionError otherwise.
RadialProfile exp_barrier_profile(const BarrierParams& params, int dim, int k, int grid_size = 64);

}  // namespace khess
