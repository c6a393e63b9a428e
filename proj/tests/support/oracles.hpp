#pragma once

// Reference computations that share no code with the library. Each one takes
// a different route to the same quantity: subset enumeration, characteristic
// polynomials, dense linear algebra, adaptive ODE integration.

#include <complex>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Sum over all k-subsets of products. N <= 20.
double sigma_subsets(const std::vector<double>& x, int k);

// sigma_1..sigma_N of the eigenvalues of A from the Faddeev-LeVerrier
// recursion (no eigenvalues computed).
std::vector<double> sigma_faddeev(const Eigen::MatrixXd& a);

// Determinant through partial-pivot LU.
double det_lu(const Eigen::MatrixXd& a);

// Roots of a polynomial (coefficients highest degree first) as eigenvalues of
// its companion matrix.
std::vector<std::complex<double>> companion_roots(const std::vector<double>& coeffs_high_first);

// Characteristic polynomial of a symmetric matrix (Faddeev-LeVerrier) and its
// companion roots, sorted ascending by real part.
std::vector<double> charpoly_eigenvalues(const Eigen::MatrixXd& a);

// Hessian of x -> h(|x|) at x = r u for a unit vector u:
// hpp u u^T + (hp / r)(I - u u^T).
Eigen::MatrixXd radial_hessian(double hp, double hpp, double r, const Eigen::VectorXd& u);

// Haar-ish orthogonal matrix from the QR factorization of a Gaussian matrix.
Eigen::MatrixXd random_orthogonal(int n, std::mt19937_64& rng);

// Random positive semidefinite matrix B B^T with B of size n x rank.
Eigen::MatrixXd random_psd(int n, int rank, std::mt19937_64& rng);

// Square of the first positive zero of J_0.
double bessel_j01_squared();

// First Dirichlet eigenvalue of S_k(D^2 u) = lambda |u|^k on B_R by shooting
// the radial ODE r^{N-k} (h')^k = (k / C(N-1,k-1)) int_0^r s^{N-1} lambda |h|^k
// with an adaptive Dormand-Prince integrator and bisecting on the sign of h(R).
double shooting_eigenvalue(int dim, int k, double R, double rel_tol = 1e-10);

// Radial solution of S_k(D^2 u) = f with u(R) = 0 from the second-order form
// h'' = f / (C(N-1,k-1) q^{k-1}) - q (N-k)/k, q = h'/r, integrated from a
// series start (r0, hp0) near the origin. Returns h at the requested radii
// (ascending, all >= r0). The value at r0 is taken as 0 before the shift.
std::vector<double> ode_dirichlet(const std::function<double(double)>& f, int dim, int k, double R, double r0,
                                  double hp0, const std::vector<double>& radii);

// Principal curvatures of the ellipsoid x^2/a^2 + y^2/b^2 + z^2/c^2 = 1 at a
// surface point, from the closed-form Gauss and mean curvature. Ascending.
std::vector<double> ellipsoid_curvatures(double a, double b, double c, const Eigen::Vector3d& p);

}  // namespace oracle
