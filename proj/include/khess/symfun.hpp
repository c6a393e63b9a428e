#pragma once

#include <complex>
#include <span>
#include <vector>

namespace khess {

// Binomial coefficient C(n, j) as a double; 0 when j < 0 or j > n.
double binomial(int n, int j);

// Real N-vector kept in ascending order, e.g. the spectrum of a symmetric
// matrix. Construction sorts and rejects empty or non-finite input.
class EigenSpectrum {
public:
    explicit EigenSpectrum(std::vector<double> values);

    int size() const { return static_cast<int>(values_.size()); }
    std::span<const double> values() const { return values_; }
    double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
    double max_abs() const;

private:
    std::vector<double> values_;
};

// sigma_1..sigma_N of a vector; sigma_0 = 1 is implied.
class SigmaVector {
public:
    explicit SigmaVector(std::vector<double> sigmas);

    int size() const { return static_cast<int>(sigmas_.size()); }
    // sigma_j for 0 <= j <= N.
    double operator()(int j) const;
    std::span<const double> values() const { return sigmas_; }

private:
    std::vector<double> sigmas_;
};

enum class Cone { open, closed };

// k-th elementary symmetric polynomial, via the coefficient recurrence of
// prod_i (x + lambda_i) truncated at degree k. Throws DomainError unless
// 1 <= k <= N.
double sigma_k(std::span<const double> lambda, int k);
double sigma_k(const EigenSpectrum& lambda, int k);

SigmaVector sigma_all(std::span<const double> lambda);
SigmaVector sigma_all(const EigenSpectrum& lambda);

// Membership in the Garding cone Gamma_k. Open: sigma_j > slack for all
// j <= k. Closed: sigma_j >= -slack for all j <= k.
bool in_gamma_k(std::span<const double> lambda, int k, Cone cone, double slack = 0.0);
bool in_gamma_k(const EigenSpectrum& lambda, int k, Cone cone, double slack = 0.0);

// Membership in the open cone through positivity of sigma_k and of every
// iterated partial derivative of order <= k-1. The order-m derivative in
// distinct variables i_1..i_m is sigma_{k-m} of lambda with those entries
// removed. Cost grows like 2^N.
bool in_gamma_k_korevaar(std::span<const double> lambda, int k);
bool in_gamma_k_korevaar(const EigenSpectrum& lambda, int k);

// Coefficients of p(t) = sigma_k(t*(1,..,1) + lambda), highest degree first
// (length k+1): the coefficient of t^{k-j} is C(N-j, k-j) sigma_j(lambda).
std::vector<double> garding_polynomial(std::span<const double> lambda, int k);

// All k complex roots of garding_polynomial, by Aberth iteration in extended
// precision. Clusters produced by multiple roots are replaced by their mean.
// Restarts up to `trials` times from rotated initial guesses; throws
// ConvergenceError if none converges.
std::vector<std::complex<double>> garding_roots(std::span<const double> lambda, int k, int trials = 4);

// True when every root of t -> sigma_k(t*1 + lambda) is real, i.e. all
// imaginary parts are below 1e-9 * (1 + |lambda|_inf).
bool garding_roots_real(std::span<const double> lambda, int k, int trials = 4);
bool garding_roots_real(const EigenSpectrum& lambda, int k, int trials = 4);

}  // namespace khess
