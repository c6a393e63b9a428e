#pragma once

#include <span>
#include <vector>

#include "khess/symfun.hpp"

namespace khess {

// Dense symmetric N x N matrix, row-major. Construction rejects non-finite
// entries and asymmetry beyond 1e-12 relative to the largest entry; the
// stored matrix is the exact symmetrization (A + A^T)/2.
class SymMatrix {
public:
    SymMatrix(int n, std::vector<double> row_major);

    static SymMatrix zero(int n);
    static SymMatrix identity(int n);
    static SymMatrix diagonal(std::span<const double> d);

    int size() const { return n_; }
    double operator()(int i, int j) const { return a_[index(i, j)]; }
    std::span<const double> entries() const { return a_; }
    double max_abs_entry() const;
    double trace() const;

    SymMatrix operator+(const SymMatrix& other) const;
    SymMatrix operator-(const SymMatrix& other) const;
    SymMatrix operator-() const;
    SymMatrix operator*(double s) const;

    // Q^T A Q for a row-major N x N matrix Q (assumed orthogonal by callers).
    SymMatrix congruence(std::span<const double> q) const;

private:
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
    }

    int n_;
    std::vector<double> a_;
};

struct EigenDecomposition {
    EigenSpectrum values;
    // Column j (row-major storage, N x N) is the unit eigenvector for values[j].
    std::vector<double> vectors;
};

// Householder tridiagonalization followed by implicit QL with shifts.
EigenDecomposition eigen_decompose(const SymMatrix& a);
EigenSpectrum eigenvalues(const SymMatrix& a);

// S_k(A) = sigma_k(lambda(A)).
double s_k_op(const SymMatrix& a, int k);

// Slack used by closed-cone matrix tests: 1e-10 (1 + |A|)^k with |A| the
// spectral radius.
double sigma_slack(const EigenSpectrum& spectrum, int k);

// A in Sigma_k (closed, with sigma_slack) or in its interior (strict: open
// cone, zero slack).
bool in_sigma_k(const SymMatrix& a, int k, Cone cone);
bool in_sigma_k(const EigenSpectrum& spectrum, int k, Cone cone);

// Dirichlet dual: A is in the dual iff -A is not in the interior of Sigma_k.
bool in_dual_sigma_k(const SymMatrix& a, int k);

// Second-order jet of a test function at a point.
struct AdmissibleJet {
    std::vector<double> point;
    double value = 0.0;
    std::vector<double> gradient;
    SymMatrix hessian;
};

// Pointwise classical tests for S_k(D^2 u) + lambda u |u|^{k-1} = rhs.
// Subsolution: inequality >= rhs and Hessian in Sigma_k.
// Supersolution: inequality <= rhs, or Hessian outside Sigma_k.
bool classical_subsolution_at(const AdmissibleJet& jet, double lambda, int k, double rhs);
bool classical_supersolution_at(const AdmissibleJet& jet, double lambda, int k, double rhs);

// lambda * u |u|^{k-1}
double eigen_term(double lambda, double value, int k);

}  // namespace khess
