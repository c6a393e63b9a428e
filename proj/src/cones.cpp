#include "khess/cones.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "khess/errors.hpp"

namespace khess {

SymMatrix::SymMatrix(int n, std::vector<double> row_major) : n_(n), a_(std::move(row_major)) {
    if (n < 1) throw DomainError("matrix dimension must be positive");
    if (a_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
        throw DomainError("matrix needs " + std::to_string(n * n) + " entries, got " + std::to_string(a_.size()));
    }
    double scale = 0.0;
    for (double v : a_) {
        if (!std::isfinite(v)) throw DomainError("matrix entries must be finite");
        scale = std::max(scale, std::abs(v));
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double aij = a_[index(i, j)];
            const double aji = a_[index(j, i)];
            if (std::abs(aij - aji) > 1e-12 * scale) {
                throw DomainError("matrix is not symmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");
            }
            const double mean = 0.5 * (aij + aji);
            a_[index(i, j)] = mean;
            a_[index(j, i)] = mean;
        }
    }
}

SymMatrix SymMatrix::zero(int n) {
    return SymMatrix(n, std::vector<double>(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0));
}

SymMatrix SymMatrix::identity(int n) {
    std::vector<double> ones(static_cast<std::size_t>(n), 1.0);
    return diagonal(ones);
}

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
    const int n = static_cast<int>(d.size());
    std::vector<double> a(d.size() * d.size(), 0.0);
    for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i) * d.size() + static_cast<std::size_t>(i)] = d[static_cast<std::size_t>(i)];
    return SymMatrix(n, std::move(a));
}

double SymMatrix::max_abs_entry() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
}

double SymMatrix::trace() const {
    double t = 0.0;
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
}

SymMatrix SymMatrix::operator+(const SymMatrix& other) const {
    if (other.n_ != n_) throw DomainError("matrix dimension mismatch");
    std::vector<double> out(a_.size());
    std::transform(a_.begin(), a_.end(), other.a_.begin(), out.begin(), std::plus<>());
    return SymMatrix(n_, std::move(out));
}

SymMatrix SymMatrix::operator-(const SymMatrix& other) const { return *this + (-other); }

SymMatrix SymMatrix::operator-() const { return *this * -1.0; }

SymMatrix SymMatrix::operator*(double s) const {
    std::vector<double> out(a_);
    for (double& v : out) v *= s;
    return SymMatrix(n_, std::move(out));
}

SymMatrix SymMatrix::congruence(std::span<const double> q) const {
    const auto n = static_cast<std::size_t>(n_);
    if (q.size() != n * n) throw DomainError("congruence matrix has wrong size");
    std::vector<double> aq(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < n; ++l)
            for (std::size_t j = 0; j < n; ++j) aq[i * n + j] += a_[i * n + l] * q[l * n + j];
    std::vector<double> out(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < n; ++l)
            for (std::size_t j = 0; j < n; ++j) out[i * n + j] += q[l * n + i] * aq[l * n + j];
    // Restore exact symmetry lost to rounding before validation.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) out[j * n + i] = out[i * n + j];
    return SymMatrix(n_, std::move(out));
}

namespace {

// Householder reduction to tridiagonal form. On exit d holds the diagonal,
// e the subdiagonal in e[1..n-1], and v the accumulated transformation.
void tridiagonalize(std::vector<std::vector<double>>& v, std::vector<double>& d, std::vector<double>& e) {
    const int n = static_cast<int>(d.size());
    for (int j = 0; j < n; ++j) d[j] = v[n - 1][j];

    for (int i = n - 1; i > 0; --i) {
        double scale = 0.0;
        double h = 0.0;
        for (int k = 0; k < i; ++k) scale += std::abs(d[k]);
        if (scale == 0.0) {
            e[i] = d[i - 1];
            for (int j = 0; j < i; ++j) {
                d[j] = v[i - 1][j];
                v[i][j] = 0.0;
                v[j][i] = 0.0;
            }
        } else {
            for (int k = 0; k < i; ++k) {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            double f = d[i - 1];
            double g = std::sqrt(h);
            if (f > 0) g = -g;
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for (int j = 0; j < i; ++j) e[j] = 0.0;

            for (int j = 0; j < i; ++j) {
                f = d[j];
                v[j][i] = f;
                g = e[j] + v[j][j] * f;
                for (int k = j + 1; k <= i - 1; ++k) {
                    g += v[k][j] * d[k];
                    e[k] += v[k][j] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for (int j = 0; j < i; ++j) {
                e[j] /= h;
                f += e[j] * d[j];
            }
            const double hh = f / (h + h);
            for (int j = 0; j < i; ++j) e[j] -= hh * d[j];
            for (int j = 0; j < i; ++j) {
                f = d[j];
                g = e[j];
                for (int k = j; k <= i - 1; ++k) v[k][j] -= (f * e[k] + g * d[k]);
                d[j] = v[i - 1][j];
                v[i][j] = 0.0;
            }
        }
        d[i] = h;
    }

    for (int i = 0; i < n - 1; ++i) {
        v[n - 1][i] = v[i][i];
        v[i][i] = 1.0;
        const double h = d[i + 1];
        if (h != 0.0) {
            for (int k = 0; k <= i; ++k) d[k] = v[k][i + 1] / h;
            for (int j = 0; j <= i; ++j) {
                double g = 0.0;
                for (int k = 0; k <= i; ++k) g += v[k][i + 1] * v[k][j];
                for (int k = 0; k <= i; ++k) v[k][j] -= g * d[k];
            }
        }
        for (int k = 0; k <= i; ++k) v[k][i + 1] = 0.0;
    }
    for (int j = 0; j < n; ++j) {
        d[j] = v[n - 1][j];
        v[n - 1][j] = 0.0;
    }
    v[n - 1][n - 1] = 1.0;
    e[0] = 0.0;
}

// Implicit QL iteration on the tridiagonal matrix, accumulating into v.
void ql_implicit(std::vector<std::vector<double>>& v, std::vector<double>& d, std::vector<double>& e) {
    const int n = static_cast<int>(d.size());
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    double f = 0.0;
    double tst1 = 0.0;
    const double eps = std::numeric_limits<double>::epsilon();
    for (int l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
        int m = l;
        while (m < n) {
            if (std::abs(e[m]) <= eps * tst1) break;
            ++m;
        }
        if (m > l) {
            int iter = 0;
            do {
                if (++iter > 100) throw ConvergenceError("QL iteration did not converge");
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (int i = l + 2; i < n; ++i) d[i] -= h;
                f += h;

                p = d[m];
                double c = 1.0;
                double c2 = c;
                double c3 = c;
                const double el1 = e[l + 1];
                double s = 0.0;
                double s2 = 0.0;
                for (int i = m - 1; i >= l; --i) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = std::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for (int k = 0; k < n; ++k) {
                        h = v[k][i + 1];
                        v[k][i + 1] = s * v[k][i] + c * h;
                        v[k][i] = c * v[k][i] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::abs(e[l]) > eps * tst1);
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

}  // namespace

EigenDecomposition eigen_decompose(const SymMatrix& a) {
    const int n = a.size();
    std::vector<std::vector<double>> v(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) v[i][j] = a(i, j);
    std::vector<double> d(static_cast<std::size_t>(n), 0.0);
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    if (n == 1) {
        return {EigenSpectrum({a(0, 0)}), {1.0}};
    }
    tridiagonalize(v, d, e);
    ql_implicit(v, d, e);

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return d[x] < d[y]; });
    std::vector<double> values(static_cast<std::size_t>(n));
    std::vector<double> vectors(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        values[j] = d[order[j]];
        for (int i = 0; i < n; ++i) vectors[static_cast<std::size_t>(i * n + j)] = v[i][order[j]];
    }
    return {EigenSpectrum(std::move(values)), std::move(vectors)};
}

EigenSpectrum eigenvalues(const SymMatrix& a) { return eigen_decompose(a).values; }

double s_k_op(const SymMatrix& a, int k) { return sigma_k(eigenvalues(a), k); }

double sigma_slack(const EigenSpectrum& spectrum, int k) {
    return 1e-10 * std::pow(1.0 + spectrum.max_abs(), k);
}

bool in_sigma_k(const EigenSpectrum& spectrum, int k, Cone cone) {
    const double slack = cone == Cone::closed ? sigma_slack(spectrum, k) : 0.0;
    return in_gamma_k(spectrum, k, cone, slack);
}

bool in_sigma_k(const SymMatrix& a, int k, Cone cone) { return in_sigma_k(eigenvalues(a), k, cone); }

bool in_dual_sigma_k(const SymMatrix& a, int k) { return !in_sigma_k(-a, k, Cone::open); }

double eigen_term(double lambda, double value, int k) {
    return lambda * value * std::pow(std::abs(value), k - 1);
}

namespace {

struct JetBalance {
    double lhs;
    double tolerance;
    bool admissible;
};

JetBalance balance(const AdmissibleJet& jet, double lambda, int k, double rhs) {
    const int n = jet.hessian.size();
    if ((!jet.point.empty() && static_cast<int>(jet.point.size()) != n) ||
        (!jet.gradient.empty() && static_cast<int>(jet.gradient.size()) != n)) {
        throw DomainError("jet dimensions inconsistent with Hessian size");
    }
    const EigenSpectrum spectrum = eigenvalues(jet.hessian);
    const double sk = sigma_k(spectrum, k);
    const double term = eigen_term(lambda, jet.value, k);
    // Rounding slack proportional to the magnitudes being compared.
    const double tol = 1e-12 * (std::abs(sk) + std::abs(term) + std::abs(rhs));
    return {sk + term, tol, in_sigma_k(spectrum, k, Cone::closed)};
}

}  // namespace

bool classical_subsolution_at(const AdmissibleJet& jet, double lambda, int k, double rhs) {
    const auto b = balance(jet, lambda, k, rhs);
    return b.admissible && b.lhs >= rhs - b.tolerance;
}

bool classical_supersolution_at(const AdmissibleJet& jet, double lambda, int k, double rhs) {
    const auto b = balance(jet, lambda, k, rhs);
    return !b.admissible || b.lhs <= rhs + b.tolerance;
}

}  // namespace khess
