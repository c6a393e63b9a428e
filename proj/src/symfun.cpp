#include "khess/symfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "khess/errors.hpp"

namespace khess {

namespace {

void check_order(std::span<const double> lambda, int k) {
    const int n = static_cast<int>(lambda.size());
    if (k < 1 || k > n) {
        throw DomainError("order k=" + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
    }
}

// e[0..kmax] of prod_i (x + lambda_i), i.e. sigma_0..sigma_kmax.
std::vector<double> elementary(std::span<const double> lambda, int kmax) {
    std::vector<double> e(static_cast<std::size_t>(kmax) + 1, 0.0);
    e[0] = 1.0;
    int filled = 0;
    for (double x : lambda) {
        filled = std::min(filled + 1, kmax);
        for (int j = filled; j >= 1; --j) {
            e[static_cast<std::size_t>(j)] += x * e[static_cast<std::size_t>(j - 1)];
        }
    }
    return e;
}

}  // namespace

double binomial(int n, int j) {
    if (j < 0 || j > n) return 0.0;
    j = std::min(j, n - j);
    double c = 1.0;
    for (int i = 1; i <= j; ++i) {
        c = c * static_cast<double>(n - j + i) / static_cast<double>(i);
    }
    return std::round(c);
}

EigenSpectrum::EigenSpectrum(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw DomainError("spectrum must have at least one entry");
    for (double v : values_) {
        if (!std::isfinite(v)) throw DomainError("spectrum entries must be finite");
    }
    std::sort(values_.begin(), values_.end());
}

double EigenSpectrum::max_abs() const {
    return std::max(std::abs(values_.front()), std::abs(values_.back()));
}

SigmaVector::SigmaVector(std::vector<double> sigmas) : sigmas_(std::move(sigmas)) {
    for (double s : sigmas_) {
        if (!std::isfinite(s)) throw DomainError("sigma values must be finite");
    }
}

double SigmaVector::operator()(int j) const {
    if (j == 0) return 1.0;
    if (j < 0 || j > size()) throw DomainError("sigma index out of range");
    return sigmas_[static_cast<std::size_t>(j - 1)];
}

double sigma_k(std::span<const double> lambda, int k) {
    check_order(lambda, k);
    return elementary(lambda, k)[static_cast<std::size_t>(k)];
}

double sigma_k(const EigenSpectrum& lambda, int k) { return sigma_k(lambda.values(), k); }

SigmaVector sigma_all(std::span<const double> lambda) {
    auto e = elementary(lambda, static_cast<int>(lambda.size()));
    return SigmaVector(std::vector<double>(e.begin() + 1, e.end()));
}

SigmaVector sigma_all(const EigenSpectrum& lambda) { return sigma_all(lambda.values()); }

bool in_gamma_k(std::span<const double> lambda, int k, Cone cone, double slack) {
    check_order(lambda, k);
    if (slack < 0.0) throw DomainError("cone slack must be nonnegative");
    const auto e = elementary(lambda, k);
    for (int j = 1; j <= k; ++j) {
        const double s = e[static_cast<std::size_t>(j)];
        if (cone == Cone::open ? !(s > slack) : !(s >= -slack)) return false;
    }
    return true;
}

bool in_gamma_k(const EigenSpectrum& lambda, int k, Cone cone, double slack) {
    return in_gamma_k(lambda.values(), k, cone, slack);
}

bool in_gamma_k_korevaar(std::span<const double> lambda, int k) {
    check_order(lambda, k);
    const int n = static_cast<int>(lambda.size());
    std::vector<double> rest;
    rest.reserve(lambda.size());
    for (int m = 0; m <= k - 1; ++m) {
        // Derivative in the m distinct variables flagged by `removed`.
        std::vector<char> removed(static_cast<std::size_t>(n), 0);
        std::fill(removed.end() - m, removed.end(), 1);
        do {
            rest.clear();
            for (int i = 0; i < n; ++i) {
                if (!removed[static_cast<std::size_t>(i)]) rest.push_back(lambda[static_cast<std::size_t>(i)]);
            }
            if (!(elementary(rest, k - m)[static_cast<std::size_t>(k - m)] > 0.0)) return false;
        } while (std::next_permutation(removed.begin(), removed.end()));
    }
    return true;
}

bool in_gamma_k_korevaar(const EigenSpectrum& lambda, int k) { return in_gamma_k_korevaar(lambda.values(), k); }

std::vector<double> garding_polynomial(std::span<const double> lambda, int k) {
    check_order(lambda, k);
    const int n = static_cast<int>(lambda.size());
    const auto e = elementary(lambda, k);
    std::vector<double> coeffs(static_cast<std::size_t>(k) + 1);
    for (int j = 0; j <= k; ++j) {
        coeffs[static_cast<std::size_t>(j)] = binomial(n - j, k - j) * e[static_cast<std::size_t>(j)];
    }
    return coeffs;
}

namespace {

using cld = std::complex<long double>;

struct Horner {
    cld value;
    cld derivative;
    long double magnitude;  // sum |a_j| |z|^{k-j}, for the rounding-error bound
};

Horner horner(const std::vector<long double>& a, cld z) {
    cld p = a[0];
    cld dp = 0.0L;
    long double mag = std::abs(a[0]);
    const long double az = std::abs(z);
    for (std::size_t i = 1; i < a.size(); ++i) {
        dp = dp * z + p;
        p = p * z + a[i];
        mag = mag * az + std::abs(a[i]);
    }
    return {p, dp, mag};
}

bool aberth(const std::vector<long double>& a, std::vector<cld>& z, long double scale) {
    const long double eps = std::numeric_limits<long double>::epsilon();
    const std::size_t deg = z.size();
    for (int iter = 0; iter < 2000; ++iter) {
        long double max_step = 0.0L;
        bool all_small_residual = true;
        for (std::size_t i = 0; i < deg; ++i) {
            const Horner h = horner(a, z[i]);
            if (std::abs(h.value) > 8.0L * static_cast<long double>(deg) * eps * h.magnitude) {
                all_small_residual = false;
            }
            if (h.value == cld(0.0L)) continue;
            const cld ratio = h.value / h.derivative;
            cld repulsion = 0.0L;
            for (std::size_t j = 0; j < deg; ++j) {
                if (j != i) repulsion += 1.0L / (z[i] - z[j]);
            }
            const cld step = ratio / (1.0L - ratio * repulsion);
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) return false;
            z[i] -= step;
            max_step = std::max(max_step, std::abs(step));
        }
        if (all_small_residual || max_step <= 1e-15L * scale) return true;
    }
    return false;
}

}  // namespace

std::vector<std::complex<double>> garding_roots(std::span<const double> lambda, int k, int trials) {
    const auto coeffs = garding_polynomial(lambda, k);
    std::vector<long double> a(coeffs.begin(), coeffs.end());
    const long double lead = a[0];
    for (auto& c : a) c /= lead;

    long double scale = 1.0L;
    for (double x : lambda) scale = std::max(scale, 1.0L + std::abs(static_cast<long double>(x)));

    const auto deg = static_cast<std::size_t>(k);
    long double bound = 0.0L;
    for (std::size_t i = 1; i < a.size(); ++i) bound = std::max(bound, std::abs(a[i]));
    const long double radius = 1.0L + bound;
    const long double centre = -a[1] / static_cast<long double>(deg);

    std::vector<cld> z(deg);
    bool converged = false;
    for (int trial = 0; trial < std::max(trials, 1) && !converged; ++trial) {
        const long double offset = 0.4L + 0.7L * static_cast<long double>(trial);
        for (std::size_t j = 0; j < deg; ++j) {
            const long double theta = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(j) /
                                          static_cast<long double>(deg) + offset;
            z[j] = centre + radius * cld(std::cos(theta), std::sin(theta));
        }
        converged = aberth(a, z, scale);
    }
    if (!converged) {
        throw ConvergenceError("Aberth iteration did not converge for Garding polynomial of degree " +
                               std::to_string(k));
    }

    // Multiple real roots split into small clusters of conjugate pairs under
    // rounding; replace each such single-linkage cluster by its mean. Clusters
    // of real values are distinct close roots and stay as they are.
    const long double cluster_radius = 1e-3L * scale;
    const long double imag_tol = 1e-12L * scale;
    std::vector<int> label(deg, -1);
    int next = 0;
    for (std::size_t i = 0; i < deg; ++i) {
        if (label[i] >= 0) continue;
        label[i] = next;
        std::vector<std::size_t> stack{i};
        while (!stack.empty()) {
            const std::size_t cur = stack.back();
            stack.pop_back();
            for (std::size_t j = 0; j < deg; ++j) {
                if (label[j] < 0 && std::abs(z[j] - z[cur]) < cluster_radius) {
                    label[j] = next;
                    stack.push_back(j);
                }
            }
        }
        ++next;
    }
    std::vector<std::complex<double>> roots(deg);
    for (int c = 0; c < next; ++c) {
        cld sum = 0.0L;
        long double count = 0.0L;
        bool complex_member = false;
        for (std::size_t j = 0; j < deg; ++j) {
            if (label[j] == c) {
                sum += z[j];
                count += 1.0L;
                complex_member = complex_member || std::abs(z[j].imag()) > imag_tol;
            }
        }
        const cld mean = sum / count;
        for (std::size_t j = 0; j < deg; ++j) {
            if (label[j] != c) continue;
            const cld v = complex_member ? mean : z[j];
            roots[j] = {static_cast<double>(v.real()), static_cast<double>(v.imag())};
        }
    }
    std::sort(roots.begin(), roots.end(), [](const auto& x, const auto& y) { return x.real() < y.real(); });
    return roots;
}

bool garding_roots_real(std::span<const double> lambda, int k, int trials) {
    const auto roots = garding_roots(lambda, k, trials);
    double norm = 0.0;
    for (double x : lambda) norm = std::max(norm, std::abs(x));
    const double tol = 1e-9 * (1.0 + norm);
    return std::all_of(roots.begin(), roots.end(), [tol](const auto& z) { return std::abs(z.imag()) < tol; });
}

bool garding_roots_real(const EigenSpectrum& lambda, int k, int trials) {
    return garding_roots_real(lambda.values(), k, trials);
}

}  // namespace khess
