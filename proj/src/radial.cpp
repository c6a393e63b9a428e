#include "khess/radial.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "khess/errors.hpp"

namespace khess {

namespace {

void check_radius(double r) {
    if (!(r > 0.0)) throw DomainError("radial formula needs r > 0 (punctured neighbourhood)");
}

void check_order(int dim, int k) {
    if (dim < 1 || k < 1 || k > dim) {
        throw DomainError("need 1 <= k <= N, got N=" + std::to_string(dim) + " k=" + std::to_string(k));
    }
}

}  // namespace

void RadialProfile::validate() const {
    const std::size_t n = r.size();
    if (n < 2) throw DomainError("profile needs at least two nodes");
    if (h.size() != n || hp.size() != n || hpp.size() != n) throw DomainError("profile arrays differ in length");
    if (dim < 1 || order < 1 || order > dim) throw DomainError("profile has invalid (N, k)");
    if (r.front() < 0.0) throw DomainError("profile grid must be nonnegative");
    for (std::size_t i = 1; i < n; ++i) {
        if (!(r[i] > r[i - 1])) throw DomainError("profile grid must be strictly increasing");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(h[i]) || !std::isfinite(hp[i]) || !std::isfinite(hpp[i])) {
            throw DomainError("profile samples must be finite");
        }
    }
    if (std::abs(r.back() - radius) > 1e-12 * std::max(1.0, radius)) {
        throw DomainError("profile radius does not match last grid node");
    }
}

std::vector<double> uniform_grid(double r0, double r1, int intervals) {
    if (intervals < 1 || !(r1 > r0)) throw DomainError("grid needs r1 > r0 and at least one interval");
    std::vector<double> r(static_cast<std::size_t>(intervals) + 1);
    const double h = (r1 - r0) / intervals;
    for (int i = 0; i <= intervals; ++i) r[static_cast<std::size_t>(i)] = r0 + h * i;
    r.back() = r1;
    return r;
}

EigenSpectrum radial_hessian_spectrum(double hp, double hpp, double r, int dim) {
    check_radius(r);
    if (dim < 1) throw DomainError("dimension must be positive");
    std::vector<double> v(static_cast<std::size_t>(dim), hp / r);
    v[0] = hpp;
    return EigenSpectrum(std::move(v));
}

double s_k_radial(double hp, double hpp, double r, int dim, int k) {
    check_radius(r);
    check_order(dim, k);
    const double q = hp / r;
    return std::pow(q, k - 1) * binomial(dim - 1, k - 1) * (hpp + q * (dim - k) / k);
}

double s_k_radial_expanded(double hp, double hpp, double r, int dim, int k) {
    check_radius(r);
    check_order(dim, k);
    const double q = hp / r;
    return hpp * std::pow(q, k - 1) * binomial(dim - 1, k - 1) + std::pow(q, k) * binomial(dim - 1, k);
}

double s_k_radial_origin(double hpp0, int dim, int k) {
    check_order(dim, k);
    return binomial(dim, k) * std::pow(hpp0, k);
}

double radial_scale(double hp, double hpp, double r, int k) {
    const double q = r > 0.0 ? hp / r : hpp;
    return std::pow(1.0 + std::abs(q) + std::abs(hpp), k);
}

double s_j_radial_power(double c_rho, double alpha, double r, int dim, int j) {
    check_radius(r);
    check_order(dim, j);
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("power exponent must lie in (0, 1]");
    const double base = c_rho * alpha * std::pow(r, alpha - 2.0);
    // (N-1)!/(j!(N-j)!) = C(N-1, j-1) / j
    const double comb = binomial(dim - 1, j - 1) / j;
    return std::pow(base, j) * comb * ((alpha - 2.0) * j + dim);
}

double profile_s_k(const RadialProfile& p, std::size_t i) {
    if (p.r[i] == 0.0) return s_k_radial_origin(p.hpp[i], p.dim, p.order);
    return s_k_radial(p.hp[i], p.hpp[i], p.r[i], p.dim, p.order);
}

EigenSpectrum profile_spectrum(const RadialProfile& p, std::size_t i) {
    if (p.r[i] == 0.0) return EigenSpectrum(std::vector<double>(static_cast<std::size_t>(p.dim), p.hpp[i]));
    return radial_hessian_spectrum(p.hp[i], p.hpp[i], p.r[i], p.dim);
}

double profile_value_at(const RadialProfile& p, double r) {
    const double tol = 1e-12 * std::max(1.0, p.radius);
    if (r < p.r.front() - tol || r > p.r.back() + tol) throw DomainError("radius outside the profile grid");
    r = std::clamp(r, p.r.front(), p.r.back());
    auto it = std::upper_bound(p.r.begin(), p.r.end(), r);
    std::size_t i = it == p.r.begin() ? 0 : static_cast<std::size_t>(it - p.r.begin()) - 1;
    if (i + 1 >= p.size()) i = p.size() - 2;
    const double a = p.r[i];
    const double dx = p.r[i + 1] - a;
    const double s = (r - a) / dx;
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * p.h[i] + (s3 - 2 * s2 + s) * dx * p.hp[i] + (-2 * s3 + 3 * s2) * p.h[i + 1] +
           (s3 - s2) * dx * p.hp[i + 1];
}

bool profile_is_k_convex(const RadialProfile& p, double tol) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double slack = tol * radial_scale(p.hp[i], p.hpp[i], p.r[i], p.order);
        if (!in_gamma_k(profile_spectrum(p, i), p.order, Cone::closed, slack)) return false;
    }
    return true;
}

std::vector<double> fd_first_derivative(const std::vector<double>& r, const std::vector<double>& h) {
    const std::size_t n = r.size();
    if (n < 3 || h.size() != n) throw DomainError("finite differences need at least three nodes");
    std::vector<double> d(n);
    // Derivative at x_j of the quadratic through (x0,y0),(x1,y1),(x2,y2).
    auto quad = [](double x0, double x1, double x2, double y0, double y1, double y2, double x) {
        const double l0 = ((x - x1) + (x - x2)) / ((x0 - x1) * (x0 - x2));
        const double l1 = ((x - x0) + (x - x2)) / ((x1 - x0) * (x1 - x2));
        const double l2 = ((x - x0) + (x - x1)) / ((x2 - x0) * (x2 - x1));
        return y0 * l0 + y1 * l1 + y2 * l2;
    };
    d[0] = quad(r[0], r[1], r[2], h[0], h[1], h[2], r[0]);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = quad(r[i - 1], r[i], r[i + 1], h[i - 1], h[i], h[i + 1], r[i]);
    d[n - 1] = quad(r[n - 3], r[n - 2], r[n - 1], h[n - 3], h[n - 2], h[n - 1], r[n - 1]);
    return d;
}

std::vector<double> fd_second_derivative(const std::vector<double>& r, const std::vector<double>& h) {
    const std::size_t n = r.size();
    if (n < 4 || h.size() != n) throw DomainError("second differences need at least four nodes");
    std::vector<double> d(n);
    auto centred = [](double x0, double x1, double x2, double y0, double y1, double y2) {
        return 2.0 * (y0 / ((x0 - x1) * (x0 - x2)) + y1 / ((x1 - x0) * (x1 - x2)) + y2 / ((x2 - x0) * (x2 - x1)));
    };
    // Second derivative at x0 of the cubic through four nodes (second order).
    auto one_sided = [](const double* x, const double* y) {
        double acc = 0.0;
        for (int j = 0; j < 4; ++j) {
            double denom = 1.0;
            double num = 0.0;
            for (int a = 0; a < 4; ++a) {
                if (a == j) continue;
                denom *= (x[j] - x[a]);
            }
            // d2/dx2 of prod_{a != j} (x - x_a) at x0
            for (int a = 0; a < 4; ++a) {
                if (a == j) continue;
                for (int b = 0; b < 4; ++b) {
                    if (b == j || b == a) continue;
                    double term = 1.0;
                    for (int c = 0; c < 4; ++c) {
                        if (c == j || c == a || c == b) continue;
                        term *= (x[0] - x[c]);
                    }
                    num += term;
                }
            }
            acc += y[j] * num / denom;
        }
        return acc;
    };
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = centred(r[i - 1], r[i], r[i + 1], h[i - 1], h[i], h[i + 1]);
    d[0] = one_sided(&r[0], &h[0]);
    const double xr[4] = {r[n - 1], r[n - 2], r[n - 3], r[n - 4]};
    const double yr[4] = {h[n - 1], h[n - 2], h[n - 3], h[n - 4]};
    d[n - 1] = one_sided(xr, yr);
    return d;
}

RadialProfile profile_from_samples(std::vector<double> r, std::vector<double> h, int dim, int k) {
    RadialProfile p;
    p.radius = r.empty() ? 0.0 : r.back();
    p.dim = dim;
    p.order = k;
    p.hp = fd_first_derivative(r, h);
    p.hpp = fd_second_derivative(r, h);
    p.r = std::move(r);
    p.h = std::move(h);
    p.validate();
    p.k_convex = profile_is_k_convex(p, 1e-6);
    return p;
}

RadialProfile quartic_test_profile(double radius, int dim, int k, int grid_size) {
    if (!(radius > 0.0)) throw DomainError("radius must be positive");
    check_order(dim, k);
    RadialProfile p;
    p.radius = radius;
    p.dim = dim;
    p.order = k;
    p.r = uniform_grid(0.0, radius, grid_size);
    const double r2 = radius * radius;
    for (double r : p.r) {
        const double s = r2 - r * r;
        p.h.push_back(-0.25 * s * s);
        p.hp.push_back(r * s);
        p.hpp.push_back(r2 - 3.0 * r * r);
    }
    p.h.back() = 0.0;
    p.validate();
    p.k_convex = profile_is_k_convex(p);
    return p;
}

RadialProfile exp_barrier_profile(const BarrierParams& params, int dim, int k, int grid_size) {
    check_order(dim, k);
    const double delta = params.delta;
    const double m = params.m;
    if (!(delta > 0.0)) throw PreconditionError("barrier needs delta > 0");
    if (!(params.C0 > 0.0)) throw PreconditionError("barrier amplitude C0 must be positive");
    const double threshold = 2.0 * (dim - k) / (k * delta);
    if (!(m > threshold) || !(m > 0.0)) {
        throw PreconditionError("barrier rate m=" + std::to_string(m) + " must exceed 2(N-k)/(k delta)=" +
                                std::to_string(threshold));
    }
    RadialProfile p;
    p.radius = delta;
    p.dim = dim;
    p.order = k;
    p.r = uniform_grid(0.5 * delta, delta, grid_size);
    const double c0 = params.C0;
    for (double r : p.r) {
        const double e = std::exp(-m * r);
        p.h.push_back(c0 * (std::exp(-m * delta) - e));
        p.hp.push_back(c0 * m * e);
        p.hpp.push_back(-c0 * m * m * e);
    }
    p.h.back() = 0.0;
    p.validate();
    p.k_convex = false;
    return p;
}

}  // namespace khess
