#include "khess/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "khess/errors.hpp"

namespace khess {

// ---------------------------------------------------------------- sources

SourceTerm SourceTerm::constant(double c) {
    if (!std::isfinite(c)) throw DomainError("constant source must be finite");
    SourceTerm s;
    s.kind_ = Kind::constant;
    s.c_ = c;
    return s;
}

SourceTerm SourceTerm::sampled(std::vector<double> r, std::vector<double> f) {
    if (r.size() < 2 || r.size() != f.size()) throw DomainError("sampled source needs matching r, f with >= 2 rows");
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!std::isfinite(r[i]) || !std::isfinite(f[i])) throw DomainError("sampled source must be finite");
        if (i > 0 && !(r[i] > r[i - 1])) throw DomainError("sampled source radii must increase");
    }
    SourceTerm s;
    s.kind_ = Kind::sampled;
    s.r_ = std::move(r);
    s.f_ = std::move(f);
    return s;
}

SourceTerm SourceTerm::polynomial(std::vector<double> coeffs) {
    if (coeffs.empty()) throw DomainError("polynomial source needs at least one coefficient");
    for (double c : coeffs) {
        if (!std::isfinite(c)) throw DomainError("polynomial coefficients must be finite");
    }
    SourceTerm s;
    s.kind_ = Kind::polynomial;
    s.coeffs_ = std::move(coeffs);
    return s;
}

SourceTerm SourceTerm::closure(std::function<double(double)> fn, std::string label) {
    if (!fn) throw DomainError("closure source is empty");
    SourceTerm s;
    s.kind_ = Kind::closure;
    s.fn_ = std::move(fn);
    s.label_ = std::move(label);
    return s;
}

namespace {

std::vector<double> parse_numbers(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw DomainError("cannot parse number '" + item + "'");
        }
        while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
        if (used != item.size()) throw DomainError("cannot parse number '" + item + "'");
        out.push_back(v);
    }
    return out;
}

}  // namespace

SourceTerm SourceTerm::parse(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw DomainError("source must be const:<c>, poly:<c0,...> or file:<csv>");
    const std::string kind = spec.substr(0, colon);
    const std::string rest = spec.substr(colon + 1);
    if (kind == "const") {
        const auto v = parse_numbers(rest);
        if (v.size() != 1) throw DomainError("const source takes one value");
        return constant(v[0]);
    }
    if (kind == "poly") return polynomial(parse_numbers(rest));
    throw DomainError("unknown source kind '" + kind + "'");
}

double SourceTerm::operator()(double r) const {
    switch (kind_) {
        case Kind::constant:
            return c_;
        case Kind::polynomial: {
            double acc = 0.0;
            for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * r + *it;
            return acc;
        }
        case Kind::closure:
            return fn_(r);
        case Kind::sampled: {
            const double tol = 1e-12 * std::max(1.0, std::abs(r_.back()));
            if (r < r_.front() - tol || r > r_.back() + tol) {
                throw DomainError("sampled source does not cover r = " + std::to_string(r));
            }
            if (r <= r_.front()) return f_.front();
            if (r >= r_.back()) return f_.back();
            const auto it = std::upper_bound(r_.begin(), r_.end(), r);
            const auto i = static_cast<std::size_t>(it - r_.begin()) - 1;
            const double s = (r - r_[i]) / (r_[i + 1] - r_[i]);
            return (1.0 - s) * f_[i] + s * f_[i + 1];
        }
    }
    return 0.0;
}

std::vector<double> SourceTerm::at(const std::vector<double>& r) const {
    if (sampled_on(r)) return f_;
    std::vector<double> out(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) out[i] = (*this)(r[i]);
    return out;
}

bool SourceTerm::sampled_on(const std::vector<double>& r) const {
    return kind_ == Kind::sampled && r == r_;
}

std::string SourceTerm::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
        case Kind::constant:
            os << "const:" << c_;
            break;
        case Kind::polynomial:
            os << "poly:";
            for (std::size_t i = 0; i < coeffs_.size(); ++i) os << (i ? "," : "") << coeffs_[i];
            break;
        case Kind::closure:
            os << label_;
            break;
        case Kind::sampled:
            os << "sampled:" << r_.size() << " rows";
            break;
    }
    return os.str();
}

// ------------------------------------------------------------------ config

Quadrature parse_quadrature(const std::string& name) {
    if (name == "trapezoid") return Quadrature::trapezoid;
    if (name == "simpson") return Quadrature::simpson;
    throw DomainError("quadrature must be trapezoid or simpson");
}

std::string to_string(Quadrature q) { return q == Quadrature::trapezoid ? "trapezoid" : "simpson"; }

void SolverConfig::validate() const {
    if (grid_size < 64) throw DomainError("grid_size must be at least 64");
    if (quadrature == Quadrature::simpson && grid_size % 2 != 0) {
        throw DomainError("simpson quadrature needs an even grid_size");
    }
    if (!(tol_residual > 0.0)) throw DomainError("tol_residual must be positive");
    if (refine_max < 0) throw DomainError("refine_max must be nonnegative");
}

std::vector<double> solver_grid(double r0, double R, const SolverConfig& cfg) {
    if (!(R > r0) || r0 < 0.0) throw DomainError("grid needs 0 <= r0 < R");
    const int m = cfg.grid_size;
    if (!cfg.graded) return uniform_grid(r0, R, m);
    const double rho = std::pow(0.9, 64.0 / m);
    const double first = (R - r0) * (1.0 - rho) / (1.0 - std::pow(rho, m));
    std::vector<double> r(static_cast<std::size_t>(m) + 1);
    r[0] = r0;
    double step = first;
    for (int i = 1; i <= m; ++i) {
        r[static_cast<std::size_t>(i)] = r[static_cast<std::size_t>(i) - 1] + step;
        step *= rho;
    }
    r.back() = R;
    return r;
}

// -------------------------------------------------------------- quadrature

RadialQuadrature::RadialQuadrature(std::vector<double> r, int dim, Quadrature q)
    : r_(std::move(r)), dim_(dim), q_(q) {
    const std::size_t n = r_.size();
    if (n < 3) throw DomainError("quadrature grid needs at least three nodes");
    if (dim_ < 1) throw DomainError("dimension must be positive");
    if (q_ == Quadrature::simpson && (n - 1) % 2 != 0) throw DomainError("simpson needs an even number of cells");
    using gauss = boost::math::quadrature::gauss<double, 20>;
    const int p = dim_ - 1;
    auto integrate = [p](auto&& g, double a, double b) {
        return gauss::integrate([&](double s) { return std::pow(s, p) * g(s); }, a, b);
    };
    cells_.reserve(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double a = r_[i];
        const double b = r_[i + 1];
        Cell c{};
        if (q_ == Quadrature::trapezoid) {
            c.first = i;
            c.w[0] = integrate([a, b](double s) { return (b - s) / (b - a); }, a, b);
            c.w[1] = integrate([a, b](double s) { return (s - a) / (b - a); }, a, b);
            c.w[2] = 0.0;
        } else {
            const std::size_t f = i - (i % 2);
            const double x0 = r_[f];
            const double x1 = r_[f + 1];
            const double x2 = r_[f + 2];
            c.first = f;
            c.w[0] = integrate([=](double s) { return (s - x1) * (s - x2) / ((x0 - x1) * (x0 - x2)); }, a, b);
            c.w[1] = integrate([=](double s) { return (s - x0) * (s - x2) / ((x1 - x0) * (x1 - x2)); }, a, b);
            c.w[2] = integrate([=](double s) { return (s - x0) * (s - x1) / ((x2 - x0) * (x2 - x1)); }, a, b);
        }
        cells_.push_back(c);
    }
}

std::vector<double> RadialQuadrature::cumulative(const std::vector<double>& f) const {
    if (f.size() != r_.size()) throw DomainError("source samples do not match the quadrature grid");
    std::vector<double> out(r_.size(), 0.0);
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        const Cell& c = cells_[i];
        double cell = c.w[0] * f[c.first] + c.w[1] * f[c.first + 1];
        if (c.w[2] != 0.0) cell += c.w[2] * f[c.first + 2];
        out[i + 1] = out[i] + cell;
    }
    return out;
}

// ------------------------------------------------------------------ solver

namespace {

void check_nonnegative(const std::vector<double>& r, const std::vector<double>& f) {
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!std::isfinite(f[i])) throw PreconditionError("source is not finite at r = " + std::to_string(r[i]));
        if (f[i] < 0.0) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "source must be nonnegative; f(" << r[i] << ") = " << f[i];
            throw PreconditionError(msg.str());
        }
    }
}

struct Derivs {
    std::vector<double> hp;
    std::vector<double> hpp;
    std::vector<double> h;
};

// hp from the first integral, hpp from S_k(hp, hpp) = f, h by integrating hp
// inward from h(R) = 0.
Derivs integrate_profile(const RadialQuadrature& quad, const std::vector<double>& f, const std::vector<double>& cum,
                         int dim, int k, double flux) {
    const auto& r = quad.grid();
    const std::size_t n = r.size();
    const double cb = binomial(dim - 1, k - 1);
    const double c = k / cb;
    Derivs d;
    d.hp.resize(n);
    d.hpp.resize(n);
    d.h.resize(n);
    bool need_fd = false;
    for (std::size_t i = 0; i < n; ++i) {
        double q = 0.0;
        if (r[i] == 0.0) {
            q = std::pow(f[i] / binomial(dim, k), 1.0 / k);
            d.hp[i] = 0.0;
            d.hpp[i] = q;
            continue;
        }
        if (flux == 0.0) {
            // q^k = c I(r) / r^N; dividing first keeps small r accurate.
            const double jr = std::max(0.0, cum[i] / std::pow(r[i], dim));
            q = std::pow(c * jr, 1.0 / k);
        } else {
            const double phi = std::max(0.0, flux + c * cum[i]);
            q = std::pow(phi / std::pow(r[i], dim), 1.0 / k);
        }
        d.hp[i] = r[i] * q;
        if (q > 0.0) {
            d.hpp[i] = f[i] / (cb * std::pow(q, k - 1)) - q * (dim - k) / k;
        } else if (f[i] == 0.0 || k == 1) {
            d.hpp[i] = k == 1 ? f[i] : 0.0;
        } else {
            d.hpp[i] = std::numeric_limits<double>::quiet_NaN();
            need_fd = true;
        }
    }
    if (need_fd) {
        const auto fd = fd_first_derivative(r, d.hp);
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(d.hpp[i])) d.hpp[i] = fd[i];
        }
    }
    d.h[n - 1] = 0.0;
    const bool hermite = quad.kind() == Quadrature::simpson;
    for (std::size_t i = n - 1; i-- > 0;) {
        const double dx = r[i + 1] - r[i];
        double cell = 0.5 * dx * (d.hp[i] + d.hp[i + 1]);
        if (hermite) cell += dx * dx / 12.0 * (d.hpp[i] - d.hpp[i + 1]);
        d.h[i] = d.h[i + 1] - cell;
    }
    return d;
}

}  // namespace

RadialProfile solve_on_grid(const RadialQuadrature& quad, const std::vector<double>& f, int dim, int k,
                            std::optional<double> inner_value) {
    if (dim < 1 || k < 1 || k > dim) throw DomainError("need 1 <= k <= N");
    const auto& r = quad.grid();
    check_nonnegative(r, f);
    const auto cum = quad.cumulative(f);

    double flux = 0.0;
    if (r.front() > 0.0) {
        const double target = inner_value.value_or(0.0);
        if (target > 0.0) throw PreconditionError("inner boundary value must be <= 0");
        auto inner_at = [&](double K) { return integrate_profile(quad, f, cum, dim, k, K).h.front(); };
        const double free_value = inner_at(0.0);
        const double scale = 1e-13 * (1.0 + std::abs(target) + std::abs(free_value));
        if (free_value < target - scale) {
            throw PreconditionError("inner value lies above the zero-flux solution; no k-convex solution");
        }
        if (free_value > target + scale) {
            double lo = 0.0;
            double hi = 1.0;
            while (inner_at(hi) > target) {
                lo = hi;
                hi *= 4.0;
                if (!std::isfinite(hi)) throw ConvergenceError("annulus flux search overflowed");
            }
            for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                (inner_at(mid) > target ? lo : hi) = mid;
            }
            flux = 0.5 * (lo + hi);
        }
    } else if (inner_value) {
        throw DomainError("inner boundary value is only meaningful on an annulus");
    }

    auto d = integrate_profile(quad, f, cum, dim, k, flux);
    RadialProfile p;
    p.radius = r.back();
    p.dim = dim;
    p.order = k;
    p.r = r;
    p.h = std::move(d.h);
    p.hp = std::move(d.hp);
    p.hpp = std::move(d.hpp);
    p.validate();
    p.k_convex = profile_is_k_convex(p, 1e-8);
    return p;
}

double dirichlet_residual(const RadialProfile& p, const std::vector<double>& f) {
    if (f.size() != p.size()) throw DomainError("source samples do not match the profile grid");
    const auto hpp_fd = fd_first_derivative(p.r, p.hp);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
        if (p.r[i] == 0.0) continue;
        const double s = s_k_radial(p.hp[i], hpp_fd[i], p.r[i], p.dim, p.order);
        worst = std::max(worst, std::abs(s - f[i]) / (1.0 + std::abs(f[i])));
    }
    return worst;
}

namespace {

DirichletSolution solve_with_refinement(const SourceTerm& f, double r0, double R, std::optional<double> inner,
                                        int dim, int k, const SolverConfig& cfg) {
    cfg.validate();
    if (dim < 1 || k < 1 || k > dim) throw DomainError("need 1 <= k <= N");
    if (!(R > 0.0)) throw DomainError("radius must be positive");
    // Interpolated samples are nonnegative iff the samples are.
    if (f.kind() == SourceTerm::Kind::sampled) check_nonnegative(f.sample_radii(), f.sample_values());
    SolverConfig level = cfg;
    double last = 0.0;
    for (int g = 0; g <= cfg.refine_max; ++g) {
        const auto grid = solver_grid(r0, R, level);
        const auto fv = f.at(grid);
        check_nonnegative(grid, fv);
        RadialQuadrature quad(grid, dim, level.quadrature);
        auto profile = solve_on_grid(quad, fv, dim, k, inner);
        last = dirichlet_residual(profile, fv);
        if (last <= cfg.tol_residual) return {std::move(profile), last, level.grid_size, g};
        level.grid_size *= 2;
    }
    std::ostringstream msg;
    msg << "residual " << last << " above tol_residual " << cfg.tol_residual << " after " << cfg.refine_max
        << " refinements";
    throw ConvergenceError(msg.str());
}

}  // namespace

DirichletSolution solve_radial_dirichlet_report(const SourceTerm& f, double R, int dim, int k,
                                                const SolverConfig& cfg) {
    return solve_with_refinement(f, 0.0, R, std::nullopt, dim, k, cfg);
}

RadialProfile solve_radial_dirichlet(const SourceTerm& f, double R, int dim, int k, const SolverConfig& cfg) {
    return solve_radial_dirichlet_report(f, R, dim, k, cfg).profile;
}

DirichletSolution solve_annulus_dirichlet(const SourceTerm& f, double r_in, double R, double inner_value, int dim,
                                          int k, const SolverConfig& cfg) {
    if (!(r_in > 0.0 && r_in < R)) throw DomainError("annulus needs 0 < r_in < R");
    return solve_with_refinement(f, r_in, R, inner_value, dim, k, cfg);
}

// ------------------------------------------------------------- diagnostics

double holder_seminorm(const RadialProfile& p, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("Holder exponent must lie in (0, 1]");
    double best = 0.0;
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double q = std::abs(p.h[j] - p.h[i]) / std::pow(p.r[j] - p.r[i], alpha);
            best = std::max(best, q);
        }
    }
    return best;
}

bool verify_boundary_growth(const RadialProfile& p, double C3, double d0) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double dist = p.radius - p.r[i];
        if (!(dist < d0)) continue;
        const double bound = -C3 * dist;
        if (p.h[i] < bound - 1e-12 * (1.0 + std::abs(p.h[i]))) return false;
    }
    return true;
}

bool classical_comparison_check(const RadialProfile& sub, const RadialProfile& super, double /*c*/) {
    if (sub.size() != super.size()) throw DomainError("comparison needs profiles on the same grid");
    const double gtol = 1e-12 * std::max(1.0, sub.radius);
    for (std::size_t i = 0; i < sub.size(); ++i) {
        if (std::abs(sub.r[i] - super.r[i]) > gtol) throw DomainError("comparison needs profiles on the same grid");
    }
    double scale = 1.0;
    for (std::size_t i = 0; i < sub.size(); ++i) scale = std::max({scale, std::abs(sub.h[i]), std::abs(super.h[i])});
    const double tol = 1e-12 * scale;
    if (sub.h.back() > super.h.back() + tol) return true;
    for (std::size_t i = 0; i < sub.size(); ++i) {
        if (sub.h[i] > super.h[i] + tol) return false;
    }
    return true;
}

HopfReport verify_hopf_estimate(const RadialProfile& psi, double delta, std::optional<double> m) {
    psi.validate();
    const double R = psi.radius;
    if (psi.r.front() != 0.0) throw DomainError("Hopf harness needs a ball profile");
    if (!(delta > 0.0 && delta <= R)) throw DomainError("Hopf harness needs 0 < delta <= R");
    const int N = psi.dim;
    const int k = psi.order;
    HopfReport rep;
    rep.delta = delta;
    rep.m = m ? *m : 2.0 * (N - k) / (k * delta) + 2.0 / delta;

    const double zc = R - delta;
    const int n_theta = 65;
    const int n_rho = 33;
    auto psi_at = [&](double rho, double theta) {
        const double x = zc + rho * std::cos(theta);
        const double y = rho * std::sin(theta);
        return profile_value_at(psi, std::min(R, std::hypot(x, y)));
    };
    double inner_sup = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < n_theta; ++j) {
        inner_sup = std::max(inner_sup, psi_at(0.5 * delta, std::numbers::pi * j / (n_theta - 1)));
    }
    const double denom = std::exp(-rep.m * delta) - std::exp(-0.5 * rep.m * delta);
    if (!(inner_sup < 0.0)) throw PreconditionError("profile must be negative on the inner sphere of the barrier");
    rep.C0 = inner_sup / denom;
    rep.C1 = rep.m * rep.C0 * std::exp(-rep.m * delta);

    BarrierParams bp;
    bp.C0 = rep.C0;
    bp.m = rep.m;
    bp.delta = delta;
    const auto w = exp_barrier_profile(bp, N, k, 64);
    rep.barrier_s_k_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < w.size(); ++i) rep.barrier_s_k_max = std::max(rep.barrier_s_k_max, profile_s_k(w, i));

    auto w_at = [&](double rho) { return rep.C0 * (std::exp(-rep.m * delta) - std::exp(-rep.m * rho)); };
    const double tol = 1e-12 * (1.0 + std::abs(inner_sup));
    rep.annulus_margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_rho; ++i) {
        const double rho = delta * (0.5 + 0.5 * i / (n_rho - 1));
        for (int j = 0; j < n_theta; ++j) {
            const double theta = std::numbers::pi * j / (n_theta - 1);
            rep.annulus_margin = std::min(rep.annulus_margin, w_at(rho) - psi_at(rho, theta));
        }
    }
    rep.linear_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double d = R - psi.r[i];
        if (d <= 0.0 || d > 0.5 * delta) continue;
        rep.linear_margin = std::min(rep.linear_margin, -rep.C1 * d - psi.h[i]);
    }
    rep.pass = rep.barrier_s_k_max < 0.0 && rep.annulus_margin >= -tol && rep.linear_margin >= -tol;
    return rep;
}

}  // namespace khess
