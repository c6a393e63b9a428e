#include "khess/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <sstream>
#include <thread>

#include "khess/cones.hpp"
#include "khess/errors.hpp"

namespace khess {

double lower_bound(int dim, int k, double R) {
    if (dim < 1 || k < 1 || k > dim) throw DomainError("need 1 <= k <= N");
    if (!(R > 0.0)) throw DomainError("radius must be positive");
    return binomial(dim, k) * std::pow(R, -2.0 * k);
}

double upper_bound(int dim, int k, double R) { return std::pow(4.0, k) * lower_bound(dim, k, R); }

void IterationConfig::validate() const {
    if (sup_cap && !(*sup_cap > 0.0)) throw DomainError("sup_cap must be positive");
    if (n_max < 12) throw DomainError("n_max must be at least 12");
    if (!(fixed_point_tol > 0.0)) throw DomainError("fixed_point_tol must be positive");
    if (bisect_tol && !(*bisect_tol > 0.0)) throw DomainError("bisect_tol must be positive");
}

std::string to_string(IterationStatus s) {
    switch (s) {
        case IterationStatus::converged:
            return "converged";
        case IterationStatus::converged_slow:
            return "converged_slow";
        case IterationStatus::diverged:
            return "diverged";
    }
    return "unknown";
}

namespace {

constexpr int kGrowthWindow = 10;

double sup_abs(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

bool last_increasing(const std::vector<double>& trace, int count) {
    if (static_cast<int>(trace.size()) < count + 1) return false;
    for (std::size_t i = trace.size() - static_cast<std::size_t>(count); i < trace.size(); ++i) {
        if (!(trace[i] > trace[i - 1])) return false;
    }
    return true;
}

// Geometric mean of b_{j+1} - b_j over b_j - b_{j-1}, b = sup^k, on the
// final window.
double growth_ratio(const std::vector<double>& trace, int k) {
    const std::size_t n = trace.size();
    if (n < static_cast<std::size_t>(kGrowthWindow) + 2) return 0.0;
    auto b = [&](std::size_t i) { return std::pow(trace[i], k); };
    const std::size_t last = n - 1;
    const std::size_t first = last - static_cast<std::size_t>(kGrowthWindow);
    const double inc_last = b(last) - b(last - 1);
    const double inc_first = b(first) - b(first - 1);
    if (!(inc_first > 0.0)) return inc_last > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    if (!(inc_last > 0.0)) return 0.0;
    return std::pow(inc_last / inc_first, 1.0 / (kGrowthWindow));
}

}  // namespace

IterationResult iterate_fixed_lambda(double lambda, const RadialQuadrature& quad, int dim, int k,
                                     const IterationConfig& cfg) {
    cfg.validate();
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be a nonnegative number");
    const auto& r = quad.grid();
    const std::size_t n = r.size();
    IterationResult out;
    out.lambda = lambda;
    std::vector<double> prev(n, 0.0);
    std::vector<double> f(n);
    double cap = cfg.sup_cap.value_or(0.0);

    for (int it = 1; it <= cfg.n_max; ++it) {
        for (std::size_t i = 0; i < n; ++i) f[i] = 1.0 + lambda * std::pow(std::abs(prev[i]), k);
        RadialProfile u = solve_on_grid(quad, f, dim, k);
        const double sup = sup_abs(u.h);
        const double prev_sup = sup_abs(prev);
        const double mono_tol = 1e-10 * (1.0 + prev_sup);
        for (std::size_t i = 0; i < n; ++i) {
            if (u.h[i] > prev[i] + mono_tol || u.h[i] > mono_tol) {
                std::ostringstream msg;
                msg.precision(17);
                msg << "iterate " << it << " at lambda=" << lambda << " increased at r=" << r[i] << ": " << u.h[i]
                    << " > " << prev[i];
                throw InconsistencyError(msg.str());
            }
        }
        double diff = 0.0;
        for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::abs(u.h[i] - prev[i]));
        out.sup_trace.push_back(sup);
        out.iterations = it;
        if (it == 1 && !cfg.sup_cap) cap = 1e6 * std::max(sup, std::numeric_limits<double>::min());

        const bool done = lambda == 0.0 || (it > 1 && diff <= cfg.fixed_point_tol * (1.0 + sup));
        out.previous = std::move(prev);
        prev = u.h;
        out.profile = std::move(u);
        if (done) {
            out.status = IterationStatus::converged;
            out.growth_ratio = growth_ratio(out.sup_trace, k);
            return out;
        }
        if (sup > cap && last_increasing(out.sup_trace, kGrowthWindow)) {
            out.status = IterationStatus::diverged;
            out.growth_ratio = growth_ratio(out.sup_trace, k);
            return out;
        }
    }
    out.growth_ratio = growth_ratio(out.sup_trace, k);
    out.status = out.growth_ratio >= 1.0 ? IterationStatus::diverged : IterationStatus::converged_slow;
    return out;
}

IterationResult iterate_fixed_lambda(double lambda, double R, int dim, int k, const IterationConfig& cfg,
                                     const SolverConfig& scfg) {
    scfg.validate();
    RadialQuadrature quad(solver_grid(0.0, R, scfg), dim, scfg.quadrature);
    return iterate_fixed_lambda(lambda, quad, dim, k, cfg);
}

namespace {

bool is_convergent(IterationStatus s) { return s != IterationStatus::diverged; }

ProbeRecord record(const IterationResult& r) {
    return {r.lambda, r.status, r.iterations, r.sup_trace.empty() ? 0.0 : r.sup_trace.back(), r.growth_ratio};
}

RadialProfile normalized(const RadialProfile& p) {
    const double s = sup_abs(p.h);
    if (!(s > 0.0)) throw InconsistencyError("convergent iterate is identically zero");
    RadialProfile q = p;
    for (auto& v : q.h) v /= s;
    for (auto& v : q.hp) v /= s;
    for (auto& v : q.hpp) v /= s;
    return q;
}

}  // namespace

SpectralEstimate estimate_lambda1(double R, int dim, int k, const IterationConfig& cfg, const SolverConfig& scfg) {
    cfg.validate();
    scfg.validate();
    SpectralEstimate est;
    est.dim = dim;
    est.order = k;
    est.radius = R;
    est.lower = lower_bound(dim, k, R);
    est.upper = upper_bound(dim, k, R);
    est.bisect_tol = cfg.bisect_tol.value_or(1e-3 * (est.upper - est.lower));

    RadialQuadrature quad(solver_grid(0.0, R, scfg), dim, scfg.quadrature);
    auto probe = [&](double lambda) {
        auto res = iterate_fixed_lambda(lambda, quad, dim, k, cfg);
        est.probes.push_back(record(res));
        if (res.status == IterationStatus::converged_slow) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "lambda=" << lambda << " exhausted n_max with shrinking increments (ratio " << res.growth_ratio
                << "); counted as convergent";
            est.log.push_back(msg.str());
        }
        return res;
    };

    auto trace = [&]() {
        std::ostringstream os;
        os.precision(17);
        for (const auto& p : est.probes) {
            os << "\n  lambda=" << p.lambda << " " << to_string(p.status) << " after " << p.iterations
               << " iterations, sup=" << p.sup_norm << ", ratio=" << p.growth_ratio;
        }
        return os.str();
    };

    IterationResult best = probe(est.lower);
    if (!is_convergent(best.status)) {
        throw InconsistencyError("iteration diverged at the lower bound C(N,k) R^-2k" + trace());
    }
    const auto top = probe(est.upper);
    if (is_convergent(top.status)) {
        throw InconsistencyError("iteration converged at the upper bound 4^k C(N,k) R^-2k" + trace());
    }

    double lo = est.lower;
    double hi = est.upper;
    while (hi - lo > est.bisect_tol) {
        const double mid = 0.5 * (lo + hi);
        auto res = probe(mid);
        if (is_convergent(res.status)) {
            lo = mid;
            best = std::move(res);
        } else {
            hi = mid;
        }
    }
    est.lambda_lo = lo;
    est.lambda_hi = hi;
    est.lambda_best = 0.5 * (lo + hi);

    est.eigenfunction = normalized(best.profile);
    est.eigenfunction.k_convex = profile_is_k_convex(est.eigenfunction, 1e-8);
    const auto& psi = est.eigenfunction;
    est.residual.resize(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) {
        est.residual[i] = std::abs(profile_s_k(psi, i) - est.lambda_best * std::pow(std::abs(psi.h[i]), k));
    }
    est.residual_max = *std::max_element(est.residual.begin(), est.residual.end());
    est.rayleigh = rayleigh_quotient(psi);
    if (2 * k > dim) est.holder = holder_seminorm(psi, 2.0 - static_cast<double>(dim) / k);
    return est;
}

double rayleigh_quotient(const RadialProfile& p) {
    p.validate();
    const int N = p.dim;
    const int k = p.order;
    double num = 0.0;
    double den = 0.0;
    auto num_at = [&](std::size_t i) { return -p.h[i] * profile_s_k(p, i) * std::pow(p.r[i], N - 1); };
    auto den_at = [&](std::size_t i) { return std::pow(std::abs(p.h[i]), k + 1) * std::pow(p.r[i], N - 1); };
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        const double dx = p.r[i + 1] - p.r[i];
        num += 0.5 * dx * (num_at(i) + num_at(i + 1));
        den += 0.5 * dx * (den_at(i) + den_at(i + 1));
    }
    if (!(den > 0.0)) throw DomainError("Rayleigh quotient of the zero profile is undefined");
    return num / den;
}

MinimumPrincipleReport minimum_principle_probe(const RadialProfile& p, double lambda,
                                               std::optional<double> reference_lambda) {
    p.validate();
    MinimumPrincipleReport rep;
    const double scale = 1.0 + sup_abs(p.h);
    rep.boundary_nonnegative = p.h.back() >= -1e-14 * scale;
    rep.interior_min = p.h.front();
    rep.argmin = p.r.front();
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto spectrum = profile_spectrum(p, i);
        const AdmissibleJet jet{{}, p.h[i], {}, SymMatrix::diagonal(spectrum.values())};
        if (!classical_supersolution_at(jet, lambda, p.order, 0.0)) ++rep.failing_nodes;
        if (i + 1 < p.size() && p.h[i] < rep.interior_min) {
            rep.interior_min = p.h[i];
            rep.argmin = p.r[i];
        }
    }
    rep.is_supersolution = rep.failing_nodes == 0;
    rep.demonstrates_bound = rep.is_supersolution && rep.boundary_nonnegative && rep.interior_min < 0.0;
    rep.violation = rep.demonstrates_bound && reference_lambda && lambda < *reference_lambda;
    return rep;
}

std::vector<double> quartic_margins(const RadialProfile& p, double C) {
    std::vector<double> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = profile_s_k(p, i) + eigen_term(C, p.h[i], p.order);
    return out;
}

MonotonicityResult domain_monotonicity_check(int dim, int k, double R1, double R2, const IterationConfig& cfg,
                                             const SolverConfig& scfg, int threads) {
    if (!(R1 > 0.0) || R1 > R2) throw DomainError("monotonicity check needs 0 < R1 <= R2");
    MonotonicityResult out;
    SpectralEstimate e1;
    SpectralEstimate e2;
    if (threads > 1) {
        auto f1 = std::async(std::launch::async, [&] { return estimate_lambda1(R1, dim, k, cfg, scfg); });
        e2 = estimate_lambda1(R2, dim, k, cfg, scfg);
        e1 = f1.get();
    } else {
        e1 = estimate_lambda1(R1, dim, k, cfg, scfg);
        e2 = estimate_lambda1(R2, dim, k, cfg, scfg);
    }
    out.lambda_r1 = e1.lambda_best;
    out.lambda_r2 = e2.lambda_best;
    out.tolerance = 2.0 * std::max(e1.bisect_tol, e2.bisect_tol);
    out.holds = out.lambda_r2 <= out.lambda_r1 + out.tolerance;
    return out;
}

int thread_budget() {
    if (const char* env = std::getenv("KHESS_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<int>(std::min(v, 1024L));
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace khess
