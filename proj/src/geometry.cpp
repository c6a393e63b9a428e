#include "khess/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "khess/cones.hpp"
#include "khess/errors.hpp"

namespace khess {

CurvatureField::CurvatureField(int dim, std::vector<CurvatureSample> samples)
    : dim_(dim), samples_(std::move(samples)) {
    if (dim_ < 2) throw DomainError("curvature field needs ambient dimension >= 2");
    if (samples_.empty()) throw DomainError("curvature field has no samples");
    for (const auto& s : samples_) {
        if (static_cast<int>(s.kappa.size()) != dim_ - 1) throw DomainError("kappa must have N-1 entries");
        for (double v : s.kappa) {
            if (!std::isfinite(v)) throw DomainError("curvatures must be finite");
        }
        if (!s.point.empty() && static_cast<int>(s.point.size()) != dim_) {
            throw DomainError("sample point must have N coordinates");
        }
    }
}

double CurvatureField::max_abs_kappa() const {
    double mu = 0.0;
    for (const auto& s : samples_) {
        for (double v : s.kappa) mu = std::max(mu, std::abs(v));
    }
    return mu;
}

TubeSpec TubeSpec::for_field(const CurvatureField& field, double delta, std::optional<double> d0) {
    TubeSpec spec;
    spec.delta = delta;
    spec.mu = field.max_abs_kappa();
    const double cap = spec.mu > 0.0 ? 1.0 / (2.0 * spec.mu) : delta;
    spec.d0 = d0 ? *d0 : std::min(delta, cap);
    spec.validate();
    return spec;
}

void TubeSpec::validate() const {
    if (!(delta > 0.0)) throw DomainError("tube width delta must be positive");
    if (!(d0 > 0.0 && d0 <= delta)) throw DomainError("need 0 < d0 <= delta");
    if (mu < 0.0) throw DomainError("curvature bound must be nonnegative");
}

bool strictly_km1_convex(const CurvatureField& field, int k) {
    if (k < 2 || k > field.dim()) throw DomainError("(k-1)-convexity needs 2 <= k <= N");
    for (const auto& s : field.samples()) {
        if (!in_gamma_k(s.kappa, k - 1, Cone::open)) return false;
    }
    return true;
}

double sigma_augmented(const std::vector<double>& kappa, double R, int j) {
    const int n = static_cast<int>(kappa.size());
    if (j < 1 || j > n + 1) throw DomainError("augmented sigma index out of range");
    const double lower = j - 1 == 0 ? 1.0 : sigma_k(kappa, j - 1);
    const double same = j <= n ? sigma_k(kappa, j) : 0.0;
    return R * lower + same;
}

namespace {

bool augmented_ok(const CurvatureField& field, int k, double R) {
    for (const auto& s : field.samples()) {
        for (int j = 1; j <= k; ++j) {
            if (!(sigma_augmented(s.kappa, R, j) > 0.0)) return false;
        }
    }
    return true;
}

bool augmented_ok_direct(const CurvatureField& field, int k, double R) {
    std::vector<double> v;
    for (const auto& s : field.samples()) {
        v.assign(s.kappa.begin(), s.kappa.end());
        v.push_back(R);
        if (!in_gamma_k(v, k, Cone::open)) return false;
    }
    return true;
}

}  // namespace

double augment_R(const CurvatureField& field, int k, std::optional<double> r_max) {
    if (!strictly_km1_convex(field, k)) {
        throw PreconditionError("boundary is not strictly (k-1)-convex; no augmentation exists");
    }
    const double mu = field.max_abs_kappa();
    const double cap = r_max ? *r_max : 1e6 * (1.0 + mu);
    double hi = std::ldexp(1.0 + mu, -20);
    double lo = 0.0;
    while (!augmented_ok(field, k, hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > cap) {
            std::ostringstream msg;
            msg << "augment_R: no R <= " << cap << " places (kappa, R) in Gamma_" << k << " at all "
                << field.size() << " samples";
            throw NotFoundError(msg.str());
        }
    }
    if (lo > 0.0) {
        for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (augmented_ok(field, k, mid) ? hi : lo) = mid;
        }
    }
    // Certify on the explicit N-vector; nudge up if rounding disagrees.
    for (int tries = 0; tries < 64; ++tries) {
        if (augmented_ok_direct(field, k, hi)) return hi;
        hi *= 1.0 + 1e-12 * (1 << std::min(tries, 30));
    }
    throw NotFoundError("augment_R: candidate R failed direct re-evaluation");
}

EigenSpectrum hess_dist_spectrum(const std::vector<double>& kappa, double d) {
    std::vector<double> v;
    v.reserve(kappa.size() + 1);
    for (double kap : kappa) {
        const double den = 1.0 - kap * d;
        if (!(den > 0.0)) throw DomainError("1 - kappa d must be positive inside the tube");
        v.push_back(-kap / den);
    }
    v.push_back(0.0);
    return EigenSpectrum(std::move(v));
}

double s_j_composition(double gp, double gpp, const std::vector<double>& kappa, double d, int j) {
    std::vector<double> v;
    v.reserve(kappa.size() + 1);
    for (double kap : kappa) {
        const double den = 1.0 - kap * d;
        if (!(den > 0.0)) throw DomainError("1 - kappa d must be positive inside the tube");
        v.push_back(-kap * gp / den);
    }
    v.push_back(gpp);
    return sigma_k(v, j);
}

std::vector<double> tube_distances(double d0, int n) {
    if (!(d0 > 0.0) || n < 1) throw DomainError("tube sampling needs d0 > 0 and n >= 1");
    std::vector<double> d(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = d0 * (i + 0.5) / n;
    return d;
}

namespace {

bool admissible_at(const std::vector<double>& kappa, double d) {
    return std::all_of(kappa.begin(), kappa.end(), [d](double kap) { return 1.0 - kap * d > 0.0; });
}

void finish(BarrierReport& rep) {
    rep.k_convex = true;
    rep.margins_positive = true;
    rep.min_margin = rep.nodes.empty() ? 0.0 : rep.nodes.front().margin;
    rep.failures = 0;
    for (const auto& n : rep.nodes) {
        const bool ok_margin = n.admissible && n.margin > 0.0;
        rep.k_convex = rep.k_convex && n.admissible && n.k_convex;
        rep.margins_positive = rep.margins_positive && ok_margin;
        rep.min_margin = std::min(rep.min_margin, n.margin);
        if (!(ok_margin && n.k_convex)) ++rep.failures;
    }
    rep.pass = rep.k_convex && rep.margins_positive;
}

}  // namespace

BarrierReport verify_exp_boundary_barrier(const CurvatureField& field, int k, double lambda, double t, double d0,
                                          int n_d) {
    if (k >= 2 && !strictly_km1_convex(field, k)) {
        throw PreconditionError("boundary is not strictly (k-1)-convex");
    }
    if (k < 1 || k > field.dim()) throw DomainError("need 1 <= k <= N");
    BarrierReport rep;
    const auto ds = tube_distances(d0, n_d);
    for (std::size_t s = 0; s < field.size(); ++s) {
        const auto& kappa = field.samples()[s].kappa;
        for (double d : ds) {
            BarrierNode node;
            node.sample = s;
            node.d = d;
            if (!admissible_at(kappa, d)) {
                node.admissible = false;
                node.margin = -std::numeric_limits<double>::infinity();
                rep.nodes.push_back(node);
                continue;
            }
            const double e = std::exp(-t * d);
            const double gp = -t * e;
            const double gpp = t * t * e;
            node.k_convex = true;
            for (int j = 1; j <= k; ++j) {
                const double sj = s_j_composition(gp, gpp, kappa, d, j);
                if (!(sj > 0.0)) node.k_convex = false;
                if (j == k) node.s_k = sj;
            }
            node.margin = node.s_k - lambda * std::pow(1.0 - e, k);
            rep.nodes.push_back(node);
        }
    }
    finish(rep);
    return rep;
}

LogBarrierResult verify_log_boundary_barrier(const CurvatureField& field, int k, double fsup, double usup, double t,
                                             double d0, int n_d) {
    if (k >= 2 && !strictly_km1_convex(field, k)) {
        throw PreconditionError("boundary is not strictly (k-1)-convex");
    }
    if (k < 1 || k > field.dim()) throw DomainError("need 1 <= k <= N");
    if (fsup < 0.0 || usup < 0.0) throw PreconditionError("fsup and usup must be nonnegative");
    if (!(t > 0.0) || !(d0 > 0.0)) throw NotFoundError("log barrier needs t > 0 and d0 > 0");

    LogBarrierResult out;
    const double tau0 = t / (1.0 + t * d0);
    double beta = std::numeric_limits<double>::infinity();
    std::vector<double> v;
    for (const auto& s : field.samples()) {
        if (!admissible_at(s.kappa, d0)) throw NotFoundError("d0 exceeds the curvature-admissible tube width");
        v.assign(s.kappa.begin(), s.kappa.end());
        v.push_back(tau0);
        const auto sig = sigma_all(v);
        for (int j = 1; j <= k; ++j) beta = std::min(beta, sig(j));
    }
    out.beta0 = 0.5 * beta;
    if (!(out.beta0 > 0.0)) throw NotFoundError("beta0 <= 0: (kappa, t/(1+t d0)) leaves Gamma_k");

    const double log_term = std::log1p(t * d0);
    const double m_margin = fsup > 0.0 ? (1.0 + 1e-6) * std::pow(2.0 * fsup / out.beta0, 1.0 / k) / tau0 : 0.0;
    const double m_growth = usup / log_term;
    out.M = std::max(m_margin, m_growth);
    if (out.M == 0.0) out.M = 1.0;
    out.C3 = out.M * t;

    BarrierReport& rep = out.report;
    const auto ds = tube_distances(d0, n_d);
    for (std::size_t s = 0; s < field.size(); ++s) {
        const auto& kappa = field.samples()[s].kappa;
        for (double d : ds) {
            BarrierNode node;
            node.sample = s;
            node.d = d;
            const double q = 1.0 + t * d;
            const double gp = -out.M * t / q;
            const double gpp = out.M * t * t / (q * q);
            node.k_convex = true;
            for (int j = 1; j <= k; ++j) {
                const double sj = s_j_composition(gp, gpp, kappa, d, j);
                if (!(sj > 0.0)) node.k_convex = false;
                if (j == k) node.s_k = sj;
            }
            node.margin = node.s_k - fsup;
            rep.nodes.push_back(node);
        }
    }
    finish(rep);
    return out;
}

CurvatureField sphere_field(double radius, int dim, int count, std::uint64_t seed) {
    if (!(radius > 0.0)) throw DomainError("sphere radius must be positive");
    if (dim < 2 || count < 1) throw DomainError("sphere field needs N >= 2 and at least one sample");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::vector<CurvatureSample> out;
    for (int i = 0; i < count; ++i) {
        std::vector<double> x(static_cast<std::size_t>(dim));
        double norm = 0.0;
        do {
            norm = 0.0;
            for (auto& c : x) {
                c = gauss(rng);
                norm += c * c;
            }
        } while (norm < 1e-12);
        norm = std::sqrt(norm);
        for (auto& c : x) c *= radius / norm;
        out.push_back({std::move(x), std::vector<double>(static_cast<std::size_t>(dim - 1), 1.0 / radius)});
    }
    return CurvatureField(dim, std::move(out));
}

CurvatureField ellipsoid_field(const std::vector<double>& axes, int count, std::uint64_t seed) {
    const int n = static_cast<int>(axes.size());
    if (n < 2 || count < 1) throw DomainError("ellipsoid needs at least two axes and one sample");
    for (double a : axes) {
        if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("ellipsoid semi-axes must be positive");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::vector<CurvatureSample> out;
    const auto un = static_cast<std::size_t>(n);
    for (int s = 0; s < count; ++s) {
        std::vector<double> x(un);
        double norm = 0.0;
        do {
            norm = 0.0;
            for (auto& c : x) {
                c = gauss(rng);
                norm += c * c;
            }
        } while (norm < 1e-12);
        norm = std::sqrt(norm);
        for (std::size_t i = 0; i < un; ++i) x[i] *= axes[i] / norm;

        std::vector<double> grad(un);
        double gnorm = 0.0;
        for (std::size_t i = 0; i < un; ++i) {
            grad[i] = 2.0 * x[i] / (axes[i] * axes[i]);
            gnorm += grad[i] * grad[i];
        }
        gnorm = std::sqrt(gnorm);
        std::vector<double> nu(un);
        for (std::size_t i = 0; i < un; ++i) nu[i] = grad[i] / gnorm;

        // P H P / |grad F| with H = diag(2/a_i^2), P = I - nu nu^T.
        std::vector<double> shape(un * un, 0.0);
        for (std::size_t i = 0; i < un; ++i) {
            for (std::size_t j = 0; j < un; ++j) {
                double acc = 0.0;
                for (std::size_t l = 0; l < un; ++l) {
                    const double pil = (i == l ? 1.0 : 0.0) - nu[i] * nu[l];
                    const double pjl = (j == l ? 1.0 : 0.0) - nu[j] * nu[l];
                    acc += pil * (2.0 / (axes[l] * axes[l])) * pjl;
                }
                shape[i * un + j] = acc / gnorm;
            }
        }
        const auto dec = eigen_decompose(SymMatrix(n, shape));
        // Drop the eigenvalue whose eigenvector is the normal.
        std::size_t normal_idx = 0;
        double best = -1.0;
        for (std::size_t j = 0; j < un; ++j) {
            double dot = 0.0;
            for (std::size_t i = 0; i < un; ++i) dot += dec.vectors[i * un + j] * nu[i];
            if (std::abs(dot) > best) {
                best = std::abs(dot);
                normal_idx = j;
            }
        }
        std::vector<double> kappa;
        for (std::size_t j = 0; j < un; ++j) {
            if (j != normal_idx) kappa.push_back(dec.values[static_cast<int>(j)]);
        }
        out.push_back({std::move(x), std::move(kappa)});
    }
    return CurvatureField(n, std::move(out));
}

namespace {

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw DomainError("cannot parse number '" + item + "'");
        }
        if (used != item.size()) throw DomainError("cannot parse number '" + item + "'");
        out.push_back(v);
    }
    return out;
}

}  // namespace

CurvatureField field_from_spec(const std::string& spec, int count) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw DomainError("field spec must look like sphere:R or ellipsoid:a,b[,c]");
    const std::string kind = spec.substr(0, colon);
    const auto args = parse_list(spec.substr(colon + 1));
    if (kind == "sphere") {
        if (args.empty() || args.size() > 2) throw DomainError("sphere spec is sphere:R[,N]");
        const int dim = args.size() == 2 ? static_cast<int>(args[1]) : 3;
        return sphere_field(args[0], dim, count);
    }
    if (kind == "ellipsoid") {
        if (args.size() < 2) throw DomainError("ellipsoid spec needs at least two semi-axes");
        if (args.size() == 2) return ellipsoid_field({args[0], args[1], args[1]}, count);
        return ellipsoid_field(args, count);
    }
    throw DomainError("unknown field kind '" + kind + "'");
}

}  // namespace khess
