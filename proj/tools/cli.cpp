#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "khess/cones.hpp"
#include "khess/dirichlet.hpp"
#include "khess/eigen.hpp"
#include "khess/errors.hpp"
#include "khess/geometry.hpp"
#include "khess/io.hpp"
#include "khess/radial.hpp"
#include "khess/symfun.hpp"

namespace khess::cli {

Json RunManifest::to_json() const {
    return {{"command", command},   {"parameters", parameters}, {"config_hash", config_hash},
            {"version", version},   {"outputs", outputs},       {"wall_seconds", wall_seconds}};
}

std::string config_hash(const Json& params) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : params.dump()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return fmt::format("{:016x}", h);
}

Json parse_config_text(const std::string& text) {
    Json out = Json::object();
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty() || line.front() == '[') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw DomainError(fmt::format("config line {}: expected key=value", lineno));
        const std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        if (key.empty()) throw DomainError(fmt::format("config line {}: empty key", lineno));
        if (value == "true" || value == "false") {
            out[key] = value == "true";
            continue;
        }
        try {
            std::size_t used = 0;
            const double v = std::stod(value, &used);
            if (used == value.size()) {
                out[key] = v;
                continue;
            }
        } catch (const std::exception&) {
        }
        out[key] = value;
    }
    return out;
}

namespace {

// Flags shared by every command that runs the solver or the iteration.
struct NumericFlags {
    std::string config_path;
    std::optional<int> grid;
    std::optional<std::string> quadrature;
    std::optional<double> tol_residual;
    std::optional<int> refine_max;
    bool graded = false;
    std::optional<double> sup_cap;
    std::optional<int> n_max;
    std::optional<double> fixed_point_tol;
    std::optional<double> bisect_tol;

    void add_to(CLI::App* app, bool iteration) {
        app->add_option("--config", config_path, "key=value file with solver/iteration settings");
        app->add_option("--grid", grid, "number of radial cells (>= 64)");
        app->add_option("--quadrature", quadrature, "trapezoid or simpson");
        app->add_option("--tol", tol_residual, "residual tolerance of the Dirichlet solver");
        app->add_option("--refine-max", refine_max, "maximum grid doublings");
        app->add_flag("--graded", graded, "refine the grid toward r = R");
        if (iteration) {
            app->add_option("--sup-cap", sup_cap, "divergence threshold on sup|u_n|");
            app->add_option("--n-max", n_max, "maximum iterations per probe");
            app->add_option("--fixed-point-tol", fixed_point_tol, "fixed-point tolerance");
            app->add_option("--bisect-tol", bisect_tol, "bisection bracket width");
        }
    }

    void resolve(SolverConfig& s, IterationConfig& it, Json& params) const {
        if (!config_path.empty()) {
            const Json cfg = parse_config_text(read_text_file(config_path));
            for (const auto& [key, v] : cfg.items()) {
                auto num = [&]() {
                    if (!v.is_number()) throw DomainError("config key " + key + " needs a number");
                    return v.get<double>();
                };
                if (key == "grid_size") {
                    s.grid_size = static_cast<int>(num());
                } else if (key == "quadrature") {
                    if (!v.is_string()) throw DomainError("config key quadrature needs a name");
                    s.quadrature = parse_quadrature(v.get<std::string>());
                } else if (key == "tol_residual") {
                    s.tol_residual = num();
                } else if (key == "refine_max") {
                    s.refine_max = static_cast<int>(num());
                } else if (key == "graded") {
                    if (!v.is_boolean()) throw DomainError("config key graded needs true/false");
                    s.graded = v.get<bool>();
                } else if (key == "sup_cap") {
                    it.sup_cap = num();
                } else if (key == "n_max") {
                    it.n_max = static_cast<int>(num());
                } else if (key == "fixed_point_tol") {
                    it.fixed_point_tol = num();
                } else if (key == "bisect_tol") {
                    it.bisect_tol = num();
                } else {
                    throw DomainError("unknown config key '" + key + "'");
                }
            }
        }
        if (grid) s.grid_size = *grid;
        if (quadrature) s.quadrature = parse_quadrature(*quadrature);
        if (tol_residual) s.tol_residual = *tol_residual;
        if (refine_max) s.refine_max = *refine_max;
        if (graded) s.graded = true;
        if (sup_cap) it.sup_cap = *sup_cap;
        if (n_max) it.n_max = *n_max;
        if (fixed_point_tol) it.fixed_point_tol = *fixed_point_tol;
        if (bisect_tol) it.bisect_tol = *bisect_tol;
        s.validate();
        it.validate();
        params["grid_size"] = s.grid_size;
        params["quadrature"] = to_string(s.quadrature);
        params["tol_residual"] = s.tol_residual;
        params["refine_max"] = s.refine_max;
        params["graded"] = s.graded;
        params["n_max"] = it.n_max;
        params["fixed_point_tol"] = it.fixed_point_tol;
        params["sup_cap"] = it.sup_cap ? Json(*it.sup_cap) : Json(nullptr);
        params["bisect_tol"] = it.bisect_tol ? Json(*it.bisect_tol) : Json(nullptr);
    }
};

struct Problem {
    int dim = 0;
    int order = 0;
    double radius = 1.0;

    void add_to(CLI::App* app, bool radius_required = true) {
        app->add_option("--dim,-N", dim, "ambient dimension N")->required()->check(CLI::PositiveNumber);
        app->add_option("--order,-k", order, "Hessian order k")->required()->check(CLI::PositiveNumber);
        auto* r = app->add_option("--radius,-R", radius, "ball radius")->check(CLI::PositiveNumber);
        if (radius_required) r->required();
    }

    void check() const {
        if (order > dim) throw DomainError("need k <= N");
    }

    void record(Json& p) const {
        p["N"] = dim;
        p["k"] = order;
        p["R"] = radius;
    }
};

class Context {
public:
    Context(std::ostream& out, std::ostream& err) : out_(out), err_(err), start_(std::chrono::steady_clock::now()) {}

    std::ostream& out() { return out_; }
    std::ostream& err() { return err_; }
    RunManifest& manifest() { return manifest_; }

    void write(const std::string& path, const std::string& text) {
        write_text_file(path, text);
        manifest_.outputs.push_back(path);
    }

    Json finish_manifest() {
        manifest_.config_hash = config_hash(manifest_.parameters);
        manifest_.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        return manifest_.to_json();
    }

    // With a prefix the manifest goes to <prefix>.manifest.json; otherwise it
    // is printed after the results.
    void emit_manifest(const std::string& prefix) {
        if (!prefix.empty()) {
            const std::string path = prefix + ".manifest.json";
            manifest_.outputs.push_back(path);
            write_text_file(path, finish_manifest().dump(2) + "\n");
        } else {
            out_ << "# manifest " << finish_manifest().dump() << "\n";
        }
    }

private:
    std::ostream& out_;
    std::ostream& err_;
    RunManifest manifest_;
    std::chrono::steady_clock::time_point start_;
};

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string g17(double v) { return format_double(v); }

std::vector<double> parse_number_list(const std::string& text) {
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
        if (used != item.size()) throw DomainError("cannot parse number '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw DomainError("empty number list");
    return out;
}

SourceTerm resolve_source(const std::string& spec) {
    if (spec.rfind("file:", 0) == 0) return read_source_csv(spec.substr(5));
    return SourceTerm::parse(spec);
}

CurvatureField resolve_field(const std::string& spec, int count) {
    if (std::filesystem::exists(spec)) return read_field_file(spec);
    return field_from_spec(spec, count);
}

// ------------------------------------------------------------------ eigen

struct EigenCmd {
    Problem prob;
    NumericFlags num;
    std::string out_prefix;
    std::string format = "csv";
};

int cmd_eigen(const EigenCmd& c, Context& ctx) {
    c.prob.check();
    SolverConfig scfg;
    IterationConfig icfg;
    Json& params = ctx.manifest().parameters;
    c.prob.record(params);
    c.num.resolve(scfg, icfg, params);
    params["format"] = c.format;

    const auto est = estimate_lambda1(c.prob.radius, c.prob.dim, c.prob.order, icfg, scfg);
    if (c.out_prefix.empty()) {
        Json j = estimate_to_json(est, "");
        ctx.out() << j.dump(2) << "\n";
        ctx.emit_manifest("");
        return ok;
    }
    const std::string profile_path = c.out_prefix + (c.format == "json" ? ".profile.json" : ".csv");
    if (c.format == "json") {
        ctx.write(profile_path, profile_to_json(est.eigenfunction).dump(2) + "\n");
    } else {
        std::ostringstream csv;
        write_profile_csv(csv, est.eigenfunction);
        ctx.write(profile_path, csv.str());
    }
    ctx.write(c.out_prefix + ".json", estimate_to_json(est, profile_path).dump(2) + "\n");
    ctx.out() << "lambda_best = " << g17(est.lambda_best) << "\n"
              << "bracket = [" << g17(est.lambda_lo) << ", " << g17(est.lambda_hi) << "]\n"
              << "bounds = [" << g17(est.lower) << ", " << g17(est.upper) << "]\n"
              << "rayleigh = " << g17(est.rayleigh) << "\n"
              << "residual_max = " << g17(est.residual_max) << "\n";
    ctx.emit_manifest(c.out_prefix);
    return ok;
}

// ------------------------------------------------------------------ solve

struct SolveCmd {
    Problem prob;
    NumericFlags num;
    std::string source;
    std::string out_prefix;
};

int cmd_solve(const SolveCmd& c, Context& ctx) {
    c.prob.check();
    SolverConfig scfg;
    IterationConfig icfg;
    Json& params = ctx.manifest().parameters;
    c.prob.record(params);
    c.num.resolve(scfg, icfg, params);
    params["source"] = c.source;

    const SourceTerm f = resolve_source(c.source);
    const auto sol = solve_radial_dirichlet_report(f, c.prob.radius, c.prob.dim, c.prob.order, scfg);
    const Json report = {{"N", c.prob.dim},
                         {"k", c.prob.order},
                         {"R", c.prob.radius},
                         {"source", f.describe()},
                         {"grid_size", sol.grid_size},
                         {"refinements", sol.refinements},
                         {"residual_max", sol.residual_max},
                         {"tol_residual", scfg.tol_residual},
                         {"residual_ok", sol.residual_max <= scfg.tol_residual},
                         {"k_convex", sol.profile.k_convex},
                         {"h_origin", sol.profile.h.front()}};
    std::ostringstream csv;
    write_profile_csv(csv, sol.profile);
    if (c.out_prefix.empty()) {
        ctx.out() << "# " << report.dump() << "\n" << csv.str();
        ctx.emit_manifest("");
        return ok;
    }
    ctx.write(c.out_prefix + ".csv", csv.str());
    ctx.write(c.out_prefix + ".json", report.dump(2) + "\n");
    ctx.out() << "residual_max = " << g17(sol.residual_max) << " (tol " << g17(scfg.tol_residual) << ")\n"
              << "grid_size = " << sol.grid_size << "\n"
              << "h(0) = " << g17(sol.profile.h.front()) << "\n";
    ctx.emit_manifest(c.out_prefix);
    return ok;
}

// ------------------------------------------------------------------- cone

struct ConeCmd {
    std::string matrix_path;
    std::string lambda_list;
    int order = 0;
    bool strict = false;
    bool json = false;
};

int cmd_cone(const ConeCmd& c, Context& ctx) {
    if (c.matrix_path.empty() == c.lambda_list.empty()) {
        throw DomainError("give exactly one of --matrix or --lambda");
    }
    Json& params = ctx.manifest().parameters;
    params["order"] = c.order;
    params["strict"] = c.strict;
    Json res;
    std::vector<double> spectrum;
    if (!c.matrix_path.empty()) {
        params["matrix"] = c.matrix_path;
        const SymMatrix a = read_matrix_file(c.matrix_path);
        if (c.order < 1 || c.order > a.size()) throw DomainError("--order must lie in [1, N]");
        const auto ev = eigenvalues(a);
        spectrum.assign(ev.values().begin(), ev.values().end());
        const bool closed = in_sigma_k(a, c.order, Cone::closed);
        const bool open = in_sigma_k(a, c.order, Cone::open);
        res["sigma_k"] = closed;
        res["sigma_k_interior"] = open;
        res["dual_sigma_k"] = in_dual_sigma_k(a, c.order);
        res["member"] = c.strict ? open : closed;
    } else {
        params["lambda"] = c.lambda_list;
        spectrum = parse_number_list(c.lambda_list);
        const int n = static_cast<int>(spectrum.size());
        if (c.order < 1 || c.order > n) throw DomainError("--order must lie in [1, N]");
        const EigenSpectrum ev(spectrum);
        spectrum.assign(ev.values().begin(), ev.values().end());
        const double slack = sigma_slack(ev, c.order);
        const bool closed = in_gamma_k(ev, c.order, Cone::closed, slack);
        const bool open = in_gamma_k(ev, c.order, Cone::open);
        res["gamma_k"] = closed;
        res["gamma_k_interior"] = open;
        if (n <= 16) res["korevaar"] = in_gamma_k_korevaar(ev, c.order);
        res["garding_roots_real"] = garding_roots_real(ev, c.order);
        res["member"] = c.strict ? open : closed;
    }
    const auto sig = sigma_all(spectrum);
    res["eigenvalues"] = spectrum;
    res["sigma"] = std::vector<double>(sig.values().begin(), sig.values().end());
    if (c.json) {
        ctx.out() << res.dump(2) << "\n";
    } else {
        std::string ev_text;
        for (double v : spectrum) ev_text += (ev_text.empty() ? "" : ", ") + g17(v);
        ctx.out() << "eigenvalues: " << ev_text << "\n";
        for (int j = 1; j <= sig.size(); ++j) ctx.out() << "sigma_" << j << " = " << g17(sig(j)) << "\n";
        for (const auto& [key, v] : res.items()) {
            if (v.is_boolean()) ctx.out() << key << ": " << yes_no(v.get<bool>()) << "\n";
        }
    }
    ctx.emit_manifest("");
    return ok;
}

// ----------------------------------------------------------------- verify

struct BarrierExpCmd {
    std::string field;
    int order = 0;
    double lambda = 1.0;
    std::optional<double> t;
    std::optional<double> d0;
    std::optional<double> delta;
    int samples = 64;
    int n_d = 32;
};

struct BarrierLogCmd {
    std::string field;
    int order = 0;
    double fsup = 1.0;
    double usup = 0.0;
    std::optional<double> t;
    std::optional<double> d0;
    std::optional<double> delta;
    int samples = 64;
    int n_d = 32;
};

struct HopfCmd {
    Problem prob;
    NumericFlags num;
    std::string source = "const:1";
    std::string profile_path;
    std::optional<double> delta;
    std::optional<double> m;
};

struct MinPrincipleCmd {
    Problem prob;
    bool quartic = false;
    std::string profile_path;
    int grid = 512;
    std::optional<double> lambda;
    std::optional<double> reference;
};

struct BoundsCmd {
    Problem prob;
    NumericFlags num;
};

struct MonotoneCmd {
    int dim = 0;
    int order = 0;
    double r1 = 1.0;
    double r2 = 2.0;
    NumericFlags num;
};

double default_t(const CurvatureField& field, int k, std::optional<double> t, Json& params) {
    if (t) return *t;
    if (k < 2) throw DomainError("--t is required when k = 1");
    const double r = augment_R(field, k);
    params["augment_R"] = r;
    return 2.0 * r + 1.0;
}

TubeSpec tube_for(const CurvatureField& field, std::optional<double> delta, std::optional<double> d0) {
    const double mu = field.max_abs_kappa();
    const double dl = delta ? *delta : (mu > 0.0 ? 1.0 / mu : 1.0);
    return TubeSpec::for_field(field, dl, d0);
}

void print_report(Context& ctx, const BarrierReport& rep) {
    ctx.out() << "nodes = " << rep.nodes.size() << "\n"
              << "k_convex = " << yes_no(rep.k_convex) << "\n"
              << "margins_positive = " << yes_no(rep.margins_positive) << "\n"
              << "min_margin = " << g17(rep.min_margin) << "\n"
              << "failures = " << rep.failures << "\n"
              << "result: " << (rep.pass ? "PASS" : "FAIL") << "\n";
}

int cmd_barrier_exp(const BarrierExpCmd& c, Context& ctx) {
    Json& params = ctx.manifest().parameters;
    params["field"] = c.field;
    params["order"] = c.order;
    params["lambda"] = c.lambda;
    const auto field = resolve_field(c.field, c.samples);
    const TubeSpec tube = tube_for(field, c.delta, c.d0);
    const double t = default_t(field, c.order, c.t, params);
    params["t"] = t;
    params["d0"] = tube.d0;
    const auto rep = verify_exp_boundary_barrier(field, c.order, c.lambda, t, tube.d0, c.n_d);
    ctx.out() << "t = " << g17(t) << "\nd0 = " << g17(tube.d0) << "\n";
    print_report(ctx, rep);
    ctx.emit_manifest("");
    return rep.pass ? ok : numerical;
}

int cmd_barrier_log(const BarrierLogCmd& c, Context& ctx) {
    Json& params = ctx.manifest().parameters;
    params["field"] = c.field;
    params["order"] = c.order;
    params["fsup"] = c.fsup;
    params["usup"] = c.usup;
    const auto field = resolve_field(c.field, c.samples);
    const TubeSpec tube = tube_for(field, c.delta, c.d0);
    const double t = default_t(field, c.order, c.t, params);
    params["t"] = t;
    params["d0"] = tube.d0;
    const auto res = verify_log_boundary_barrier(field, c.order, c.fsup, c.usup, t, tube.d0, c.n_d);
    ctx.out() << "t = " << g17(t) << "\nd0 = " << g17(tube.d0) << "\n"
              << "beta0 = " << g17(res.beta0) << "\nM = " << g17(res.M) << "\nC3 = " << g17(res.C3) << "\n";
    print_report(ctx, res.report);
    ctx.emit_manifest("");
    return res.report.pass ? ok : numerical;
}

int cmd_hopf(const HopfCmd& c, Context& ctx) {
    c.prob.check();
    Json& params = ctx.manifest().parameters;
    c.prob.record(params);
    RadialProfile psi;
    if (!c.profile_path.empty()) {
        params["profile"] = c.profile_path;
        psi = read_profile_csv(c.profile_path, c.prob.dim, c.prob.order);
    } else {
        SolverConfig scfg;
        IterationConfig icfg;
        c.num.resolve(scfg, icfg, params);
        params["source"] = c.source;
        psi = solve_radial_dirichlet(resolve_source(c.source), c.prob.radius, c.prob.dim, c.prob.order, scfg);
    }
    const double delta = c.delta.value_or(0.5 * psi.radius);
    params["delta"] = delta;
    if (c.m) params["m"] = *c.m;
    const auto rep = verify_hopf_estimate(psi, delta, c.m);
    ctx.out() << "delta = " << g17(rep.delta) << "\nm = " << g17(rep.m) << "\nC0 = " << g17(rep.C0)
              << "\nC1 = " << g17(rep.C1) << "\nbarrier_S_k_max = " << g17(rep.barrier_s_k_max)
              << "\nannulus_margin = " << g17(rep.annulus_margin) << "\nlinear_margin = " << g17(rep.linear_margin)
              << "\nresult: " << (rep.pass ? "PASS" : "FAIL") << " (psi <= -C1 d near the boundary)\n";
    ctx.emit_manifest("");
    return rep.pass ? ok : numerical;
}

int cmd_minprinciple(const MinPrincipleCmd& c, Context& ctx) {
    c.prob.check();
    if (c.quartic == !c.profile_path.empty()) throw DomainError("give exactly one of --quartic or --profile");
    Json& params = ctx.manifest().parameters;
    c.prob.record(params);
    RadialProfile p;
    if (c.quartic) {
        params["quartic"] = true;
        params["grid"] = c.grid;
        p = quartic_test_profile(c.prob.radius, c.prob.dim, c.prob.order, c.grid);
    } else {
        params["profile"] = c.profile_path;
        p = read_profile_csv(c.profile_path, c.prob.dim, c.prob.order);
    }
    const double lambda = c.lambda.value_or(upper_bound(c.prob.dim, c.prob.order, p.radius));
    params["lambda"] = lambda;
    if (c.reference) params["reference"] = *c.reference;
    const auto rep = minimum_principle_probe(p, lambda, c.reference);
    ctx.out() << "lambda = " << g17(lambda) << "\n"
              << "supersolution at all nodes: " << yes_no(rep.is_supersolution) << " (" << rep.failing_nodes
              << " failing of " << p.size() << ")\n"
              << "boundary value >= 0: " << yes_no(rep.boundary_nonnegative) << "\n"
              << "interior minimum = " << g17(rep.interior_min) << " at r = " << g17(rep.argmin) << "\n";
    if (rep.demonstrates_bound) {
        ctx.out() << "minimum principle fails for this supersolution: lambda_1 <= " << g17(lambda) << "\n";
    }
    if (c.reference) ctx.out() << "violation: " << yes_no(rep.violation) << "\n";
    ctx.out() << "result: " << (rep.demonstrates_bound ? "PASS" : "FAIL") << "\n";
    ctx.emit_manifest("");
    return rep.demonstrates_bound ? ok : numerical;
}

int cmd_bounds(const BoundsCmd& c, Context& ctx) {
    c.prob.check();
    SolverConfig scfg;
    IterationConfig icfg;
    Json& params = ctx.manifest().parameters;
    c.prob.record(params);
    c.num.resolve(scfg, icfg, params);
    const auto est = estimate_lambda1(c.prob.radius, c.prob.dim, c.prob.order, icfg, scfg);
    const bool pass = est.lower <= est.lambda_best && est.lambda_best <= est.upper;
    ctx.out() << g17(est.lower) << " <= lambda_1 = " << g17(est.lambda_best) << " <= " << g17(est.upper) << "\n"
              << "result: " << (pass ? "PASS" : "FAIL") << "\n";
    ctx.emit_manifest("");
    return pass ? ok : numerical;
}

int cmd_monotone(const MonotoneCmd& c, Context& ctx) {
    if (c.order > c.dim) throw DomainError("need k <= N");
    SolverConfig scfg;
    IterationConfig icfg;
    Json& params = ctx.manifest().parameters;
    params["N"] = c.dim;
    params["k"] = c.order;
    params["R1"] = c.r1;
    params["R2"] = c.r2;
    c.num.resolve(scfg, icfg, params);
    const auto res = domain_monotonicity_check(c.dim, c.order, c.r1, c.r2, icfg, scfg, thread_budget());
    ctx.out() << "lambda(R1=" << g17(c.r1) << ") = " << g17(res.lambda_r1) << "\n"
              << "lambda(R2=" << g17(c.r2) << ") = " << g17(res.lambda_r2) << "\n"
              << "tolerance = " << g17(res.tolerance) << "\n"
              << "result: " << (res.holds ? "PASS" : "FAIL") << "\n";
    ctx.emit_manifest("");
    return res.holds ? ok : numerical;
}

int map_exception(std::ostream& err, bool verify) {
    try {
        throw;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return verify ? numerical : usage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    } catch (const InconsistencyError& e) {
        err << "numerical inconsistency: " << e.what() << "\n";
        return numerical;
    } catch (const ConvergenceError& e) {
        err << "convergence failure: " << e.what() << "\n";
        return numerical;
    } catch (const NotFoundError& e) {
        err << "infeasible: " << e.what() << "\n";
        return numerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return numerical;
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Radial k-Hessian toolkit: principal eigenvalues, Dirichlet solves, cone checks, barriers", "khess"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    EigenCmd eig;
    auto* s_eigen = app.add_subcommand("eigen", "estimate the principal eigenvalue on a ball");
    eig.prob.add_to(s_eigen);
    eig.num.add_to(s_eigen, true);
    s_eigen->add_option("--out", eig.out_prefix, "output prefix (<out>.json, <out>.csv, <out>.manifest.json)");
    s_eigen->add_option("--format", eig.format, "eigenfunction format")->check(CLI::IsMember({"csv", "json"}));

    SolveCmd sol;
    auto* s_solve = app.add_subcommand("solve", "solve S_k(D^2 u) = f in B_R, u = 0 on the boundary");
    sol.prob.add_to(s_solve);
    sol.num.add_to(s_solve, false);
    s_solve->add_option("--source", sol.source, "const:<c> | poly:<c0,c1,...> | file:<csv r,f>")->required();
    s_solve->add_option("--out", sol.out_prefix, "output prefix (<out>.csv, <out>.json)");

    ConeCmd cone;
    auto* s_cone = app.add_subcommand("cone", "cone membership of a matrix or eigenvalue vector");
    s_cone->add_option("--matrix", cone.matrix_path, "JSON matrix file {\"n\", \"entries\"}");
    s_cone->add_option("--lambda", cone.lambda_list, "comma-separated eigenvalues");
    s_cone->add_option("--order,-k", cone.order, "order k")->required();
    s_cone->add_flag("--strict", cone.strict, "use the open cone for the member verdict");
    s_cone->add_flag("--json", cone.json, "print JSON instead of text");

    auto* s_verify = app.add_subcommand("verify", "barrier, Hopf, minimum-principle and bound checks");
    s_verify->require_subcommand(1);

    BarrierExpCmd bexp;
    auto* v_bexp = s_verify->add_subcommand("barrier-exp", "exp(-t d) - 1 boundary subsolution check");
    v_bexp->add_option("--field", bexp.field, "sphere:R[,N] | ellipsoid:a,b[,c] | JSON file")->required();
    v_bexp->add_option("--order,-k", bexp.order, "order k")->required();
    v_bexp->add_option("--lambda", bexp.lambda, "eigenvalue parameter");
    v_bexp->add_option("--t", bexp.t, "barrier rate (default 2 augment_R + 1)");
    v_bexp->add_option("--d0", bexp.d0, "tube width to check");
    v_bexp->add_option("--delta", bexp.delta, "tube width bound (default 1/mu)");
    v_bexp->add_option("--samples", bexp.samples, "generated boundary samples");
    v_bexp->add_option("--depths", bexp.n_d, "distances per sample");

    BarrierLogCmd blog;
    auto* v_blog = s_verify->add_subcommand("barrier-log", "-M log(1 + t d) boundary barrier and growth constant");
    v_blog->add_option("--field", blog.field, "sphere:R[,N] | ellipsoid:a,b[,c] | JSON file")->required();
    v_blog->add_option("--order,-k", blog.order, "order k")->required();
    v_blog->add_option("--fsup", blog.fsup, "sup f");
    v_blog->add_option("--usup", blog.usup, "sup(-u)");
    v_blog->add_option("--t", blog.t, "barrier rate (default 2 augment_R + 1)");
    v_blog->add_option("--d0", blog.d0, "tube width");
    v_blog->add_option("--delta", blog.delta, "tube width bound (default 1/mu)");
    v_blog->add_option("--samples", blog.samples, "generated boundary samples");
    v_blog->add_option("--depths", blog.n_d, "distances per sample");

    HopfCmd hopf;
    auto* v_hopf = s_verify->add_subcommand("hopf", "interior-ball barrier estimate psi <= -C1 d");
    hopf.prob.add_to(v_hopf);
    hopf.num.add_to(v_hopf, false);
    v_hopf->add_option("--source", hopf.source, "source of the Dirichlet solve (default const:1)");
    v_hopf->add_option("--profile", hopf.profile_path, "use a profile CSV instead of solving");
    v_hopf->add_option("--delta", hopf.delta, "interior ball radius (default R/2)");
    v_hopf->add_option("--m", hopf.m, "barrier rate");

    MinPrincipleCmd mp;
    auto* v_mp = s_verify->add_subcommand("minprinciple", "supersolution with negative minimum");
    mp.prob.add_to(v_mp);
    v_mp->add_flag("--quartic", mp.quartic, "use u = -(R^2 - r^2)^2 / 4");
    v_mp->add_option("--profile", mp.profile_path, "profile CSV r,h,hp,hpp");
    v_mp->add_option("--grid", mp.grid, "cells for the quartic profile");
    v_mp->add_option("--lambda", mp.lambda, "eigen parameter C (default 4^k C(N,k) R^-2k)");
    v_mp->add_option("--reference", mp.reference, "reference estimate of lambda_1");

    BoundsCmd bounds;
    auto* v_bounds = s_verify->add_subcommand("bounds", "C(N,k) R^-2k <= lambda_1 <= 4^k C(N,k) R^-2k");
    bounds.prob.add_to(v_bounds);
    bounds.num.add_to(v_bounds, true);

    MonotoneCmd mono;
    auto* v_mono = s_verify->add_subcommand("monotone", "lambda_1(B_R2) <= lambda_1(B_R1) for R1 <= R2");
    v_mono->add_option("--dim,-N", mono.dim, "ambient dimension N")->required()->check(CLI::PositiveNumber);
    v_mono->add_option("--order,-k", mono.order, "Hessian order k")->required()->check(CLI::PositiveNumber);
    v_mono->add_option("--r1", mono.r1, "smaller radius")->check(CLI::PositiveNumber);
    v_mono->add_option("--r2", mono.r2, "larger radius")->check(CLI::PositiveNumber);
    mono.num.add_to(v_mono, true);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << "\n";
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        // Help for the deepest subcommand that was selected.
        const CLI::App* target = &app;
        while (!target->get_subcommands().empty()) target = target->get_subcommands().front();
        err << target->help();
        return usage;
    }

    Context ctx(out, err);
    bool verify = false;
    try {
        if (s_eigen->parsed()) {
            ctx.manifest().command = "eigen";
            return cmd_eigen(eig, ctx);
        }
        if (s_solve->parsed()) {
            ctx.manifest().command = "solve";
            return cmd_solve(sol, ctx);
        }
        if (s_cone->parsed()) {
            ctx.manifest().command = "cone";
            return cmd_cone(cone, ctx);
        }
        verify = true;
        if (v_bexp->parsed()) {
            ctx.manifest().command = "verify barrier-exp";
            return cmd_barrier_exp(bexp, ctx);
        }
        if (v_blog->parsed()) {
            ctx.manifest().command = "verify barrier-log";
            return cmd_barrier_log(blog, ctx);
        }
        if (v_hopf->parsed()) {
            ctx.manifest().command = "verify hopf";
            return cmd_hopf(hopf, ctx);
        }
        if (v_mp->parsed()) {
            ctx.manifest().command = "verify minprinciple";
            return cmd_minprinciple(mp, ctx);
        }
        if (v_bounds->parsed()) {
            ctx.manifest().command = "verify bounds";
            return cmd_bounds(bounds, ctx);
        }
        if (v_mono->parsed()) {
            ctx.manifest().command = "verify monotone";
            return cmd_monotone(mono, ctx);
        }
    } catch (...) {
        return map_exception(err, verify);
    }
    err << app.help();
    return usage;
}

}  // namespace khess::cli
