#include <gtest/gtest.h>

#include <cmath>

#include "khess/dirichlet.hpp"
#include "khess/errors.hpp"
#include "khess/geometry.hpp"
#include "support/oracles.hpp"

using namespace khess;

namespace {

SolverConfig config(int grid, Quadrature q = Quadrature::trapezoid) {
    SolverConfig c;
    c.grid_size = grid;
    c.quadrature = q;
    return c;
}

double max_error(const RadialProfile& p, const std::function<double(double)>& exact) {
    double e = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) e = std::max(e, std::abs(p.h[i] - exact(p.r[i])));
    return e;
}

// h' = r exp(r^2) on the unit ball: q = exp(r^2), h'' = q (1 + 2 r^2).
SourceTerm manufactured(int n, int k) {
    return SourceTerm::closure(
        [n, k](double r) {
            const double q = std::exp(r * r);
            return binomial(n - 1, k - 1) * std::pow(q, k) * (1 + 2 * r * r + (n - k) / static_cast<double>(k));
        },
        "manufactured");
}

double manufactured_h(double r) { return 0.5 * (std::exp(r * r) - std::exp(1.0)); }

// No refinement, so the error belongs to the requested grid.
SolverConfig fixed(int grid, Quadrature q = Quadrature::trapezoid) {
    auto c = config(grid, q);
    c.tol_residual = 1.0;
    return c;
}

}  // namespace

TEST(SourceTerm, ParsingAndEvaluation) {
    auto c = SourceTerm::parse("const:2.5");
    EXPECT_EQ(c.kind(), SourceTerm::Kind::constant);
    EXPECT_DOUBLE_EQ(c(0.3), 2.5);
    auto p = SourceTerm::parse("poly:1,0,2");
    EXPECT_DOUBLE_EQ(p(0.5), 1.5);
    EXPECT_THROW(SourceTerm::parse("const:1,2"), DomainError);
    EXPECT_THROW(SourceTerm::parse("exp:1"), DomainError);
    EXPECT_THROW(SourceTerm::parse("poly:a"), DomainError);
    EXPECT_THROW(SourceTerm::parse("3"), DomainError);
}

TEST(SourceTerm, SampledInterpolation) {
    auto s = SourceTerm::sampled({0.0, 0.5, 1.0}, {1.0, 3.0, 2.0});
    EXPECT_DOUBLE_EQ(s(0.25), 2.0);
    EXPECT_DOUBLE_EQ(s(0.75), 2.5);
    EXPECT_THROW(s(1.5), DomainError);
    EXPECT_THROW(SourceTerm::sampled({0.0, 0.0}, {1.0, 1.0}), DomainError);
    EXPECT_TRUE(s.sampled_on({0.0, 0.5, 1.0}));
    EXPECT_FALSE(s.sampled_on({0.0, 1.0}));
}

TEST(SolverConfig, Validation) {
    SolverConfig c;
    EXPECT_NO_THROW(c.validate());
    c.grid_size = 32;
    EXPECT_THROW(c.validate(), DomainError);
    c.grid_size = 65;
    c.quadrature = Quadrature::simpson;
    EXPECT_THROW(c.validate(), DomainError);
    c = SolverConfig{};
    c.tol_residual = 0.0;
    EXPECT_THROW(c.validate(), DomainError);
    EXPECT_EQ(parse_quadrature("simpson"), Quadrature::simpson);
    EXPECT_EQ(to_string(Quadrature::trapezoid), "trapezoid");
    EXPECT_THROW(parse_quadrature("gauss"), DomainError);
}

TEST(SolverGrid, UniformAndGraded) {
    auto c = config(64);
    auto g = solver_grid(0.0, 2.0, c);
    ASSERT_EQ(g.size(), 65u);
    EXPECT_DOUBLE_EQ(g.back(), 2.0);
    c.graded = true;
    auto gg = solver_grid(0.0, 1.0, c);
    EXPECT_DOUBLE_EQ(gg.front(), 0.0);
    EXPECT_DOUBLE_EQ(gg.back(), 1.0);
    const double first = gg[1] - gg[0];
    const double last = gg[64] - gg[63];
    EXPECT_NEAR(last / first, std::pow(0.9, 63), 1e-9);
}

TEST(RadialQuadrature, ExactForInterpolants) {
    for (int n : {1, 2, 3, 5}) {
        auto r = uniform_grid(0.0, 1.3, 64);
        RadialQuadrature trap(r, n, Quadrature::trapezoid);
        std::vector<double> lin;
        for (double x : r) lin.push_back(2.0 - 0.7 * x);
        auto I = trap.cumulative(lin);
        for (std::size_t i = 0; i < r.size(); ++i) {
            const double x = r[i];
            const double exact = 2.0 * std::pow(x, n) / n - 0.7 * std::pow(x, n + 1) / (n + 1);
            EXPECT_NEAR(I[i], exact, 1e-13);
        }
        RadialQuadrature simp(r, n, Quadrature::simpson);
        std::vector<double> quad;
        for (double x : r) quad.push_back(1.0 + x * x);
        auto J = simp.cumulative(quad);
        for (std::size_t i = 0; i < r.size(); i += 2) {
            const double x = r[i];
            EXPECT_NEAR(J[i], std::pow(x, n) / n + std::pow(x, n + 2) / (n + 2), 1e-13);
        }
    }
}

TEST(Dirichlet, ParaboloidExact) {
    for (auto [n, k] : {std::pair{2, 1}, {2, 2}, {3, 2}, {3, 3}, {4, 3}, {5, 2}}) {
        for (auto q : {Quadrature::trapezoid, Quadrature::simpson}) {
            for (double a : {0.5, 1.0, 3.0}) {
                const double R = 1.7;
                auto f = SourceTerm::constant(binomial(n, k) * std::pow(a, k));
                auto p = solve_radial_dirichlet(f, R, n, k, config(512, q));
                EXPECT_LE(max_error(p, [&](double r) { return 0.5 * a * (r * r - R * R); }), 1e-8);
                EXPECT_TRUE(p.k_convex);
            }
        }
    }
}

TEST(Dirichlet, ZeroSource) {
    auto p = solve_radial_dirichlet(SourceTerm::constant(0.0), 1.0, 3, 2, config(64));
    for (double v : p.h) EXPECT_EQ(v, 0.0);
    for (double v : p.hp) EXPECT_EQ(v, 0.0);
}

TEST(Dirichlet, LinearSourceInTheDisk) {
    // N = 2, k = 1, f = r: h' = r^2 / 3, h = (r^3 - 1) / 9
    auto p = solve_radial_dirichlet(SourceTerm::parse("poly:0,1"), 1.0, 2, 1, config(512, Quadrature::simpson));
    for (std::size_t i = 0; i < p.size(); ++i) {
        EXPECT_NEAR(p.hp[i], p.r[i] * p.r[i] / 3, 1e-10);
        EXPECT_NEAR(p.h[i], (std::pow(p.r[i], 3) - 1) / 9, 1e-9);
    }
    std::vector<double> radii{0.1, 0.25, 0.5, 0.75, 0.9};
    const double r0 = 1e-4;
    auto ref = oracle::ode_dirichlet([](double r) { return r; }, 2, 1, 1.0, r0, r0 * r0 / 3, radii);
    for (std::size_t j = 0; j < radii.size(); ++j) EXPECT_NEAR(profile_value_at(p, radii[j]), ref[j], 1e-9);
}

TEST(Dirichlet, AdaptiveOdeOracleForSmoothSources) {
    struct Case {
        int n, k;
        std::vector<double> coeffs;
    };
    for (const auto& c : {Case{3, 2, {1.0, 0.0, 1.0}}, Case{3, 3, {2.0, 1.0}}, Case{4, 2, {1.0, 0.0, 0.0, 3.0}}}) {
        auto src = SourceTerm::polynomial(c.coeffs);
        const double r0 = 1e-5;
        const double a = std::pow(c.coeffs[0] / binomial(c.n, c.k), 1.0 / c.k);
        std::vector<double> radii{0.05, 0.2, 0.4, 0.6, 0.8, 0.95};
        auto ref = oracle::ode_dirichlet([&](double r) { return src(r); }, c.n, c.k, 1.0, r0, a * r0, radii);
        auto trap = solve_radial_dirichlet(src, 1.0, c.n, c.k, config(512));
        auto simp = solve_radial_dirichlet(src, 1.0, c.n, c.k, config(512, Quadrature::simpson));
        for (std::size_t j = 0; j < radii.size(); ++j) {
            EXPECT_NEAR(profile_value_at(trap, radii[j]), ref[j], 1e-5) << c.n << "," << c.k;
            EXPECT_NEAR(profile_value_at(simp, radii[j]), ref[j], 1e-8) << c.n << "," << c.k;
        }
    }
}

TEST(Dirichlet, ConvergenceOrders) {
    for (auto [n, k] : {std::pair{2, 1}, {3, 2}, {4, 3}}) {
        double prev_t = 0, prev_s = 0;
        for (int m : {64, 128, 256}) {
            const double et = max_error(solve_radial_dirichlet(manufactured(n, k), 1.0, n, k, fixed(m)), manufactured_h);
            const double es = max_error(
                solve_radial_dirichlet(manufactured(n, k), 1.0, n, k, fixed(m, Quadrature::simpson)), manufactured_h);
            if (prev_t > 0) {
                EXPECT_GT(std::log2(prev_t / et), 1.9) << n << "," << k << " M=" << m;
                EXPECT_GT(std::log2(prev_s / es), 3.5) << n << "," << k << " M=" << m;
            }
            prev_t = et;
            prev_s = es;
        }
    }
}

TEST(Dirichlet, SignMonotonicityAndConvexity) {
    auto p = solve_radial_dirichlet(SourceTerm::parse("poly:1,-0.5,2"), 1.0, 3, 2, config(256));
    EXPECT_EQ(p.h.back(), 0.0);
    EXPECT_TRUE(p.k_convex);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        EXPECT_LT(p.h[i], 0.0);
        EXPECT_LE(p.h[i], p.h[i + 1]);
        EXPECT_GE(p.hp[i], 0.0);
    }
}

TEST(Dirichlet, MonotoneDependenceOnSource) {
    const auto grid = config(256);
    for (auto [n, k] : {std::pair{2, 2}, {3, 2}, {4, 3}}) {
        auto u1 = solve_radial_dirichlet(SourceTerm::parse("poly:1,0,1"), 1.0, n, k, grid);
        auto u2 = solve_radial_dirichlet(SourceTerm::parse("poly:1.5,0,1,1"), 1.0, n, k, grid);
        for (std::size_t i = 0; i < u1.size(); ++i) EXPECT_GE(u1.h[i], u2.h[i]);
    }
}

TEST(Dirichlet, ResidualReportAndErrors) {
    auto rep = solve_radial_dirichlet_report(SourceTerm::constant(1.0), 1.0, 3, 2, config(512));
    EXPECT_LE(rep.residual_max, 1e-4);
    EXPECT_EQ(rep.grid_size, 512);
    auto neg = SourceTerm::parse("poly:1,-3");
    EXPECT_THROW(solve_radial_dirichlet(neg, 1.0, 3, 2, config(64)), PreconditionError);
    EXPECT_THROW(solve_radial_dirichlet(SourceTerm::sampled({0, 1}, {1, -1}), 1.0, 3, 2, config(64)),
                 PreconditionError);
    auto strict = config(64);
    strict.tol_residual = 1e-15;
    strict.refine_max = 1;
    EXPECT_THROW(solve_radial_dirichlet(SourceTerm::parse("poly:1,0,5"), 1.0, 3, 2, strict), ConvergenceError);
    EXPECT_THROW(solve_radial_dirichlet(SourceTerm::constant(1.0), 1.0, 3, 4, config(64)), DomainError);
}

TEST(Dirichlet, RefinementRaisesGrid) {
    auto c = config(64);
    c.tol_residual = 1e-6;
    c.refine_max = 4;
    auto rep = solve_radial_dirichlet_report(SourceTerm::parse("poly:1,0,5"), 1.0, 3, 2, c);
    EXPECT_GT(rep.refinements, 0);
    EXPECT_EQ(rep.grid_size, 64 << rep.refinements);
    EXPECT_LE(rep.residual_max, 1e-6);
}

TEST(Annulus, ParaboloidWithInnerValue) {
    for (auto [n, k] : {std::pair{2, 1}, {3, 2}, {3, 3}}) {
        const double a = 2.0, rin = 0.4, R = 1.0;
        auto rep = solve_annulus_dirichlet(SourceTerm::constant(binomial(n, k) * std::pow(a, k)), rin, R,
                                           0.5 * a * (rin * rin - R * R), n, k, config(512));
        EXPECT_LE(max_error(rep.profile, [&](double r) { return 0.5 * a * (r * r - R * R); }), 1e-8);
    }
    EXPECT_THROW(solve_annulus_dirichlet(SourceTerm::constant(1.0), 0.5, 1.0, 0.1, 3, 2, config(64)),
                 PreconditionError);
    EXPECT_THROW(solve_annulus_dirichlet(SourceTerm::constant(1.0), 1.5, 1.0, 0.0, 3, 2, config(64)), DomainError);
}

TEST(Holder, Examples) {
    auto r = uniform_grid(0.0, 1.0, 100);
    std::vector<double> lin(r), root;
    for (double x : r) root.push_back(std::sqrt(x));
    EXPECT_NEAR(holder_seminorm(profile_from_samples(r, lin, 2, 1), 1.0), 1.0, 1e-12);
    EXPECT_NEAR(holder_seminorm(profile_from_samples(r, root, 2, 1), 0.5), 1.0, 1e-12);
    EXPECT_THROW(holder_seminorm(profile_from_samples(r, lin, 2, 1), 1.5), DomainError);
}

TEST(Holder, StableUnderRefinement) {
    const auto f = SourceTerm::constant(1.0);
    const double h1 = holder_seminorm(solve_radial_dirichlet(f, 1.0, 3, 2, config(512)), 0.5);
    const double h2 = holder_seminorm(solve_radial_dirichlet(f, 1.0, 3, 2, config(1024)), 0.5);
    EXPECT_LE(std::abs(h2 - h1), 0.05 * h1);
}

TEST(BoundaryGrowth, Examples) {
    const double a = 1.5, R = 1.0;
    auto p = solve_radial_dirichlet(SourceTerm::constant(binomial(3, 2) * a * a), R, 3, 2, config(256));
    EXPECT_TRUE(verify_boundary_growth(p, a * R, 0.5));
    EXPECT_FALSE(verify_boundary_growth(p, 0.9 * a * R, 0.5));
    auto z = solve_radial_dirichlet(SourceTerm::constant(0.0), R, 3, 2, config(64));
    EXPECT_TRUE(verify_boundary_growth(z, 0.0, 1.0));
}

TEST(BoundaryGrowth, LogBarrierConstant) {
    auto p = solve_radial_dirichlet(SourceTerm::constant(1.0), 1.0, 3, 2, config(512));
    auto field = sphere_field(1.0, 3, 32);
    const double t = 2 * augment_R(field, 2) + 1;
    const auto tube = TubeSpec::for_field(field, 1.0);
    auto lb = verify_log_boundary_barrier(field, 2, 1.0, -p.h.front(), t, tube.d0);
    ASSERT_TRUE(lb.report.pass);
    EXPECT_TRUE(verify_boundary_growth(p, lb.C3, tube.d0));
}

TEST(Comparison, Examples) {
    const double c = 2.0;
    for (auto [n, k] : {std::pair{2, 2}, {3, 2}, {4, 3}}) {
        const auto grid = config(256);
        auto super = solve_radial_dirichlet(SourceTerm::constant(c), 1.0, n, k, grid);
        const double a = std::pow(2 * c / binomial(n, k), 1.0 / k);
        auto sub = solve_radial_dirichlet(SourceTerm::constant(2 * c), 1.0, n, k, grid);
        EXPECT_NEAR(sub.h.front(), -0.5 * a, 1e-9);
        EXPECT_TRUE(classical_comparison_check(sub, super, c));
        EXPECT_TRUE(classical_comparison_check(super, super, c));
        auto corrupt = super;
        for (std::size_t i = 1; i + 1 < corrupt.size(); ++i) corrupt.h[i] -= 10.0;
        EXPECT_FALSE(classical_comparison_check(sub, corrupt, c));
    }
    auto a = solve_radial_dirichlet(SourceTerm::constant(1.0), 1.0, 3, 2, config(64));
    auto b = solve_radial_dirichlet(SourceTerm::constant(1.0), 1.0, 3, 2, config(128));
    EXPECT_THROW(classical_comparison_check(a, b, 1.0), DomainError);
}

TEST(Hopf, SolutionOfUnitSource) {
    auto p = solve_radial_dirichlet(SourceTerm::constant(1.0), 1.0, 3, 2, config(512));
    auto rep = verify_hopf_estimate(p, 0.5);
    EXPECT_TRUE(rep.pass);
    EXPECT_GT(rep.C0, 0.0);
    EXPECT_GT(rep.C1, 0.0);
    EXPECT_LT(rep.barrier_s_k_max, 0.0);
    EXPECT_GE(rep.linear_margin, 0.0);
    EXPECT_NEAR(rep.C1, rep.m * rep.C0 * std::exp(-rep.m * rep.delta), 1e-14);
    auto zero = solve_radial_dirichlet(SourceTerm::constant(0.0), 1.0, 3, 2, config(64));
    EXPECT_THROW(verify_hopf_estimate(zero, 0.5), PreconditionError);
}
