#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "khess/symfun.hpp"

namespace khess {

struct CurvatureSample {
    std::vector<double> point;
    std::vector<double> kappa;  // N-1 principal curvatures, positive for convex
};

class CurvatureField {
public:
    // Throws DomainError on an empty list, kappa of the wrong length or
    // non-finite curvatures. Points may be empty (curvature-only fields).
    CurvatureField(int dim, std::vector<CurvatureSample> samples);

    int dim() const { return dim_; }
    const std::vector<CurvatureSample>& samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    // mu = max |kappa_i| over all samples.
    double max_abs_kappa() const;

private:
    int dim_;
    std::vector<CurvatureSample> samples_;
};

struct TubeSpec {
    double delta = 0.0;
    double d0 = 0.0;
    double mu = 0.0;

    // d0 defaults to min(delta, 1/(2 mu)).
    static TubeSpec for_field(const CurvatureField& field, double delta, std::optional<double> d0 = std::nullopt);
    void validate() const;
};

// sigma_j(kappa(y)) > 0 for every sample and j = 1..k-1. Needs 2 <= k <= N.
bool strictly_km1_convex(const CurvatureField& field, int k);

// sigma_j of (kappa, R) through sigma_j(kappa, R) = R sigma_{j-1}(kappa) + sigma_j(kappa).
double sigma_augmented(const std::vector<double>& kappa, double R, int j);

// Smallest R (doubling search from 2^-20 (1+mu), then bisection) with
// (kappa(y), R) in the open cone Gamma_k at every sample. r_max defaults to
// 1e6 (1+mu). PreconditionError if the field is not strictly (k-1)-convex,
// NotFoundError if the search runs past r_max.
double augment_R(const CurvatureField& field, int k, std::optional<double> r_max = std::nullopt);

// Spectrum of D^2 d at distance d from a boundary point with curvatures
// kappa: -kappa_i/(1 - kappa_i d) and 0.
EigenSpectrum hess_dist_spectrum(const std::vector<double>& kappa, double d);

// S_j(D^2 (g o d)) = sigma_j(-kappa_i g'/(1 - kappa_i d), g'').
double s_j_composition(double gp, double gpp, const std::vector<double>& kappa, double d, int j);

struct BarrierNode {
    std::size_t sample = 0;
    double d = 0.0;
    double s_k = 0.0;
    double margin = 0.0;
    bool k_convex = false;  // S_j > 0 for j = 1..k
    bool admissible = true;  // 1 - kappa_i d > 0
};

struct BarrierReport {
    bool pass = false;
    bool k_convex = false;
    bool margins_positive = false;
    double min_margin = 0.0;
    std::size_t failures = 0;
    std::vector<BarrierNode> nodes;
};

// Distances used by the barrier checks: d0 (i - 1/2)/n, i = 1..n.
std::vector<double> tube_distances(double d0, int n);

// phi = exp(-t d) - 1: checks S_j(D^2 phi) > 0 (j <= k) and
// S_k(D^2 phi) - lambda |phi|^k > 0 at every sample and distance.
// PreconditionError if the field is not strictly (k-1)-convex.
BarrierReport verify_exp_boundary_barrier(const CurvatureField& field, int k, double lambda, double t, double d0,
                                          int n_d = 32);

struct LogBarrierResult {
    double M = 0.0;
    double beta0 = 0.0;
    double C3 = 0.0;  // M t, the linear growth constant of -M log(1 + t d)
    BarrierReport report;
};

// v = -M log(1 + t d). beta0 = 0.5 min sigma_j(kappa, t/(1 + t d0)) over
// samples and j <= k; M is the larger of the amplitude giving
// (M t/(1 + t d0))^k beta0/2 > fsup and usup/log(1 + t d0) (1 if both vanish).
// Margins in the report are S_k(D^2 v) - fsup. NotFoundError when beta0 <= 0
// or the tube leaves the curvature-admissible range.
LogBarrierResult verify_log_boundary_barrier(const CurvatureField& field, int k, double fsup, double usup, double t,
                                             double d0, int n_d = 32);

// Boundary of the ball of radius R in R^N.
CurvatureField sphere_field(double radius, int dim, int count = 64, std::uint64_t seed = 7);

// Ellipsoid with the given semi-axes (N = axes.size()). Curvatures are the
// eigenvalues of the shape operator P D^2F P / |grad F| for
// F = sum x_i^2/a_i^2, at points drawn from a seeded generator.
CurvatureField ellipsoid_field(const std::vector<double>& axes, int count = 64, std::uint64_t seed = 7);

// "sphere:R[,N]" or "ellipsoid:a,b[,c,...]"; two semi-axes mean the
// spheroid (a, b, b) in R^3.
CurvatureField field_from_spec(const std::string& spec, int count = 64);

}  // namespace khess
