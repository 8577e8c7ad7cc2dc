#pragma once
#include <cstdint>
#include <vector>

namespace rairy {

// n x n Gaussian Hermitian ensemble with a rank-k1 external source of
// strength alpha (k2 = n - k1 null source entries)
struct SourceEnsemble {
    int n = 1;
    int k1 = 0;
    double alpha = 0.0;
};

// deformation parameters of the tau function (all zero on the base locus)
struct MomentDeformation {
    double t1 = 0, t2 = 0, s1 = 0, s2 = 0, u1 = 0, u2 = 0, beta = 0;
};

// block moment-matrix tau function on E = (-inf, b]; b = +infinity gives the
// whole-line value via closed Gaussian moment recurrences
double tau_moment_det(const SourceEnsemble& ens, double b, const MomentDeformation& def);

// P(all eigenvalues <= b) = tau(E)/tau(R) at zero deformation
double pn_probability(const SourceEnsemble& ens, double b);

struct SpectrumSample {
    std::vector<double> eigs;  // ascending
    int n = 0;
};

SpectrumSample sample_spectrum(const SourceEnsemble& ens, std::uint64_t seed);

// (lambda_max - 2 sqrt(n)) n^{1/6}
double edge_rescale(const SpectrumSample& s);

// largest eigenvalue only, in the same distribution as sample_spectrum but
// through the tridiagonal model plus a rank-one secular equation (k1 <= 1);
// O(n^2) per draw instead of a dense eigensolve
double sample_top_eigenvalue(const SourceEnsemble& ens, std::uint64_t seed);

struct RateFit {
    double exponent = 0.0;
    std::vector<double> deviations;  // |log P_n(scaled) - Q| per n
};

// edge-scaling deviation decay exponent; r = 0 compares against the Airy
// route, r >= 1 against the r-Airy determinant at tau = 0
RateFit convergence_rate(const std::vector<int>& ns, double x, int r);

struct BrownianMap {
    double alpha = 0.0;  // source strength
    double scale = 0.0;  // spatial scale factor
    double b = 0.0;      // E_endpoint * scale
};

BrownianMap brownian_to_matrix(double t, double E_endpoint, double a);
double time_change_from_tprime(double tprime);  // t(t') = 1/(1+e^{-2t'})
double time_change_to_tprime(double t);

struct Tangency {
    double y0 = 0.0, t0 = 0.0;
};

Tangency tangency_point(double rho0, int n);

struct CuspGeometry {
    double a = 0, p = 0, q = 0, x0 = 0, t0 = 0, mu = 0, c0 = 0, A_const = 0;
};

CuspGeometry cusp_geometry(double a, double p);

// relative residuals of the bilinear (j=0) identities and the first two
// ratio identities, by Richardson-extrapolated centered differences
struct KpReport {
    double eq_s = 0;      // d2 log tau / dt1 ds1  vs  -tau(k1+1) tau(k1-1)/tau^2
    double eq_u = 0;      // d2 log tau / dt1 du1  vs  -tau(k2+1) tau(k2-1)/tau^2
    double ratio_t = 0;   // dt1 log ratio  vs  (dt2 ds1)/(dt1 ds1)
    double ratio_s = 0;   // -ds1 log ratio vs  (dt1 ds2)/(dt1 ds1)
};

KpReport kp_identity_check(const SourceEnsemble& ens, double b, double step);

// relative residuals of the four boundary constraints on the zero locus
struct VirasoroReport {
    double r_s1 = 0;    // df/ds1 = -df/dalpha
    double r_t1 = 0;    // df/dt1 = -df/db + alpha k1
    double r_t1u1 = 0;  // d2f/dt1du1 = -d/db (d/db + d/dalpha) f - k2
    double r_t1s1 = 0;  // d2f/dt1ds1 = d2f/db dalpha - k1
};

VirasoroReport virasoro_check(const SourceEnsemble& ens, double b, double step);

} // namespace rairy
