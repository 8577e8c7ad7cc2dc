#include "rairy/ensemble.hpp"
#include "rairy/fredholm.hpp"
#include "rairy/quad.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

namespace rairy {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kMaxN = 13;  // largest block determinant ever formed

// per-row weight exp(-a z^2 + c z)
struct Weight {
    double a = 0.5, c = 0.0;
};

Weight sourced_weight(double alpha, const MomentDeformation& d) {
    Weight w;
    w.a = 0.5 - d.beta - (d.t2 - d.s2);
    w.c = alpha + (d.t1 - d.s1);
    if (w.a <= 1e-6) throw std::domain_error("tau_moment_det: divergent weight");
    return w;
}

Weight plain_weight(const MomentDeformation& d) {
    Weight w;
    w.a = 0.5 - (d.t2 - d.u2);
    w.c = d.t1 - d.u1;
    if (w.a <= 1e-6) throw std::domain_error("tau_moment_det: divergent weight");
    return w;
}

// monic orthogonal polynomials of N(c, var): p_{k+1} = (z-c) p_k - k var p_{k-1}.
// Monic in z, so swapping them in for the monomials is a unit-triangular basis
// change and leaves every determinant value untouched while fixing conditioning.
struct PolyBasis {
    double c = 0.0, var = 1.0;
};

void poly_eval(double z, const PolyBasis& pb, int count, double* out) {
    out[0] = 1.0;
    if (count > 1) out[1] = z - pb.c;
    for (int k = 1; k + 1 < count; ++k)
        out[k + 1] = (z - pb.c) * out[k] - k * pb.var * out[k - 1];
}

// rows <p_i, q_j> under the weight, integrated over (-inf, min(b, cutoff)]
void fill_block(Eigen::MatrixXd& M, int row0, int nrows, int ncols, const Weight& w,
                const PolyBasis& rows, const PolyBasis& cols, double b) {
    if (nrows == 0) return;
    double center = w.c / (2.0 * w.a);
    double spread = 16.0 / std::sqrt(2.0 * w.a) + 4.0;
    double hi = std::isfinite(b) ? std::min(b, center + spread) : center + spread;
    double lo = std::min(hi, center) - spread;
    int npan = (int)std::ceil((hi - lo) / 0.2);
    static thread_local GaussLegendre gl(12);
    MappedRule rule = gl_composite(lo, hi, npan, gl);
    M.block(row0, 0, nrows, ncols).setZero();
    double pr[kMaxN], pc[kMaxN];
    for (size_t k = 0; k < rule.x.size(); ++k) {
        double z = rule.x[k];
        double f = rule.w[k] * std::exp(-w.a * z * z + w.c * z);
        poly_eval(z, rows, nrows, pr);
        poly_eval(z, cols, ncols, pc);
        for (int i = 0; i < nrows; ++i)
            for (int j = 0; j < ncols; ++j) M(row0 + i, j) += f * pr[i] * pc[j];
    }
}

// block moment determinant for explicit block sizes; b = +inf gives E = R
double tau_det(int k1, int k2, double alpha, double b, const MomentDeformation& def) {
    int n = k1 + k2;
    if (n <= 0) return 1.0;  // degenerate block: determinant of nothing
    if (n > kMaxN) throw std::domain_error("tau_moment_det: matrix size too large");
    Eigen::MatrixXd M(n, n);
    PolyBasis rb1, rb2, cb;
    Weight w1, w2;
    if (k1 > 0) {
        w1 = sourced_weight(alpha, def);
        rb1 = PolyBasis{w1.c / (2.0 * w1.a), 1.0 / (2.0 * w1.a)};
    }
    if (k2 > 0) {
        w2 = plain_weight(def);
        rb2 = PolyBasis{w2.c / (2.0 * w2.a), 1.0 / (2.0 * w2.a)};
    }
    cb = PolyBasis{(k1 * rb1.c + k2 * rb2.c) / n, 1.0};
    fill_block(M, 0, k1, n, w1, rb1, cb, b);
    fill_block(M, k1, k2, n, w2, rb2, cb, b);
    return M.determinant();
}

void check_ensemble(const SourceEnsemble& e) {
    if (e.k1 < 0 || e.k1 > e.n || e.n < 1)
        throw std::domain_error("ensemble: 0 <= k1 <= n required");
    if (e.alpha < 0.0) throw std::domain_error("ensemble: alpha >= 0 required");
}

// Richardson-extrapolated centered differences
template <class F>
double d1(F&& f, double h) {
    double a = (f(h) - f(-h)) / (2.0 * h);
    double b = (f(2.0 * h) - f(-2.0 * h)) / (4.0 * h);
    return (4.0 * a - b) / 3.0;
}

template <class F>
double d2_mixed(F&& f, double h) {
    auto m = [&](double s) {
        return (f(s, s) - f(s, -s) - f(-s, s) + f(-s, -s)) / (4.0 * s * s);
    };
    return (4.0 * m(h) - m(2.0 * h)) / 3.0;
}

template <class F>
double d2_pure(F&& f, double h) {
    auto s2 = [&](double s) { return (f(s) - 2.0 * f(0.0) + f(-s)) / (s * s); };
    return (4.0 * s2(h) - s2(2.0 * h)) / 3.0;
}

double rel_residual(double lhs, double rhs) {
    double denom = std::max(std::abs(lhs), std::abs(rhs));
    if (denom < 1e-12) return std::abs(lhs - rhs);
    return std::abs(lhs - rhs) / denom;
}

double u01(std::mt19937_64& g) {
    return ((g() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

double normal01(std::mt19937_64& g) {
    double u = u01(g), v = u01(g);
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * kPi * v);
}

} // namespace

double tau_moment_det(const SourceEnsemble& ens, double b, const MomentDeformation& def) {
    check_ensemble(ens);
    if (ens.n > 12) throw std::domain_error("tau_moment_det: n <= 12 required");
    return tau_det(ens.k1, ens.n - ens.k1, ens.alpha, b, def);
}

double pn_probability(const SourceEnsemble& ens, double b) {
    check_ensemble(ens);
    if (ens.n > 12) throw std::domain_error("pn_probability: n <= 12 required");
    MomentDeformation def;
    double num = tau_det(ens.k1, ens.n - ens.k1, ens.alpha, b, def);
    double den = tau_det(ens.k1, ens.n - ens.k1, ens.alpha,
                         std::numeric_limits<double>::infinity(), def);
    if (den == 0.0) throw std::domain_error("pn_probability: degenerate normalization");
    return num / den;
}

SpectrumSample sample_spectrum(const SourceEnsemble& ens, std::uint64_t seed) {
    check_ensemble(ens);
    if (ens.n > 4000) throw std::domain_error("sample_spectrum: n <= 4000 required");
    int n = ens.n;
    std::mt19937_64 gen(seed);
    Eigen::MatrixXcd M(n, n);
    const double off = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < n; ++i) {
        M(i, i) = normal01(gen) + (i < ens.k1 ? ens.alpha : 0.0);
        for (int j = i + 1; j < n; ++j) {
            double re = off * normal01(gen), im = off * normal01(gen);
            M(i, j) = std::complex<double>(re, im);
            M(j, i) = std::complex<double>(re, -im);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M, Eigen::EigenvaluesOnly);
    SpectrumSample s;
    s.n = n;
    s.eigs.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
    return s;
}

double sample_top_eigenvalue(const SourceEnsemble& ens, std::uint64_t seed) {
    check_ensemble(ens);
    if (ens.k1 > 1) throw std::domain_error("sample_top_eigenvalue: k1 <= 1 required");
    if (ens.alpha < 0.0) throw std::domain_error("sample_top_eigenvalue: alpha >= 0 required");
    int n = ens.n;
    std::mt19937_64 gen(seed);
    // symmetric tridiagonal model for the sourceless spectrum:
    // diagonal N(0,1), off-diagonal chi_{2(n-k)}/sqrt(2) = sqrt(Gamma(n-k, 1))
    Eigen::VectorXd diag(n), sub(std::max(n - 1, 1));
    for (int i = 0; i < n; ++i) diag[i] = normal01(gen);
    for (int k = 1; k < n; ++k) {
        std::gamma_distribution<double> gamma((double)(n - k), 1.0);
        sub[k - 1] = std::sqrt(gamma(gen));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    if (n == 1) {
        return diag[0] + (ens.k1 == 1 ? ens.alpha : 0.0);
    }
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& d = es.eigenvalues();
    if (ens.k1 == 0 || ens.alpha == 0.0) return d[n - 1];

    // rank-one source in the sourceless eigenbasis: alpha v v^* with v uniform
    // on the complex sphere, independent of the spectrum
    std::vector<double> w(n);
    double norm = 0.0;
    for (int i = 0; i < n; ++i) {
        double re = normal01(gen), im = normal01(gen);
        w[i] = re * re + im * im;
        norm += w[i];
    }
    for (double& v : w) v /= norm;
    // top root of the secular equation 1 = alpha sum w_i/(lambda - d_i)
    double lo = d[n - 1], hi = d[n - 1] + ens.alpha;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += w[i] / (mid - d[i]);
        (ens.alpha * s > 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double edge_rescale(const SpectrumSample& s) {
    if (s.n < 1 || s.eigs.empty()) throw std::domain_error("edge_rescale: empty sample");
    double n = s.n;
    return (s.eigs.back() - 2.0 * std::sqrt(n)) * std::pow(n, 1.0 / 6.0);
}

RateFit convergence_rate(const std::vector<int>& ns, double x, int r) {
    if (ns.size() < 3) throw std::domain_error("convergence_rate: need >= 3 sizes");
    double q;
    if (r == 0) {
        QuadratureRule rule = build_rule(x, 1e-10);
        q = fredholm_logdet(KernelSpec{}, x, rule);
    } else {
        KernelSpec ks{KernelSpec::Kind::rairy, r, 0.0, 0};
        QuadratureRule rule = build_rule(x, 1e-9);
        q = fredholm_logdet(ks, x, rule);
    }
    RateFit fit;
    std::vector<double> lx, ly;
    for (int n : ns) {
        SourceEnsemble e;
        e.n = n;
        e.k1 = r;
        e.alpha = std::sqrt((double)n);  // critical source strength (rho0 = 1)
        double b = 2.0 * std::sqrt((double)n) + x * std::pow((double)n, -1.0 / 6.0);
        double p = pn_probability(e, b);
        double dev = std::abs(std::log(p) - q);
        fit.deviations.push_back(dev);
        lx.push_back(std::log((double)n));
        ly.push_back(std::log(dev));
    }
    // least-squares slope of log deviation vs log n
    double mx = 0, my = 0;
    for (size_t i = 0; i < lx.size(); ++i) { mx += lx[i]; my += ly[i]; }
    mx /= lx.size();
    my /= ly.size();
    double num = 0, den = 0;
    for (size_t i = 0; i < lx.size(); ++i) {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    fit.exponent = num / den;
    return fit;
}

BrownianMap brownian_to_matrix(double t, double E_endpoint, double a) {
    if (!(t > 0.0 && t < 1.0)) throw std::domain_error("brownian_to_matrix: t in (0,1)");
    BrownianMap m;
    m.alpha = a * std::sqrt(2.0 * t / (1.0 - t));
    m.scale = std::sqrt(2.0 / (t * (1.0 - t)));
    m.b = E_endpoint * m.scale;
    return m;
}

double time_change_from_tprime(double tprime) { return 1.0 / (1.0 + std::exp(-2.0 * tprime)); }

double time_change_to_tprime(double t) {
    if (!(t > 0.0 && t < 1.0)) throw std::domain_error("time_change: t in (0,1)");
    return 0.5 * std::log(t / (1.0 - t));
}

Tangency tangency_point(double rho0, int n) {
    if (rho0 < 0.0) throw std::domain_error("tangency_point: rho0 >= 0");
    double d = 1.0 + rho0 * rho0;
    return Tangency{rho0 * std::sqrt(2.0 * (double)n) / d, 1.0 / d};
}

CuspGeometry cusp_geometry(double a, double p) {
    if (!(p > 0.0 && p < 1.0) || !(a > 0.0))
        throw std::domain_error("cusp_geometry: need 0 < p < 1, a > 0");
    CuspGeometry g;
    g.a = a;
    g.p = p;
    double q = std::cbrt((1.0 - p) / p);
    g.q = q;
    double qq = q * q - q + 1.0;
    g.t0 = 1.0 / (1.0 + 2.0 * a * a * qq / ((q + 1.0) * (q + 1.0)));
    g.x0 = (2.0 * q - 1.0) * a / (q + 1.0) * g.t0;
    g.mu = std::pow(qq / q, 0.25);
    g.c0 = std::sqrt(g.t0 * (1.0 - g.t0) / 2.0);
    g.A_const = std::sqrt(q) * (1.0 - g.x0 / a) - g.x0 / (a * std::sqrt(q));
    return g;
}

KpReport kp_identity_check(const SourceEnsemble& ens, double b, double step) {
    check_ensemble(ens);
    int k1 = ens.k1, k2 = ens.n - ens.k1;
    if (k1 < 1 || k2 < 1) throw std::domain_error("kp_identity_check: 1 <= k1 <= n-1");
    if (!(step >= 1e-3 && step <= 5e-2))
        throw std::domain_error("kp_identity_check: step in [1e-3, 5e-2]");
    double alpha = ens.alpha;
    auto lt = [&](int d1k, int d2k, const MomentDeformation& d) {
        return std::log(std::abs(tau_det(k1 + d1k, k2 + d2k, alpha, b, d)));
    };

    MomentDeformation base;
    double t0 = tau_det(k1, k2, alpha, b, base);
    double tp = tau_det(k1 + 1, k2, alpha, b, base);
    double tm = tau_det(k1 - 1, k2, alpha, b, base);
    double up = tau_det(k1, k2 + 1, alpha, b, base);
    double um = tau_det(k1, k2 - 1, alpha, b, base);

    double dt1s1 = d2_mixed([&](double e1, double e2) {
        MomentDeformation d; d.t1 = e1; d.s1 = e2; return lt(0, 0, d);
    }, step);
    double dt1u1 = d2_mixed([&](double e1, double e2) {
        MomentDeformation d; d.t1 = e1; d.u1 = e2; return lt(0, 0, d);
    }, step);
    double dt2s1 = d2_mixed([&](double e1, double e2) {
        MomentDeformation d; d.t2 = e1; d.s1 = e2; return lt(0, 0, d);
    }, step);
    double dt1s2 = d2_mixed([&](double e1, double e2) {
        MomentDeformation d; d.t1 = e1; d.s2 = e2; return lt(0, 0, d);
    }, step);

    KpReport rep;
    rep.eq_s = rel_residual(dt1s1, -tp * tm / (t0 * t0));
    rep.eq_u = rel_residual(dt1u1, -up * um / (t0 * t0));

    double lr_t = d1([&](double e) {
        MomentDeformation d; d.t1 = e; return lt(1, 0, d) - lt(-1, 0, d);
    }, step);
    double lr_s = d1([&](double e) {
        MomentDeformation d; d.s1 = e; return lt(1, 0, d) - lt(-1, 0, d);
    }, step);
    rep.ratio_t = rel_residual(lr_t, dt2s1 / dt1s1);
    rep.ratio_s = rel_residual(-lr_s, dt1s2 / dt1s1);
    return rep;
}

VirasoroReport virasoro_check(const SourceEnsemble& ens, double b, double step) {
    check_ensemble(ens);
    if (!std::isfinite(b)) throw std::domain_error("virasoro_check: finite b required");
    if (!(step >= 1e-3 && step <= 5e-2))
        throw std::domain_error("virasoro_check: step in [1e-3, 5e-2]");
    int k1 = ens.k1, k2 = ens.n - ens.k1;
    auto f = [&](double ea, double eb, const MomentDeformation& d) {
        return std::log(std::abs(tau_det(k1, k2, ens.alpha + ea, b + eb, d)));
    };
    MomentDeformation z;

    double fs1 = d1([&](double e) { MomentDeformation d; d.s1 = e; return f(0, 0, d); }, step);
    double ft1 = d1([&](double e) { MomentDeformation d; d.t1 = e; return f(0, 0, d); }, step);
    double fa = d1([&](double e) { return f(e, 0, z); }, step);
    double fb = d1([&](double e) { return f(0, e, z); }, step);
    double fbb = d2_pure([&](double e) { return f(0, e, z); }, step);
    double fba = d2_mixed([&](double e1, double e2) { return f(e2, e1, z); }, step);
    double ft1u1 = d2_mixed([&](double e1, double e2) {
        MomentDeformation d; d.t1 = e1; d.u1 = e2; return f(0, 0, d);
    }, step);
    double ft1s1 = d2_mixed([&](double e1, double e2) {
        MomentDeformation d; d.t1 = e1; d.s1 = e2; return f(0, 0, d);
    }, step);

    VirasoroReport rep;
    rep.r_s1 = rel_residual(fs1, -fa);
    rep.r_t1 = rel_residual(ft1, -fb + ens.alpha * k1);
    rep.r_t1u1 = rel_residual(ft1u1, -(fbb + fba) - (double)k2);
    rep.r_t1s1 = rel_residual(ft1s1, fba - (double)k1);
    return rep;
}

} // namespace rairy
