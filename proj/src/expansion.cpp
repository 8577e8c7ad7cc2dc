#include "rairy/expansion.hpp"
#include "rairy/fredholm.hpp"
#include "rairy/pde.hpp"
#include "rairy/quad.hpp"

#include <cmath>
#include <stdexcept>

namespace rairy {

namespace {

double binom(int n, int k) {
    double c = 1.0;
    for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
    return c;
}

// derivative towers of g and Q_0 at a point, via g'' = x g + 2 g^3
struct Tower {
    std::array<double, 11> g{};  // g^{(k)}
    std::array<double, 11> q{};  // Q_0^{(k)}, k = 0..10 (q[0], q[1] optional)

    double g2(int m) const {  // (g^2)^{(m)}
        double s = 0.0;
        for (int i = 0; i <= m; ++i) s += binom(m, i) * g[i] * g[m - i];
        return s;
    }
    double g4(int m) const {  // (g^4)^{(m)}
        double s = 0.0;
        for (int i = 0; i <= m; ++i) s += binom(m, i) * g2(i) * g2(m - i);
        return s;
    }
};

Tower tower_at(const Painleve2Solution& sol, double x, bool with_q01) {
    Tower t;
    t.g[0] = sol.eval_g(x);
    t.g[1] = sol.eval_gp(x);
    for (int k = 0; k + 2 < 11; ++k) {
        double g3k = 0.0;  // (g^3)^{(k)} by Leibniz of g^2 * g
        for (int m = 0; m <= k; ++m) g3k += binom(k, m) * t.g2(m) * t.g[k - m];
        t.g[k + 2] = x * t.g[k] + (k > 0 ? k * t.g[k - 1] : 0.0) + 2.0 * g3k;
    }
    if (with_q01) {
        t.q[0] = tracy_widom_q0(x, sol);
        t.q[1] = tracy_widom_q0_deriv(x, sol);
    }
    for (int k = 0; k + 2 < 11; ++k) t.q[k + 2] = -t.g2(k);
    return t;
}

// int_x^inf Q_0(u) du
double integral_q0(const Painleve2Solution& sol, double x) {
    double top = 11.0;
    if (x >= top) return 0.0;
    static thread_local GaussLegendre gl(12);
    int npan = (int)std::ceil((top - x) / 0.25);
    return gl_composite(x, top, npan, gl).integrate([&](double u) {
        return tracy_widom_q0(u, sol);
    });
}

// int_x^inf (u - x)^p g(u)^4 du, p = 0 or 1
double integral_g4(const Painleve2Solution& sol, double x, int p) {
    double top = 9.5;
    if (x >= top) return 0.0;
    static thread_local GaussLegendre gl(12);
    int npan = (int)std::ceil((top - x) / 0.25);
    return gl_composite(x, top, npan, gl).integrate([&](double u) {
        double g = sol.eval_g(u);
        double g4 = g * g * g * g;
        return p ? (u - x) * g4 : g4;
    });
}

// k-th derivative of L(x) = x^2 Q0' + 4x Q0 + Q0'^2 from a tower
double local_part(const Tower& t, double x, int k) {
    double a = x * x * t.q[k + 1] + 2.0 * k * x * t.q[k]
               + (k > 1 ? k * (k - 1.0) * t.q[k - 1] : 0.0);
    double b = 4.0 * x * t.q[k] + (k > 0 ? 4.0 * k * t.q[k - 1] : 0.0);
    double c = 0.0;
    for (int i = 0; i <= k; ++i) c += binom(k, i) * t.q[i + 1] * t.q[k - i + 1];
    return a + b + c;
}

double f5_at(const Painleve2Solution& sol, double x, int k) {
    if (k < 0 || k > 4) throw std::invalid_argument("f5 derivative order 0..4");
    Tower t = tower_at(sol, x, true);
    if (k == 0)
        return local_part(t, x, 0) + 10.0 * integral_q0(sol, x)
               - 6.0 * integral_g4(sol, x, 1);
    if (k == 1)
        return local_part(t, x, 1) - 10.0 * t.q[0] + 6.0 * integral_g4(sol, x, 0);
    return local_part(t, x, k) - 10.0 * t.q[k - 1] - 6.0 * t.g4(k - 2);
}

// Q_n(x) for n = 0..6 from a tower plus (for n = 5, 6) the F_5 pieces
double qn_at(const Painleve2Solution& sol, int r, double c6, int n, double x) {
    Tower t = tower_at(sol, x, true);
    double R = r;
    switch (n) {
        case 0: return t.q[0];
        case 1: return R * t.q[1];
        case 2: return R * R / 2.0 * t.q[2];
        case 3: return R * R * R / 6.0 * t.q[3] + R / 3.0 * x * t.q[1];
        case 4:
            return std::pow(R, 4) / 24.0 * t.q[4] + R * R / 3.0 * x * t.q[2]
                   + 7.0 * R * R / 12.0 * t.q[1];
        case 5:
            return std::pow(R, 5) / 120.0 * t.q[5] + std::pow(R, 3) / 6.0 * x * t.q[3]
                   + 7.0 * std::pow(R, 3) / 12.0 * t.q[2] + R / 5.0 * f5_at(sol, x, 0);
        case 6:
            return std::pow(R, 6) / 720.0 * t.q[6] + std::pow(R, 4) / 18.0 * x * t.q[4]
                   + 7.0 * std::pow(R, 4) / 24.0 * t.q[3]
                   + R * R / 5.0
                         * (f5_at(sol, x, 1)
                            + 5.0 / 18.0 * (x * x * t.q[2] + 13.0 * (x + c6) * t.q[1]));
        default: throw std::invalid_argument("qn: n = 0..6");
    }
}

} // namespace

double Q0Derivatives::eval(int k, double xx) const {
    if (k < 0 || k > 8) throw std::invalid_argument("Q0Derivatives::eval: k = 0..8");
    Tower t = tower_at(*sol, xx, k < 2);
    return t.q[k];
}

Q0Derivatives q0_derivatives(const std::vector<double>& grid,
                             std::shared_ptr<const Painleve2Solution> sol) {
    Q0Derivatives out;
    out.x = grid;
    out.sol = sol;
    for (auto& v : out.d) v.resize(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < sol->amin || grid[i] > sol->amax + 2.0)
            throw std::domain_error("q0_derivatives: grid outside solution domain");
        Tower t = tower_at(*sol, grid[i], true);
        for (int k = 0; k <= 6; ++k) out.d[k][i] = t.q[k];
    }
    return out;
}

double f5_value(const Q0Derivatives& q0, double x) { return f5_at(*q0.sol, x, 0); }

double f5_derivative(const Q0Derivatives& q0, double x, int k) {
    return f5_at(*q0.sol, x, k);
}

ExpansionSet expansion_coefficients(const Q0Derivatives& q0, int r, double c6) {
    if (r < 0) throw std::domain_error("expansion_coefficients: r >= 0");
    ExpansionSet set;
    set.r = r;
    set.c6 = c6;
    set.x = q0.x;
    set.sol = q0.sol;
    set.F5.resize(q0.x.size());
    for (int n = 1; n <= 6; ++n) set.Q[n].resize(q0.x.size());
    for (size_t i = 0; i < q0.x.size(); ++i) {
        set.F5[i] = f5_at(*q0.sol, q0.x[i], 0);
        for (int n = 1; n <= 6; ++n) set.Q[n][i] = qn_at(*q0.sol, r, c6, n, q0.x[i]);
    }
    return set;
}

double ExpansionSet::qn(int n, double xx) const { return qn_at(*sol, r, c6, n, xx); }

double asymptotic_q(const ExpansionSet& set, double tau, double x, int order) {
    if (tau > -2.0) throw std::domain_error("asymptotic_q: tau <= -2 required");
    if (order < 0 || order > 5) throw std::invalid_argument("asymptotic_q: order 0..5");
    double s = 0.0, tp = 1.0;
    for (int n = 0; n <= order; ++n) {
        s += set.qn(n, x) / tp;
        tp *= tau;
    }
    return s;
}

double asymptotic_q_shifted(const ExpansionSet& set, double tau, double x) {
    if (tau > -2.0) throw std::domain_error("asymptotic_q_shifted: tau <= -2 required");
    double R = set.r;
    double t3 = tau * tau * tau;
    double arg = (x + R / tau) * (1.0 + R / (3.0 * t3)) + R * R / (4.0 * t3 * tau);
    return tracy_widom_q0(arg, *set.sol) + R / (5.0 * t3 * tau * tau) * f5_at(*set.sol, x, 0);
}

double exact_edge_q(int r, double tau, double x, const Painleve2Solution& sol,
                    double accuracy) {
    QuadratureRule rule = build_rule(x, accuracy);
    if (r == 0) return fredholm_logdet(KernelSpec{KernelSpec::Kind::airy}, x, rule);
    KernelSpec spec;
    spec.kind = KernelSpec::Kind::rairy;
    spec.r = r;
    spec.tau = tau;
    return fredholm_logdet(spec, x, rule);
}

CompareTable asymptotic_compare(int r, double x_probe, const std::vector<double>& taus,
                                int max_order) {
    if (max_order < 0 || max_order > 5)
        throw std::invalid_argument("asymptotic_compare: max_order 0..5");
    static thread_local std::shared_ptr<Painleve2Solution> hm;
    if (!hm) hm = std::make_shared<Painleve2Solution>(hastings_mcleod(-12.0, 10.0, 8001));

    std::vector<double> grid{x_probe};
    Q0Derivatives q0 = q0_derivatives(grid, hm);
    ExpansionSet set = expansion_coefficients(q0, r);

    CompareTable tab;
    tab.r = r;
    tab.x = x_probe;
    tab.taus = taus;
    tab.errors.assign(max_order + 1, std::vector<double>(taus.size()));
    for (size_t i = 0; i < taus.size(); ++i) {
        if (taus[i] > -2.0) throw std::domain_error("asymptotic_compare: tau <= -2");
        double exact = exact_edge_q(r, taus[i], x_probe, *hm);
        for (int o = 0; o <= max_order; ++o)
            tab.errors[o][i] = exact - asymptotic_q(set, taus[i], x_probe, o);
    }
    // least-squares slope of log|err| against log|tau|
    tab.exponents.resize(max_order + 1);
    for (int o = 0; o <= max_order; ++o) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (size_t i = 0; i < taus.size(); ++i) {
            double e = std::abs(tab.errors[o][i]);
            if (e < 1e-14) continue;
            double lx = std::log(-taus[i]), ly = std::log(e);
            sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
            ++n;
        }
        tab.exponents[o] = n >= 2 ? -(n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;
    }
    return tab;
}

EdgeMoments edge_moments_direct(int r, double tau, double dx) {
    if (tau > 0.0 || r < 0) throw std::domain_error("edge_moments_direct: r >= 0, tau <= 0");
    const double lo = -6.0, hi = 6.0;
    int nx = (int)std::llround((hi - lo) / dx);
    if (std::abs(lo + nx * dx - hi) > 1e-12 || nx % 4 != 0)
        throw std::invalid_argument("edge_moments_direct: dx must tile [-6,6] evenly");

    static thread_local std::shared_ptr<Painleve2Solution> hm;
    if (!hm) hm = std::make_shared<Painleve2Solution>(hastings_mcleod(-12.0, 10.0, 8001));

    // CDF values F(x) = exp(Q) on the uniform grid
    std::vector<double> F(nx + 1);
    if (r == 0) {
        for (int i = 0; i <= nx; ++i) F[i] = std::exp(tracy_widom_q0(lo + i * dx, *hm));
    } else {
        Surface s = q_surface(r, tau, tau, 0.1, lo, hi, dx, 1e-10);
        for (int i = 0; i <= nx; ++i) F[i] = std::exp(s.at(0, i));
    }

    // composite Simpson over [a, b] of a grid function
    auto simpson = [&](int i0, int i1, auto f) {
        double s = f(i0) + f(i1);
        for (int i = i0 + 1; i < i1; ++i) s += ((i - i0) % 2 ? 4.0 : 2.0) * f(i);
        return s * dx / 3.0;
    };
    int iz = nx / 2;  // x = 0
    auto X = [&](int i) { return lo + i * dx; };

    EdgeMoments m;
    m.mu1 = simpson(iz, nx, [&](int i) { return 1.0 - F[i]; })
            - simpson(0, iz, [&](int i) { return F[i]; });
    m.mu2 = 2.0 * simpson(iz, nx, [&](int i) { return X(i) * (1.0 - F[i]); })
            - 2.0 * simpson(0, iz, [&](int i) { return X(i) * F[i]; });
    m.var = m.mu2 - m.mu1 * m.mu1;
    return m;
}

MomentExpansion edge_moments_expansion(int r, double tau) {
    if (tau > -2.0 || r < 0)
        throw std::domain_error("edge_moments_expansion: r >= 0, tau <= -2");
    EdgeMoments base = edge_moments_direct(0, tau, 0.025);
    MomentExpansion m;
    m.r = r;
    m.tau = tau;
    m.mean0 = base.mu1;
    m.var0 = base.var;
    double R = r, t3 = tau * tau * tau;
    m.mu1 = base.mu1 * (1.0 - R / (3.0 * t3)) - R / tau - R * R / (4.0 * t3 * tau);
    m.var = base.var * (1.0 - 2.0 * R / (3.0 * t3));
    m.mu2 = m.var + m.mu1 * m.mu1;
    return m;
}

} // namespace rairy
