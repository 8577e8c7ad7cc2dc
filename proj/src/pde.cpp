#include "rairy/pde.hpp"
#include "rairy/fredholm.hpp"
#include "rairy/kernels.hpp"
#include "rairy/quad.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace rairy {

namespace {

double logdet_of(const Eigen::MatrixXd& M) {
    int m = (int)M.rows();
    Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
    double rad = 0.0;
    for (int i = 0; i < m; ++i) rad = std::max(rad, std::abs(es.eigenvalues()[i]));
    if (rad >= 1.0) throw std::domain_error("q_surface: spectral radius >= 1");
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(Eigen::MatrixXd::Identity(m, m) - M);
    double ld = 0.0;
    for (int i = 0; i < m; ++i) ld += std::log(std::abs(lu.matrixLU()(i, i)));
    return ld;
}

// symmetrized Nystrom log-determinant from a row-major kernel block
double logdet_from_block(const std::vector<double>& K, const std::vector<double>& w) {
    int m = (int)w.size();
    Eigen::MatrixXd M(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            M(i, j) = std::sqrt(w[i]) * K[(size_t)i * m + j] * std::sqrt(w[j]);
    return logdet_of(M);
}

double airy_logdet(const QuadratureRule& rule) {
    int m = rule.m;
    Eigen::MatrixXd M(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            M(i, j) = std::sqrt(rule.weights[i]) * airy_kernel(rule.nodes[i], rule.nodes[j]) *
                      std::sqrt(rule.weights[j]);
    return logdet_of(M);
}

// centered difference coefficients, 4th-order accurate; offsets -hw..hw
struct Stencil {
    std::vector<double> c;
    int hw;
};

const Stencil& stencil(int order) {
    static const Stencil s[5] = {
        {{1.0}, 0},
        {{1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12}, 2},
        {{-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12}, 2},
        {{1.0 / 8, -8.0 / 8, 13.0 / 8, 0.0, -13.0 / 8, 8.0 / 8, -1.0 / 8}, 3},
        {{-1.0 / 6, 12.0 / 6, -39.0 / 6, 56.0 / 6, -39.0 / 6, 12.0 / 6, -1.0 / 6}, 3}};
    if (order < 0 || order > 4) throw std::invalid_argument("stencil: order 0..4");
    return s[order];
}

} // namespace

Surface q_surface(int r, double tau_lo, double tau_hi, double dtau,
                  double x_lo, double x_hi, double dx, double rule_accuracy) {
    if (r < 0) throw std::domain_error("q_surface: r >= 0 required");
    if (tau_lo < -12.0 || tau_hi > 0.0 || tau_lo > tau_hi)
        throw std::domain_error("q_surface: tau range within [-12, 0]");
    if (x_lo < -6.0 || x_hi > 6.0 || x_lo > x_hi)
        throw std::domain_error("q_surface: x range within [-6, 6]");
    Surface s;
    s.r = r;
    s.tau0 = tau_lo;
    s.dtau = dtau;
    s.x0 = x_lo;
    s.dx = dx;
    s.ntau = (int)std::llround((tau_hi - tau_lo) / dtau) + 1;
    s.nx = (int)std::llround((x_hi - x_lo) / dx) + 1;
    if (s.ntau < 1 || s.nx < 1) throw std::domain_error("q_surface: empty grid");
    s.Q.assign((size_t)s.ntau * s.nx, 0.0);

    std::vector<QuadratureRule> rules(s.nx);
    double top = x_lo;
    for (int j = 0; j < s.nx; ++j) {
        rules[j] = build_rule(x_lo + j * dx, rule_accuracy);
        top = std::max(top, rules[j].x + rules[j].L);
    }

    if (r == 0) {
        // tau-independent: one column sweep
        for (int j = 0; j < s.nx; ++j) {
            double q = airy_logdet(rules[j]);
            for (int i = 0; i < s.ntau; ++i) s.Q[(size_t)i * s.nx + j] = q;
        }
        int jm = s.nx / 2;
        QuadratureRule fine = rules[jm];
        GaussLegendre gl(2 * fine.m);
        MappedRule mr = gl_on(fine.x, fine.x + fine.L, gl);
        fine.m *= 2;
        fine.nodes = mr.x;
        fine.weights = mr.w;
        s.accuracy = std::abs(airy_logdet(fine) - s.at(0, jm));
        return s;
    }

    for (int i = 0; i < s.ntau; ++i) {
        double tau = tau_lo + i * dtau;
        RAiryKernel k(r, tau, x_lo - 0.1, top + 0.5);
        for (int j = 0; j < s.nx; ++j)
            s.Q[(size_t)i * s.nx + j] =
                logdet_from_block(k.batch(rules[j].nodes, rules[j].nodes), rules[j].weights);
        // node-doubled spot check in the middle column
        int jm = s.nx / 2;
        GaussLegendre gl(2 * rules[jm].m);
        MappedRule mr = gl_on(rules[jm].x, rules[jm].x + rules[jm].L, gl);
        double q2 = logdet_from_block(k.batch(mr.x, mr.x), mr.w);
        s.accuracy = std::max(s.accuracy, std::abs(q2 - s.at(i, jm)));
    }
    return s;
}

namespace {

struct PdeTerms {
    double t1, t2, t3, t4;  // lhs = t1 - t2 - t3 + t4
};

PdeTerms pde_terms(int r, double tau, double x,
                   const std::function<double(int, int)>& P) {
    double Qt = P(1, 0), Qtt = P(2, 0), Qttt = P(3, 0);
    double Qtx = P(1, 1), Qtxx = P(1, 2), Qtxxx = P(1, 3);
    double Qxx = P(0, 2), Qxxx = P(0, 3), Qxxxx = P(0, 4);
    double Qttx = P(2, 1), Qttxx = P(2, 2), Qtttx = P(3, 1);
    double R = r;
    // cofactor of Qtxx in the Wronskian bracket {f,g} = f'g - fg'
    double w = 2.0 * Qtx + 2.0 * tau * Qttx + Qttt;
    double Z = (R - Qtx) * (R - Qtx) * Qxxx + (R - Qtx) * w
               + Qtxx * (2.0 * R * Qxx + 2.0 * Qt - x * R)
               + 0.5 * Qtt * Qttx + tau * (Qttx * Qtx + Qtt * Qtxx);
    double Zx = -2.0 * (R - Qtx) * Qtxx * Qxxx + (R - Qtx) * (R - Qtx) * Qxxxx
                - Qtxx * w + (R - Qtx) * (2.0 * Qtxx + 2.0 * tau * Qttxx + Qtttx)
                + Qtxxx * (2.0 * R * Qxx + 2.0 * Qt - x * R)
                + Qtxx * (2.0 * R * Qxxx + 2.0 * Qtx - R)
                + 0.5 * (Qttx * Qttx + Qtt * Qttxx)
                + tau * (Qttxx * Qtx + 2.0 * Qttx * Qtxx + Qtt * Qtxxx);
    return PdeTerms{Qtxxx * Z, Qtxx * Zx, 0.5 * Qtxx * Qtxx * Qttt,
                    2.0 * Qtxx * Qtxx * Qtx * Qxxx};
}

} // namespace

double r_airy_pde_lhs(int r, double tau, double x,
                      const std::function<double(int, int)>& P) {
    PdeTerms t = pde_terms(r, tau, x, P);
    return t.t1 - t.t2 - t.t3 + t.t4;
}

ResidualReport r_airy_pde_residual(const Surface& s, double tau, double x) {
    int i0 = (int)std::llround((tau - s.tau0) / s.dtau);
    int j0 = (int)std::llround((x - s.x0) / s.dx);
    if (std::abs(s.tau0 + i0 * s.dtau - tau) > 1e-9 || std::abs(s.x0 + j0 * s.dx - x) > 1e-9)
        throw std::domain_error("r_airy_pde_residual: probe must sit on a grid node");
    if (i0 < 3 || i0 > s.ntau - 4 || j0 < 3 || j0 > s.nx - 4)
        throw std::domain_error("r_airy_pde_residual: stencil leaves the grid");

    auto partial = [&](int it, int jx) {
        const Stencil& st = stencil(it);
        const Stencil& sx = stencil(jx);
        double sum = 0.0;
        for (int a = -st.hw; a <= st.hw; ++a)
            for (int b = -sx.hw; b <= sx.hw; ++b)
                sum += st.c[a + st.hw] * sx.c[b + sx.hw] * s.at(i0 + a, j0 + b);
        return sum / (std::pow(s.dtau, it) * std::pow(s.dx, jx));
    };

    ResidualReport rep;
    rep.h1 = s.dtau;
    rep.h2 = s.dx;
    PdeTerms t = pde_terms(s.r, tau, x, partial);
    rep.residual = t.t1 - t.t2 - t.t3 + t.t4;
    rep.normalization = std::max({std::abs(t.t1), std::abs(t.t2), std::abs(t.t3),
                                  std::abs(t.t4), 1e-300});
    rep.relative = std::abs(rep.residual) / rep.normalization;
    return rep;
}

FiniteNReport finite_n_pde_residual(const SourceEnsemble& ens, double b,
                                    double h_alpha, double h_b) {
    if (ens.n > 6) throw std::domain_error("finite_n_pde_residual: n <= 6 required");
    int k1 = ens.k1, k2 = ens.n - ens.k1;
    if (k1 < 1 || k2 < 1) throw std::domain_error("finite_n_pde_residual: 1 <= k1 <= n-1");
    const int N = 21, c = 10;
    if (ens.alpha - c * h_alpha <= 0.0)
        throw std::domain_error("finite_n_pde_residual: alpha stencil crosses zero");

    using M = Eigen::MatrixXd;
    const double nan = std::numeric_limits<double>::quiet_NaN();

    M f(N, N);
    for (int i = 0; i < N; ++i) {
        SourceEnsemble e = ens;
        e.alpha = ens.alpha + (i - c) * h_alpha;
        for (int j = 0; j < N; ++j)
            f(i, j) = std::log(pn_probability(e, b + (j - c) * h_b));
    }

    // 5-point, 4th-order first derivatives on the grid (NaN margin)
    auto da = [&](const M& g) {
        M out = M::Constant(N, N, nan);
        for (int i = 2; i < N - 2; ++i)
            for (int j = 0; j < N; ++j)
                out(i, j) = (g(i - 2, j) - 8 * g(i - 1, j) + 8 * g(i + 1, j) - g(i + 2, j)) /
                            (12.0 * h_alpha);
        return out;
    };
    auto db = [&](const M& g) {
        M out = M::Constant(N, N, nan);
        for (int i = 0; i < N; ++i)
            for (int j = 2; j < N - 2; ++j)
                out(i, j) = (g(i, j - 2) - 8 * g(i, j - 1) + 8 * g(i, j + 1) - g(i, j + 2)) /
                            (12.0 * h_b);
        return out;
    };
    M acol(N, N), brow(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            acol(i, j) = ens.alpha + (i - c) * h_alpha;
            brow(i, j) = b + (j - c) * h_b;
        }

    M fa = da(f), fb = db(f);
    M faa = da(fa), fab = db(fa);
    M Fp = fab.array() - (double)k1;
    M Fm = -(db(fb) + fab).array() - (double)k2;

    M H1p = 4.0 * fa.array() + 4.0 * acol.array() * k1 + 4.0 * k1 * k2 / acol.array();
    M H1m = -2.0 * (brow.array() * fab.array() - acol.array() * faa.array() + fa.array())
            - 4.0 * k1 * k2 / acol.array();
    M H2p = 2.0 * (brow.array() * fab.array() - acol.array() * faa.array() - fa.array()
                   - 2.0 * acol.array() * fab.array());
    M g = fb + fa;
    M H2m = -2.0 * (brow.array() * db(g).array() - acol.array() * da(g).array() - g.array());

    M dbFp = db(Fp), dbFm = db(Fm), daFp = da(Fp), daFm = da(Fm);
    M Gp = 0.5 * (db(H1p).array() * Fp.array() - H1p.array() * dbFp.array()
                  - (da(H2p).array() * Fp.array() - H2p.array() * daFp.array()));
    M Gm = 0.5 * (db(H1m).array() * Fm.array() - H1m.array() * dbFm.array()
                  + (da(H2m).array() * Fm.array() - H2m.array() * daFm.array()));
    M db2Fp = db(dbFp), db2Fm = db(dbFm);
    M dbGp = db(Gp), dbGm = db(Gm);

    FiniteNReport rep;
    VirasoroBlocks& B = rep.blocks;
    B.Fp = Fp(c, c);     B.Fm = Fm(c, c);
    B.H1p = H1p(c, c);   B.H1m = H1m(c, c);
    B.H2p = H2p(c, c);   B.H2m = H2m(c, c);
    B.Gp = Gp(c, c);     B.Gm = Gm(c, c);
    B.dbFp = dbFp(c, c); B.dbFm = dbFm(c, c);
    B.db2Fp = db2Fp(c, c); B.db2Fm = db2Fm(c, c);
    B.dbGp = dbGp(c, c); B.dbGm = dbGm(c, c);

    double T1 = (B.Fp * B.dbGm + B.Fm * B.dbGp) * (B.Fp * B.dbFm - B.Fm * B.dbFp);
    double T2 = (B.Fp * B.Gm + B.Fm * B.Gp) * (B.Fp * B.db2Fm - B.Fm * B.db2Fp);
    rep.quartic.residual = T1 - T2;
    rep.quartic.normalization = std::max(std::abs(T1), std::abs(T2));
    if (rep.quartic.normalization < 1e-30)
        throw std::domain_error("finite_n_pde_residual: degenerate normalization");
    rep.quartic.relative = std::abs(rep.quartic.residual) / rep.quartic.normalization;
    rep.quartic.h1 = h_alpha;
    rep.quartic.h2 = h_b;

    Eigen::Matrix4d D;
    D << B.Gp,   B.dbFp,  -B.Fp, 0.0,
        -B.Gm,   B.dbFm,  -B.Fm, 0.0,
         B.dbGp, B.db2Fp,  0.0, -B.Fp,
        -B.dbGm, B.db2Fm,  0.0, -B.Fm;
    double det = D.determinant();
    double norm = 1.0;
    for (int i = 0; i < 4; ++i) norm *= D.row(i).norm();
    rep.det4.residual = det;
    rep.det4.normalization = norm;
    rep.det4.relative = std::abs(det) / std::max(norm, 1e-300);
    rep.det4.h1 = h_alpha;
    rep.det4.h2 = h_b;
    return rep;
}

} // namespace rairy
