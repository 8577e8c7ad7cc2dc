#include "rairy/fredholm.hpp"
#include "rairy/airy.hpp"
#include "rairy/quad.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace rairy {

namespace {

Eigen::MatrixXd nystrom_matrix(const std::function<double(double, double)>& k,
                               const QuadratureRule& rule) {
    int m = rule.m;
    Eigen::VectorXd sw(m);
    for (int i = 0; i < m; ++i) sw[i] = std::sqrt(rule.weights[i]);
    Eigen::MatrixXd M(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            M(i, j) = sw[i] * k(rule.nodes[i], rule.nodes[j]) * sw[j];
    return M;
}

double logdet_of(const Eigen::MatrixXd& M) {
    int m = (int)M.rows();
    Eigen::EigenSolver<Eigen::MatrixXd> es(M, /*computeEigenvectors=*/false);
    double rad = 0.0;
    for (int i = 0; i < m; ++i) rad = std::max(rad, std::abs(es.eigenvalues()[i]));
    if (rad >= 1.0)
        throw std::domain_error("fredholm_logdet: spectral radius >= 1 (domain too far left)");
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(m, m) - M;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    double ld = 0.0;
    const auto& U = lu.matrixLU();
    for (int i = 0; i < m; ++i) ld += std::log(std::abs(U(i, i)));
    return ld;
}

QuadratureRule make_rule(double x, double L, int m) {
    QuadratureRule r;
    r.x = x;
    r.L = L;
    r.m = m;
    GaussLegendre gl(m);
    MappedRule mr = gl_on(x, x + L, gl);
    r.nodes = mr.x;
    r.weights = mr.w;
    return r;
}

} // namespace

QuadratureRule build_rule(double x, double target_accuracy) {
    if (x < -10.0) throw std::domain_error("build_rule: x >= -10 required");
    double top = std::max(x + 2.0, 0.0);
    while (airy_kernel_diag(top) > 1e-16 && top < 30.0) top += 0.25;
    double L = top - x;
    auto airy_k = [](double u, double v) { return airy_kernel(u, v); };
    int m = 24;
    QuadratureRule rule = make_rule(x, L, m);
    double ld = logdet_of(nystrom_matrix(airy_k, rule));
    while (m < 400) {
        QuadratureRule r2 = make_rule(x, L, 2 * m);
        double ld2 = logdet_of(nystrom_matrix(airy_k, r2));
        if (std::abs(ld2 - ld) < target_accuracy) return r2;
        m *= 2;
        rule = r2;
        ld = ld2;
    }
    throw std::runtime_error("build_rule: node count did not converge");
}

double fredholm_logdet(const std::function<double(double, double)>& kernel,
                       double x, const QuadratureRule& rule) {
    (void)x;
    return logdet_of(nystrom_matrix(kernel, rule));
}

double fredholm_logdet(const KernelSpec& kernel, double x, const QuadratureRule& rule) {
    auto f = kernel.evaluator(rule.x, rule.x + rule.L);
    return fredholm_logdet(f, x, rule);
}

ResolventFunctionals resolvent_functionals(double x, const QuadratureRule& rule) {
    int m = rule.m;
    auto k = [](double u, double v) { return airy_kernel(u, v); };
    Eigen::MatrixXd M = nystrom_matrix(k, rule);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(Eigen::MatrixXd::Identity(m, m) - M);

    Eigen::VectorXd sw(m), av(m), apv(m);
    for (int i = 0; i < m; ++i) {
        sw[i] = std::sqrt(rule.weights[i]);
        AiryPair p = airy(rule.nodes[i]);
        av[i] = p.A;
        apv[i] = p.Ap;
    }
    Eigen::VectorXd y = lu.solve((sw.array() * av.array()).matrix());   // sqrt(w) rho
    Eigen::VectorXd z = lu.solve((sw.array() * apv.array()).matrix());  // sqrt(w) (I+R)A'

    ResolventFunctionals f;
    f.rho_nodes.resize(m);
    for (int i = 0; i < m; ++i) f.rho_nodes[i] = y[i] / sw[i];

    for (int i = 0; i < m; ++i) {
        f.bAA += sw[i] * y[i] * av[i];
        f.bApA += sw[i] * z[i] * av[i];
        f.bApAp += sw[i] * z[i] * apv[i];
        f.bAApp += sw[i] * y[i] * rule.nodes[i] * av[i];
    }

    // Nystrom extension to u = x
    AiryPair px = airy(x);
    f.rho_x = px.A;
    f.rhop_x = px.Ap;
    for (int j = 0; j < m; ++j) {
        double kxj = airy_kernel(x, rule.nodes[j]);
        f.rho_x += kxj * sw[j] * y[j];
        f.rhop_x += kxj * sw[j] * z[j];
    }

    // R(u,x): solve (I-M) rhat = sqrt(w) K(., x), extend to u = x
    Eigen::VectorXd kx(m);
    for (int i = 0; i < m; ++i) kx[i] = sw[i] * airy_kernel(rule.nodes[i], x);
    Eigen::VectorXd rh = lu.solve(kx);
    f.Rxx = airy_kernel(x, x);
    for (int j = 0; j < m; ++j) f.Rxx += airy_kernel(x, rule.nodes[j]) * sw[j] * rh[j];

    return f;
}

TraceExpansion trace_expansion(int r, double x, const QuadratureRule& rule) {
    ResolventFunctionals f = resolvent_functionals(x, rule);
    TraceExpansion t;
    double R = r;
    t.Q1 = R * f.bAA;
    t.Q2 = -0.5 * R * R * f.rho_x * f.rho_x;
    t.Q3 = R * R * R / 3.0 * (f.rho_x * f.rho_x * f.bAA - f.rho_x * f.rhop_x)
           + R * x / 3.0 * f.bAA;
    return t;
}

namespace {

// int_c^inf (a - x) A(a)^2 da  and  int_c^inf A^2 da (closed Airy forms)
double airy_tail_q0(double c, double x) {
    AiryPair p = airy(c);
    double D = p.Ap * p.Ap - c * p.A * p.A;
    return -p.A * p.Ap / 3.0 + (c / 3.0 - x) * D;
}

double airy_tail_mass(double c) { return airy_kernel_diag(c); }

} // namespace

double tracy_widom_q0(double x, const Painleve2Solution& sol) {
    if (x < sol.amin) throw std::domain_error("tracy_widom_q0: x below the grid");
    double top = sol.amax;
    double grid = 0.0;
    if (x < top) {
        static thread_local GaussLegendre gl(8);
        int npan = (int)std::ceil((top - x) / 0.25);
        grid = gl_composite(x, top, npan, gl).integrate([&](double a) {
            double g = sol.eval_g(a);
            return (a - x) * g * g;
        });
    }
    return -(grid + airy_tail_q0(top, x));
}

double tracy_widom_q0_deriv(double x, const Painleve2Solution& sol) {
    if (x < sol.amin) throw std::domain_error("tracy_widom_q0_deriv: x below the grid");
    double top = sol.amax;
    double grid = 0.0;
    if (x < top) {
        static thread_local GaussLegendre gl(8);
        int npan = (int)std::ceil((top - x) / 0.25);
        grid = gl_composite(x, top, npan, gl).integrate([&](double a) {
            double g = sol.eval_g(a);
            return g * g;
        });
    }
    return grid + airy_tail_mass(top);
}

} // namespace rairy
