#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rairy/fredholm.hpp"
#include "rairy/airy.hpp"
#include <Eigen/Dense>
#include <cmath>
#include <numeric>

using namespace rairy;

static const Painleve2Solution& hm() {
    static Painleve2Solution s = hastings_mcleod(-10.0, 10.0, 4001);
    return s;
}

TEST_CASE("rule construction invariants") {
    QuadratureRule r0 = build_rule(0.0, 1e-10);
    CHECK(r0.m >= 20);
    double wsum = std::accumulate(r0.weights.begin(), r0.weights.end(), 0.0);
    CHECK(std::abs(wsum - r0.L) <= 1e-12 * r0.L);
    for (double n : r0.nodes) {
        CHECK(n > r0.x);
        CHECK(n < r0.x + r0.L);
    }
    QuadratureRule r4 = build_rule(4.0, 1e-10);
    CHECK(r4.L <= 10.0);
    QuadratureRule rm6 = build_rule(-6.0, 1e-8);
    CHECK(rm6.m >= r0.m);
    CHECK_THROWS(build_rule(-10.5, 1e-8));
}

TEST_CASE("zero kernel and doubling self-consistency") {
    QuadratureRule r = build_rule(0.0, 1e-10);
    KernelSpec zero{KernelSpec::Kind::expansion_term, 0, 0.0, 1};
    CHECK(std::abs(fredholm_logdet(zero, 0.0, r)) <= 1e-15);

    KernelSpec airy_spec{};
    double ld = fredholm_logdet(airy_spec, 0.0, r);
    QuadratureRule r2 = r;
    {
        QuadratureRule fine = build_rule(0.0, 1e-12);
        double ld2 = fredholm_logdet(airy_spec, 0.0, fine);
        CHECK(std::abs(ld2 - ld) < 1e-10);
    }
    (void)r2;
}

TEST_CASE("Nystrom determinant matches the Painleve route") {
    for (double x : {-2.0, 0.0, 2.0}) {
        QuadratureRule r = build_rule(x, 1e-10);
        double ld = fredholm_logdet(KernelSpec{}, x, r);
        double q0 = tracy_widom_q0(x, hm());
        CHECK(std::abs(ld - q0) <= 1e-8);
    }
}

TEST_CASE("r-Airy determinant: distribution limits and monotonicity") {
    KernelSpec ks{KernelSpec::Kind::rairy, 1, 0.0, 0};
    double prev = -1e9;
    for (double x : {-6.0, 0.0, 4.0, 8.0}) {
        QuadratureRule r = build_rule(x, 1e-9);
        double q = fredholm_logdet(ks, x, r);
        CHECK(q > prev);
        prev = q;
        if (x == -6.0) CHECK(std::exp(q) < 1e-3);
        if (x == 8.0) CHECK(std::exp(q) > 1.0 - 1e-6);
    }
}

TEST_CASE("resolvent identities") {
    for (double x : {0.0, 0.5}) {
        QuadratureRule r = build_rule(x, 1e-10);
        ResolventFunctionals f = resolvent_functionals(x, r);
        CHECK(f.bAA > 0.0);
        CHECK(std::abs(f.Rxx - f.bAA) <= 1e-8);
        CHECK(std::abs(2 * f.bApA - f.bAA * f.bAA + f.rho_x * f.rho_x) <= 1e-8);
        CHECK(std::abs(2 * f.bAApp - f.bApAp - x * f.bAA) <= 1e-7);
        // bracket identity relating <A',A'> to the boundary terms
        double rhs = -f.rho_x * f.rhop_x - f.bAApp + f.bApA * f.bAA;
        CHECK(std::abs(f.bApAp - rhs) <= 1e-7);
    }
}

TEST_CASE("rank-one trace identity at n=2") {
    double x = 0.0;
    QuadratureRule rule = build_rule(x, 1e-10);
    ResolventFunctionals f = resolvent_functionals(x, rule);
    int m = rule.m;
    Eigen::VectorXd sw(m), av(m);
    Eigen::MatrixXd M(m, m);
    for (int i = 0; i < m; ++i) {
        sw[i] = std::sqrt(rule.weights[i]);
        av[i] = airy_A(rule.nodes[i]);
    }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            M(i, j) = sw[i] * airy_kernel(rule.nodes[i], rule.nodes[j]) * sw[j];
    int r = 1;
    Eigen::MatrixXd K1(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            K1(i, j) = sw[i] * (-double(r) * av[i] * av[j]) * sw[j];
    Eigen::MatrixXd IplusR =
        (Eigen::MatrixXd::Identity(m, m) - M).partialPivLu().solve(Eigen::MatrixXd::Identity(m, m));
    Eigen::MatrixXd L1 = IplusR * K1;
    double tr = (L1 * L1).trace();
    CHECK(std::abs(tr - double(r * r) * f.bAA * f.bAA) <= 1e-8);
}

TEST_CASE("first derivative of the log-determinant") {
    double x = 0.0, h = 1e-3;
    QuadratureRule r = build_rule(x, 1e-10);
    ResolventFunctionals f = resolvent_functionals(x, r);
    QuadratureRule rp = build_rule(x + h, 1e-10), rm = build_rule(x - h, 1e-10);
    double dp = fredholm_logdet(KernelSpec{}, x + h, rp);
    double dm = fredholm_logdet(KernelSpec{}, x - h, rm);
    CHECK(std::abs((dp - dm) / (2 * h) - f.bAA) <= 1e-6);
    CHECK(std::abs(tracy_widom_q0_deriv(x, hm()) - f.bAA) <= 1e-8);
}

TEST_CASE("trace expansion against the Painleve route") {
    for (double x : {-1.0, 0.0, 1.5}) {
        QuadratureRule rule = build_rule(x, 1e-10);
        for (int r : {1, 2}) {
            TraceExpansion t = trace_expansion(r, x, rule);
            double q0p = tracy_widom_q0_deriv(x, hm());
            double g = hm().eval_g(x), gp = hm().eval_gp(x);
            CHECK(std::abs(t.Q1 - r * q0p) <= 1e-6);
            CHECK(std::abs(t.Q2 - (-0.5 * r * r * g * g)) <= 1e-6);
            double q3ref = (double)r * r * r / 6.0 * (-2.0 * g * gp) + r * x / 3.0 * q0p;
            CHECK(std::abs(t.Q3 - q3ref) <= 1e-5);
        }
    }
}

TEST_CASE("Q0 basics") {
    CHECK(std::abs(tracy_widom_q0(hm().amax, hm())) <= 1e-10);
    double h = 1e-3, x = -0.5;
    double d = (tracy_widom_q0(x + h, hm()) - tracy_widom_q0(x - h, hm())) / (2 * h);
    CHECK(std::abs(d - tracy_widom_q0_deriv(x, hm())) <= 1e-7);
    CHECK_THROWS(tracy_widom_q0(-11.0, hm()));
}
