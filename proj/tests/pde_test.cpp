#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rairy/pde.hpp"
#include "rairy/fredholm.hpp"
#include <cmath>
#include <vector>

using namespace rairy;

struct Mono {
    double c;
    int p, q;
};

static double poly_partial(const std::vector<Mono>& ms, int i, int j, double t, double x) {
    double s = 0;
    for (auto& m : ms) {
        if (m.p < i || m.q < j) continue;
        double c = m.c;
        for (int k = 0; k < i; ++k) c *= (m.p - k);
        for (int k = 0; k < j; ++k) c *= (m.q - k);
        s += c * std::pow(t, m.p - i) * std::pow(x, m.q - j);
    }
    return s;
}

TEST_CASE("operator vanishes on time-independent input") {
    // every term of the operator carries a tau-derivative factor
    std::vector<Mono> f{{0.4, 0, 3}, {-0.2, 0, 2}, {0.1, 0, 5}};
    auto P = [&](int i, int j) { return poly_partial(f, i, j, -2.0, 0.5); };
    CHECK(r_airy_pde_lhs(1, -2.0, 0.5, P) == 0.0);
}

TEST_CASE("operator is odd under the sign involution") {
    // the equation (zero set) is invariant; the operator value flips sign
    std::vector<Mono> f{{0.3, 3, 2}, {0.2, 2, 3}, {-0.1, 1, 4},
                        {0.05, 0, 3}, {0.07, 2, 1}, {0.11, 1, 2}};
    double t0 = 1.3, x0 = 0.7;
    auto Pf = [&](int i, int j) { return poly_partial(f, i, j, t0, x0); };
    auto Pg = [&](int i, int j) {
        double v = poly_partial(f, i, j, t0, x0);
        return (i % 2) ? -v : v;
    };
    double e1 = r_airy_pde_lhs(2, t0, x0, Pf);
    double e2 = r_airy_pde_lhs(-2, -t0, x0, Pg);
    CHECK(std::abs(e1) > 1.0);
    CHECK(std::abs(e1 + e2) <= 1e-12 * std::abs(e1));
}

static const Surface& surf1() {
    static Surface s = q_surface(1, -3.3, -2.7, 0.1, -0.4, 0.4, 0.1, 1e-11);
    return s;
}

TEST_CASE("surface construction invariants") {
    const Surface& s = surf1();
    CHECK(s.ntau == 7);
    CHECK(s.nx == 9);
    CHECK(s.accuracy <= 1e-10);
    // monotone in x along each row
    for (int i = 0; i < s.ntau; ++i)
        for (int j = 1; j < s.nx; ++j) CHECK(s.at(i, j) > s.at(i, j - 1));
}

TEST_CASE("sourceless surface is time-independent and matches the Painleve route") {
    Surface s = q_surface(0, -4.0, -3.8, 0.1, -1.0, 0.0, 0.5, 1e-10);
    static Painleve2Solution hm = hastings_mcleod(-10.0, 10.0, 4001);
    for (int j = 0; j < s.nx; ++j) {
        for (int i = 1; i < s.ntau; ++i) CHECK(s.at(i, j) == s.at(0, j));
        CHECK(std::abs(s.at(0, j) - tracy_widom_q0(s.x0 + j * s.dx, hm)) <= 1e-8);
    }
}

TEST_CASE("deep-time column matches the first-order expansion") {
    // restricted to x where the second-order correction is below tolerance
    Surface s = q_surface(1, -10.0, -10.0, 0.1, 1.5, 2.0, 0.5, 1e-10);
    static Painleve2Solution hm = hastings_mcleod(-10.0, 10.0, 4001);
    for (int j = 0; j < s.nx; ++j) {
        double x = s.x0 + j * s.dx;
        QuadratureRule rule = build_rule(x, 1e-10);
        ResolventFunctionals rf = resolvent_functionals(x, rule);
        double q1 = 1.0 * rf.bAA;  // r Q0'
        double ref = tracy_widom_q0(x, hm) + q1 / (-10.0);
        CHECK(std::abs(s.at(0, j) - ref) <= 1e-4);
    }
}

TEST_CASE("limiting PDE residual on the real surface") {
    ResidualReport rep = r_airy_pde_residual(surf1(), -3.0, 0.0);
    CHECK(rep.normalization > 0.0);
    CHECK(rep.relative <= 5e-3);
    CHECK_THROWS(r_airy_pde_residual(surf1(), -3.3, 0.0));   // margin
    CHECK_THROWS(r_airy_pde_residual(surf1(), -3.05, 0.0));  // off-grid
}

TEST_CASE("finite-size PDE residuals") {
    SourceEnsemble e2{2, 1, 1.0};
    FiniteNReport r2 = finite_n_pde_residual(e2, 2.0, 0.05, 0.05);
    CHECK(r2.quartic.relative <= 1e-3);
    CHECK(r2.det4.relative <= 5e-3);

    SourceEnsemble e4{4, 1, 2.0};
    FiniteNReport r4 = finite_n_pde_residual(e4, 4.0, 0.05, 0.05);
    CHECK(r4.det4.relative <= 5e-3);
    CHECK(r4.quartic.relative <= 5e-3);

    // the scalar and determinant forms encode the same vanishing
    double ratio = (r2.quartic.relative + 1e-12) / (r2.det4.relative + 1e-12);
    CHECK(ratio > 1e-3);
    CHECK(ratio < 1e3);

    // halving the step does not grow the residual by more than 2x
    FiniteNReport rf = finite_n_pde_residual(e2, 2.0, 0.025, 0.025);
    CHECK(rf.quartic.relative <= 2.0 * r2.quartic.relative + 1e-12);
}

TEST_CASE("invalid arguments rejected") {
    CHECK_THROWS(q_surface(1, -13.0, -12.5, 0.1, 0.0, 1.0, 0.1, 1e-9));
    CHECK_THROWS(q_surface(1, -3.0, -2.5, 0.1, 5.0, 7.0, 0.1, 1e-9));
    CHECK_THROWS(q_surface(-1, -3.0, -2.5, 0.1, 0.0, 1.0, 0.1, 1e-9));
    SourceEnsemble big{8, 1, 1.0};
    CHECK_THROWS(finite_n_pde_residual(big, 2.0, 0.05, 0.05));
    SourceEnsemble gue{3, 0, 0.0};
    CHECK_THROWS(finite_n_pde_residual(gue, 2.0, 0.05, 0.05));
    SourceEnsemble tiny{2, 1, 0.2};
    CHECK_THROWS(finite_n_pde_residual(tiny, 2.0, 0.05, 0.05));  // alpha stencil
}
