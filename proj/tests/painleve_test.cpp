#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rairy/painleve.hpp"
#include "rairy/airy.hpp"
#include <cmath>

using namespace rairy;

static const Painleve2Solution& sol() {
    static Painleve2Solution s = hastings_mcleod(-10.0, 10.0, 4001);
    return s;
}

// frozen oracle from an independent collocation BVP solve (rms residual 1e-12)
struct Ref { double a, g, gp; };
static const Ref refs[] = {
    {-8.0, 1.99950719781681, -0.125155766499383},
    {-6.0, 1.73102495883178, -0.144778284257299},
    {-5.0, 1.57948708784701, -0.158991377869182},
    {-4.0, 1.41117692936239, -0.178902329967619},
    {-2.0, 0.983391349727805, -0.263109311416174},
    {-1.0, 0.688060364605118, -0.323194613669183},
    {0.0, 0.367061551548079, -0.29537210544755},
    {1.0, 0.135643543504472, -0.160558714759841},
    {2.0, 0.0349281492645959, -0.0531100867878957},
    {4.0, 0.00095156389893074, -0.0019586412549622},
    {6.0, 9.94769436019179e-06, -2.47652003971115e-05},
};

TEST_CASE("matches independent collocation solve") {
    for (const Ref& r : refs) {
        CHECK(std::abs(sol().eval_g(r.a) - r.g) <= 1e-8 * (1 + std::abs(r.g)));
        CHECK(std::abs(sol().eval_gp(r.a) - r.gp) <= 1e-7 * (1 + std::abs(r.gp)));
    }
}

TEST_CASE("ODE residual bound") {
    CHECK(sol().residual_bound <= 1e-9);
}

TEST_CASE("positive on the grid; matches Ai at the right end") {
    for (double v : sol().g) CHECK(v > 0.0);
    double a = sol().amax;
    CHECK(std::abs(sol().eval_g(a) / airy_A(a) - 1.0) <= 1e-6);
    CHECK(std::abs(sol().eval_g(8.0) - airy_A(8.0)) / airy_A(8.0) <= 1e-4);
}

TEST_CASE("left dominant balance: g(-8)/sqrt(4) within 5% of 1") {
    CHECK(std::abs(sol().eval_g(-8.0) / 2.0 - 1.0) <= 0.05);
}

TEST_CASE("grid refinement self-consistency") {
    Painleve2Solution s2 = hastings_mcleod(-10.0, 10.0, 8001);
    for (double a = -9.5; a <= 9.5; a += 0.5)
        CHECK(std::abs(s2.eval_g(a) - sol().eval_g(a)) <= 1e-8);
}

TEST_CASE("interpolation consistent with the grid and smooth between nodes") {
    const Painleve2Solution& s = sol();
    // midpoint interpolation vs the doubled grid
    Painleve2Solution s2 = hastings_mcleod(-10.0, 10.0, 8001);
    for (double a = -6.0; a <= 6.0; a += 0.3333) {
        CHECK(std::abs(s.eval_g(a) - s2.eval_g(a)) <= 1e-9);
        CHECK(std::abs(s.eval_gp(a) - s2.eval_gp(a)) <= 1e-8);
    }
}
