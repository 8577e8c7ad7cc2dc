#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rairy/ensemble.hpp"
#include "rairy/fredholm.hpp"
#include <algorithm>
#include <cmath>
#include <limits>

using namespace rairy;

static const double kInf = std::numeric_limits<double>::infinity();

static const Painleve2Solution& hm() {
    static Painleve2Solution s = hastings_mcleod(-10.0, 10.0, 4001);
    return s;
}

TEST_CASE("whole-line ratio law in the source strength") {
    // tau(alpha2)/tau(alpha1) = (alpha2/alpha1)^{k1 k2} exp(k1 (a2^2-a1^2)/2)
    double a1 = 0.5, a2 = 1.0;
    for (auto kk : {std::pair{1, 1}, {1, 2}, {2, 1}, {2, 2}, {1, 3}, {1, 4}}) {
        int k1 = kk.first, k2 = kk.second;
        SourceEnsemble e1{k1 + k2, k1, a1}, e2{k1 + k2, k1, a2};
        MomentDeformation def;
        double ratio = tau_moment_det(e2, kInf, def) / tau_moment_det(e1, kInf, def);
        double law = std::pow(a2 / a1, k1 * k2) * std::exp(k1 * (a2 * a2 - a1 * a1) / 2.0);
        CHECK(std::abs(ratio / law - 1.0) <= 1e-8);
    }
}

TEST_CASE("sourceless whole-line determinants match closed Gaussian moments") {
    MomentDeformation def;
    // n=2: det [[I0,I1],[I1,I2]] with I = sqrt(2pi) (1, 0, 1)
    SourceEnsemble e2{2, 0, 0.0};
    double twopi = 2.0 * 3.14159265358979323846;
    CHECK(std::abs(tau_moment_det(e2, kInf, def) / twopi - 1.0) <= 1e-10);
    // n=3: moments sqrt(2pi) (1,0,1,0,3) give det = 2 (2pi)^{3/2}
    SourceEnsemble e3{3, 0, 0.0};
    double ref = 2.0 * std::pow(twopi, 1.5);
    CHECK(std::abs(tau_moment_det(e3, kInf, def) / ref - 1.0) <= 1e-10);
}

TEST_CASE("half-line value converges to the whole-line value") {
    SourceEnsemble e{3, 1, 1.0};
    MomentDeformation def;
    double full = tau_moment_det(e, kInf, def);
    CHECK(std::abs(tau_moment_det(e, 9.0, def) / full - 1.0) <= 1e-12);
    CHECK(std::abs(tau_moment_det(e, 12.0, def) / full - 1.0) <= 1e-13);
}

TEST_CASE("single-eigenvalue case is a shifted Gaussian") {
    SourceEnsemble e{1, 1, 1.0};
    CHECK(std::abs(pn_probability(e, 1.0) - 0.5) <= 1e-12);
    CHECK(pn_probability(e, 9.0) >= 1.0 - 1e-9);
    double prev = 0.0;
    for (double b : {-1.0, 0.0, 1.0, 2.0, 3.0, 5.0}) {
        double p = pn_probability(e, b);
        CHECK(p >= prev - 1e-14);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0 + 1e-12);
        prev = p;
    }
}

TEST_CASE("sampling is deterministic and sorted") {
    SourceEnsemble e{8, 2, 1.5};
    SpectrumSample a = sample_spectrum(e, 42), b = sample_spectrum(e, 42);
    CHECK(a.eigs == b.eigs);
    SpectrumSample c = sample_spectrum(e, 43);
    CHECK(a.eigs != c.eigs);
    CHECK(std::is_sorted(a.eigs.begin(), a.eigs.end()));
    CHECK((int)a.eigs.size() == 8);

    SpectrumSample manual;
    manual.n = 16;
    manual.eigs.assign(16, 0.0);
    manual.eigs.back() = 2.0 * std::sqrt(16.0);
    CHECK(edge_rescale(manual) == 0.0);
}

TEST_CASE("Monte Carlo agrees with the exact probability") {
    SourceEnsemble e{4, 1, 2.0};
    double b = 5.0;
    double exact = pn_probability(e, b);
    int N = 400000, hits = 0;
    for (int i = 0; i < N; ++i)
        if (sample_spectrum(e, 1000 + i).eigs.back() <= b) ++hits;
    double phat = (double)hits / N;
    double se = std::sqrt(exact * (1.0 - exact) / N);
    CHECK(std::abs(phat - exact) <= 4.0 * se);
}

TEST_CASE("fast top-eigenvalue sampler matches the exact law") {
    // spiked case against the moment-determinant probability
    SourceEnsemble e{4, 1, 2.0};
    double b = 5.0;
    double exact = pn_probability(e, b);
    int N = 200000, hits = 0;
    for (int i = 0; i < N; ++i)
        if (sample_top_eigenvalue(e, 9000000 + i) <= b) ++hits;
    double phat = (double)hits / N;
    double se = std::sqrt(exact * (1.0 - exact) / N);
    CHECK(std::abs(phat - exact) <= 4.0 * se);

    // sourceless case against the dense-eigensolver route
    SourceEnsemble gue{6, 0, 0.0};
    int M = 100000, lo = 0, hi = 0;
    double c = 3.0;
    for (int i = 0; i < M; ++i) {
        if (sample_top_eigenvalue(gue, 700000 + i) <= c) ++lo;
        if (sample_spectrum(gue, 800000 + i).eigs.back() <= c) ++hi;
    }
    double p1 = (double)lo / M, p2 = (double)hi / M;
    double se2 = std::sqrt(p2 * (1.0 - p2) / M);
    CHECK(std::abs(p1 - p2) <= 6.0 * se2);

    CHECK(sample_top_eigenvalue(e, 42) == sample_top_eigenvalue(e, 42));
    CHECK(sample_top_eigenvalue(e, 42) != sample_top_eigenvalue(e, 43));
    SourceEnsemble two{5, 2, 1.0};
    CHECK_THROWS(sample_top_eigenvalue(two, 1));
}

TEST_CASE("sourceless limit matches the GUE cross-check") {
    // alpha -> 0+ of the rank-one ensemble is plain GUE
    SourceEnsemble e{2, 1, 1e-4};
    double b = 1.0;
    double exact = pn_probability(e, b);
    SourceEnsemble gue{2, 0, 0.0};
    int N = 400000, hits = 0;
    for (int i = 0; i < N; ++i)
        if (sample_spectrum(gue, 5000000 + i).eigs.back() <= b) ++hits;
    double phat = (double)hits / N;
    double se = std::sqrt(exact * (1.0 - exact) / N);
    CHECK(std::abs(phat - exact) <= 4.0 * se);
}

TEST_CASE("bulk histogram matches the semicircle") {
    int n = 300, samples = 200, bins = 24;
    SourceEnsemble e{n, 0, 0.0};
    double edge = 2.0 * std::sqrt((double)n);
    std::vector<double> count(bins, 0.0);
    long total = 0;
    for (int s = 0; s < samples; ++s) {
        SpectrumSample sp = sample_spectrum(e, 777000 + s);
        for (double v : sp.eigs) {
            if (v <= -edge || v >= edge) continue;
            int k = (int)((v + edge) / (2.0 * edge) * bins);
            if (k >= 0 && k < bins) count[k] += 1.0;
            ++total;
        }
    }
    auto prim = [&](double x) {  // integral of sqrt(4n - x^2)/(2 pi n)
        double r = 4.0 * n;
        return (x * std::sqrt(std::max(0.0, r - x * x)) / 2.0 +
                r / 2.0 * std::asin(std::clamp(x / edge, -1.0, 1.0))) / (2.0 * 3.14159265358979323846 * n);
    };
    double peak = 1.0 / (3.14159265358979323846 * std::sqrt((double)n));
    double width = 2.0 * edge / bins, sup = 0.0;
    for (int k = 0; k < bins; ++k) {
        double lo = -edge + k * width, hi = lo + width;
        double expect = (prim(hi) - prim(lo)) / width;
        double got = count[k] / (samples * (double)n) / width;
        sup = std::max(sup, std::abs(got - expect));
    }
    CHECK(sup <= 0.05 * peak);
    CHECK(total >= (long)samples * n * 99 / 100);
}

TEST_CASE("rescaled edge is close to the limit law in distribution") {
    // subcritical source: rescaled maximum follows exp(Q0)
    int n = 200, N = 800;
    SourceEnsemble e{n, 1, 0.5 * std::sqrt((double)n)};
    std::vector<double> xs(N);
    for (int i = 0; i < N; ++i) xs[i] = edge_rescale(sample_spectrum(e, 30000 + i));
    std::sort(xs.begin(), xs.end());
    double ks = 0.0;
    for (int i = 0; i < N; ++i) {
        double F = xs[i] < -8.0 ? 0.0 : std::exp(tracy_widom_q0(std::min(xs[i], 9.9), hm()));
        ks = std::max(ks, std::max(std::abs((i + 1.0) / N - F), std::abs((double)i / N - F)));
    }
    CHECK(ks <= 0.10);
}

TEST_CASE("edge deviation decay exponent") {
    std::vector<int> ns{4, 6, 8, 10};
    RateFit fit = convergence_rate(ns, 0.0, 1);
    CHECK(fit.exponent >= -0.6);
    CHECK(fit.exponent <= -0.15);
    // sourceless control: deviations shrink monotonically
    RateFit fit0 = convergence_rate(ns, 0.0, 0);
    for (size_t i = 1; i < fit0.deviations.size(); ++i)
        CHECK(fit0.deviations[i] < fit0.deviations[i - 1]);
}

TEST_CASE("bilinear and ratio identities of the tau function") {
    SourceEnsemble e3{3, 1, 0.5};
    KpReport r = kp_identity_check(e3, 1.0, 0.01);
    CHECK(r.eq_s <= 1e-5);
    CHECK(r.eq_u <= 1e-5);
    CHECK(r.ratio_t <= 1e-4);
    CHECK(r.ratio_s <= 1e-4);

    SourceEnsemble e2{2, 1, 0.5};
    KpReport rw = kp_identity_check(e2, kInf, 0.01);
    CHECK(rw.eq_s <= 1e-7);
    CHECK(rw.eq_u <= 1e-7);

    // residual does not grow when the step is halved
    KpReport rc = kp_identity_check(e3, 1.0, 0.02);
    KpReport rf = kp_identity_check(e3, 1.0, 0.01);
    CHECK(rf.eq_s <= std::max(rc.eq_s, 1e-9) * 2.0);
}

TEST_CASE("boundary constraints on the undeformed locus") {
    SourceEnsemble e2{2, 1, 1.0};
    VirasoroReport v = virasoro_check(e2, 2.0, 0.01);
    CHECK(v.r_s1 <= 1e-5);
    CHECK(v.r_t1 <= 1e-5);
    CHECK(v.r_t1u1 <= 1e-5);
    CHECK(v.r_t1s1 <= 1e-5);

    SourceEnsemble e32{3, 2, 1.0};
    VirasoroReport v3 = virasoro_check(e32, 2.0, 0.01);
    CHECK(v3.r_s1 <= 1e-4);
    CHECK(v3.r_t1 <= 1e-4);
    CHECK(v3.r_t1u1 <= 1e-4);
    CHECK(v3.r_t1s1 <= 1e-4);

    // no source block: the strength constraint is identically 0 = 0
    SourceEnsemble e0{2, 0, 0.0};
    VirasoroReport v0 = virasoro_check(e0, 2.0, 0.01);
    CHECK(v0.r_s1 == 0.0);
}

TEST_CASE("scaling maps between the walker and matrix pictures") {
    BrownianMap m = brownian_to_matrix(0.5, 1.0, 1.0);
    CHECK(std::abs(m.alpha - std::sqrt(2.0)) <= 1e-14);
    CHECK(std::abs(m.scale - 2.0 * std::sqrt(2.0)) <= 1e-14);
    CHECK(brownian_to_matrix(0.3, 0.0, 0.0).alpha == 0.0);

    CHECK(time_change_from_tprime(0.0) == 0.5);
    double t = time_change_from_tprime(1.0);
    CHECK(std::abs(1.0 / std::sqrt(t * (1.0 - t)) - 2.0 * std::cosh(1.0)) <= 1e-13);
    for (double tp : {-1.5, 0.2, 2.0})
        CHECK(std::abs(time_change_to_tprime(time_change_from_tprime(tp)) - tp) <= 1e-13);

    Tangency tg = tangency_point(1.0, 8);
    CHECK(tg.t0 == 0.5);
    for (double rho : {0.4, 1.0, 2.5}) {
        Tangency p = tangency_point(rho, 8);
        CHECK(std::abs(p.y0 - std::sqrt(2.0 * 8.0 * p.t0 * (1.0 - p.t0))) <= 1e-12);
    }
    Tangency t0 = tangency_point(1e-14, 8);
    CHECK(t0.y0 <= 1e-7);
    CHECK(std::abs(t0.t0 - 1.0) <= 1e-12);
}

TEST_CASE("cusp geometry") {
    // p = 1/2 means q = 1
    CuspGeometry g = cusp_geometry(2.0, 0.5);
    CHECK(std::abs(g.q - 1.0) <= 1e-14);
    CHECK(std::abs(g.t0 - 1.0 / (1.0 + 2.0)) <= 1e-14);        // 1/(1 + a^2/2)
    CHECK(std::abs(g.x0 - 2.0 * g.t0 / 2.0) <= 1e-14);         // a t0 / 2
    CHECK(std::abs(g.mu - 1.0) <= 1e-14);
    CHECK(std::abs(g.c0 - std::sqrt(g.t0 * (1.0 - g.t0) / 2.0)) <= 1e-15);
    CHECK(std::abs(1.0 / (1.0 + g.q * g.q * g.q) - g.p) <= 1e-14);

    // degenerate limit: the tip approaches the edge curve y = sqrt(2 t (1-t))
    CuspGeometry lim = cusp_geometry(1.0, 1e-36);
    CHECK(std::abs(lim.t0 - 1.0 / 3.0) <= 1e-10);
    CHECK(std::abs(lim.x0 - 2.0 * 1.0 * lim.t0) <= 1e-10);
    CHECK(std::abs(lim.x0 * lim.x0 - 2.0 * lim.t0 * (1.0 - lim.t0)) <= 1e-10);
}

TEST_CASE("invalid arguments rejected") {
    MomentDeformation bad;
    bad.beta = 0.6;
    SourceEnsemble e{2, 1, 1.0};
    CHECK_THROWS(tau_moment_det(e, 1.0, bad));
    SourceEnsemble big{13, 1, 1.0};
    CHECK_THROWS(tau_moment_det(big, 1.0, MomentDeformation{}));
    SourceEnsemble gue{3, 0, 0.0};
    CHECK_THROWS(kp_identity_check(gue, 1.0, 0.01));
    CHECK_THROWS(kp_identity_check(e, 1.0, 0.5));
    CHECK_THROWS(virasoro_check(e, 2.0, 1e-5));
    CHECK_THROWS(brownian_to_matrix(1.2, 0.0, 1.0));
    CHECK_THROWS(cusp_geometry(1.0, 0.0));
    CHECK_THROWS(time_change_to_tprime(1.5));
    CHECK_THROWS(convergence_rate({4, 6}, 0.0, 1));
    SourceEnsemble neg{2, -1, 1.0};
    CHECK_THROWS(sample_spectrum(neg, 1));
}
