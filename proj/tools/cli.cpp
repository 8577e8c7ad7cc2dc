// command-line front end: CSV tables and verification reports
#include <CLI11.hpp>

#include "rairy/ensemble.hpp"
#include "rairy/expansion.hpp"
#include "rairy/fredholm.hpp"
#include "rairy/kernels.hpp"
#include "rairy/pde.hpp"
#include "rairy/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

using namespace rairy;

namespace {

constexpr const char* kVersion = "1.0.0";

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// CSV with '#'-prefixed metadata lines; 17 significant digits
struct Csv {
    std::ostringstream out;

    void meta(const std::string& key, const std::string& value) {
        out << "# " << key << " = " << value << "\n";
    }
    void meta(const std::string& key, double value) { meta(key, fmt(value)); }
    void header(const std::vector<std::string>& cols) {
        for (size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
        out << "\n";
    }
    void row(const std::vector<double>& vals) {
        for (size_t i = 0; i < vals.size(); ++i) out << (i ? "," : "") << fmt(vals[i]);
        out << "\n";
    }
    void text_row(const std::vector<std::string>& vals) {
        for (size_t i = 0; i < vals.size(); ++i) out << (i ? "," : "") << vals[i];
        out << "\n";
    }
};

// -o target; relative paths resolve against RAIRY_OUTPUT_DIR when set
int emit(const Csv& csv, const std::string& path) {
    if (path.empty()) {
        std::cout << csv.out.str();
        return 0;
    }
    std::string full = path;
    const char* dir = std::getenv("RAIRY_OUTPUT_DIR");
    if (dir && *dir && path.front() != '/') full = std::string(dir) + "/" + path;
    std::ofstream f(full, std::ios::binary);
    if (!f) {
        std::cerr << "cannot open output file: " << full << "\n";
        return 2;
    }
    f << csv.out.str();
    return 0;
}

std::shared_ptr<const Painleve2Solution> shared_hm() {
    static auto s = std::make_shared<Painleve2Solution>(hastings_mcleod(-12.0, 10.0, 8001));
    return s;
}

double rairy_logdet(int r, double tau, double x, double accuracy) {
    QuadratureRule rule = build_rule(x, accuracy);
    KernelSpec spec{KernelSpec::Kind::rairy, r, tau, 0};
    return fredholm_logdet(spec, x, rule);
}

std::vector<double> make_grid(double lo, double hi, double step) {
    std::vector<double> g;
    for (double v = lo; v <= hi + 1e-12; v += step) g.push_back(v);
    return g;
}

struct Common {
    std::string output;
    double accuracy = 1e-10;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("-o,--output", c.output, "output CSV file (default stdout)");
    cmd->add_option("--accuracy", c.accuracy, "quadrature target accuracy")
        ->check(CLI::Range(1e-13, 1e-6));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"edge-process distribution tables and verification reports"};
    app.set_config("--config", "", "key=value config file; flags take precedence");
    app.require_subcommand(1);
    int exit_code = 0;

    // tw
    Common tw_c;
    double tw_xmin = -6.0, tw_xmax = 4.0, tw_dx = 0.1;
    CLI::App* tw = app.add_subcommand("tw", "sourceless edge law by both routes");
    tw->add_option("--xmin", tw_xmin);
    tw->add_option("--xmax", tw_xmax);
    tw->add_option("--dx", tw_dx)->check(CLI::PositiveNumber);
    add_common(tw, tw_c);
    tw->callback([&] {
        auto sol = shared_hm();
        Csv csv;
        csv.meta("version", kVersion);
        csv.meta("subcommand", "tw");
        csv.meta("xmin", tw_xmin);
        csv.meta("xmax", tw_xmax);
        csv.meta("dx", tw_dx);
        csv.meta("accuracy", tw_c.accuracy);
        csv.header({"x", "q0", "f", "q0_fredholm"});
        for (double x : make_grid(tw_xmin, tw_xmax, tw_dx)) {
            double q0 = tracy_widom_q0(x, *sol);
            QuadratureRule rule = build_rule(x, tw_c.accuracy);
            double ld = fredholm_logdet(KernelSpec{}, x, rule);
            csv.row({x, q0, std::exp(q0), ld});
        }
        exit_code = emit(csv, tw_c.output);
    });

    // rairy
    Common ra_c;
    int ra_r = 1;
    double ra_tau = 0.0, ra_xmin = -6.0, ra_xmax = 8.0, ra_dx = 0.5;
    CLI::App* ra = app.add_subcommand("rairy", "one-point law of the outlier edge process");
    ra->add_option("--r", ra_r)->check(CLI::Range(0, 8));
    ra->add_option("--tau", ra_tau)->check(CLI::Range(-12.0, 0.0));
    ra->add_option("--xmin", ra_xmin);
    ra->add_option("--xmax", ra_xmax);
    ra->add_option("--dx", ra_dx)->check(CLI::PositiveNumber);
    add_common(ra, ra_c);
    ra->callback([&] {
        Csv csv;
        csv.meta("version", kVersion);
        csv.meta("subcommand", "rairy");
        csv.meta("r", (double)ra_r);
        csv.meta("tau", ra_tau);
        csv.meta("xmin", ra_xmin);
        csv.meta("xmax", ra_xmax);
        csv.meta("dx", ra_dx);
        csv.meta("accuracy", ra_c.accuracy);
        csv.header({"x", "tau", "r", "q", "f"});
        for (double x : make_grid(ra_xmin, ra_xmax, ra_dx)) {
            double q = rairy_logdet(ra_r, ra_tau, x, ra_c.accuracy);
            csv.row({x, ra_tau, (double)ra_r, q, std::exp(q)});
        }
        exit_code = emit(csv, ra_c.output);
    });

    // surface
    Common su_c;
    int su_r = 1;
    double su_t0 = -3.3, su_t1 = -2.7, su_dt = 0.1, su_x0 = -0.4, su_x1 = 0.4, su_dx = 0.1;
    CLI::App* su = app.add_subcommand("surface", "log-determinant grid dump");
    su->add_option("--r", su_r)->check(CLI::Range(0, 8));
    su->add_option("--tau-min", su_t0);
    su->add_option("--tau-max", su_t1);
    su->add_option("--dtau", su_dt)->check(CLI::PositiveNumber);
    su->add_option("--xmin", su_x0);
    su->add_option("--xmax", su_x1);
    su->add_option("--dx", su_dx)->check(CLI::PositiveNumber);
    add_common(su, su_c);
    su->callback([&] {
        Surface s = q_surface(su_r, su_t0, su_t1, su_dt, su_x0, su_x1, su_dx, su_c.accuracy);
        Csv csv;
        csv.meta("version", kVersion);
        csv.meta("subcommand", "surface");
        csv.meta("r", (double)su_r);
        csv.meta("tau_min", su_t0);
        csv.meta("tau_max", su_t1);
        csv.meta("dtau", su_dt);
        csv.meta("xmin", su_x0);
        csv.meta("xmax", su_x1);
        csv.meta("dx", su_dx);
        csv.meta("accuracy", s.accuracy);
        csv.header({"tau", "x", "q"});
        for (int i = 0; i < s.ntau; ++i)
            for (int j = 0; j < s.nx; ++j)
                csv.row({s.tau0 + i * s.dtau, s.x0 + j * s.dx, s.at(i, j)});
        exit_code = emit(csv, su_c.output);
    });

    // pde-check
    Common pc_c;
    std::string pc_which = "rairy";
    int pc_r = 1, pc_n = 2, pc_k1 = 1;
    double pc_tau = -3.0, pc_x = 0.0, pc_h = 0.1, pc_alpha = 1.0, pc_b = 2.0, pc_hfd = 0.05;
    double pc_tol = 5e-3;
    CLI::App* pc = app.add_subcommand("pde-check", "nonlinear PDE residual report");
    pc->add_option("--which", pc_which)->check(CLI::IsMember({"rairy", "finite-n"}));
    pc->add_option("--r", pc_r)->check(CLI::Range(0, 8));
    pc->add_option("--tau", pc_tau);
    pc->add_option("--x", pc_x);
    pc->add_option("--step", pc_h)->check(CLI::PositiveNumber);
    pc->add_option("--n", pc_n);
    pc->add_option("--k1", pc_k1);
    pc->add_option("--alpha", pc_alpha);
    pc->add_option("--b", pc_b);
    pc->add_option("--hfd", pc_hfd)->check(CLI::PositiveNumber);
    pc->add_option("--tol", pc_tol)->check(CLI::PositiveNumber);
    add_common(pc, pc_c);
    pc->callback([&] {
        Csv csv;
        csv.meta("version", kVersion);
        csv.meta("subcommand", "pde-check");
        csv.meta("which", pc_which);
        bool pass;
        if (pc_which == "rairy") {
            csv.meta("r", (double)pc_r);
            csv.meta("tau", pc_tau);
            csv.meta("x", pc_x);
            csv.meta("step", pc_h);
            csv.meta("accuracy", pc_c.accuracy);
            Surface s = q_surface(pc_r, pc_tau - 3.0 * pc_h, pc_tau + 3.0 * pc_h, pc_h,
                                  pc_x - 4.0 * pc_h, pc_x + 4.0 * pc_h, pc_h, pc_c.accuracy);
            ResidualReport rep = r_airy_pde_residual(s, pc_tau, pc_x);
            pass = rep.relative <= pc_tol;
            csv.header({"tau", "x", "residual", "normalization", "relative", "pass"});
            csv.row({pc_tau, pc_x, rep.residual, rep.normalization, rep.relative, (double)pass});
        } else {
            csv.meta("n", (double)pc_n);
            csv.meta("k1", (double)pc_k1);
            csv.meta("alpha", pc_alpha);
            csv.meta("b", pc_b);
            csv.meta("hfd", pc_hfd);
            FiniteNReport rep =
                finite_n_pde_residual(SourceEnsemble{pc_n, pc_k1, pc_alpha}, pc_b, pc_hfd, pc_hfd);
            pass = rep.quartic.relative <= pc_tol && rep.det4.relative <= pc_tol;
            csv.header({"quartic_relative", "det4_relative", "pass"});
            csv.row({rep.quartic.relative, rep.det4.relative, (double)pass});
        }
        exit_code = emit(csv, pc_c.output);
        if (exit_code == 0 && !pass) exit_code = 1;
    });

    // kp-check
    Common kp_c;
    int kp_n = 3, kp_k1 = 1;
    double kp_alpha = 0.5, kp_b = 1.0, kp_step = 0.01, kp_tol = 1e-4;
    CLI::App* kp = app.add_subcommand("kp-check", "bilinear identity residuals");
    kp->add_option("--n", kp_n);
    kp->add_option("--k1", kp_k1);
    kp->add_option("--alpha", kp_alpha);
    kp->add_option("--b", kp_b);
    kp->add_option("--step", kp_step)->check(CLI::PositiveNumber);
    kp->add_option("--tol", kp_tol)->check(CLI::PositiveNumber);
    add_common(kp, kp_c);
    kp->callback([&] {
        KpReport rep = kp_identity_check(SourceEnsemble{kp_n, kp_k1, kp_alpha}, kp_b, kp_step);
        bool pass = rep.eq_s <= kp_tol && rep.eq_u <= kp_tol && rep.ratio_t <= kp_tol &&
                    rep.ratio_s <= kp_tol;
        Csv csv;
        csv.meta("version", kVersion);
        csv.meta("subcommand", "kp-check");
        csv.meta("n", (double)kp_n);
        csv.meta("k1", (double)kp_k1);
        csv.meta("alpha", kp_alpha);
        csv.meta("b", kp_b);
        csv.meta("step", kp_step);
        csv.meta("tol", kp_tol);
        csv.header({"eq_s", "eq_u", "ratio_t", "ratio_s", "pass"});
        csv.row({rep.eq_s, rep.eq_u, rep.ratio_t, rep.ratio_s, (double)pass});
        exit_code = emit(csv, kp_c.output);
        if (exit_code == 0 && !pass) exit_code = 1;
    });

    // virasoro-check
    Common vi_c;
    int vi_n = 2, vi_k1 = 1;
    double vi_alpha = 1.0, vi_b = 2.0, vi_step = 0.01, vi_tol = 1e-4;
    CLI::App* vi = app.add_subcommand("virasoro-check", "boundary constraint residuals");
    vi->add_option("--n", vi_n);
    vi->add_option("--k1", vi_k1);
    vi->add_option("--alpha", vi_alpha);
    vi->add_option("--b", vi_b);
    vi->add_option("--step", vi_step)->check(CLI::PositiveNumber);
    vi->add_option("--tol", vi_tol)->check(CLI::PositiveNumber);
    add_common(vi, vi_c);
    vi->callback([&] {
        VirasoroReport rep = virasoro_check(SourceEnsemble{vi_n, vi_k1, vi_alpha}, vi_b, vi_step);
        bool pass = rep.r_s1 <= vi_tol && rep.r_t1 <= vi_tol && rep.r_t1u1 <= vi_tol &&
                    rep.r_t1s1 <= vi_tol;
        Csv csv;
        csv.meta("version", kVersion);
        csv.meta("subcommand", "virasoro-check");
        csv.meta("n", (double)vi_n);
        csv.meta("k1", (double)vi_k1);
        csv.meta("alpha", vi_alpha);
        csv.meta("b", vi_b);
        csv.meta("step", vi_step);
        csv.meta("tol", vi_tol);
        csv.header({"r_s1", "r_t1", "r_t1u1", "r_t1s1", "pass"});
        csv.row({rep.r_s1, rep.r_t1, rep.r_t1u1, rep.r_t1s1, (double)pass});
        exit_code = emit(csv, vi_c.output);
        if (exit_code == 0 && !pass) exit_code = 1;
    });

    // mc
    Common mc_c;
    int mc_n = 100, mc_k1 = 1, mc_samples = 1000, mc_r = 1;
    double mc_rho = 1.0, mc_tau = 0.0;
    std::uint64_t mc_seed = 0;
    std::string mc_law = "tw";
    CLI::App* mc = app.add_subcommand("mc", "rescaled edge samples and KS statistic");
    mc->add_option("--n", mc_n)->check(CLI::Range(1, 4000));
    mc->add_option("--k1", mc_k1)->check(CLI::Range(0, 1));
    mc->add_option("--rho", mc_rho)->check(CLI::NonNegativeNumber);
    mc->add_option("--samples", mc_samples)->check(CLI::Range(1, 1000000));
    mc->add_option("--seed", mc_seed)->required();
    mc->add_option("--law", mc_law)->check(CLI::IsMember({"tw", "rairy"}));
    mc->add_option("--r", mc_r)->check(CLI::Range(0, 8));
    mc->add_option("--tau", mc_tau)->check(CLI::Range(-12.0, 0.0));
    add_common(mc, mc_c);
    mc->callback([&] {
        auto sol = shared_hm();
        double sqn = std::sqrt((double)mc_n), n16 = std::pow((double)mc_n, 1.0 / 6.0);
        SourceEnsemble e{mc_n, mc_k1, mc_rho * sqn};
        std::vector<double> xs(mc_samples);
        for (int i = 0; i < mc_samples; ++i)
            xs[i] = (sample_top_eigenvalue(e, mc_seed + i) - 2.0 * sqn) * n16;

        // limit CDF on a uniform grid, linear interpolation
        double lo = -7.0, dx = 0.1;
        std::vector<double> F;
        for (double x = lo; x <= 7.0 + 1e-12; x += dx) {
            double q = mc_law == "tw" ? tracy_widom_q0(x, *sol)
                                      : rairy_logdet(mc_r, mc_tau, x, mc_c.accuracy);
            F.push_back(std::exp(q));
        }
        auto cdf = [&](double x) {
            if (x <= lo) return F.front();
            double t = (x - lo) / dx;
            size_t i = (size_t)t;
            if (i + 1 >= F.size()) return F.back();
            return std::clamp(F[i] + (t - i) * (F[i + 1] - F[i]), 0.0, 1.0);
        };
        std::vector<double> sorted = xs;
        std::sort(sorted.begin(), sorted.end());
        double ks = 0.0;
        for (size_t i = 0; i < sorted.size(); ++i) {
            double Fi = cdf(sorted[i]);
            ks = std::max(ks, std::max(std::abs((i + 1.0) / sorted.size() - Fi),
                                       std::abs((double)i / sorted.size() - Fi)));
        }

        Csv csv;
        csv.meta("version", kVersion);
        csv.meta("subcommand", "mc");
        csv.meta("n", (double)mc_n);
        csv.meta("k1", (double)mc_k1);
        csv.meta("rho", mc_rho);
        csv.meta("samples", (double)mc_samples);
        csv.meta("seed", (double)mc_seed);
        csv.meta("law", mc_law);
        csv.meta("r", (double)mc_r);
        csv.meta("tau", mc_tau);
        csv.meta("ks", ks);
        csv.header({"index", "value"});
        for (int i = 0; i < mc_samples; ++i) csv.row({(double)i, xs[i]});
        exit_code = emit(csv, mc_c.output);
    });

    // asym-check
    Common as_c;
    int as_r = 1, as_order = 5;
    double as_x = 0.0;
    std::vector<double> as_taus{-6.0, -8.0, -12.0, -16.0};
    CLI::App* as = app.add_subcommand("asym-check", "deep-time truncation error table");
    as->add_option("--r", as_r)->check(CLI::Range(0, 8));
    as->add_option("--x", as_x);
    as->add_option("--max-order", as_order)->check(CLI::Range(0, 5));
    as->add_option("--taus", as_taus);
    add_common(as, as_c);
    as->callback([&] {
        CompareTable tab = asymptotic_compare(as_r, as_x, as_taus, as_order);
        Csv csv;
        csv.meta("version", kVersion);
        csv.meta("subcommand", "asym-check");
        csv.meta("r", (double)as_r);
        csv.meta("x", as_x);
        csv.meta("max_order", (double)as_order);
        for (int o = 0; o <= as_order; ++o)
            csv.meta("exponent_order" + std::to_string(o), tab.exponents[o]);
        std::vector<std::string> cols{"tau"};
        for (int o = 0; o <= as_order; ++o) cols.push_back("err_order" + std::to_string(o));
        csv.header(cols);
        for (size_t i = 0; i < tab.taus.size(); ++i) {
            std::vector<double> row{tab.taus[i]};
            for (int o = 0; o <= as_order; ++o) row.push_back(tab.errors[o][i]);
            csv.row(row);
        }
        exit_code = emit(csv, as_c.output);
    });

    // moments
    Common mo_c;
    int mo_r = 1;
    double mo_tau = -8.0, mo_dx = 0.05;
    CLI::App* mo = app.add_subcommand("moments", "edge moments: direct vs expansion");
    mo->add_option("--r", mo_r)->check(CLI::Range(0, 8));
    mo->add_option("--tau", mo_tau)->check(CLI::Range(-12.0, -2.0));
    mo->add_option("--dx", mo_dx)->check(CLI::PositiveNumber);
    add_common(mo, mo_c);
    mo->callback([&] {
        EdgeMoments direct = edge_moments_direct(mo_r, mo_tau, mo_dx);
        MomentExpansion exp = edge_moments_expansion(mo_r, mo_tau);
        Csv csv;
        csv.meta("version", kVersion);
        csv.meta("subcommand", "moments");
        csv.meta("r", (double)mo_r);
        csv.meta("tau", mo_tau);
        csv.meta("dx", mo_dx);
        csv.meta("mean0", exp.mean0);
        csv.meta("var0", exp.var0);
        csv.header({"route", "mu1", "mu2", "var"});
        csv.text_row({"direct", fmt(direct.mu1), fmt(direct.mu2), fmt(direct.var)});
        csv.text_row({"expansion", fmt(exp.mu1), fmt(exp.mu2), fmt(exp.var)});
        exit_code = emit(csv, mo_c.output);
    });

    // geometry
    Common ge_c;
    int ge_n = 100;
    double ge_rho0 = 1.0, ge_a = 0.0, ge_p = 0.0;
    CLI::App* ge = app.add_subcommand("geometry", "tangency and cusp points");
    ge->add_option("--rho0", ge_rho0)->check(CLI::NonNegativeNumber);
    ge->add_option("--n", ge_n)->check(CLI::Range(1, 1000000));
    ge->add_option("--a", ge_a);
    ge->add_option("--p", ge_p);
    add_common(ge, ge_c);
    ge->callback([&] {
        Csv csv;
        csv.meta("version", kVersion);
        csv.meta("subcommand", "geometry");
        csv.meta("rho0", ge_rho0);
        csv.meta("n", (double)ge_n);
        csv.header({"kind", "y0", "t0"});
        Tangency t = tangency_point(ge_rho0, ge_n);
        csv.text_row({"tangency", fmt(t.y0), fmt(t.t0)});
        if (ge_a > 0.0 && ge_p > 0.0) {
            csv.meta("a", ge_a);
            csv.meta("p", ge_p);
            CuspGeometry c = cusp_geometry(ge_a, ge_p);
            csv.text_row({"cusp", fmt(c.x0 * std::sqrt((double)ge_n)), fmt(c.t0)});
        }
        exit_code = emit(csv, ge_c.output);
    });

    // verify-all
    Common va_c;
    bool va_fast = false;
    std::uint64_t va_seed = 20260823u;
    CLI::App* va = app.add_subcommand("verify-all", "run the 12-point verification suite");
    va->add_flag("--fast", va_fast, "reduced grids/samples for CI");
    va->add_option("--seed", va_seed);
    va->add_option("-o,--output", va_c.output, "summary CSV file (default stdout)");
    va->callback([&] {
        VerifyOptions opt;
        opt.fast = va_fast;
        opt.seed = va_seed;
        std::ostream& log = va_c.output.empty() ? std::cerr : std::cout;
        std::vector<CriterionResult> results = run_verification(opt, log);
        Csv csv;
        csv.meta("version", kVersion);
        csv.meta("subcommand", "verify-all");
        csv.meta("fast", (double)va_fast);
        csv.meta("seed", (double)va_seed);
        csv.header({"id", "name", "pass", "score"});
        for (const CriterionResult& r : results) {
            std::string name = r.name;
            std::replace(name.begin(), name.end(), ' ', '-');
            csv.text_row({std::to_string(r.id), name, r.pass ? "1" : "0", fmt(r.score)});
        }
        exit_code = emit(csv, va_c.output);
        if (exit_code == 0 && !all_passed(results)) exit_code = 1;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return exit_code;
}
