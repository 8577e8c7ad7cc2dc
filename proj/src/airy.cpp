#include "rairy/airy.hpp"

#include <cmath>
#include <vector>
#include <mutex>

namespace rairy {

namespace {

const double PI = 3.14159265358979323846;

// Maclaurin series: Ai = a0*f + a1*g with f,g the standard y''=xy solutions.
AiryPair airy_series(double x) {
    static const double a0 = std::pow(3.0, -2.0 / 3.0) / std::tgamma(2.0 / 3.0);
    static const double a1 = -std::pow(3.0, -1.0 / 3.0) / std::tgamma(1.0 / 3.0);
    if (x == 0.0) return {a0, a1};
    double x3 = x * x * x;
    // f = sum c_k x^{3k},       f' = sum 3k c_k x^{3k-1}
    // g = sum d_k x^{3k+1},     g' = sum (3k+1) d_k x^{3k}
    double c = 1.0, d = x;
    double f = c, fp = 0.0, gg = d, gp = 1.0;
    for (int k = 0; k < 120; ++k) {
        double tk = 3.0 * k;
        c *= x3 / ((tk + 2.0) * (tk + 3.0));
        d *= x3 / ((tk + 3.0) * (tk + 4.0));
        f += c;
        fp += c * (tk + 3.0) / x;      // 3(k+1) c_{k+1} x^{3k+2}
        gg += d;
        gp += d * (tk + 4.0) / x;      // careful at x=0 handled below
        if (std::abs(c) + std::abs(d) < 1e-18 * (std::abs(f) + std::abs(gg)) + 1e-300)
            break;
    }
    return {a0 * f + a1 * gg, a0 * fp + a1 * gp};
}

// one Taylor step of y'' = xy from (x0, y, y')
AiryPair taylor_step(double x0, double y, double yp, double h) {
    const int N = 36;
    double t[N + 2];
    t[0] = y;
    t[1] = yp;
    // t[n+2] = (x0 t[n] + t[n-1]) / ((n+1)(n+2))
    for (int n = 0; n + 2 <= N + 1; ++n) {
        double prev = (n >= 1) ? t[n - 1] : 0.0;
        t[n + 2] = (x0 * t[n] + prev) / ((n + 1.0) * (n + 2.0));
    }
    double s = 0.0, sp = 0.0;
    for (int n = N + 1; n >= 1; --n) {
        s = s * h + t[n];
        sp = sp * h + t[n] * n;
    }
    s = s * h + t[0];
    return {s, sp};
}

AiryPair airy_asym_pos(double x);

// anchors every 0.25 on [-20,-4] and [4,12.5]
struct AnchorTable {
    std::vector<AiryPair> neg;  // x = -4 - 0.25*i, i = 0..64  (down to -20)
    std::vector<AiryPair> pos;  // x =  4 + 0.25*i, i = 0..34  (up to 12.5)
    AnchorTable() {
        AiryPair p = airy_series(-4.0);
        neg.push_back(p);
        for (int i = 1; i <= 64; ++i) {
            double x0 = -4.0 - 0.25 * (i - 1);
            // substeps for accuracy
            AiryPair q = p;
            double xs = x0;
            for (int s = 0; s < 2; ++s) {
                q = taylor_step(xs, q.A, q.Ap, -0.125);
                xs -= 0.125;
            }
            p = q;
            neg.push_back(p);
        }
        // positive side: march leftward from an asymptotic seed (the decaying
        // solution grows in that direction, so the march is stable)
        pos.assign(35, AiryPair{0, 0});
        p = airy_asym_pos(12.5);
        pos[34] = p;
        for (int i = 33; i >= 0; --i) {
            double x0 = 4.0 + 0.25 * (i + 1);
            AiryPair q = p;
            double xs = x0;
            for (int s = 0; s < 2; ++s) {
                q = taylor_step(xs, q.A, q.Ap, -0.125);
                xs -= 0.125;
            }
            p = q;
            pos[i] = p;
        }
    }
};

const AnchorTable& anchors() {
    static AnchorTable t;
    return t;
}

// asymptotic series for x >> 0
AiryPair airy_asym_pos(double x) {
    double zeta = (2.0 / 3.0) * std::pow(x, 1.5);
    double su = 1.0, sv = 1.0, u = 1.0, v = 1.0;
    for (int k = 1; k <= 40; ++k) {
        u *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) /
             ((2.0 * k - 1.0) * 216.0 * k);
        v = u * (6.0 * k + 1.0) / (1.0 - 6.0 * k);
        double term = u / std::pow(zeta, k);
        if (std::abs(term) < 1e-18) break;
        su += (k % 2 ? -term : term);
        sv += (k % 2 ? -v / std::pow(zeta, k) : v / std::pow(zeta, k));
    }
    double pre = std::exp(-zeta) / (2.0 * std::sqrt(PI));
    return {pre * su / std::pow(x, 0.25), -pre * sv * std::pow(x, 0.25)};
}

// asymptotic series for x << 0
AiryPair airy_asym_neg(double x) {
    double z = -x;
    double zeta = (2.0 / 3.0) * std::pow(z, 1.5);
    // even/odd splits of the u and v series
    double ue = 1.0, uo = 0.0, ve = 1.0, vo = 0.0;
    double u = 1.0, v = 1.0;
    for (int k = 1; k <= 40; ++k) {
        u *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) /
             ((2.0 * k - 1.0) * 216.0 * k);
        v = u * (6.0 * k + 1.0) / (1.0 - 6.0 * k);
        double tu = u / std::pow(zeta, k);
        double tv = v / std::pow(zeta, k);
        if (std::abs(tu) < 1e-18) break;
        int m = k / 2;
        double sgn = (m % 2 ? -1.0 : 1.0);
        if (k % 2 == 0) { ue += sgn * tu; ve += sgn * tv; }
        else            { uo += sgn * tu; vo += sgn * tv; }
    }
    double c = std::cos(zeta + PI / 4.0), s = std::sin(zeta + PI / 4.0);
    double A = (s * ue - c * uo) / (std::sqrt(PI) * std::pow(z, 0.25));
    double Ap = -(c * ve + s * vo) * std::pow(z, 0.25) / std::sqrt(PI);
    return {A, Ap};
}

} // namespace

AiryPair airy(double x) {
    if (std::abs(x) <= 4.0) return airy_series(x);
    if (x > 12.0) return airy_asym_pos(x);
    if (x < -20.0) return airy_asym_neg(x);
    const AnchorTable& t = anchors();
    if (x > 0) {
        int i = (int)std::lround((x - 4.0) / 0.25);
        if (i < 0) i = 0;
        if (i > 34) i = 34;
        double x0 = 4.0 + 0.25 * i;
        return taylor_step(x0, t.pos[i].A, t.pos[i].Ap, x - x0);
    }
    int i = (int)std::lround((-4.0 - x) / 0.25);
    if (i < 0) i = 0;
    if (i > 64) i = 64;
    double x0 = -4.0 - 0.25 * i;
    return taylor_step(x0, t.neg[i].A, t.neg[i].Ap, x - x0);
}

double airy_kernel_diag(double x) {
    AiryPair p = airy(x);
    return p.Ap * p.Ap - x * p.A * p.A;
}

} // namespace rairy
