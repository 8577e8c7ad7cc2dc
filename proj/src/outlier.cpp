#include "rairy/outlier.hpp"
#include "rairy/airy.hpp"
#include "rairy/quad.hpp"

#include <cmath>
#include <stdexcept>

namespace rairy {

namespace {

const double PI = 3.14159265358979323846;

void check_spec(const OutlierSpec& s) {
    if (s.r < 0) throw std::domain_error("outlier_airy: r must be >= 0");
    if (s.tau > 0) throw std::domain_error("outlier_airy: tau > 0 unsupported");
}

double poly_eval(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (size_t i = c.size(); i-- > 0;) v = v * x + c[i];
    return v;
}

// d/dt^j of exp(t^3/3) = P_j(t) exp(t^3/3), P_{j+1} = P_j' + t^2 P_j
std::vector<std::vector<double>> laplace_poly(int jmax) {
    std::vector<std::vector<double>> P(jmax + 1);
    P[0] = {1.0};
    for (int j = 0; j < jmax; ++j) {
        const std::vector<double>& p = P[j];
        std::vector<double> q(p.size() + 2, 0.0);
        for (size_t k = 1; k < p.size(); ++k) q[k - 1] += k * p[k];   // P'
        for (size_t k = 0; k < p.size(); ++k) q[k + 2] += p[k];       // t^2 P
        P[j + 1] = q;
    }
    return P;
}

// int_{-inf}^{inf} ((u-s)^{r-1}/(r-1)!) e^{tau(u-s)} Ai(s) ds  for t = -tau >= 0,
// via int s^k e^{ts} Ai(s) ds = P_k(t) e^{t^3/3}
double whole_line_bridge(int r, double tau, double u) {
    double t = -tau;
    static thread_local std::vector<std::vector<double>> P = laplace_poly(16);
    double et = std::exp(t * t * t / 3.0 + tau * u);
    double fact_k = 1.0;      // k!
    double sum = 0.0;
    for (int k = 0; k <= r - 1; ++k) {
        if (k > 0) fact_k *= k;
        double fact_m = 1.0;  // (r-1-k)!
        for (int m = 2; m <= r - 1 - k; ++m) fact_m *= m;
        double term = std::pow(u, r - 1 - k) / (fact_m * fact_k);
        term *= (k % 2 ? -1.0 : 1.0) * poly_eval(P[k], t);
        sum += term;
    }
    return sum * et;
}

// right-tail integral (-1)^r int_u^inf ((s-u)^{r-1}/(r-1)!) e^{tau(u-s)} Ai(s) ds
double right_tail(int r, double tau, double u) {
    double at = -tau;
    // truncation: Airy decay must dominate the e^{|tau| (s-u)} growth
    double send = std::max(u, 0.0) + 10.0;
    while (send < 400.0) {
        double dec = (send > 0 ? (2.0 / 3.0) * std::pow(send, 1.5) : 0.0);
        if (dec - at * (send - u) - (r - 1) * std::log(2.0 + send - u) > 45.0) break;
        send += 1.0;
    }
    static thread_local GaussLegendre gl(12);
    int npan = (int)std::ceil((send - u) / 0.25);
    MappedRule rule = gl_composite(u, send, npan, gl);
    double fact = 1.0;
    for (int m = 2; m <= r - 1; ++m) fact *= m;
    double sum = 0.0;
    for (size_t i = 0; i < rule.x.size(); ++i) {
        double s = rule.x[i];
        double w = rule.w[i];
        double val = std::pow(s - u, r - 1) / fact * std::exp(tau * (u - s)) * airy_A(s);
        sum += w * val;
    }
    return (r % 2 ? -sum : sum);
}

// left-tail integral int_{-inf}^u ((u-s)^{r-1}/(r-1)!) e^{tau(u-s)} Ai(s) ds
double left_tail(int r, double tau, double u) {
    double at = -tau;  // > 0
    double L = (50.0 + 10.0 * r) / at + 5.0;
    static thread_local GaussLegendre gl(12);
    int npan = (int)std::ceil(L / 0.25);
    MappedRule rule = gl_composite(u - L, u, npan, gl);
    double fact = 1.0;
    for (int m = 2; m <= r - 1; ++m) fact *= m;
    double sum = 0.0;
    for (size_t i = 0; i < rule.x.size(); ++i) {
        double s = rule.x[i];
        double w = rule.w[i];
        double val = std::pow(u - s, r - 1) / fact * std::exp(tau * (u - s)) * airy_A(s);
        sum += w * val;
    }
    return sum;
}

} // namespace

void outlier_plus_coeffs(int r, double tau, std::vector<double>& pA,
                         std::vector<double>& pAp) {
    pA = {1.0};
    pAp = {0.0};
    for (int k = 0; k < r; ++k) {
        // (d/du + tau)(p A + q A') = (p' + u q + tau p) A + (p + q' + tau q) A'
        std::vector<double> np(std::max(pA.size(), pAp.size() + 1) + 1, 0.0);
        std::vector<double> nq(std::max(pA.size(), pAp.size()) + 1, 0.0);
        for (size_t i = 1; i < pA.size(); ++i) np[i - 1] += i * pA[i];
        for (size_t i = 0; i < pAp.size(); ++i) np[i + 1] += pAp[i];
        for (size_t i = 0; i < pA.size(); ++i) np[i] += tau * pA[i];
        for (size_t i = 0; i < pA.size(); ++i) nq[i] += pA[i];
        for (size_t i = 1; i < pAp.size(); ++i) nq[i - 1] += i * pAp[i];
        for (size_t i = 0; i < pAp.size(); ++i) nq[i] += tau * pAp[i];
        pA = np;
        pAp = nq;
    }
    if (r % 2) {
        for (double& c : pA) c = -c;
        for (double& c : pAp) c = -c;
    }
}

double outlier_airy(double u, const OutlierSpec& spec) {
    check_spec(spec);
    if (spec.r == 0) return airy_A(u);
    if (spec.sign == OutlierSign::plus) {
        std::vector<double> pA, pAp;
        outlier_plus_coeffs(spec.r, spec.tau, pA, pAp);
        AiryPair a = airy(u);
        return poly_eval(pA, u) * a.A + poly_eval(pAp, u) * a.Ap;
    }
    // minus branch: the subdominant ("no e^{|tau|^3/3} growth") companion
    if (spec.tau > -2.0) {
        return whole_line_bridge(spec.r, spec.tau, u) + right_tail(spec.r, spec.tau, u);
    }
    return left_tail(spec.r, spec.tau, u);
}

ContourPath ContourPath::standard(double tau) {
    ContourPath p;
    p.height = (tau == 0.0) ? -0.25 : std::min(0.5, -tau / 2.0);
    return p;
}

std::complex<double> contour_airy(double u, const OutlierSpec& spec,
                                  const ContourPath& path) {
    check_spec(spec);
    using cd = std::complex<double>;
    const cd I(0.0, 1.0);
    cd pole = -I * spec.tau;  // at height |tau| for tau < 0

    auto integrand = [&](cd a) -> cd {
        cd e = std::exp(I * a * a * a / 3.0 + I * a * u);
        if (spec.r == 0) return e / (2.0 * PI);
        cd base = (spec.sign == OutlierSign::plus) ? (-I * a - spec.tau)
                                                   : (I * a - spec.tau);
        double p = (spec.sign == OutlierSign::plus) ? spec.r : -spec.r;
        return e * std::pow(base, p) / (2.0 * PI);
    };

    cd vL(-path.x_half, path.height), vR(path.x_half, path.height);
    cd eL = std::exp(I * (5.0 * PI / 6.0)), eR = std::exp(I * (PI / 6.0));

    // pole proximity check against all three pieces
    auto seg_dist = [&](cd p0, cd dir, double len) {
        double t = std::real(std::conj(dir) * (pole - p0));
        t = std::max(0.0, std::min(len, t));
        return std::abs(pole - (p0 + t * dir));
    };
    if (spec.sign == OutlierSign::minus && spec.r > 0) {
        double d = std::min({seg_dist(vL, eL, path.ray_len),
                             seg_dist(vL, (vR - vL) / std::abs(vR - vL), std::abs(vR - vL)),
                             seg_dist(vR, eR, path.ray_len)});
        if (d < 0.1) throw std::domain_error("contour_airy: path too close to the pole");
    }

    static thread_local GaussLegendre gl16(16);
    GaussLegendre gl(path.nodes == 16 ? 16 : path.nodes);
    const GaussLegendre& g = (path.nodes == 16) ? gl16 : gl;

    auto line_integral = [&](cd p0, cd dir, double len) -> cd {
        int npan = (int)std::ceil(len / path.panel);
        cd sum(0.0, 0.0);
        for (int p = 0; p < npan; ++p) {
            double a0 = len * p / npan, a1 = len * (p + 1) / npan;
            double c = 0.5 * (a0 + a1), h = 0.5 * (a1 - a0);
            for (size_t i = 0; i < g.x.size(); ++i) {
                double t = c + h * g.x[i];
                sum += h * g.w[i] * integrand(p0 + t * dir);
            }
        }
        return sum * dir;
    };

    cd total = -line_integral(vL, eL, path.ray_len)
             + line_integral(vL, (vR - vL) / std::abs(vR - vL), std::abs(vR - vL))
             + line_integral(vR, eR, path.ray_len);
    return total;
}

} // namespace rairy
