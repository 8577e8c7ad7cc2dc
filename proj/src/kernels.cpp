#include "rairy/kernels.hpp"
#include "rairy/airy.hpp"
#include "rairy/outlier.hpp"
#include "rairy/quad.hpp"

#include <cmath>
#include <stdexcept>

namespace rairy {

double airy_kernel(double u, double v) {
    if (std::abs(u - v) > 1e-4) {
        AiryPair a = airy(u), b = airy(v);
        return (a.A * b.Ap - a.Ap * b.A) / (u - v);
    }
    double m = 0.5 * (u + v), e = 0.5 * (u - v);
    AiryPair p = airy(m);
    double D = p.Ap * p.Ap - m * p.A * p.A;
    return D + e * e * (p.A * p.Ap / 3.0 + 2.0 * m * D / 3.0);
}

double expansion_term(int i, int r, double u, double v) {
    if (i < 0 || i > 3) throw std::invalid_argument("expansion_term: order 0..3 only");
    if (i == 0) return airy_kernel(u, v);
    AiryPair a = airy(u), b = airy(v);
    double R = r;
    switch (i) {
        case 1:
            return -R * a.A * b.A;
        case 2:
            return -0.5 * R * R * (a.Ap * b.A + a.A * b.Ap)
                   + 0.5 * R * (u - v) * airy_kernel(u, v);
        default: {
            // A''(u) = u A(u)
            double s2 = u * a.A * b.A + 2.0 * a.Ap * b.Ap + v * a.A * b.A;
            double s1 = u * a.A * b.A + v * a.A * b.A - a.Ap * b.Ap;
            return -R * R * R / 6.0 * s2 + 0.5 * R * R * (v - u) * a.A * b.A
                   - R / 3.0 * s1;
        }
    }
}

// ---------------------------------------------------------------------------
// Chebyshev panel tabulation of a smooth function on [a, b]

struct RAiryKernel::Table {
    double a, width;
    int deg;                       // nodes per panel = deg + 1
    std::vector<double> vals;      // per panel, Chebyshev-Lobatto node values
    std::vector<double> nodes;     // reference nodes on [-1, 1]
    std::vector<double> bary;      // barycentric weights

    Table(double a_, double b_, double width_, int deg_,
          const std::function<double(double)>& f)
        : a(a_), width(width_), deg(deg_) {
        int npan = (int)std::ceil((b_ - a_) / width_);
        nodes.resize(deg + 1);
        bary.resize(deg + 1);
        const double PI = 3.14159265358979323846;
        for (int j = 0; j <= deg; ++j) {
            nodes[j] = -std::cos(PI * j / deg);
            bary[j] = (j % 2 ? -1.0 : 1.0);
        }
        bary[0] *= 0.5;
        bary[deg] *= 0.5;
        vals.resize((size_t)npan * (deg + 1));
        for (int p = 0; p < npan; ++p) {
            double c = a + (p + 0.5) * width, h = 0.5 * width;
            for (int j = 0; j <= deg; ++j)
                vals[(size_t)p * (deg + 1) + j] = f(c + h * nodes[j]);
        }
    }

    double eval(double x) const {
        int npan = (int)(vals.size() / (deg + 1));
        int p = (int)((x - a) / width);
        if (p < 0) p = 0;
        if (p >= npan) p = npan - 1;
        double c = a + (p + 0.5) * width, h = 0.5 * width;
        double t = (x - c) / h;
        const double* v = &vals[(size_t)p * (deg + 1)];
        double num = 0.0, den = 0.0;
        for (int j = 0; j <= deg; ++j) {
            double d = t - nodes[j];
            if (std::abs(d) < 1e-14) return v[j];
            double w = bary[j] / d;
            num += w * v[j];
            den += w;
        }
        return num / den;
    }
};

namespace {

double w_cutoff(int r, double lo) {
    return 24.0 + 2.0 * r + std::max(0.0, -lo);
}

} // namespace

RAiryKernel::RAiryKernel(int r, double tau, double lo, double hi)
    : r_(r), tau_(tau), lo_(lo), hi_(hi) {
    if (r < 0 || tau > 0.0) throw std::domain_error("RAiryKernel: need r >= 0, tau <= 0");
    w_end_ = w_cutoff(r, lo);
    double top = hi + w_end_ + 1.0;
    OutlierSpec sm{r, tau, OutlierSign::minus}, sp{r, tau, OutlierSign::plus};
    am_ = std::make_shared<Table>(lo - 0.5, top, 0.5, 12,
                                  [&](double x) { return outlier_airy(x, sm); });
    ap_ = std::make_shared<Table>(lo - 0.5, top, 0.5, 12,
                                  [&](double x) { return outlier_airy(x, sp); });
}

double RAiryKernel::operator()(double u, double v) const {
    if (u < lo_ || v < lo_ || u > hi_ || v > hi_)
        throw std::domain_error("RAiryKernel: argument outside the declared window");
    double wend = w_cutoff(r_, std::min(u, v));
    static thread_local GaussLegendre gl(12);
    int npan = (int)std::ceil(wend / 0.5);
    double sum = 0.0;
    for (int p = 0; p < npan; ++p) {
        double a0 = wend * p / npan, a1 = wend * (p + 1) / npan;
        double c = 0.5 * (a0 + a1), h = 0.5 * (a1 - a0);
        for (size_t i = 0; i < gl.x.size(); ++i) {
            double w = c + h * gl.x[i];
            sum += h * gl.w[i] * am_->eval(w + u) * ap_->eval(w + v);
        }
    }
    return sum;
}

std::vector<double> RAiryKernel::batch(const std::vector<double>& u,
                                       const std::vector<double>& v) const {
    double mn = hi_;
    for (double x : u) mn = std::min(mn, x);
    for (double x : v) mn = std::min(mn, x);
    for (double x : u)
        if (x < lo_ || x > hi_) throw std::domain_error("RAiryKernel: argument outside window");
    for (double x : v)
        if (x < lo_ || x > hi_) throw std::domain_error("RAiryKernel: argument outside window");
    double wend = w_cutoff(r_, mn);
    static thread_local GaussLegendre gl(12);
    int npan = (int)std::ceil(wend / 0.5);
    std::vector<double> wq, ww;
    for (int p = 0; p < npan; ++p) {
        double a0 = wend * p / npan, a1 = wend * (p + 1) / npan;
        double c = 0.5 * (a0 + a1), h = 0.5 * (a1 - a0);
        for (size_t i = 0; i < gl.x.size(); ++i) {
            wq.push_back(c + h * gl.x[i]);
            ww.push_back(h * gl.w[i]);
        }
    }
    size_t nq = wq.size(), nu = u.size(), nv = v.size();
    std::vector<double> AM(nu * nq), AP(nv * nq);
    for (size_t i = 0; i < nu; ++i)
        for (size_t q = 0; q < nq; ++q) AM[i * nq + q] = am_->eval(wq[q] + u[i]);
    for (size_t j = 0; j < nv; ++j)
        for (size_t q = 0; q < nq; ++q) AP[j * nq + q] = ww[q] * ap_->eval(wq[q] + v[j]);
    std::vector<double> out(nu * nv, 0.0);
    for (size_t i = 0; i < nu; ++i)
        for (size_t j = 0; j < nv; ++j) {
            double s = 0.0;
            const double* a = &AM[i * nq];
            const double* b = &AP[j * nq];
            for (size_t q = 0; q < nq; ++q) s += a[q] * b[q];
            out[i * nv + j] = s;
        }
    return out;
}

double r_airy_kernel(double u, double v, int r, double tau) {
    double lo = std::min(u, v), hi = std::max(u, v);
    RAiryKernel k(r, tau, lo, hi);
    return k(u, v);
}

double expansion_remainder(int r, double tau, int order, double u, double v) {
    if (tau > -2.0) throw std::domain_error("expansion_remainder: tau <= -2 required");
    if (order < 0 || order > 3) throw std::invalid_argument("expansion_remainder: order 0..3");
    double k = r_airy_kernel(u, v, r, tau);
    double tp = 1.0;
    for (int i = 0; i <= order; ++i) {
        k -= expansion_term(i, r, u, v) / tp;
        tp *= tau;
    }
    return k;
}

std::function<double(double, double)> KernelSpec::evaluator(double lo, double hi) const {
    switch (kind) {
        case Kind::airy:
            return [](double u, double v) { return airy_kernel(u, v); };
        case Kind::expansion_term: {
            int i = order, rr = r;
            return [i, rr](double u, double v) { return expansion_term(i, rr, u, v); };
        }
        case Kind::truncated_sum: {
            int n = order, rr = r;
            double tt = tau;
            return [n, rr, tt](double u, double v) {
                double s = 0.0, tp = 1.0;
                for (int i = 0; i <= n; ++i) {
                    s += expansion_term(i, rr, u, v) / tp;
                    tp *= tt;
                }
                return s;
            };
        }
        default: {
            auto k = std::make_shared<RAiryKernel>(r, tau, lo, hi);
            return [k](double u, double v) { return (*k)(u, v); };
        }
    }
}

} // namespace rairy
