#pragma once
#include <functional>
#include <memory>
#include <vector>

namespace rairy {

// (A(u)A'(v) - A'(u)A(v))/(u-v), regularized near the diagonal
double airy_kernel(double u, double v);

// tau -> -inf expansion terms K_i, i = 0..3 (A'' eliminated via A'' = uA)
double expansion_term(int i, int r, double u, double v);

// K(u,v) = int_0^inf Am(w+u) Ap(w+v) dw with the two companion functions
// tabulated on Chebyshev panels over a caller-declared argument window.
class RAiryKernel {
public:
    RAiryKernel(int r, double tau, double lo, double hi);
    double operator()(double u, double v) const;
    // row-major K(u_i, v_j) block, reusing the tables across all entries
    std::vector<double> batch(const std::vector<double>& u,
                              const std::vector<double>& v) const;
    int r() const { return r_; }
    double tau() const { return tau_; }

private:
    int r_;
    double tau_;
    double lo_, hi_, w_end_;
    struct Table;
    std::shared_ptr<const Table> am_, ap_;
};

// convenience single evaluation (builds a small window around u, v)
double r_airy_kernel(double u, double v, int r, double tau);

// K^{(r)}_tau(u,v) - sum_{i<=order} K_i(u,v)/tau^i, tau <= -2
double expansion_remainder(int r, double tau, int order, double u, double v);

// tagged kernel evaluator for the Fredholm layer
struct KernelSpec {
    enum class Kind { airy, rairy, expansion_term, truncated_sum };
    Kind kind = Kind::airy;
    int r = 0;
    double tau = 0.0;
    int order = 0;  // term index for expansion_term, order for truncated_sum

    // evaluator valid for arguments in [lo, hi]
    std::function<double(double, double)> evaluator(double lo, double hi) const;
};

} // namespace rairy
