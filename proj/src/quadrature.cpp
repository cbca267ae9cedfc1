#include "qd/quadrature.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <vector>

namespace qd {
namespace {

// Legendre nodes by Newton iteration on P_n, computed once.
struct GLRule {
    std::vector<double> x, w;  // nodes/weights on [-1, 1]
    explicit GLRule(int n) {
        x.resize(n);
        w.resize(n);
        for (int i = 0; i < n; ++i) {
            double xi = std::cos(PI * (i + 0.75) / (n + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = xi;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2 * k - 1) * xi * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                double dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
                double dx = p1 / dp;
                xi -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            double p0 = 1.0, p1 = xi;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * xi * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
            x[i] = xi;
            w[i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
        }
    }
};

const GLRule& rule(int n) {
    static const GLRule r8(8), r32(32);
    return n == 8 ? r8 : r32;
}

cplx panel(const std::function<cplx(double)>& f, double a, double b, const GLRule& r) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    cplx acc(0.0);
    for (size_t i = 0; i < r.x.size(); ++i) acc += r.w[i] * f(mid + half * r.x[i]);
    return acc * half;
}

void adapt(const std::function<cplx(double)>& f, double a, double b, double tol, int depth,
           cplx whole, cplx& acc, double& err, bool& ok, const GLRule& r) {
    double mid = 0.5 * (a + b);
    cplx left = panel(f, a, mid, r);
    cplx right = panel(f, mid, b, r);
    double e = std::abs(whole - left - right);
    if (e < tol || depth <= 0) {
        acc += left + right;
        err += e;
        if (e >= tol) ok = false;
        return;
    }
    adapt(f, a, mid, tol / 2, depth - 1, left, acc, err, ok, r);
    adapt(f, mid, b, tol / 2, depth - 1, right, acc, err, ok, r);
}

} // namespace

cplx gl_panel(const std::function<cplx(double)>& f, double a, double b, int nodes) {
    return panel(f, a, b, rule(nodes));
}

QuadResult adaptive_gl(const std::function<cplx(double)>& f, double a, double b,
                       double abs_tol, int max_depth) {
    const GLRule& r = rule(32);
    cplx whole = panel(f, a, b, r);
    cplx acc(0.0);
    double err = 0.0;
    bool ok = true;
    adapt(f, a, b, abs_tol, max_depth, whole, acc, err, ok, r);
    return {acc, err, ok};
}

} // namespace qd
