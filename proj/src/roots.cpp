#include "qd/roots.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace qd {
namespace {

// Max |p(r)| allowed relative to coefficient scale and root magnitude.
double residual_scale(const Poly& p, cplx r) {
    double zn = std::pow(std::max(1.0, std::abs(r)), p.degree());
    return std::max(1e-300, zn * p.max_coeff_abs());
}

bool aberth(const Poly& p, std::vector<cplx>& roots) {
    const int n = p.degree();
    const Poly dp = p.derivative();
    const cplx lead = p.leading();

    // initial guesses on a circle around the coefficient centroid
    cplx center = -p.coeff(n - 1) / (double(n) * lead);
    double radius = 0.0;
    for (int k = 0; k < n; ++k)
        radius = std::max(radius, std::pow(std::abs(p.coeff(k) / lead), 1.0 / (n - k)));
    radius = std::max(radius, 0.5) * 1.2;

    roots.resize(n);
    for (int i = 0; i < n; ++i) {
        double th = 2 * PI * i / n + 0.41;
        roots[i] = center + radius * cplx(std::cos(th), std::sin(th));
    }

    for (int iter = 0; iter < 200; ++iter) {
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            cplx pi = p(roots[i]);
            cplx di = dp(roots[i]);
            if (pi == cplx(0.0)) continue;
            if (di == cplx(0.0)) di = cplx(1e-300);
            cplx w = pi / di;
            cplx s(0.0);
            for (int j = 0; j < n; ++j)
                if (j != i) s += 1.0 / (roots[i] - roots[j]);
            cplx denom = 1.0 - w * s;
            if (denom == cplx(0.0)) denom = cplx(1e-300);
            cplx delta = w / denom;
            roots[i] -= delta;
            worst = std::max(worst, std::abs(delta) / (1.0 + std::abs(roots[i])));
        }
        if (worst < 1e-13) break;
    }

    for (int i = 0; i < n; ++i)
        if (std::abs(p(roots[i])) > 1e-10 * residual_scale(p, roots[i])) return false;
    return true;
}

void newton_polish(const Poly& p, const Poly& dp, std::vector<cplx>& roots) {
    for (auto& r : roots) {
        for (int k = 0; k < 3; ++k) {
            cplx d = dp(r);
            if (std::abs(d) < 1e-12 * std::max(1.0, p.max_coeff_abs())) break;  // multiple root
            cplx step = p(r) / d;
            if (!(std::abs(step) < 0.5 * (1.0 + std::abs(r)))) break;
            r -= step;
        }
    }
}

} // namespace

std::vector<cplx> companion_roots(const Poly& p) {
    int n = p.degree();
    if (n < 1) throw DomainError("companion_roots: degree must be >= 1");
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
    cplx lead = p.leading();
    for (int i = 0; i < n; ++i) M(i, n - 1) = -p.coeff(i) / lead;
    for (int i = 1; i < n; ++i) M(i, i - 1) = 1.0;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, false);
    std::vector<cplx> roots(n);
    for (int i = 0; i < n; ++i) roots[i] = es.eigenvalues()(i);
    sort_lex(roots);
    return roots;
}

std::vector<cplx> poly_roots(const Poly& p) {
    if (p.is_zero()) throw DomainError("poly_roots: zero polynomial");
    if (p.degree() < 1) throw DomainError("poly_roots: degree must be >= 1");

    // peel off exact roots at the origin first (keeps Aberth well posed for z^k factors)
    Poly q = p;
    std::vector<cplx> roots;
    while (q.degree() >= 1 && q.coeff(0) == cplx(0.0)) {
        roots.push_back(cplx(0.0));
        q = q.deflate(cplx(0.0));
    }
    if (q.degree() >= 1) {
        std::vector<cplx> rs;
        if (!aberth(q, rs)) rs = companion_roots(q);
        newton_polish(q, q.derivative(), rs);
        roots.insert(roots.end(), rs.begin(), rs.end());
    }
    sort_lex(roots);
    return roots;
}

std::vector<cplx> cubic_roots(const Poly& p) {
    if (p.degree() != 3) throw DegreeError("cubic_roots: expected degree 3");
    if (p.leading() == cplx(0.0)) throw DegreeError("cubic_roots: zero leading coefficient");
    return poly_roots(p);
}

} // namespace qd
