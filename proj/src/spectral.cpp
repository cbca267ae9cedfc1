#include "qd/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "qd/roots.hpp"

namespace qd {
namespace {

// lambda recovered from the constant-term row: lambda c0 = (g sqrt(m)/2) c0 - 2 c1,
// and for monic q with roots z_i, c1/c0 = -sum 1/z_i. Used to cross-check that a
// polished root set still belongs to the eigenvalue it started from.
cplx lambda_from_roots(const std::vector<cplx>& x, int m, double gamma) {
    const double sm = std::sqrt(static_cast<double>(m));
    cplx lam = gamma * sm / 2.0;
    for (const cplx& xi : x) lam += 2.0 / (sm * xi);
    return lam;
}

} // namespace

TriMatrix operator_matrix(const SpectralProblem& p) {
    if (p.m < 0) throw DomainError("operator_matrix: m must be nonnegative");
    const int n = p.m + 1;
    const double gs = p.gamma * std::sqrt(static_cast<double>(p.m));
    TriMatrix mat;
    mat.diag.resize(n);
    mat.sub.resize(n - 1);
    mat.sup.resize(n - 1);
    // L z^k = 4(k-m) z^{k+1} + g sqrt(m) (2k+1/2) z^k - 2k(2k-1) z^{k-1}
    for (int k = 0; k < n; ++k) mat.diag[k] = gs * (2.0 * k + 0.5);
    for (int k = 0; k + 1 < n; ++k) {
        mat.sub[k] = 4.0 * (k - p.m);
        mat.sup[k] = -2.0 * (k + 1) * (2 * k + 1);
    }
    return mat;
}

SpectralSolution spectrum(const SpectralProblem& p) {
    if (p.m < 1) throw DomainError("spectrum: m must be positive");
    SpectralSolution sol;
    sol.problem = p;

    EigResult eg = eig_tridiagonal(operator_matrix(p));
    sol.defective_warning = eg.defective_warning;
    const double sm = std::sqrt(static_cast<double>(p.m));

    for (size_t k = 0; k < eg.values.size(); ++k) {
        const cplx lam = eg.values[k];
        std::vector<cplx> c = std::move(eg.vectors[k]);

        // The subdiagonal never vanishes, so the top coefficient of an eigenvector
        // cannot either (a zero there back-substitutes to the zero vector).
        const cplx lead = c.back();
        if (std::abs(lead) < 1e-290) {
            sol.defective_warning = true;
        } else {
            for (cplx& ci : c) ci /= lead;
            c.back() = cplx(1.0);
        }

        std::vector<cplx> roots = poly_roots(Poly(c));

        // Refine through the equilibrium system in rescaled coordinates. Accept the
        // polish only if the recovered eigenvalue still matches: Newton started from
        // badly conditioned coefficient roots could in principle settle on another
        // branch's configuration.
        std::vector<cplx> x(roots);
        for (cplx& xi : x) xi /= sm;
        if (equilibrium_polish(x, p.m, p.gamma)) {
            bool usable = true;
            for (const cplx& xi : x)
                if (std::abs(xi) < 1e-12) { usable = false; break; }
            if (usable &&
                std::abs(lambda_from_roots(x, p.m, p.gamma) - lam) <=
                    1e-6 * std::max(1.0, std::abs(lam))) {
                for (size_t i = 0; i < roots.size(); ++i) roots[i] = x[i] * sm;
            }
        }
        sort_lex(roots);

        sol.eigenvalues.push_back(lam);
        sol.eigenpolys.push_back(std::move(c));
        sol.roots.push_back(std::move(roots));
    }
    return sol;
}

cplx riccati_residual(const std::vector<cplx>& q_coeffs, cplx lambda, int m, double gamma,
                      cplx z) {
    if (m < 1) throw DomainError("riccati_residual: m must be positive");
    const Poly q(q_coeffs);
    const Poly dq = q.derivative();
    const cplx qz = q(z);
    if (std::abs(qz) == 0.0) throw DomainError("riccati_residual: z is a root of q");
    const double md = static_cast<double>(m);
    const cplx C = dq(z) / (md * qz);
    const cplx Cp = (dq.derivative()(z) * qz - dq(z) * dq(z)) / (md * qz * qz);
    const double gs = gamma * std::sqrt(md);
    return 4.0 * z * md * C * C - (4.0 * z * z + 2.0 * gs * z - 2.0) * C +
           (4.0 * md * z - gs / 2.0 + lambda) / md + 4.0 * z * Cp;
}

RootMeasure rescaled_root_measure(const SpectralSolution& sol, int k) {
    if (k < 0 || k >= static_cast<int>(sol.roots.size()))
        throw DomainError("rescaled_root_measure: branch index out of range");
    RootMeasure mu;
    const double sm = std::sqrt(static_cast<double>(sol.problem.m));
    mu.points.reserve(sol.roots[k].size());
    for (const cplx& r : sol.roots[k]) mu.points.push_back(r / sm);
    mu.weight = mu.points.empty() ? 0.0 : 1.0 / static_cast<double>(mu.points.size());
    return mu;
}

cplx cauchy_of_roots(const Poly& p, cplx z) {
    const int d = p.degree();
    if (d < 1) throw DomainError("cauchy_of_roots: needs a nonconstant polynomial");
    const cplx pz = p(z);
    if (std::abs(pz) == 0.0) throw DomainError("cauchy_of_roots: z is a root");
    return p.derivative()(z) / (static_cast<double>(d) * pz);
}

bool equilibrium_polish(std::vector<cplx>& x, int m, double gamma) {
    const int n = static_cast<int>(x.size());
    if (n == 0 || n != m) return false;

    auto usable = [n](const Eigen::VectorXcd& v) {
        for (int i = 0; i < n; ++i) {
            if (!std::isfinite(v(i).real()) || !std::isfinite(v(i).imag())) return false;
            if (std::abs(v(i)) < 1e-8) return false;
            for (int j = i + 1; j < n; ++j)
                if (std::abs(v(i) - v(j)) < 1e-10) return false;
        }
        return true;
    };
    auto fill_residual = [&](const Eigen::VectorXcd& v, Eigen::VectorXcd& F) {
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            cplx s(0.0);
            for (int j = 0; j < n; ++j)
                if (j != i) s += 1.0 / (v(i) - v(j));
            F(i) = s - 0.5 * m * v(i) - 0.25 * gamma * m + 0.25 / v(i);
            worst = std::max(worst, std::abs(F(i)));
        }
        return worst;
    };

    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v(i) = x[i];
    if (!usable(v)) return false;

    double scale = 1.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, 0.5 * m * std::abs(v(i)));
    const double tol = 1e-12 * scale;

    Eigen::VectorXcd F(n), Ft(n);
    Eigen::MatrixXcd J(n, n);
    double res = fill_residual(v, F);

    for (int iter = 0; iter < 60 && res > tol; ++iter) {
        for (int i = 0; i < n; ++i) {
            cplx jii = -0.5 * m - 0.25 / (v(i) * v(i));
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                const cplx w = 1.0 / ((v(i) - v(j)) * (v(i) - v(j)));
                J(i, j) = w;
                jii -= w;
            }
            J(i, i) = jii;
        }
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(J);
        if (!lu.isInvertible()) return false;
        const Eigen::VectorXcd step = lu.solve(-F);
        if (!step.allFinite()) return false;

        bool advanced = false;
        for (double t = 1.0; t >= 1.0 / 4096.0; t *= 0.5) {
            const Eigen::VectorXcd vt = v + t * step;
            if (!usable(vt)) continue;
            const double rt = fill_residual(vt, Ft);
            if (rt < (1.0 - 0.5 * t) * res) {
                v = vt;
                F = Ft;
                res = rt;
                advanced = true;
                break;
            }
        }
        if (!advanced) break;
    }
    if (res > tol) return false;

    for (int i = 0; i < n; ++i) x[i] = v(i);
    return true;
}

DeltaEstimates delta_estimates(const std::vector<int>& ms, double gamma, int selector) {
    if (ms.empty()) throw DomainError("delta_estimates: no m values given");
    DeltaEstimates out;
    out.rows.reserve(ms.size());
    for (int m : ms) {
        // only eigenvalues are needed here; skip the root extraction
        EigResult eg = eig_tridiagonal(operator_matrix({m, gamma}));
        const int idx = static_cast<int>(eg.values.size()) - 1 - selector;
        if (idx < 0) throw DomainError("delta_estimates: selector exceeds spectrum size");
        DeltaRow row;
        row.m = m;
        row.lambda = eg.values[idx];
        row.scaled_32 = row.lambda.real() / std::pow(static_cast<double>(m), 1.5);
        row.scaled_43 = row.lambda.real() / std::pow(static_cast<double>(m), 4.0 / 3.0);
        row.diff_32 = out.rows.empty() ? 0.0 : row.scaled_32 - out.rows.back().scaled_32;
        row.diff_43 = out.rows.empty() ? 0.0 : row.scaled_43 - out.rows.back().scaled_43;
        out.rows.push_back(row);
    }
    const DeltaRow& last = out.rows.back();
    if (out.rows.size() >= 2 && std::abs(last.diff_43) < std::abs(last.diff_32)) {
        out.stabilizing_exponent_num = 4;
        out.stabilizing_exponent_den = 3;
        out.delta_hat = last.scaled_43 / 4.0;
    } else {
        out.stabilizing_exponent_num = 3;
        out.stabilizing_exponent_den = 2;
        out.delta_hat = last.scaled_32 / 4.0;
    }
    return out;
}

} // namespace qd
