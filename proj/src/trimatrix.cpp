#include "qd/trimatrix.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace qd {
namespace {

double norm_inf(const TriMatrix& m) {
    double n = 0.0;
    for (int i = 0; i < m.size(); ++i) {
        double row = std::abs(m.diag[i]);
        if (i > 0) row += std::abs(m.sub[i - 1]);
        if (i + 1 < m.size()) row += std::abs(m.sup[i]);
        n = std::max(n, row);
    }
    return n;
}

void apply(const TriMatrix& m, const std::vector<cplx>& v, std::vector<cplx>& out) {
    int n = m.size();
    out.assign(n, cplx(0.0));
    for (int i = 0; i < n; ++i) {
        out[i] = m.diag[i] * v[i];
        if (i > 0) out[i] += m.sub[i - 1] * v[i - 1];
        if (i + 1 < n) out[i] += m.sup[i] * v[i + 1];
    }
}

bool symmetrizable(const TriMatrix& m) {
    for (const auto& x : m.diag)
        if (x.imag() != 0.0) return false;
    for (size_t i = 0; i < m.sub.size(); ++i) {
        if (m.sub[i].imag() != 0.0 || m.sup[i].imag() != 0.0) return false;
        if (m.sub[i].real() * m.sup[i].real() <= 0.0) return false;
    }
    return true;
}

void sort_pairs(EigResult& r) {
    int n = static_cast<int>(r.values.size());
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return lex_less(r.values[a], r.values[b]); });
    EigResult s;
    s.defective_warning = r.defective_warning;
    for (int i : idx) {
        s.values.push_back(r.values[i]);
        s.vectors.push_back(std::move(r.vectors[i]));
    }
    r = std::move(s);
}

} // namespace

EigResult eig_tridiagonal(const TriMatrix& m) {
    const int n = m.size();
    if (n < 1) throw DomainError("eig_tridiagonal: empty matrix");
    EigResult r;

    if (n == 1) {
        r.values = {m.diag[0]};
        r.vectors = {{cplx(1.0)}};
        return r;
    }

    if (symmetrizable(m)) {
        // D^{-1} M D with D_{i+1} = D_i * b_i / sup_i, b_i = -sqrt(sub_i*sup_i),
        // turns M into a real symmetric tridiagonal matrix.
        Eigen::VectorXd d(n), b(n - 1);
        std::vector<double> D(n, 1.0);
        for (int i = 0; i < n; ++i) d(i) = m.diag[i].real();
        for (int i = 0; i + 1 < n; ++i) {
            double bi = -std::sqrt(m.sub[i].real() * m.sup[i].real());
            b(i) = bi;
            D[i + 1] = D[i] * bi / m.sup[i].real();
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(d, b);
        r.values.resize(n);
        r.vectors.assign(n, std::vector<cplx>(n));
        for (int k = 0; k < n; ++k) {
            r.values[k] = es.eigenvalues()(k);
            double nrm = 0.0;
            for (int i = 0; i < n; ++i) {
                double vi = D[i] * es.eigenvectors()(i, k);
                r.vectors[k][i] = vi;
                nrm += vi * vi;
            }
            nrm = std::sqrt(nrm);
            for (int i = 0; i < n; ++i) r.vectors[k][i] /= nrm;
        }
    } else {
        Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
        for (int i = 0; i < n; ++i) M(i, i) = m.diag[i];
        for (int i = 0; i + 1 < n; ++i) {
            M(i + 1, i) = m.sub[i];
            M(i, i + 1) = m.sup[i];
        }
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, true);
        r.values.resize(n);
        r.vectors.assign(n, std::vector<cplx>(n));
        for (int k = 0; k < n; ++k) {
            r.values[k] = es.eigenvalues()(k);
            for (int i = 0; i < n; ++i) r.vectors[k][i] = es.eigenvectors()(i, k);
        }
    }

    for (int k = 0; k < n; ++k)
        if (eig_residual(m, r.values[k], r.vectors[k]) > 1e-8) r.defective_warning = true;
    sort_pairs(r);
    return r;
}

Poly tridiagonal_charpoly(const TriMatrix& m) {
    // det(M - λI) built bottom-up: p_k = (d_{k-1} - λ) p_{k-1} - sub*sup p_{k-2}
    Poly pm1(std::vector<cplx>{cplx(1.0)});
    Poly p(std::vector<cplx>{m.diag[0], cplx(-1.0)});
    for (int k = 1; k < m.size(); ++k) {
        Poly factor(std::vector<cplx>{m.diag[k], cplx(-1.0)});
        Poly next = factor * p - pm1 * (m.sub[k - 1] * m.sup[k - 1]);
        pm1 = std::move(p);
        p = std::move(next);
    }
    return p;
}

double eig_residual(const TriMatrix& m, cplx lambda, const std::vector<cplx>& v) {
    std::vector<cplx> mv;
    apply(m, v, mv);
    double num = 0.0, vn = 0.0;
    for (int i = 0; i < m.size(); ++i) {
        num = std::max(num, std::abs(mv[i] - lambda * v[i]));
        vn = std::max(vn, std::abs(v[i]));
    }
    double mn = norm_inf(m);
    if (mn == 0.0) mn = 1.0;
    return num / (mn * std::max(vn, 1e-300));
}

} // namespace qd
