#pragma once
#include <vector>

#include "qd/poly.hpp"

namespace qd {

// Tridiagonal matrix, complex entries. sub[i] = M[i+1][i], sup[i] = M[i][i+1].
struct TriMatrix {
    std::vector<cplx> sub, diag, sup;
    int size() const { return static_cast<int>(diag.size()); }
};

struct EigResult {
    std::vector<cplx> values;                 // sorted (real, imag)
    std::vector<std::vector<cplx>> vectors;   // vectors[k] pairs with values[k]
    bool defective_warning = false;           // residual above tolerance somewhere
};

// Dense eigensolve of a small tridiagonal matrix. When the matrix is real with
// sub*sup > 0 on the whole band it is diagonally similar to a real symmetric
// tridiagonal one; that path is used for accuracy, with eigenvectors unscaled back.
EigResult eig_tridiagonal(const TriMatrix& m);

// Characteristic polynomial via the three-term determinant recurrence
// (independent route to the spectrum; used as a test oracle).
Poly tridiagonal_charpoly(const TriMatrix& m);

double eig_residual(const TriMatrix& m, cplx lambda, const std::vector<cplx>& v);

} // namespace qd
