#pragma once
#include <vector>

#include "qd/poly.hpp"

namespace qd {

// All roots of p, multiplicity included, sorted (real, imag) lexicographic.
// Aberth–Ehrlich simultaneous iteration (rel tol 1e-12, 200 iterations) with a
// companion-matrix fallback when it fails to settle.
std::vector<cplx> poly_roots(const Poly& p);

// Degree-3 convenience wrapper; throws DegreeError otherwise.
std::vector<cplx> cubic_roots(const Poly& p);

// Companion-matrix eigenvalues (used as fallback and as an independent oracle in tests).
std::vector<cplx> companion_roots(const Poly& p);

} // namespace qd
