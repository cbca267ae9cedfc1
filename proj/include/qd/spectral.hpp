#pragma once
#include <vector>

#include "qd/poly.hpp"
#include "qd/trimatrix.hpp"

namespace qd {

// Restriction of L = -4z d^2/dz^2 + (4z^2 + 2 g sqrt(m) z - 2) d/dz - (4mz - g sqrt(m)/2)
// to polynomials of degree <= m. L preserves that space: the would-be overflow
// coefficient 4(m-m) vanishes identically.
struct SpectralProblem {
    int m;
    double gamma;
};

struct SpectralSolution {
    SpectralProblem problem;
    std::vector<cplx> eigenvalues;            // sorted (real, imag)
    std::vector<std::vector<cplx>> eigenpolys; // monic coefficient vectors, ascending
    std::vector<std::vector<cplx>> roots;      // per eigenpolynomial, sorted lex
    bool defective_warning = false;
};

struct RootMeasure {
    std::vector<cplx> points;  // roots / sqrt(m)
    double weight;             // uniform, 1/deg
};

TriMatrix operator_matrix(const SpectralProblem& p);

// Full eigensolve; eigenvectors read as polynomial coefficients, normalized monic,
// roots extracted and refined (see below).
SpectralSolution spectrum(const SpectralProblem& p);

// Residual of 4zm C^2 - (4z^2 + 2 g sqrt(m) z - 2) C + (4mz - g sqrt(m)/2 + lambda)/m + 4z C'
// with C = q'/(m q); zero for true eigenpairs away from roots of q.
cplx riccati_residual(const std::vector<cplx>& q_coeffs, cplx lambda, int m, double gamma,
                      cplx z);

RootMeasure rescaled_root_measure(const SpectralSolution& sol, int k);

// P'(z) / (deg P * P(z)) — the Cauchy transform of the root-counting measure.
cplx cauchy_of_roots(const Poly& p, cplx z);

// Equilibrium refinement of rescaled roots x_i = z_i/sqrt(m): at a simple root the
// eigenvalue equation forces sum_{j!=i} 1/(x_i-x_j) = m x_i/2 + gamma m/4 - 1/(4 x_i).
// Newton on this system recovers full double accuracy where coefficient-based root
// extraction is hopeless (m ~ 40+). Returns false (leaving x untouched) if the
// system is near-singular for this configuration.
bool equilibrium_polish(std::vector<cplx>& x, int m, double gamma);

struct DeltaRow {
    int m;
    cplx lambda;
    double scaled_32;   // Re lambda / m^{3/2}
    double scaled_43;   // Re lambda / m^{4/3}
    double diff_32;     // successive difference (0 for the first row)
    double diff_43;
};
struct DeltaEstimates {
    std::vector<DeltaRow> rows;
    int stabilizing_exponent_num = 3, stabilizing_exponent_den = 2;  // which scaling settles
    double delta_hat;  // last stabilized scaling / 4: the discriminant-family delta
};

// selector: index from the top of the (real,imag)-sorted spectrum; 0 = largest.
DeltaEstimates delta_estimates(const std::vector<int>& ms, double gamma, int selector = 0);

} // namespace qd
