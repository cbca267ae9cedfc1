#pragma once
#include <functional>

#include "qd/common.hpp"

namespace qd {

// Adaptive Gauss-Legendre quadrature, 32-node panels, recursive bisection on the
// whole-vs-halves error estimate. Integrand is complex-valued over a real parameter.
struct QuadResult {
    cplx value;
    double err_estimate;
    bool converged;
};

QuadResult adaptive_gl(const std::function<cplx(double)>& f, double a, double b,
                       double abs_tol, int max_depth = 32);

// Plain single-panel rule (used for cheap per-chord integrals along dense polylines).
cplx gl_panel(const std::function<cplx(double)>& f, double a, double b, int nodes = 32);

} // namespace qd
