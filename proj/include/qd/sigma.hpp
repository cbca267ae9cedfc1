#pragma once
#include <vector>

#include "qd/quaddiff.hpp"

namespace qd {

// S(a) = Re \int_0^a sqrt((t-1)(t-a)(t-conj a)/t) dt along [0,x] then [x, x+iy],
// evaluated as the sum of two real integrals:
//   F(x,y): the horizontal leg (nonzero only off [0,1]),
//   G(x,y) = -y^2 \int_0^1 sqrt(1-t^2) Im sqrt(1 - 1/(x+ity)) dt: the vertical leg.
double sigma_value(cplx a);
double sigma_F(double x, double y);
double sigma_G(double x, double y);

enum class Region { Omega1, Sigma, Omega2 };
const char* region_name(Region r);

struct Classification {
    Region region;
    double S;        // calibrated sign: positive on Omega1
    double margin;   // |S|
};

// Region of the apex. |S| <= band means Sigma; otherwise Omega2 iff Re a <= 1 or
// S < 0. The sign convention is calibrated once against a known Omega1 interior
// point, so a transcription sign slip in F/G cannot silently flip the map.
Classification classify_apex(cplx a, double sigma_band = 1e-6);

struct SigmaCurve {
    std::vector<cplx> points;     // from z=1 outward, upper half-plane branch
    std::vector<double> arclen;
    std::vector<double> residual; // S at each accepted point
    bool complete = true;         // false if the continuation aborted early
    double tangent_deg_at_origin = 0.0;  // measured tangent angle of the locus at z->1
    double far_arg_deg = 0.0;            // arg(z) at the last point, degrees
};

// Predictor-corrector continuation of S=0 starting at z=1, corrected in x at
// fixed y (dS/dx > 0 in the region swept). Every accepted point has |S| <= 1e-8.
SigmaCurve trace_sigma(double max_abs_z, double step = 0.5);

// Finite-difference dS/dx; positive on the traced region.
double sigma_partial_derivative_check(cplx a, double h = 1e-5);

} // namespace qd
