#pragma once
#include <optional>
#include <vector>

#include "qd/quaddiff.hpp"

namespace qd {

enum class EndpointSingularity { None, ZeroOfQ, OriginPole };

// Piecewise-linear integration path. Interior legs must stay clear of critical
// points; integrable endpoint singularities are declared so the quadrature can
// remove them by substitution.
struct PathSpec {
    std::vector<cplx> waypoints;
    EndpointSingularity start = EndpointSingularity::None;
    EndpointSingularity end = EndpointSingularity::None;
};

// Integral of the branch-tracked sqrt(q(t)/t) dt along the path. If no state is
// given the branch is seeded with the principal square root at the start of the
// first leg. Absolute quadrature tolerance 1e-10.
cplx period_integral(const QuadDifferential& qd, const PathSpec& path);
cplx period_integral(const QuadDifferential& qd, const PathSpec& path, BranchState& state);

// (alpha^2 - 4 beta)/8 for monic q = z^3 + alpha z^2 + beta z + c.
// The closed contour integral of sqrt(q/z) around everything equals
// -2 pi i times this (branch v ~ +z), so the half-contour period is -+ i pi times it.
cplx residue_at_infinity(const Poly& q);

// Im(alpha^2 - 4 beta); zero is necessary for a pair of conjugate-connecting shorts.
double necessary_condition(const Poly& q);

PathSpec make_circle_path(double radius, int legs = 64);

} // namespace qd
