#pragma once
#include <array>
#include <optional>
#include <vector>

#include "qd/poly.hpp"

namespace qd {

enum class CpKind { Zero, SimplePole, InfinitePole };

struct CriticalPoint {
    CpKind kind;
    cplx z;        // unused for InfinitePole
    int mult;      // zero multiplicity r; 1 for the simple pole; 6 at infinity
    bool degenerate = false;  // pole/zero collision at the origin
};

// The differential -q(z)/z dz^2 with q a monic cubic. Optionally remembers the
// (gamma, delta) parameters when built from the discriminant family
// q(z) = z^3 + g z^2 + ((g^2-16)/4) z - 4 d.
class QuadDifferential {
  public:
    static QuadDifferential from_cubic(const Poly& q);
    static QuadDifferential from_parameters(cplx gamma, cplx delta);
    static QuadDifferential from_apex(cplx a);  // q = (z-1)(z-a)(z-conj a), Im a > 0

    const Poly& q() const { return q_; }
    const std::vector<cplx>& zeros() const { return zeros_; }  // sorted, with repetition
    std::optional<std::pair<cplx, cplx>> params() const { return params_; }
    bool degenerate() const { return degenerate_; }

    cplx q_over_z(cplx z) const { return q_(z) / z; }

  private:
    Poly q_;
    std::vector<cplx> zeros_;
    std::optional<std::pair<cplx, cplx>> params_;
    bool degenerate_ = false;
};

// Rescaling onto the unit-real-root family: for real-coefficient q with one real
// root r > 0 and a conjugate pair, z = r w maps -q(z)/z dz^2 to a positive
// multiple of -q~(w)/w dw^2 with q~ having roots {1, a/r, conj(a)/r}.
struct UnitRootForm {
    double scale;
    cplx apex;
};
UnitRootForm normalize_to_unit_root(const Poly& q);  // throws NotApplicable

// Finite critical points (zeros grouped by multiplicity + the origin pole) and
// the order-6 pole at infinity, in deterministic order.
std::vector<CriticalPoint> critical_points(const QuadDifferential& qd);

// Branch-tracked square root of q(z)/z, normalized v ~ z at infinity.
struct BranchState {
    cplx z;
    cplx v;
    static BranchState at(const QuadDifferential& qd, cplx z0, cplx v0) { (void)qd; return {z0, v0}; }
    // seed with the asymptotic branch (v ~ z); valid for |z| well beyond the zeros
    static BranchState asymptotic(const QuadDifferential& qd, cplx z0);
};

// Continue sqrt(q/z) from state to z (sign by phase continuity; jumps beyond
// pi/2 raise BranchJump). Updates state.
cplx sqrt_q_over_z(const QuadDifferential& qd, cplx z, BranchState& state);

// Departure angles of horizontal trajectories at a finite critical point:
// theta_k = (pi - arg c + 2 pi k)/(r+2) where q(z)/z ~ c (z-z0)^r locally
// (r = -1 at the simple pole, single ray). Sorted ascending in [0, 2pi).
std::vector<double> ray_fan(const CriticalPoint& cp, const QuadDifferential& qd);

// Same for orthogonal trajectories: theta_k = (-arg c + 2 pi k)/(r+2).
std::vector<double> ray_fan_orthogonal(const CriticalPoint& cp, const QuadDifferential& qd);

struct Directions {
    std::array<double, 4> horizontal;  // (2k+1) pi/4
    std::array<double, 4> orthogonal;  // k pi/2
};
Directions d_directions();

// Local factor c of q(z)/z ~ c (z - z0)^r at a finite critical point.
cplx local_factor(const CriticalPoint& cp, const QuadDifferential& qd);

} // namespace qd
