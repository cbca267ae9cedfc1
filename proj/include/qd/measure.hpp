#pragma once
#include <optional>
#include <string>
#include <vector>

#include "qd/quaddiff.hpp"
#include "qd/tracer.hpp"

namespace qd {

// Single-valued branch of sqrt(z q(z)) with cuts along the chords of paired
// branch points ({0} plus roots of q, consecutive pairs after sorting; conjugate
// pairs kept together) and normalization sqrt ~ z^2 + gamma z/2 at infinity.
class SqrtDisc {
  public:
    SqrtDisc(const Poly& q);  // pairs {0, r} automatically
    cplx operator()(cplx z) const;
    const std::vector<std::pair<cplx, cplx>>& pairs() const { return pairs_; }

  private:
    std::vector<std::pair<cplx, cplx>> pairs_;
};

struct SupportArc {
    std::vector<cplx> points;     // oriented
    double signed_mass;           // integral of the density along the arc
    int cp_a, cp_b;
};

struct MeasureSupport {
    QuadDifferential qd;
    std::vector<SupportArc> arcs;
    double total_mass;
    bool flipped;  // true when the global orientation had to be reversed for mass +1
};

struct NoMeasure {
    std::string reason;  // e.g. "degenerate", "three shorts", "short count 4"
};

// Support of the limit measure = the two short trajectories of the (gamma, delta)
// differential. The density along an arc is sqrt(z q(z)) / (2 pi i z) dz restricted
// to the arc, real after orientation fixing; arc masses sum to 1.
std::optional<MeasureSupport> support(cplx gamma, cplx delta, NoMeasure* why = nullptr);

// Density (with respect to arc length) at the arc point nearest to t.
double density(const MeasureSupport& sup, const SqrtDisc& sd, cplx t);

double total_mass(const MeasureSupport& sup);

// Hausdorff distance between a finite point set and the support polylines
// (point-to-segment one way, polyline vertices to nearest point the other).
// Convergence monitor for rescaled eigenpolynomial roots.
double hausdorff_to_support(const std::vector<cplx>& pts, const MeasureSupport& sup);

// C(z) = (2z^2 + gamma z - 2 sqrt(z q(z))) / (4z). Decays like 1/z.
cplx cauchy_closed_form(cplx z, cplx gamma, cplx delta);

// Quadrature of the density against 1/(z-t) over the support.
cplx cauchy_numeric(const MeasureSupport& sup, cplx z, bool* near_support_warning = nullptr);

// z C^2 - (z^2 + gamma z/2) C + (z + delta/4). Note: the delta that annihilates the
// closed form is 4x the discriminant-family delta (the two parameterizations in the
// source equations differ by that factor; verified exactly by the coefficient test).
cplx algebraic_residual(cplx z, cplx C, cplx gamma, cplx delta);

// Coefficient vectors (ascending, degree 4) of the quadratic-formula discriminant
// (z^2+gamma z/2)^2 - 4z(z+delta/4) and of z q(z) for the (gamma, delta) family.
std::vector<cplx> algeq_discriminant_coeffs(cplx gamma, cplx delta);
std::vector<cplx> disc_family_coeffs(cplx gamma, cplx delta);

} // namespace qd
