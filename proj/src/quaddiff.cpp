#include "qd/quaddiff.hpp"

#include <algorithm>
#include <cmath>

#include "qd/roots.hpp"

namespace qd {
namespace {

// Roots closer than this collapse into one multiple zero. A numerically found
// double root is only accurate to about sqrt(machine epsilon), so the cluster
// radius must sit well above that.
constexpr double kMultTol = 1e-6;

} // namespace

QuadDifferential QuadDifferential::from_cubic(const Poly& q) {
    if (q.degree() != 3) throw DegreeError("quad differential numerator must be cubic");
    QuadDifferential qd;
    qd.q_ = q * (1.0 / q.leading());  // monic
    qd.zeros_ = cubic_roots(qd.q_);
    bool repeated = false;
    for (size_t i = 0; i + 1 < qd.zeros_.size(); ++i)
        if (std::abs(qd.zeros_[i] - qd.zeros_[i + 1]) < kMultTol) repeated = true;
    bool at_origin = std::abs(qd.q_(cplx(0.0))) < kMultTol;
    qd.degenerate_ = repeated || at_origin;
    return qd;
}

QuadDifferential QuadDifferential::from_parameters(cplx gamma, cplx delta) {
    std::vector<cplx> c = {-4.0 * delta, (gamma * gamma - 16.0) / 4.0, gamma, cplx(1.0)};
    QuadDifferential qd = from_cubic(Poly(std::move(c)));
    qd.params_ = std::make_pair(gamma, delta);
    return qd;
}

QuadDifferential QuadDifferential::from_apex(cplx a) {
    if (!(a.imag() > 0.0))
        throw DomainError("apex must lie in the open upper half-plane");
    return from_cubic(Poly::from_roots({cplx(1.0), a, std::conj(a)}));
}

UnitRootForm normalize_to_unit_root(const Poly& q) {
    if (q.degree() != 3) throw DegreeError("normalize_to_unit_root: cubic expected");
    if (!q.real_coeffs(1e-12)) throw NotApplicable("coefficients are not real");
    auto roots = cubic_roots(q);
    std::vector<cplx> real_roots, complex_roots;
    for (cplx r : roots) {
        double scale = std::max(1.0, std::abs(r));
        if (std::abs(r.imag()) < 1e-10 * scale)
            real_roots.push_back(cplx(r.real(), 0.0));
        else
            complex_roots.push_back(r);
    }
    if (real_roots.size() != 1) throw NotApplicable("needs exactly one real root");
    double r = real_roots[0].real();
    if (r <= 0.0) throw NotApplicable("real root is not positive");
    cplx a = complex_roots[0].imag() > 0 ? complex_roots[0] : complex_roots[1];
    return {r, a / r};
}

std::vector<CriticalPoint> critical_points(const QuadDifferential& qd) {
    std::vector<CriticalPoint> cps;
    const auto& zs = qd.zeros();
    size_t i = 0;
    while (i < zs.size()) {
        size_t j = i;
        while (j + 1 < zs.size() && std::abs(zs[j + 1] - zs[i]) < kMultTol) ++j;
        CriticalPoint cp{CpKind::Zero, zs[i], static_cast<int>(j - i + 1), false};
        if (std::abs(cp.z) < kMultTol) cp.degenerate = true;  // merged with the pole
        cps.push_back(cp);
        i = j + 1;
    }
    if (std::abs(qd.q()(cplx(0.0))) >= kMultTol)
        cps.push_back({CpKind::SimplePole, cplx(0.0), 1, false});
    cps.push_back({CpKind::InfinitePole, cplx(0.0), 6, false});
    return cps;
}

BranchState BranchState::asymptotic(const QuadDifferential& qd, cplx z0) {
    cplx v = std::sqrt(qd.q_over_z(z0));
    if (std::real(v * std::conj(z0)) < 0.0) v = -v;  // align with z
    return {z0, v};
}

cplx sqrt_q_over_z(const QuadDifferential& qd, cplx z, BranchState& state) {
    cplx v = std::sqrt(qd.q_over_z(z));
    if (std::abs(v - state.v) > std::abs(v + state.v)) v = -v;
    // after sign selection the phase should move less than pi/2 per step
    if (state.v != cplx(0.0) && v != cplx(0.0)) {
        double dphi = std::abs(std::arg(v / state.v));
        if (dphi > PI / 2 + 1e-9)
            throw BranchJump("step crossed a branch point of sqrt(q/z)");
    }
    state.z = z;
    state.v = v;
    return v;
}

cplx local_factor(const CriticalPoint& cp, const QuadDifferential& qd) {
    if (cp.kind == CpKind::InfinitePole)
        throw DomainError("local_factor: finite critical point expected");
    if (cp.kind == CpKind::SimplePole) return qd.q()(cplx(0.0));
    // deflate the zero cp.mult times, evaluate the cofactor exactly at the root
    Poly p = qd.q();
    for (int k = 0; k < cp.mult; ++k) p = p.deflate(cp.z);
    return p(cp.z) / cp.z;
}

static std::vector<double> fan(const CriticalPoint& cp, const QuadDifferential& qd,
                               double numerator_offset) {
    if (cp.kind == CpKind::InfinitePole)
        throw DomainError("ray_fan: use d_directions for the pole at infinity");
    cplx c = local_factor(cp, qd);
    int r = cp.kind == CpKind::SimplePole ? -1 : cp.mult;
    int count = r + 2;
    std::vector<double> angles(count);
    for (int k = 0; k < count; ++k)
        angles[k] = wrap_2pi((numerator_offset - std::arg(c) + 2 * PI * k) / (r + 2));
    std::sort(angles.begin(), angles.end());
    return angles;
}

std::vector<double> ray_fan(const CriticalPoint& cp, const QuadDifferential& qd) {
    return fan(cp, qd, PI);
}

std::vector<double> ray_fan_orthogonal(const CriticalPoint& cp, const QuadDifferential& qd) {
    return fan(cp, qd, 0.0);
}

Directions d_directions() {
    Directions d;
    for (int k = 0; k < 4; ++k) {
        d.horizontal[k] = (2 * k + 1) * PI / 4;
        d.orthogonal[k] = k * PI / 2;
    }
    return d;
}

} // namespace qd
