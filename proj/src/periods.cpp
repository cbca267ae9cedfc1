#include "qd/periods.hpp"

#include <algorithm>
#include <cmath>

#include "qd/quadrature.hpp"

namespace qd {

namespace {

// Branch skeleton along one straight leg: parameter-sorted samples of the
// continuously-tracked sqrt(q/z). The quadrature evaluator snaps the principal
// square root to the nearest sample, which keeps the integrand single-valued
// no matter in what order the adaptive rule probes the leg.
struct LegSkeleton {
    std::vector<double> s;
    std::vector<cplx> v;

    cplx aligned(const QuadDifferential& qd, cplx z, double sp) const {
        cplx w = std::sqrt(qd.q_over_z(z));
        auto it = std::lower_bound(s.begin(), s.end(), sp);
        std::size_t i = static_cast<std::size_t>(it - s.begin());
        if (i == s.size()) --i;
        if (i > 0 && sp - s[i - 1] < s[i] - sp) --i;
        return (std::abs(w - v[i]) <= std::abs(w + v[i])) ? w : -w;
    }
};

double phase_gap(cplx a, cplx b) {
    if (a == cplx(0.0) || b == cplx(0.0)) return 0.0;
    return std::abs(std::arg(b / a));
}

cplx align_to(cplx w, cplx ref) {
    if (ref == cplx(0.0)) return w;
    return (std::abs(w - ref) <= std::abs(w + ref)) ? w : -w;
}

LegSkeleton build_skeleton(const QuadDifferential& qd, cplx w0, cplx w1,
                           bool skip_start, bool skip_end, cplx v_ref) {
    LegSkeleton sk;
    const int n0 = 65;
    sk.s.reserve(n0);
    for (int j = 0; j < n0; ++j) sk.s.push_back(double(j) / (n0 - 1));
    // tiny inset: a start point exactly on the principal-branch cut (q/z a
    // negative real) would otherwise seed a side chosen by the sign of zero
    sk.s.front() = skip_start ? 1e-5 : 1e-9;
    if (skip_end) sk.s.back() = 1.0 - 1e-5;

    cplx prev = v_ref;
    for (double sp : sk.s) {
        cplx w = align_to(std::sqrt(qd.q_over_z(w0 + sp * (w1 - w0))), prev);
        sk.v.push_back(w);
        prev = w;
    }

    // Refine until adjacent samples stay within a quarter turn of each other,
    // so the nearest-sample sign snap is unambiguous everywhere on the leg.
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i + 1 < sk.s.size(); ++i) {
            if (phase_gap(sk.v[i], sk.v[i + 1]) <= PI / 4) continue;
            if (sk.s[i + 1] - sk.s[i] < 1e-12)
                throw BranchJump("square-root branch will not stabilize along integration leg");
            double sm = 0.5 * (sk.s[i] + sk.s[i + 1]);
            cplx wm = align_to(std::sqrt(qd.q_over_z(w0 + sm * (w1 - w0))), sk.v[i]);
            sk.s.insert(sk.s.begin() + i + 1, sm);
            sk.v.insert(sk.v.begin() + i + 1, wm);
            changed = true;
            if (sk.s.size() > (1u << 15))
                throw BranchJump("square-root branch will not stabilize along integration leg");
            ++i;
        }
    }
    return sk;
}

double segment_distance(cplx p, cplx a, cplx b) {
    cplx d = b - a;
    double L2 = std::norm(d);
    if (L2 == 0.0) return std::abs(p - a);
    double t = std::clamp(((p - a) * std::conj(d)).real() / L2, 0.0, 1.0);
    return std::abs(p - (a + t * d));
}

struct Leg {
    cplx w0, w1;
    EndpointSingularity fs = EndpointSingularity::None;
    EndpointSingularity fe = EndpointSingularity::None;
};

std::vector<Leg> expand_legs(const PathSpec& path) {
    const auto& w = path.waypoints;
    std::vector<Leg> legs;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) legs.push_back({w[i], w[i + 1], {}, {}});
    legs.front().fs = path.start;
    legs.back().fe = path.end;
    if (legs.size() == 1 && legs[0].fs != EndpointSingularity::None &&
        legs[0].fe != EndpointSingularity::None) {
        // one leg with singular ends on both sides: split so each half has one
        cplx mid = 0.5 * (legs[0].w0 + legs[0].w1);
        Leg a{legs[0].w0, mid, legs[0].fs, EndpointSingularity::None};
        Leg b{mid, legs[0].w1, EndpointSingularity::None, legs[0].fe};
        legs = {a, b};
    }
    return legs;
}

void check_clearance(const QuadDifferential& qd, const std::vector<Leg>& legs) {
    std::vector<cplx> cps = qd.zeros();
    cps.push_back(cplx(0.0));
    const double kMin = 1e-8;
    for (std::size_t li = 0; li < legs.size(); ++li) {
        for (const cplx& cp : cps) {
            // a flagged terminal endpoint may sit on its critical point; a
            // straight leg cannot re-approach its own endpoint, so skip the pair
            if (li == 0 && legs[li].fs != EndpointSingularity::None &&
                std::abs(cp - legs[li].w0) <= kMin)
                continue;
            if (li + 1 == legs.size() && legs[li].fe != EndpointSingularity::None &&
                std::abs(cp - legs[li].w1) <= kMin)
                continue;
            if (segment_distance(cp, legs[li].w0, legs[li].w1) < kMin)
                throw PathTooClose("integration path passes within 1e-8 of a critical point");
        }
    }
}

cplx integrate_leg(const QuadDifferential& qd, const Leg& leg, const LegSkeleton& sk,
                   double tol) {
    cplx dz = leg.w1 - leg.w0;
    auto f = [&](double sp) { return sk.aligned(qd, leg.w0 + sp * dz, sp) * dz; };
    if (leg.fs != EndpointSingularity::None) {
        // s = u^2 removes both integrable endpoint types: sqrt-zero and 1/sqrt pole
        auto g = [&](double u) { return f(u * u) * (2.0 * u); };
        return adaptive_gl(g, 0.0, 1.0, tol).value;
    }
    if (leg.fe != EndpointSingularity::None) {
        auto g = [&](double u) { return f(1.0 - u * u) * (2.0 * u); };
        return adaptive_gl(g, 0.0, 1.0, tol).value;
    }
    return adaptive_gl(f, 0.0, 1.0, tol).value;
}

}  // namespace

cplx period_integral(const QuadDifferential& qd, const PathSpec& path) {
    BranchState st{path.waypoints.empty() ? cplx(0.0) : path.waypoints.front(), cplx(0.0)};
    return period_integral(qd, path, st);
}

cplx period_integral(const QuadDifferential& qd, const PathSpec& path, BranchState& state) {
    if (path.waypoints.size() < 2) throw DomainError("integration path needs two or more waypoints");
    std::vector<Leg> legs = expand_legs(path);
    check_clearance(qd, legs);

    double tol = 1e-10 / double(legs.size());
    cplx total(0.0);
    cplx v_ref = state.v;
    for (const Leg& leg : legs) {
        LegSkeleton sk = build_skeleton(qd, leg.w0, leg.w1,
                                        leg.fs != EndpointSingularity::None,
                                        leg.fe != EndpointSingularity::None, v_ref);
        total += integrate_leg(qd, leg, sk, tol);
        v_ref = sk.v.back();
    }

    state.z = path.waypoints.back();
    if (path.end == EndpointSingularity::ZeroOfQ)
        state.v = cplx(0.0);
    else if (path.end == EndpointSingularity::None)
        state.v = align_to(std::sqrt(qd.q_over_z(state.z)), v_ref);
    else
        state.v = v_ref;  // origin pole: report the last interior branch value
    return total;
}

cplx residue_at_infinity(const Poly& q) {
    if (q.degree() != 3) throw DegreeError("residue formula needs a cubic");
    cplx lead = q.coeff(3);
    cplx alpha = q.coeff(2) / lead;
    cplx beta = q.coeff(1) / lead;
    return (alpha * alpha - 4.0 * beta) / 8.0;
}

double necessary_condition(const Poly& q) {
    cplx r = residue_at_infinity(q);
    return 8.0 * r.imag();
}

PathSpec make_circle_path(double radius, int legs) {
    PathSpec p;
    for (int k = 0; k <= legs; ++k) {
        double th = 2.0 * PI * double(k) / double(legs);
        p.waypoints.push_back(radius * std::exp(cplx(0.0, th)));
    }
    return p;
}

}  // namespace qd
