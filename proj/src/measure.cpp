#include "qd/measure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>

#include "qd/quadrature.hpp"
#include "qd/roots.hpp"

namespace qd {

namespace {

const cplx kTwoPiI(0.0, 2.0 * PI);

double chord_dist(cplx z, cplx a, cplx b) {
    const cplx ab = b - a;
    const double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(z - a);
    const double u = std::clamp(((z - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
    return std::abs(z - (a + u * ab));
}

// Drop repeated vertices (they have no tangent); make sure at least one interior
// vertex exists so the two endpoint chords are distinct.
std::vector<cplx> compress(const std::vector<cplx>& pts) {
    double scale = 0.0;
    for (cplx p : pts) scale = std::max(scale, std::abs(p));
    const double tol = 1e-14 * std::max(1.0, scale);
    std::vector<cplx> out;
    out.reserve(pts.size());
    for (cplx p : pts)
        if (out.empty() || std::abs(p - out.back()) > tol) out.push_back(p);
    if (out.size() == 2) out.insert(out.begin() + 1, 0.5 * (out[0] + out[1]));
    return out;
}

// Push interior vertices to the left of the oriented polyline by a ramped offset.
// The square root is single-valued in the thin sliver between the arc and the
// bent path (its cuts run along the arc's own chord), so integrating along the
// bent path gives the one-sided boundary integral without ever evaluating on a
// cut. Endpoints stay pinned; the ramp keeps the path inside the slit plane.
std::vector<cplx> bend_left(const std::vector<cplx>& a) {
    const int n = static_cast<int>(a.size());
    if (n < 3) return a;
    std::vector<double> s(n, 0.0);
    for (int i = 1; i < n; ++i) s[i] = s[i - 1] + std::abs(a[i] - a[i - 1]);
    const double total_len = s[n - 1];
    if (total_len == 0.0) return a;
    const double h0 = std::min(1e-6 * std::max(1.0, total_len), 0.02 * total_len);
    const double ramp_len = 0.05 * total_len;
    std::vector<cplx> b(a);
    for (int i = 1; i + 1 < n; ++i) {
        const cplx t1 = a[i] - a[i - 1];
        const cplx t2 = a[i + 1] - a[i];
        cplx tm = t1 / std::abs(t1) + t2 / std::abs(t2);
        if (std::abs(tm) < 1e-12) tm = t1 / std::abs(t1);
        const cplx left = cplx(0.0, 1.0) * tm / std::abs(tm);
        const double ramp = std::min(1.0, std::min(s[i], total_len - s[i]) / ramp_len);
        b[i] = a[i] + (h0 * ramp) * left;
    }
    return b;
}

// Chord-by-chord quadrature along a polyline. g may blow up like an inverse
// square root at the first point and vanish like a square root at the last (or
// vice versa); the u^2 substitution on the two terminal chords absorbs both.
// Interior chords are short and smooth (the vertices come from an adaptive
// tracer), so a single 32-node panel per chord is already at roundoff.
cplx polyline_integral(const std::vector<cplx>& pts, const std::function<cplx(cplx)>& g) {
    cplx total(0.0);
    const int n = static_cast<int>(pts.size());
    for (int i = 0; i + 1 < n; ++i) {
        const cplx z0 = pts[i];
        const cplx dz = pts[i + 1] - pts[i];
        if (dz == cplx(0.0)) continue;
        if (i == 0) {
            total += adaptive_gl([&](double u) { return g(z0 + (u * u) * dz) * (2.0 * u) * dz; },
                                 0.0, 1.0, 1e-11, 20)
                         .value;
        } else if (i + 2 == n) {
            // anchor at the far (singular) endpoint: z0 + (1-u^2) dz cancels
            // catastrophically for small u, zend - u^2 dz is exact there
            const cplx zend = pts[i + 1];
            total += adaptive_gl([&](double u) { return g(zend - (u * u) * dz) * (2.0 * u) * dz; },
                                 0.0, 1.0, 1e-11, 20)
                         .value;
        } else {
            total += gl_panel([&](double u) { return g(z0 + u * dz) * dz; }, 0.0, 1.0);
        }
    }
    return total;
}

cplx arc_mass(const SqrtDisc& sd, const std::vector<cplx>& pts) {
    const std::vector<cplx> path = bend_left(compress(pts));
    return polyline_integral(path, [&](cplx t) { return sd(t) / (kTwoPiI * t); });
}

struct NearestPoint {
    cplx point{};
    cplx tangent{};  // unit, along the arc orientation
    double dist = std::numeric_limits<double>::infinity();
};

NearestPoint nearest_on_support(const MeasureSupport& sup, cplx t) {
    NearestPoint best;
    for (const auto& arc : sup.arcs) {
        const auto& p = arc.points;
        for (size_t i = 0; i + 1 < p.size(); ++i) {
            const cplx ab = p[i + 1] - p[i];
            const double len2 = std::norm(ab);
            if (len2 == 0.0) continue;
            const double u = std::clamp(((t - p[i]) * std::conj(ab)).real() / len2, 0.0, 1.0);
            const cplx proj = p[i] + u * ab;
            const double d = std::abs(t - proj);
            if (d < best.dist) best = {proj, ab / std::sqrt(len2), d};
        }
    }
    return best;
}

// Boundary value from the left of the oriented arc. One Richardson step removes
// the O(h) part of the offset error.
cplx left_limit(const SqrtDisc& sd, cplx at, cplx tangent) {
    const double h = 1e-8;
    const cplx off = cplx(0.0, 1.0) * tangent;
    return 2.0 * sd(at + (0.5 * h) * off) - sd(at + h * off);
}

}  // namespace

SqrtDisc::SqrtDisc(const Poly& q) {
    if (q.degree() != 3) throw DegreeError("SqrtDisc: monic cubic expected");
    std::vector<cplx> pts = poly_roots(q);
    pts.push_back(cplx(0.0));
    double scale = 1.0;
    for (cplx p : pts) scale = std::max(scale, std::abs(p));
    const double rtol = 1e-9 * scale;

    std::vector<cplx> on_axis, off_axis;
    for (cplx p : pts) {
        if (std::abs(p.imag()) <= rtol)
            on_axis.push_back(cplx(p.real(), 0.0));
        else
            off_axis.push_back(p);
    }
    const auto by_real = [](cplx a, cplx b) { return a.real() < b.real(); };
    if (on_axis.size() == 4) {
        std::sort(on_axis.begin(), on_axis.end(), by_real);
        pairs_ = {{on_axis[0], on_axis[1]}, {on_axis[2], on_axis[3]}};
    } else if (on_axis.size() == 2 && off_axis.size() == 2 &&
               std::abs(off_axis[0] - std::conj(off_axis[1])) <= rtol) {
        // real pair spans the axis; the conjugate pair stays together so the
        // configuration (and the branch) is symmetric under conjugation
        std::sort(on_axis.begin(), on_axis.end(), by_real);
        pairs_ = {{on_axis[0], on_axis[1]}, {off_axis[0], off_axis[1]}};
    } else {
        // generic complex configuration: shortest total chord length, fixed
        // tie-break via the deterministic lexicographic point order
        sort_lex(pts);
        static const int kMatch[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
        int best = 0;
        double best_len = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 3; ++k) {
            const double len = std::abs(pts[kMatch[k][0]] - pts[kMatch[k][1]]) +
                               std::abs(pts[kMatch[k][2]] - pts[kMatch[k][3]]);
            if (len < best_len * (1.0 - 1e-12)) {
                best_len = len;
                best = k;
            }
        }
        pairs_ = {{pts[kMatch[best][0]], pts[kMatch[best][1]]},
                  {pts[kMatch[best][2]], pts[kMatch[best][3]]}};
    }
}

cplx SqrtDisc::operator()(cplx z) const {
    // product over pairs of (z - c) sqrt(1 - (d/(z-c))^2): each factor is cut
    // exactly on the chord [p, q] and behaves like (z - c) at infinity, so the
    // product matches z^2 + gamma z / 2 + O(1) far out.
    cplx out(1.0);
    for (const auto& pr : pairs_) {
        const cplx c = 0.5 * (pr.first + pr.second);
        const cplx d = 0.5 * (pr.first - pr.second);
        cplx zc = z - c;
        if (d == cplx(0.0)) {
            out *= zc;
            continue;
        }
        const double guard = 1e-12 * (std::abs(d) + 1.0);
        if (std::abs(zc) < guard) zc += guard * cplx(0.0, 1.0) * (d / std::abs(d));
        const cplx w = d / zc;
        out *= zc * std::sqrt(cplx(1.0) - w * w);
    }
    return out;
}

std::optional<MeasureSupport> support(cplx gamma, cplx delta, NoMeasure* why) {
    const auto fail = [&](std::string reason) {
        if (why) why->reason = std::move(reason);
        return std::optional<MeasureSupport>();
    };
    const QuadDifferential qd = QuadDifferential::from_parameters(gamma, delta);
    if (qd.degenerate()) return fail("degenerate");
    const CriticalGraph g = build_critical_graph(qd);
    if (!g.complete) return fail("incomplete graph");
    if (g.shorts.size() == 3) return fail("three shorts");
    if (g.shorts.size() != 2) return fail("short count " + std::to_string(g.shorts.size()));
    for (const auto& s : g.shorts)
        if (!s.unbroken || s.points.size() < 2) return fail("broken short");

    const SqrtDisc sd(qd.q());
    MeasureSupport sup;
    sup.qd = qd;
    sup.flipped = false;
    double total = 0.0;
    for (const auto& s : g.shorts) {
        const cplx m = arc_mass(sd, s.points);
        if (std::abs(m.imag()) > 1e-8 * std::max(1.0, std::abs(m)))
            return fail("density not real on an arc");
        sup.arcs.push_back({s.points, m.real(), s.cp_a, s.cp_b});
        total += m.real();
    }
    if (total < 0.0) {
        // the left-of-arc branch gave mass -1; flip the measure's sign globally
        sup.flipped = true;
        total = -total;
        for (auto& a : sup.arcs) a.signed_mass = -a.signed_mass;
    }
    sup.total_mass = total;
    return sup;
}

double density(const MeasureSupport& sup, const SqrtDisc& sd, cplx t) {
    if (sup.arcs.empty()) throw DomainError("density: empty support");
    const NearestPoint np = nearest_on_support(sup, t);
    if (std::abs(np.point) < 1e-9)
        throw DomainError("density: unbounded at the origin endpoint");
    cplx rho = left_limit(sd, np.point, np.tangent) * np.tangent / (kTwoPiI * np.point);
    if (sup.flipped) rho = -rho;
    return rho.real();
}

double total_mass(const MeasureSupport& sup) {
    double total = 0.0;
    for (const auto& a : sup.arcs) total += a.signed_mass;
    return total;
}

double hausdorff_to_support(const std::vector<cplx>& pts, const MeasureSupport& sup) {
    if (pts.empty()) throw DomainError("hausdorff_to_support: empty point set");
    double d_ps = 0.0;
    for (cplx p : pts) d_ps = std::max(d_ps, nearest_on_support(sup, p).dist);
    double d_sp = 0.0;
    for (const auto& arc : sup.arcs)
        for (cplx v : arc.points) {
            double best = std::numeric_limits<double>::infinity();
            for (cplx p : pts) best = std::min(best, std::abs(v - p));
            d_sp = std::max(d_sp, best);
        }
    return std::max(d_ps, d_sp);
}

cplx cauchy_closed_form(cplx z, cplx gamma, cplx delta) {
    if (std::abs(z) < 1e-12) throw DomainError("cauchy_closed_form: z = 0");
    const QuadDifferential qd = QuadDifferential::from_parameters(gamma, delta);
    const SqrtDisc sd(qd.q());
    for (const auto& pr : sd.pairs())
        if (chord_dist(z, pr.first, pr.second) < 1e-10 * (1.0 + std::abs(z)))
            throw DomainError("cauchy_closed_form: z on a branch cut");
    return (2.0 * z * z + gamma * z - 2.0 * sd(z)) / (4.0 * z);
}

cplx cauchy_numeric(const MeasureSupport& sup, cplx z, bool* near_support_warning) {
    if (near_support_warning) *near_support_warning = false;
    if (sup.arcs.empty()) throw DomainError("cauchy_numeric: empty support");
    const NearestPoint np = nearest_on_support(sup, z);
    if (np.dist <= 1e-9 * (1.0 + std::abs(z)) || std::abs(z) < 1e-9)
        throw DomainError("cauchy_numeric: z on the support");
    if (near_support_warning && np.dist < 1e-3) *near_support_warning = true;
    const SqrtDisc sd(sup.qd.q());
    const double sign = sup.flipped ? -1.0 : 1.0;
    cplx total(0.0);
    for (const auto& arc : sup.arcs) {
        const std::vector<cplx> path = bend_left(compress(arc.points));
        total += polyline_integral(path, [&](cplx t) { return sd(t) / (kTwoPiI * t * (z - t)); });
    }
    return sign * total;
}

cplx algebraic_residual(cplx z, cplx C, cplx gamma, cplx delta) {
    return z * C * C - (z * z + 0.5 * gamma * z) * C + (z + 0.25 * delta);
}

std::vector<cplx> algeq_discriminant_coeffs(cplx gamma, cplx delta) {
    const cplx half_g = 0.5 * gamma;
    return {cplx(0.0), -delta, half_g * half_g - 4.0, gamma, cplx(1.0)};
}

std::vector<cplx> disc_family_coeffs(cplx gamma, cplx delta) {
    return {cplx(0.0), -4.0 * delta, (gamma * gamma - 16.0) / 4.0, gamma, cplx(1.0)};
}

}  // namespace qd
