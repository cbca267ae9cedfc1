#include "qd/tracer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "qd/quadrature.hpp"

namespace qd {

namespace {

cplx align_to(cplx w, cplx ref) {
    if (ref == cplx(0.0)) return w;
    return (std::abs(w - ref) <= std::abs(w + ref)) ? w : -w;
}

// unit tangent of the trajectory field: i sigma conj(v)/|v| (horizontal) keeps
// v dz purely imaginary; the orthogonal field drops the factor i
cplx field(cplx v, int sigma, TraceMode mode) {
    cplx t = std::conj(v) / std::abs(v);
    return mode == TraceMode::Horizontal ? cplx(0.0, 1.0) * double(sigma) * t
                                         : double(sigma) * t;
}

double point_segment_distance(cplx p, cplx a, cplx b, double* tbest = nullptr) {
    cplx d = b - a;
    double L2 = std::norm(d);
    double t = L2 == 0.0 ? 0.0 : std::clamp(((p - a) * std::conj(d)).real() / L2, 0.0, 1.0);
    if (tbest) *tbest = t;
    return std::abs(p - (a + t * d));
}

struct StepResult {
    cplx z5;       // 5th-order proposal
    double err;    // embedded 4th-order error estimate
    bool branch_ok;
};

// Dormand-Prince 5(4) step; stage branch signs are aligned to the step-start v.
StepResult dp_step(const QuadDifferential& qd, cplx z, cplx v0, int sigma, TraceMode mode,
                   double h) {
    static const double A[6][6] = {
        {},
        {1.0 / 5},
        {3.0 / 40, 9.0 / 40},
        {44.0 / 45, -56.0 / 15, 32.0 / 9},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    };
    static const double B5[7] = {35.0 / 384,     0.0,        500.0 / 1113, 125.0 / 192,
                                 -2187.0 / 6784, 11.0 / 84,  0.0};
    static const double B4[7] = {5179.0 / 57600,    0.0,          7571.0 / 16695, 393.0 / 640,
                                 -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

    cplx k[7];
    k[0] = field(v0, sigma, mode);
    StepResult out{z, 0.0, true};
    for (int s = 1; s < 6; ++s) {
        cplx zs = z;
        for (int j = 0; j < s; ++j) zs += h * A[s][j] * k[j];
        cplx vs = align_to(std::sqrt(qd.q_over_z(zs)), v0);
        if (std::abs(std::arg(vs / v0)) > PI / 2 + 1e-9) {
            out.branch_ok = false;
            return out;
        }
        k[s] = field(vs, sigma, mode);
    }
    cplx z5 = z, z4 = z;
    for (int s = 0; s < 6; ++s) {
        z5 += h * B5[s] * k[s];
        z4 += h * B4[s] * k[s];
    }
    // 7th stage evaluated at z5 (FSAL position) completes the 4th-order weight
    cplx v6 = align_to(std::sqrt(qd.q_over_z(z5)), v0);
    if (std::abs(std::arg(v6 / v0)) > PI / 2 + 1e-9) {
        out.branch_ok = false;
        return out;
    }
    z4 += h * B4[6] * field(v6, sigma, mode);
    out.z5 = z5;
    out.err = std::abs(z5 - z4);
    return out;
}

std::vector<cplx> finite_cp_locations(const QuadDifferential& qd) {
    std::vector<cplx> pts = qd.zeros();
    pts.push_back(cplx(0.0));
    return pts;
}

double nearest_cp_distance(const std::vector<cplx>& cps, cplx z) {
    double d = 1e300;
    for (const cplx& c : cps) d = std::min(d, std::abs(z - c));
    return d;
}

// independent per-chord quadrature of w = int sqrt(q/z) dz along the polyline;
// fills the conserved-coordinate drift and the monotonicity flag
void fill_phase_diagnostics(const QuadDifferential& qd, TrajectorySegment& seg, int sigma,
                            cplx v_init) {
    if (seg.points.size() < 2) return;
    cplx w(0.0);
    cplx vref = align_to(std::sqrt(qd.q_over_z(seg.points.front() +
                                               1e-9 * (seg.points[1] - seg.points.front()))),
                         v_init);
    double drift = 0.0;
    bool monotone = true;
    double flow_prev = 0.0;
    for (std::size_t i = 0; i + 1 < seg.points.size(); ++i) {
        cplx a = seg.points[i], b = seg.points[i + 1];
        cplx chord = b - a;
        if (chord == cplx(0.0)) continue;
        cplx vr = vref;
        auto f = [&](double t) {
            cplx v = align_to(std::sqrt(qd.q_over_z(a + t * chord)), vr);
            vr = v;
            return v * chord;
        };
        w += gl_panel(f, 0.0, 1.0, 16);
        vref = vr;
        double conserved = seg.mode == TraceMode::Horizontal ? w.real() : w.imag();
        double flow = seg.mode == TraceMode::Horizontal ? w.imag() : w.real();
        drift = std::max(drift, std::abs(conserved));
        if (double(sigma) * (flow - flow_prev) <= 0.0) monotone = false;
        flow_prev = flow;
    }
    seg.re_w_max = drift;
    seg.im_monotone = monotone;
}

}  // namespace

TrajectorySegment trace(const QuadDifferential& qd, cplx seed, cplx v_seed, int sigma,
                        const TraceBudget& budget, TraceMode mode) {
    TrajectorySegment seg;
    seg.mode = mode;
    seg.points.push_back(seed);

    std::vector<cplx> cps = finite_cp_locations(qd);
    // the index of the critical point the seed sits next to, if any (its hit
    // event is suppressed until the path has genuinely left the neighborhood)
    int src_near = -1;
    for (std::size_t i = 0; i < cps.size(); ++i)
        if (std::abs(seed - cps[i]) < 10.0 * budget.eps_hit) src_near = int(i);
    bool left_src = src_near < 0;

    cplx z = seed;
    cplx v = align_to(std::sqrt(qd.q_over_z(z)), v_seed);
    const cplx v_init = v;
    double h = 1e-3;
    double s_total = 0.0;

    while (true) {
        double cap = 0.05 * (nearest_cp_distance(cps, z) + 0.01);
        h = std::min(h, cap);
        if (h < 1e-13) {
            seg.end_kind = SegEndKind::Aborted;
            seg.abort_reason = "stiff";
            break;
        }
        StepResult st = dp_step(qd, z, v, sigma, mode, h);
        double sc = 1e-12 + 1e-10 * std::abs(z);
        if (!st.branch_ok || st.err > sc) {
            h *= st.branch_ok ? std::max(0.2, 0.9 * std::pow(sc / st.err, 0.2)) : 0.25;
            continue;
        }

        cplx z_new = st.z5;

        // hit events are tested against the step chord so a step cannot jump
        // across the capture ball
        int hit = -1;
        double hit_t = 0.0, hit_d = 0.0;
        for (std::size_t i = 0; i < cps.size(); ++i) {
            if (int(i) == src_near && !left_src) continue;
            double t;
            double d = point_segment_distance(cps[i], z, z_new, &t);
            if (d < budget.eps_hit && (hit < 0 || d < hit_d)) {
                hit = int(i);
                hit_t = t;
                hit_d = d;
            }
        }
        if (hit >= 0) {
            cplx z_stop = z + hit_t * (z_new - z);
            s_total += std::abs(z_stop - z);
            if (z_stop != z) seg.points.push_back(z_stop);
            seg.points.push_back(cps[hit]);
            seg.arclen = s_total + std::abs(cps[hit] - z_stop);
            seg.end_kind = SegEndKind::HitCritical;
            seg.end_cp = hit;
            seg.end_dist = hit_d;
            break;
        }

        s_total += std::abs(z_new - z);
        v = align_to(std::sqrt(qd.q_over_z(z_new)), v);
        z = z_new;
        seg.points.push_back(z);
        if (src_near >= 0 && !left_src && std::abs(z - cps[src_near]) > 10.0 * budget.eps_hit)
            left_src = true;

        if (std::abs(z) > budget.escape_radius) {
            seg.end_kind = SegEndKind::Escaped;
            double th = std::arg(z);
            if (th < 0) th += 2.0 * PI;
            if (mode == TraceMode::Horizontal) {
                seg.end_dir = int(th / (PI / 2)) % 4;
                double b = std::fmod(th, PI / 2);
                seg.low_confidence_dir = std::min(b, PI / 2 - b) < PI / 180.0;
            } else {
                seg.end_dir = int(std::lround(th / (PI / 2))) % 4;
                double off = std::abs(th - (PI / 2) * std::lround(th / (PI / 2)));
                seg.low_confidence_dir = std::abs(off - PI / 4) < PI / 180.0;
            }
            seg.arclen = s_total;
            break;
        }
        if (s_total > budget.max_arclen) {
            seg.end_kind = SegEndKind::Aborted;
            seg.abort_reason = "arc budget";
            seg.arclen = s_total;
            break;
        }
        h = std::min(h * std::min(5.0, std::max(0.2, 0.9 * std::pow(sc / std::max(st.err, 1e-300), 0.2))), 1.0);
    }
    if (seg.end_kind == SegEndKind::Aborted) seg.arclen = s_total;
    fill_phase_diagnostics(qd, seg, sigma, v_init);
    return seg;
}

TrajectorySegment trace(const QuadDifferential& qd, cplx seed, cplx direction,
                        const TraceBudget& budget, TraceMode mode) {
    cplx u = direction / std::abs(direction);
    // probe slightly inside so a seed exactly on the principal cut is resolved
    cplx v0 = std::sqrt(qd.q_over_z(seed + 1e-9 * u));
    int sigma = (std::conj(u) * field(v0, +1, mode)).real() >= 0.0 ? +1 : -1;
    // a seed placed exactly on a critical point has no usable field there; start
    // a hair along the requested direction instead
    double vs = std::abs(std::sqrt(qd.q_over_z(seed)));
    if (!std::isfinite(vs) || vs < 1e-8) seed += 1e-6 * u;
    TrajectorySegment seg = trace(qd, seed, v0, sigma, budget, mode);
    return seg;
}

TrajectorySegment trace_from_ray(const QuadDifferential& qd, int cp_index,
                                 const std::vector<CriticalPoint>& cps, int ray_index,
                                 const TraceBudget& budget, TraceMode mode) {
    const CriticalPoint& cp = cps[cp_index];
    std::vector<double> fan = mode == TraceMode::Horizontal ? ray_fan(cp, qd)
                                                            : ray_fan_orthogonal(cp, qd);
    double th = fan.at(ray_index);
    cplx u = std::exp(cplx(0.0, th));
    TrajectorySegment seg = trace(qd, cp.z + 1e-6 * u, u, budget, mode);
    seg.src_cp = cp_index;
    seg.src_ray = ray_index;
    seg.src_angle = th;
    return seg;
}

CriticalGraph build_critical_graph(const QuadDifferential& qd, const TraceBudget& budget) {
    if (qd.degenerate())
        throw NotApplicable("critical graph needs distinct zeros away from the origin");
    CriticalGraph g{qd, critical_points(qd), {}, {}, {}, true};
    for (std::size_t ci = 0; ci < g.cps.size(); ++ci) {
        if (g.cps[ci].kind == CpKind::InfinitePole) continue;
        std::size_t rays = ray_fan(g.cps[ci], qd).size();
        for (std::size_t ri = 0; ri < rays; ++ri) {
            TrajectorySegment seg;
            try {
                seg = trace_from_ray(qd, int(ci), g.cps, int(ri), budget);
            } catch (const BranchJump& e) {
                seg.src_cp = int(ci);
                seg.src_ray = int(ri);
                seg.end_kind = SegEndKind::Aborted;
                seg.abort_reason = e.what();
            }
            if (seg.end_kind == SegEndKind::Aborted) g.complete = false;
            if (seg.end_kind == SegEndKind::Escaped)
                g.escape_table[{int(ci), int(ri)}] = seg.end_dir;
            g.segments.push_back(std::move(seg));
        }
    }
    g.shorts = detect_short_trajectories(g);
    return g;
}

std::vector<ShortTrajectory> detect_short_trajectories(const CriticalGraph& g) {
    std::vector<ShortTrajectory> out;
    std::set<std::pair<int, int>> seen;
    for (const TrajectorySegment& seg : g.segments) {
        if (seg.end_kind != SegEndKind::HitCritical) continue;
        if (seg.src_cp < 0 || seg.end_cp == seg.src_cp) continue;
        std::pair<int, int> key = std::minmax(seg.src_cp, seg.end_cp);
        if (!seen.insert(key).second) continue;

        ShortTrajectory s;
        s.cp_a = seg.src_cp;
        s.cp_b = seg.end_cp;
        s.points = seg.points;
        s.points.front() = g.cps[seg.src_cp].z;  // snap the offset seed back

        // unbroken: no third critical point touches the arc
        for (std::size_t ci = 0; ci < g.cps.size(); ++ci) {
            if (g.cps[ci].kind == CpKind::InfinitePole) continue;
            if (int(ci) == s.cp_a || int(ci) == s.cp_b) continue;
            for (std::size_t i = 0; i + 1 < s.points.size() && s.unbroken; ++i)
                if (point_segment_distance(g.cps[ci].z, s.points[i], s.points[i + 1]) <
                    1e-4)
                    s.unbroken = false;
        }

        // transverse real-axis crossing, if any; arcs lying on the axis report none
        double ymax = 0.0;
        for (const cplx& p : s.points) ymax = std::max(ymax, std::abs(p.imag()));
        if (ymax > 1e-6 && s.points.size() > 3) {
            for (std::size_t i = 1; i + 2 < s.points.size(); ++i) {
                double y0 = s.points[i].imag(), y1 = s.points[i + 1].imag();
                if ((y0 > 0) != (y1 > 0)) {
                    double t = y0 / (y0 - y1);
                    s.real_axis_crossing =
                        s.points[i].real() + t * (s.points[i + 1].real() - s.points[i].real());
                    break;
                }
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<std::pair<int, int>> check_no_same_direction(const CriticalGraph& g) {
    std::vector<std::pair<int, int>> bad;
    for (std::size_t i = 0; i < g.segments.size(); ++i) {
        if (g.segments[i].end_kind != SegEndKind::Escaped) continue;
        for (std::size_t j = i + 1; j < g.segments.size(); ++j) {
            if (g.segments[j].end_kind != SegEndKind::Escaped) continue;
            if (g.segments[i].src_cp == g.segments[j].src_cp &&
                g.segments[i].end_dir == g.segments[j].end_dir)
                bad.push_back({int(i), int(j)});
        }
    }
    return bad;
}

double sigma_pattern_distance(const CriticalGraph& g) {
    // locate the real zero and the conjugate pair of the apex family
    int real_zero = -1, upper = -1, lower = -1, pole = -1;
    for (std::size_t i = 0; i < g.cps.size(); ++i) {
        const CriticalPoint& cp = g.cps[i];
        if (cp.kind == CpKind::SimplePole) pole = int(i);
        if (cp.kind != CpKind::Zero) continue;
        if (std::abs(cp.z.imag()) < 1e-9)
            real_zero = int(i);
        else if (cp.z.imag() > 0)
            upper = int(i);
        else
            lower = int(i);
    }
    if (real_zero < 0 || upper < 0 || lower < 0 || pole < 0)
        throw NotApplicable("pattern distance needs one real zero and a conjugate pair");

    bool has_up = false, has_dn = false;
    const ShortTrajectory* pair_short = nullptr;
    for (const ShortTrajectory& s : g.shorts) {
        auto k = std::minmax(s.cp_a, s.cp_b);
        if (k == std::minmax(real_zero, upper)) has_up = true;
        if (k == std::minmax(real_zero, lower)) has_dn = true;
        if (k == std::minmax(upper, lower)) pair_short = &s;
    }
    if (has_up && has_dn) return 0.0;
    if (!pair_short) return 1e300;
    double d = 1e300;
    cplx target = g.cps[real_zero].z;
    for (std::size_t i = 0; i + 1 < pair_short->points.size(); ++i)
        d = std::min(d, point_segment_distance(target, pair_short->points[i],
                                               pair_short->points[i + 1]));
    return d;
}

namespace {

cplx walk_point(const TrajectorySegment& seg, bool reversed, std::size_t k_from_start) {
    const auto& p = seg.points;
    return reversed ? p[p.size() - 1 - k_from_start] : p[k_from_start];
}

bool walk_end_escaped(const TrajectorySegment& seg, bool reversed) {
    return seg.end_kind == SegEndKind::Escaped && !reversed;
}

bool walk_start_escaped(const TrajectorySegment& seg, bool reversed) {
    return seg.end_kind == SegEndKind::Escaped && reversed;
}

double winding_count(const std::vector<cplx>& loop, cplx p) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < loop.size(); ++i)
        total += std::arg((loop[i + 1] - p) / (loop[i] - p));
    return total / (2.0 * PI);
}

}  // namespace

double verify_teichmuller(const CriticalGraph& g, const std::vector<PolygonSide>& sides,
                          std::optional<double> interior_sum_override) {
    if (sides.size() < 1) throw DomainError("polygon needs sides");
    const std::size_t n = sides.size();

    double lhs = 0.0;
    std::vector<cplx> boundary;
    std::vector<int> vertex_cps;  // critical points used as polygon vertices

    for (std::size_t j = 0; j < n; ++j) {
        const PolygonSide& in_side = sides[j];
        const PolygonSide& out_side = sides[(j + 1) % n];
        const TrajectorySegment& in_seg = g.segments.at(in_side.segment_index);
        const TrajectorySegment& out_seg = g.segments.at(out_side.segment_index);

        for (std::size_t k = 0; k < in_seg.points.size(); ++k)
            boundary.push_back(walk_point(in_seg, in_side.reversed, k));

        if (walk_end_escaped(in_seg, in_side.reversed) &&
            walk_start_escaped(out_seg, out_side.reversed)) {
            // vertex at infinity, order-6 pole: term 1 - (n+2) theta/(2pi) = 1 + 2 theta/pi.
            // In the 1/z chart the wedge angle between the escape directions is
            // arg(out) - arg(in), quantized to pi/4.
            cplx z_in = walk_point(in_seg, in_side.reversed, in_seg.points.size() - 1);
            cplx z_out = walk_point(out_seg, out_side.reversed, 0);
            double th = wrap_2pi(std::arg(z_out) - std::arg(z_in));
            th = (PI / 4.0) * std::lround(th / (PI / 4.0));
            lhs += 1.0 + 2.0 * th / PI;
            continue;
        }

        cplx z_end = walk_point(in_seg, in_side.reversed, in_seg.points.size() - 1);
        cplx z_end_prev = walk_point(in_seg, in_side.reversed, in_seg.points.size() - 2);
        cplx z_start = walk_point(out_seg, out_side.reversed, 0);
        cplx z_start_next = walk_point(out_seg, out_side.reversed, 1);
        if (std::abs(z_end - z_start) > 1e-3)
            throw DomainError("polygon boundary does not close");

        int mult = 0;  // regular junction unless a critical point sits here
        for (std::size_t ci = 0; ci < g.cps.size(); ++ci) {
            if (g.cps[ci].kind == CpKind::InfinitePole) continue;
            if (std::abs(g.cps[ci].z - z_end) < 1e-3) {
                mult = g.cps[ci].kind == CpKind::SimplePole ? -1 : g.cps[ci].mult;
                vertex_cps.push_back(int(ci));
                break;
            }
        }

        cplx t_in = z_end - z_end_prev;
        cplx t_out = z_start_next - z_start;
        double theta = wrap_2pi(std::arg(-t_in) - std::arg(t_out));
        double unit = PI / (mult + 2);
        theta = unit * std::lround(theta / unit);
        // Two distinct boundary rays never subtend angle zero; a zero reading
        // means the walk reversed onto the same arc, i.e. a spike of angle 2pi.
        if (theta == 0.0) theta = 2.0 * PI;
        lhs += 1.0 - double(mult + 2) * theta / (2.0 * PI);
    }

    double interior;
    if (interior_sum_override) {
        interior = *interior_sum_override;
    } else {
        // close the walk (straight chord; callers pass the override for
        // unbounded faces where this closure is not meaningful)
        boundary.push_back(boundary.front());
        interior = 0.0;
        for (std::size_t ci = 0; ci < g.cps.size(); ++ci) {
            if (g.cps[ci].kind == CpKind::InfinitePole) continue;
            if (std::find(vertex_cps.begin(), vertex_cps.end(), int(ci)) != vertex_cps.end())
                continue;
            double w = winding_count(boundary, g.cps[ci].z);
            if (std::abs(w) > 0.5)
                interior += g.cps[ci].kind == CpKind::SimplePole ? -1 : g.cps[ci].mult;
        }
    }
    return lhs - 2.0 - interior;
}

}  // namespace qd
