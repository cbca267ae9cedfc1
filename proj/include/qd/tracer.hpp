#pragma once
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qd/quaddiff.hpp"

namespace qd {

enum class SegEndKind { HitCritical, Escaped, Aborted };
enum class TraceMode { Horizontal, Orthogonal };

struct TraceBudget {
    double max_arclen = 200.0;
    double escape_radius = 50.0;
    double eps_hit = 1e-4;
};

struct TrajectorySegment {
    std::vector<cplx> points;
    double arclen = 0.0;
    TraceMode mode = TraceMode::Horizontal;
    int src_cp = -1;        // index into the graph's critical point list
    int src_ray = -1;
    double src_angle = 0.0;
    SegEndKind end_kind = SegEndKind::Aborted;
    int end_cp = -1;        // HitCritical
    double end_dist = 0.0;
    int end_dir = -1;       // Escaped: D_k index
    bool low_confidence_dir = false;
    std::string abort_reason;
    // accumulated phase integral w = int sqrt(q/z) dz along the polyline, from
    // independent chord quadrature. The conserved coordinate is Re w for
    // horizontal segments and Im w for orthogonal ones.
    double re_w_max = 0.0;     // max drift of the conserved coordinate
    bool im_monotone = true;   // the flowing coordinate is strictly monotone
};

struct ShortTrajectory {
    int cp_a, cp_b;               // endpoint critical point indices
    std::vector<cplx> points;     // oriented cp_a -> cp_b
    bool unbroken = true;
    std::optional<double> real_axis_crossing;
};

struct CriticalGraph {
    QuadDifferential qd;
    std::vector<CriticalPoint> cps;        // finite ones first, infinity last
    std::vector<TrajectorySegment> segments;
    std::vector<ShortTrajectory> shorts;
    std::map<std::pair<int, int>, int> escape_table;  // (cp, ray) -> D_k
    bool complete = true;
};

// One trajectory from a regular seed point. sigma = +-1 picks the direction of
// growth of Im w; the branch of sqrt(q/z) is transported along the path.
TrajectorySegment trace(const QuadDifferential& qd, cplx seed, cplx v_seed, int sigma,
                        const TraceBudget& budget, TraceMode mode = TraceMode::Horizontal);

// Same, but aimed: picks sigma (and the principal branch at the seed) so the
// first move points along the given unit direction.
TrajectorySegment trace(const QuadDifferential& qd, cplx seed, cplx direction,
                        const TraceBudget& budget, TraceMode mode = TraceMode::Horizontal);

// Seed just outside a critical point along one of its ray-fan angles and trace outward.
TrajectorySegment trace_from_ray(const QuadDifferential& qd, int cp_index,
                                 const std::vector<CriticalPoint>& cps, int ray_index,
                                 const TraceBudget& budget,
                                 TraceMode mode = TraceMode::Horizontal);

// Every (finite critical point, ray) traced; shorts matched and deduplicated;
// escape directions tabulated. Phase-integral diagnostics filled per segment.
CriticalGraph build_critical_graph(const QuadDifferential& qd, const TraceBudget& budget = {});

std::vector<ShortTrajectory> detect_short_trajectories(const CriticalGraph& g);

// Pairs of escaping segments that leave the same critical point toward the same
// D_k (should be empty; two trajectories from one zero cannot share a direction).
std::vector<std::pair<int, int>> check_no_same_direction(const CriticalGraph& g);

// Distance diagnostics for the near-boundary three-short pattern: the smallest
// distance from z=1 to a short connecting the conjugate pair (0 when the graph
// already has shorts 1<->a and 1<->conj a).
double sigma_pattern_distance(const CriticalGraph& g);

// One side of a polygon bounded by trajectory segments (in ccw order, interior
// on the left). reversed=true walks the segment from its far end back to its seed.
struct PolygonSide {
    int segment_index;
    bool reversed = false;
};

// Angle-count identity for a polygon bounded by trajectory/orthogonal segments:
//   sum_j (1 - (n_j+2) theta_j / (2 pi)) = 2 + sum_i m_i
// with n_j the vertex multiplicities (zero r, simple pole -1, infinity -6),
// theta_j interior angles quantized to multiples of pi/(n_j+2), and m_i the
// multiplicities of critical points interior to the polygon. Returns LHS-RHS.
double verify_teichmuller(const CriticalGraph& g, const std::vector<PolygonSide>& sides,
                          std::optional<double> interior_sum_override = std::nullopt);

} // namespace qd
