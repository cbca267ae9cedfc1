#include "qd/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <random>
#include <sstream>

#include "qd/config.hpp"
#include "qd/csv.hpp"
#include "qd/measure.hpp"
#include "qd/periods.hpp"
#include "qd/poly.hpp"
#include "qd/quaddiff.hpp"
#include "qd/sigma.hpp"
#include "qd/spectral.hpp"
#include "qd/svg.hpp"
#include "qd/tracer.hpp"
#include "qd/trimatrix.hpp"

namespace qd {
namespace {

constexpr int kOk = 0, kInvariantFailure = 1, kIncomplete = 2, kInvalidInput = 3;

// merged view of config-file values and command-line flags (flags win)
struct Options {
    std::map<std::string, std::string> kv;

    bool has(const std::string& k) const { return kv.count(k) != 0; }
    std::string str(const std::string& k, const std::string& def) const {
        auto it = kv.find(k);
        return it == kv.end() ? def : it->second;
    }
    cplx complex_at(const std::string& k) const { return parse_complex(kv.at(k)); }
    double real_at(const std::string& k, double def) const {
        auto it = kv.find(k);
        if (it == kv.end()) return def;
        cplx v = parse_complex(it->second);
        if (v.imag() != 0.0) throw DomainError("--" + k + " wants a real value");
        return v.real();
    }
    int int_at(const std::string& k) const {
        const std::string& s = kv.at(k);
        char* end = nullptr;
        long v = std::strtol(s.c_str(), &end, 10);
        if (end == s.c_str() || *end != '\0')
            throw DomainError("--" + k + " wants an integer, got '" + s + "'");
        return static_cast<int>(v);
    }
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string part;
    while (std::getline(in, part, sep)) out.push_back(part);
    return out;
}

// short display format for tolerances and angles (data files keep 17 digits)
std::string disp(double v) {
    char tmp[32];
    std::snprintf(tmp, sizeof tmp, "%.4g", v);
    return tmp;
}

std::string fmt_complex(cplx z) {
    if (z.imag() == 0.0) return CsvWriter::num(z.real());
    std::string im = CsvWriter::num(std::abs(z.imag())) + "i";
    const char* join = z.imag() < 0 ? " - " : " + ";
    if (z.real() == 0.0) return (z.imag() < 0 ? "-" : "") + im;
    return CsvWriter::num(z.real()) + join + im;
}

std::string swap_ext(const std::string& path, const std::string& ext) {
    auto dot = path.rfind('.');
    if (dot == std::string::npos || path.find('/', dot) != std::string::npos) return path + ext;
    return path.substr(0, dot) + ext;
}

std::string insert_suffix(const std::string& path, const std::string& suffix) {
    auto dot = path.rfind('.');
    if (dot == std::string::npos || path.find('/', dot) != std::string::npos)
        return path + suffix;
    return path.substr(0, dot) + suffix + path.substr(dot);
}

TraceBudget budget_from(const Options& o) {
    TraceBudget b;
    b.eps_hit = o.real_at("eps-hit", b.eps_hit);
    b.escape_radius = o.real_at("escape-radius", b.escape_radius);
    return b;
}

// exactly one of --a, --gamma/--delta, --roots describes the cubic
void require_single_geometry(const Options& o) {
    const bool has_a = o.has("a");
    const bool has_gd = o.has("gamma") || o.has("delta");
    const bool has_roots = o.has("roots");
    if (int(has_a) + int(has_gd) + int(has_roots) != 1)
        throw DomainError("give exactly one of --a, --gamma/--delta, --roots");
}

QuadDifferential geometry(const Options& o) {
    require_single_geometry(o);
    if (o.has("a")) {
        cplx a = o.complex_at("a");
        if (a.imag() < 0.0) a = std::conj(a);  // same cubic either way
        return QuadDifferential::from_apex(a);
    }
    if (o.has("roots")) {
        auto parts = split(o.kv.at("roots"), ',');
        if (parts.size() != 3) throw DomainError("--roots wants three comma-separated roots");
        std::vector<cplx> roots;
        for (const auto& p : parts) roots.push_back(parse_complex(p));
        return QuadDifferential::from_cubic(Poly::from_roots(roots));
    }
    if (!o.has("gamma") || !o.has("delta"))
        throw DomainError("--gamma and --delta go together");
    return QuadDifferential::from_parameters(o.complex_at("gamma"), o.complex_at("delta"));
}

// (gamma, delta) of a cubic inside the discriminant family
// q = z^3 + g z^2 + ((g^2-16)/4) z - 4 d; rejects cubics off the family.
std::pair<cplx, cplx> family_parameters(const QuadDifferential& qd) {
    if (qd.params()) return *qd.params();
    const Poly& q = qd.q();
    const cplx g = q.coeff(2);
    const cplx expect = (g * g - 16.0) / 4.0;
    if (std::abs(q.coeff(1) - expect) > 1e-9 * (1.0 + std::abs(expect)))
        throw DomainError("cubic lies outside the (gamma, delta) family: z coefficient is " +
                          fmt_complex(q.coeff(1)) + ", family needs " + fmt_complex(expect));
    return {g, q.coeff(0) / cplx(-4.0)};
}

constexpr double kPatternTol = 0.05;

int cmd_classify(const Options& o, std::ostream& out, std::ostream& err) {
    require_single_geometry(o);
    cplx a;
    if (o.has("a")) {
        a = o.complex_at("a");
        if (a.imag() < 0.0) a = std::conj(a);
    } else {
        a = normalize_to_unit_root(geometry(o).q()).apex;
    }
    QuadDifferential qd = QuadDifferential::from_apex(a);  // throws on Im a <= 0
    if (qd.degenerate()) {
        err << "degenerate apex " << fmt_complex(a) << "\n";
        return kInvalidInput;
    }
    const Classification cls = classify_apex(a);
    CriticalGraph g = build_critical_graph(qd, budget_from(o));
    const double pattern = sigma_pattern_distance(g);
    const int strict = static_cast<int>(g.shorts.size());

    // "within band" means numerically indistinguishable from the curve: the traced
    // graph realizes the three-short pattern up to the matching tolerance
    const bool on_curve = pattern <= kPatternTol || cls.region == Region::Sigma;
    std::string label;
    int predicted, traced;
    if (on_curve) {
        label = "Σ (within band)";
        predicted = 3;
        traced = (strict == 2 && pattern <= kPatternTol) ? 3 : strict;
    } else {
        label = cls.region == Region::Omega1 ? "Ω1" : "Ω2";
        predicted = 2;
        traced = strict;
    }

    out << label << ", shorts=" << traced << "\n";
    out << "S = " << CsvWriter::num(cls.S) << " (|S| margin " << CsvWriter::num(cls.margin)
        << ")\n";
    out << "three-short pattern distance " << CsvWriter::num(pattern) << " (tolerance "
        << disp(kPatternTol) << ")\n";
    out << "predicted shorts: " << predicted << ", traced shorts: " << traced;
    if (on_curve && strict == 2 && traced == 3) out << " (2 exact + 1 within pattern tolerance)";
    out << "\n";
    if (!g.complete) {
        err << "critical graph incomplete\n";
        return kIncomplete;
    }
    return predicted == traced ? kOk : kIncomplete;
}

int cmd_graph(const Options& o, std::ostream& out, std::ostream& err) {
    QuadDifferential qd = geometry(o);
    if (qd.degenerate()) {
        err << "degenerate configuration (zero meets the origin pole)\n";
        return kInvalidInput;
    }
    CriticalGraph g = build_critical_graph(qd, budget_from(o));

    const std::string csv_path = o.str("out", "graph.csv");
    const std::string svg_path = o.str("svg", swap_ext(csv_path, ".svg"));
    CsvWriter csv({"segment_id", "kind", "re", "im"});
    SvgPlot svg;

    int ci = 0;
    for (const auto& cp : g.cps) {
        if (cp.kind == CpKind::InfinitePole) continue;
        const std::string id = "cp" + std::to_string(ci++);
        const char* kind = cp.kind == CpKind::Zero ? "zero" : "simple-pole";
        csv.row({id, kind, CsvWriter::num(cp.z.real()), CsvWriter::num(cp.z.imag())});
        svg.add_marker(cp.z, "cp", id);
    }
    for (size_t i = 0; i < g.shorts.size(); ++i) {
        const std::string id = "short" + std::to_string(i);
        for (cplx p : g.shorts[i].points)
            csv.row({id, "short", CsvWriter::num(p.real()), CsvWriter::num(p.imag())});
        svg.add_polyline(g.shorts[i].points, "short", id);
    }
    int escapes = 0, aborted = 0, ei = 0;
    for (const auto& s : g.segments) {
        if (s.end_kind == SegEndKind::HitCritical) continue;  // drawn as a short
        const bool esc = s.end_kind == SegEndKind::Escaped;
        (esc ? escapes : aborted)++;
        const std::string id = "seg" + std::to_string(ei++);
        const char* kind = esc ? "infinite-critical" : "aborted";
        for (cplx p : s.points)
            csv.row({id, kind, CsvWriter::num(p.real()), CsvWriter::num(p.imag())});
        svg.add_polyline(s.points, kind, id);
    }
    csv.write_file(csv_path);
    svg.write_file(svg_path);

    out << "short trajectories: " << g.shorts.size() << ", escaping segments: " << escapes
        << "\n";
    out << "csv: " << csv_path << "\nsvg: " << svg_path << "\n";
    if (!g.complete || aborted > 0) {
        err << "incomplete graph: " << aborted << " aborted segment(s)\n";
        return kIncomplete;
    }
    return kOk;
}

int cmd_sigma(const Options& o, std::ostream& out, std::ostream&) {
    const double reach = o.real_at("escape-radius", 1000.0);  // how far to continue
    SigmaCurve c = trace_sigma(reach);

    CsvWriter csv({"s", "re", "im", "S_residual"});
    double rmax = 0.0;
    for (size_t i = 0; i < c.points.size(); ++i) {
        rmax = std::max(rmax, std::abs(c.residual[i]));
        csv.row({CsvWriter::num(c.arclen[i]), CsvWriter::num(c.points[i].real()),
                 CsvWriter::num(c.points[i].imag()), CsvWriter::num(c.residual[i])});
    }
    // conjugate branch: the curve is symmetric under z -> conj z
    for (size_t i = 0; i < c.points.size(); ++i)
        csv.row({CsvWriter::num(c.arclen[i]), CsvWriter::num(c.points[i].real()),
                 CsvWriter::num(-c.points[i].imag()), CsvWriter::num(c.residual[i])});
    const std::string csv_path = o.str("out", "sigma.csv");
    csv.write_file(csv_path);

    if (o.has("svg")) {
        SvgPlot svg;
        std::vector<cplx> lower;
        for (cplx p : c.points) lower.push_back(std::conj(p));
        svg.add_polyline(c.points, "sigma", "sigma-upper");
        svg.add_polyline(lower, "sigma", "sigma-lower");
        svg.extend_view({0.0, 0.0});
        svg.write_file(o.kv.at("svg"));
    }

    out << "points per branch: " << c.points.size() << " (conjugate branch mirrored)\n";
    out << "tangent of the locus at the endpoint: " << CsvWriter::num(c.tangent_deg_at_origin)
        << " deg\n";
    out << "far-end arg(z): " << CsvWriter::num(c.far_arg_deg) << " deg at |z| = "
        << CsvWriter::num(std::abs(c.points.back())) << "\n";
    out << "max |S| residual: " << CsvWriter::num(rmax) << "\n";
    out << "csv: " << csv_path << "\n";
    return c.complete ? kOk : kIncomplete;
}

int cmd_periods(const Options& o, std::ostream& out, std::ostream& err) {
    QuadDifferential qd = geometry(o);
    if (qd.degenerate()) {
        err << "degenerate configuration\n";
        return kInvalidInput;
    }
    double zmax = 0.0;
    for (cplx r : qd.zeros()) zmax = std::max(zmax, std::abs(r));
    const double R = 2.0 * (zmax + 1.0);

    const cplx loop = period_integral(qd, make_circle_path(R));
    const cplx factor = residue_at_infinity(qd.q());
    const cplx predicted = cplx(0.0, -2.0 * PI) * factor;
    const double diff = std::abs(loop - predicted);

    out << "alpha^2 - 4 beta = " << fmt_complex(8.0 * factor) << "\n";
    out << "closed-contour integral (|z| = " << CsvWriter::num(R)
        << "): " << fmt_complex(loop) << "\n";
    out << "predicted -2 pi i (alpha^2 - 4 beta)/8: " << fmt_complex(predicted) << "\n";
    out << "|difference| = " << CsvWriter::num(diff) << "\n";
    const double nc = necessary_condition(qd.q());
    out << "Im(alpha^2 - 4 beta) = " << CsvWriter::num(nc == 0.0 ? 0.0 : nc)
        << " (zero is necessary for conjugate-connecting shorts)\n";

    bool ok = diff <= 1e-8;
    for (cplx r : qd.zeros()) {
        if (!(r.imag() > 1e-12)) continue;  // conjugate-pair arc: upper member only
        PathSpec west;
        west.waypoints = {r, cplx(-R, 0.0), std::conj(r)};
        west.start = west.end = EndpointSingularity::ZeroOfQ;
        try {
            const cplx P = period_integral(qd, west);
            out << "conjugate-arc integral " << fmt_complex(r) << " <-> conj: "
                << fmt_complex(P) << " (|Re| = " << CsvWriter::num(std::abs(P.real())) << ")\n";
            ok = ok && std::abs(P.real()) <= 1e-8;
        } catch (const PathTooClose&) {
            out << "conjugate-arc check for " << fmt_complex(r)
                << " skipped: path passes too close to a critical point\n";
        }
        break;
    }
    out << (ok ? "period identities hold\n" : "period identity VIOLATED\n");
    return ok ? kOk : kInvariantFailure;
}

std::vector<int> parse_m_list(const std::string& s) {
    auto to_int = [](const std::string& t) {
        char* end = nullptr;
        long v = std::strtol(t.c_str(), &end, 10);
        if (end == t.c_str() || *end != '\0')
            throw DomainError("bad integer '" + t + "' in --m-range");
        return static_cast<int>(v);
    };
    std::vector<int> ms;
    if (s.find(':') != std::string::npos) {
        auto parts = split(s, ':');
        if (parts.size() < 2 || parts.size() > 3)
            throw DomainError("--m-range wants lo:hi[:step] or a comma list");
        const int lo = to_int(parts[0]), hi = to_int(parts[1]);
        const int step = parts.size() == 3 ? to_int(parts[2]) : 1;
        if (step <= 0 || hi < lo) throw DomainError("--m-range wants lo <= hi and step > 0");
        for (int m = lo; m <= hi; m += step) ms.push_back(m);
    } else {
        for (const auto& p : split(s, ',')) ms.push_back(to_int(p));
    }
    if (ms.empty()) throw DomainError("--m-range is empty");
    for (int m : ms)
        if (m < 1) throw DomainError("m must be >= 1");
    return ms;
}

int cmd_spectrum(const Options& o, std::ostream& out, std::ostream&) {
    if (o.has("m") == o.has("m-range"))
        throw DomainError("give exactly one of --m, --m-range");
    std::vector<int> ms = o.has("m") ? std::vector<int>{o.int_at("m")}
                                     : parse_m_list(o.kv.at("m-range"));
    for (int m : ms)
        if (m < 1) throw DomainError("m must be >= 1");
    const double gamma = o.real_at("gamma", 0.0);

    CsvWriter eig({"m", "k", "re_lambda", "im_lambda", "lambda_m32", "lambda_m43"});
    CsvWriter scatter({"m", "re", "im"});
    std::vector<double> haus(ms.size(), -1.0);
    std::vector<cplx> last_roots;
    std::optional<MeasureSupport> last_support;

    for (size_t mi = 0; mi < ms.size(); ++mi) {
        const int m = ms[mi];
        SpectralSolution sol = spectrum({m, gamma});
        const double p32 = std::pow(double(m), 1.5);
        const double p43 = std::pow(double(m), 4.0 / 3.0);
        for (size_t k = 0; k < sol.eigenvalues.size(); ++k) {
            const cplx lam = sol.eigenvalues[k];
            eig.row({CsvWriter::num(m), CsvWriter::num(int(k)), CsvWriter::num(lam.real()),
                     CsvWriter::num(lam.imag()), CsvWriter::num(lam.real() / p32),
                     CsvWriter::num(lam.real() / p43)});
        }
        // rescaled roots of the top-eigenvalue polynomial, equilibrium-refined
        std::vector<cplx> rr = rescaled_root_measure(sol, int(sol.roots.size()) - 1).points;
        equilibrium_polish(rr, m, gamma);
        for (cplx r : rr)
            scatter.row({CsvWriter::num(m), CsvWriter::num(r.real()), CsvWriter::num(r.imag())});

        const double dhat = sol.eigenvalues.back().real() / p32 / 4.0;
        if (auto sup = support(cplx(gamma), cplx(dhat))) {
            haus[mi] = hausdorff_to_support(rr, *sup);
            last_support = std::move(sup);
        }
        last_roots = std::move(rr);
    }

    const std::string eig_path = o.str("out", "spectrum.csv");
    const std::string scatter_path = insert_suffix(eig_path, "_roots");
    eig.write_file(eig_path);
    scatter.write_file(scatter_path);

    DeltaEstimates est = delta_estimates(ms, gamma);
    out << "m  re_lambda_top  lambda/m^(3/2)  lambda/m^(4/3)  d(3/2)  d(4/3)  hausdorff\n";
    for (size_t i = 0; i < est.rows.size(); ++i) {
        const DeltaRow& r = est.rows[i];
        out << r.m << "  " << CsvWriter::num(r.lambda.real()) << "  "
            << CsvWriter::num(r.scaled_32) << "  " << CsvWriter::num(r.scaled_43) << "  "
            << CsvWriter::num(r.diff_32) << "  " << CsvWriter::num(r.diff_43) << "  "
            << (haus[i] >= 0.0 ? CsvWriter::num(haus[i]) : std::string("-")) << "\n";
    }
    out << "stabilizing scaling: m^(" << est.stabilizing_exponent_num << "/"
        << est.stabilizing_exponent_den << "), delta estimate = "
        << CsvWriter::num(est.delta_hat) << "\n";
    bool monotone = true;
    for (size_t i = 1; i < haus.size(); ++i)
        monotone = monotone && haus[i - 1] >= 0 && haus[i] >= 0 && haus[i] < haus[i - 1];
    if (haus.size() >= 2 && haus.front() >= 0.0)
        out << "hausdorff(rescaled roots, support): "
            << (monotone ? "strictly decreasing" : "NOT monotone") << "\n";
    out << "csv: " << eig_path << ", " << scatter_path << "\n";

    if (o.has("svg")) {
        SvgPlot svg;
        if (last_support)
            for (size_t i = 0; i < last_support->arcs.size(); ++i)
                svg.add_polyline(last_support->arcs[i].points, "support",
                                 "arc" + std::to_string(i));
        for (size_t i = 0; i < last_roots.size(); ++i)
            svg.add_marker(last_roots[i], "root-scatter", "root" + std::to_string(i));
        svg.write_file(o.kv.at("svg"));
        out << "svg: " << o.kv.at("svg") << "\n";
    }
    return kOk;
}

int cmd_measure(const Options& o, std::ostream& out, std::ostream& err) {
    QuadDifferential qd = geometry(o);
    auto [gamma, delta] = family_parameters(qd);
    NoMeasure why;
    auto sup = support(gamma, delta, &why);
    if (!sup) {
        err << "no measure: " << why.reason << "\n";
        return why.reason == "degenerate" ? kInvalidInput : kIncomplete;
    }

    out << "gamma = " << fmt_complex(gamma) << ", delta = " << fmt_complex(delta) << "\n";
    out << "arcs: " << sup->arcs.size() << "\n";
    for (size_t i = 0; i < sup->arcs.size(); ++i) {
        const SupportArc& a = sup->arcs[i];
        out << "arc " << i << ": " << fmt_complex(a.points.front()) << " -> "
            << fmt_complex(a.points.back()) << ", signed mass "
            << CsvWriter::num(a.signed_mass) << "\n";
    }
    out << "total mass = " << CsvWriter::num(sup->total_mass)
        << (sup->flipped ? " (orientation flipped)" : "") << "\n";

    SqrtDisc sd(sup->qd.q());
    CsvWriter csv({"arc_id", "re", "im", "density"});
    for (size_t i = 0; i < sup->arcs.size(); ++i)
        for (cplx p : sup->arcs[i].points) {
            std::string dens;
            try {
                dens = CsvWriter::num(density(*sup, sd, p));
            } catch (const DomainError&) {
                dens = "inf";  // the density blows up like |z|^{-1/2} at the origin
            }
            csv.row({"arc" + std::to_string(i), CsvWriter::num(p.real()),
                     CsvWriter::num(p.imag()), dens});
        }
    const std::string csv_path = o.str("out", "measure.csv");
    csv.write_file(csv_path);
    out << "csv: " << csv_path << "\n";

    if (o.has("svg")) {
        SvgPlot svg;
        for (size_t i = 0; i < sup->arcs.size(); ++i)
            svg.add_polyline(sup->arcs[i].points, "support", "arc" + std::to_string(i));
        int ci = 0;
        svg.add_marker({0.0, 0.0}, "cp", "cp" + std::to_string(ci++));
        for (cplx r : sup->qd.zeros()) svg.add_marker(r, "cp", "cp" + std::to_string(ci++));
        svg.write_file(o.kv.at("svg"));
        out << "svg: " << o.kv.at("svg") << "\n";
    }
    return kOk;
}

struct Check {
    std::string name;
    bool pass;
    std::string detail;
};

int cmd_verify(const Options& o, std::ostream& out, std::ostream&) {
    std::vector<Check> cs;
    const bool injected = o.has("tol");
    auto tol = [&](double def) { return injected ? o.real_at("tol", def) : def; };
    auto bound = [](double measured, double t) {
        return "measured " + CsvWriter::num(measured) + ", tolerance " + disp(t);
    };
    if (injected)
        out << "tolerance override: " << CsvWriter::num(o.real_at("tol", 0.0)) << "\n\n";

    {   // the three anchored classifications
        const Classification c1 = classify_apex({1.6, 2.0});
        cs.push_back({"classify a=1.6+2i lands in Omega1", c1.region == Region::Omega1,
                      "|S| margin " + CsvWriter::num(c1.margin)});
        const Classification c2 = classify_apex({0.0, 2.0});
        cs.push_back({"classify a=2i lands in Omega2", c2.region == Region::Omega2,
                      "|S| margin " + CsvWriter::num(c2.margin)});
        CriticalGraph g = build_critical_graph(QuadDifferential::from_apex({1.55, 2.0}),
                                               budget_from(o));
        const double pd = sigma_pattern_distance(g);
        const double t = tol(kPatternTol);
        cs.push_back({"a=1.55+2i shows the three-short Sigma pattern", pd <= t, bound(pd, t)});
    }
    {   // closed-contour period against the residue at infinity
        const double t = tol(1e-8);
        double worst = 0.0;
        const double coeffs[3][3] = {{1.0, -2.0, 0.5}, {-2.5, 1.25, -0.75}, {0.0, -4.0, 1.0}};
        for (const auto& abc : coeffs) {
            QuadDifferential qd = QuadDifferential::from_cubic(
                Poly({cplx(abc[2]), cplx(abc[1]), cplx(abc[0]), cplx(1.0)}));
            double zmax = 0.0;
            for (cplx r : qd.zeros()) zmax = std::max(zmax, std::abs(r));
            const cplx loop = period_integral(qd, make_circle_path(2.0 * (zmax + 1.0)));
            const cplx want = cplx(0.0, -2.0 * PI) * residue_at_infinity(qd.q());
            worst = std::max(worst, std::abs(loop - want));
        }
        cs.push_back({"closed-contour period equals the residue at infinity", worst <= t,
                      bound(worst, t)});
    }
    {   // conjugate-arc period purely imaginary
        const double t = tol(1e-8);
        double worst = 0.0;
        for (cplx a : {cplx(1.6, 2.0), cplx(0.0, 2.0)}) {
            QuadDifferential qd = QuadDifferential::from_apex(a);
            PathSpec west;
            const double R = std::max(1.0, 2.0 * std::abs(a));
            west.waypoints = {a, cplx(-R, 0.0), std::conj(a)};
            west.start = west.end = EndpointSingularity::ZeroOfQ;
            worst = std::max(worst, std::abs(period_integral(qd, west).real()));
        }
        cs.push_back({"conjugate-arc period is purely imaginary", worst <= t, bound(worst, t)});
    }
    {   // classification curve
        SigmaCurve c = trace_sigma(1000.0);
        double rmax = 0.0, min_re = 1e300;
        for (size_t i = 0; i < c.points.size(); ++i) {
            rmax = std::max(rmax, std::abs(c.residual[i]));
            if (i > 0) min_re = std::min(min_re, c.points[i].real() - 1.0);
        }
        const double tr = tol(1e-8);
        cs.push_back({"classification-curve residuals stay within contract",
                      c.complete && rmax <= tr, bound(rmax, tr)});
        cs.push_back({"classification curve stays right of Re z = 1", min_re > 0.0,
                      "min(Re z - 1) = " + CsvWriter::num(min_re)});
        const double ta = tol(1.0);
        const double far = std::abs(c.far_arg_deg - 90.0);
        cs.push_back({"classification curve turns vertical far out", far <= ta,
                      "deg off 90: " + bound(far, ta)});
    }
    {   // spectral checks
        const double t1 = tol(1e-12);
        SpectralSolution s1 = spectrum({1, 0.0});
        const double r22 = 2.0 * std::sqrt(2.0);
        const double e1 = std::max(std::abs(s1.eigenvalues.front() + r22),
                                   std::abs(s1.eigenvalues.back() - r22));
        cs.push_back({"m=1 eigenvalues are +-2*sqrt(2)", e1 <= t1, bound(e1, t1)});

        const double t8 = tol(1e-8);
        SpectralProblem p8{8, 0.5};
        TriMatrix M = operator_matrix(p8);
        SpectralSolution s8 = spectrum(p8);
        double worst8 = 0.0;
        for (size_t k = 0; k < s8.eigenvalues.size(); ++k)
            worst8 = std::max(worst8, eig_residual(M, s8.eigenvalues[k], s8.eigenpolys[k]));
        cs.push_back({"eigen residuals (m=8, gamma=0.5)", worst8 <= t8, bound(worst8, t8)});

        SpectralSolution s6 = spectrum({6, -1.5});
        double worst6 = 0.0;
        for (size_t k = 0; k < s6.eigenvalues.size(); ++k)
            for (cplx z : {cplx(0.7, 0.3), cplx(-1.2, 0.8)})
                worst6 = std::max(worst6, std::abs(riccati_residual(
                                              s6.eigenpolys[k], s6.eigenvalues[k], 6, -1.5, z)));
        cs.push_back({"Riccati identity on eigenpairs (m=6, gamma=-1.5)", worst6 <= t8,
                      bound(worst6, t8)});
    }
    {   // measure side
        const double tm = tol(1e-6);
        auto sup = support(cplx(0.0), cplx(0.3));
        const double dm = sup ? std::abs(sup->total_mass - 1.0) : 1e300;
        cs.push_back({"unit total mass (gamma=0, delta=0.3)", sup && dm <= tm, bound(dm, tm)});

        double worst_c = 0.0;
        if (sup) {
            std::mt19937 rng(20260815u);
            std::uniform_real_distribution<double> ure(-4.0, 4.0), uim(0.3, 3.0), usign(0, 1);
            int kept = 0;
            while (kept < 10) {
                cplx z(ure(rng), uim(rng) * (usign(rng) < 0.5 ? 1.0 : -1.0));
                if (std::abs(z) < 0.4) continue;   // keep clear of the origin pole
                bool warn = false;
                const cplx numeric = cauchy_numeric(*sup, z, &warn);
                if (warn) continue;
                worst_c = std::max(worst_c,
                                   std::abs(numeric - cauchy_closed_form(z, 0.0, 0.3)));
                ++kept;
            }
        }
        cs.push_back({"numeric Cauchy transform matches the closed form",
                      sup && worst_c <= tm, bound(worst_c, tm)});

        const double ta = tol(1e-10);
        double worst_a = 0.0;
        std::mt19937 rng(7u);
        std::uniform_real_distribution<double> uang(0.0, 2.0 * PI), urad(3.5, 6.0);
        for (auto [g, d] : {std::pair<cplx, cplx>{0.0, 0.3}, {-1.0, 1.0}})
            for (int i = 0; i < 10; ++i) {
                const cplx z = urad(rng) * std::exp(cplx(0.0, uang(rng)));
                const cplx C = cauchy_closed_form(z, g, d);
                worst_a = std::max(worst_a, std::abs(algebraic_residual(z, C, g, 4.0 * d)));
            }
        cs.push_back({"closed form solves its algebraic equation", worst_a <= ta,
                      bound(worst_a, ta)});

        double worst_id = 0.0;
        for (double g : {-2.0, 0.5, 3.0})
            for (double d : {-1.0, 0.25, 2.0}) {
                const auto lhs = algeq_discriminant_coeffs(g, 4.0 * d);
                const auto rhs = disc_family_coeffs(g, d);
                for (size_t k = 0; k < lhs.size(); ++k)
                    worst_id = std::max(worst_id, std::abs(lhs[k] - rhs[k]));
            }
        cs.push_back({"discriminant coefficient vectors agree exactly", worst_id == 0.0,
                      "max |difference| = " + CsvWriter::num(worst_id)});
    }
    {   // graph structure
        QuadDifferential qd = QuadDifferential::from_apex({1.8, 2.0});
        CriticalGraph g = build_critical_graph(qd, budget_from(o));
        const bool structure = g.complete && g.shorts.size() == 2 &&
                               check_no_same_direction(g).empty();
        cs.push_back({"critical graph at a=1.8+2i: complete with 2 shorts", structure,
                      "shorts=" + std::to_string(g.shorts.size()) +
                          (g.complete ? ", complete" : ", INCOMPLETE")});

        bool fans_ok = true;
        for (const auto& cp : g.cps) {
            if (cp.kind == CpKind::InfinitePole) continue;
            const size_t want = cp.kind == CpKind::Zero ? size_t(cp.mult) + 2 : 1;
            fans_ok = fans_ok && ray_fan(cp, qd).size() == want;
        }
        cs.push_back({"ray-fan counts (r+2 per zero, 1 at the simple pole)", fans_ok,
                      fans_ok ? "all fans sized as predicted" : "fan size mismatch"});

        const double td = tol(1e-6);
        double drift = 0.0;
        bool mono = true;
        for (const auto& s : g.segments) {
            drift = std::max(drift, s.re_w_max);
            mono = mono && s.im_monotone;
        }
        cs.push_back({"phase integral conserved along traced segments",
                      drift <= td && mono,
                      bound(drift, td) + (mono ? ", Im monotone" : ", Im NOT monotone")});
    }

    int failures = 0;
    for (const auto& c : cs) {
        out << (c.pass ? "PASS  " : "FAIL  ") << c.name;
        for (size_t pad = c.name.size(); pad < 58; ++pad) out << ' ';
        out << "  [" << c.detail << "]\n";
        failures += c.pass ? 0 : 1;
    }
    out << "\n" << (cs.size() - failures) << "/" << cs.size() << " checks passed\n";
    return failures == 0 ? kOk : kInvariantFailure;
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"critical graphs, classification curve, and root-measure asymptotics of the "
                 "quadratic differential -q(z)/z dz^2"};
    app.require_subcommand(1);

    struct FlagSpec {
        const char* key;
        const char* help;
    };
    static const FlagSpec flags[] = {
        {"a", "apex a of q = (z-1)(z-a)(z-conj a); complex like 1.6+2i"},
        {"gamma", "family parameter gamma"},
        {"delta", "family parameter delta"},
        {"roots", "three comma-separated roots of the monic cubic q"},
        {"m", "polynomial degree (>= 1)"},
        {"m-range", "degrees lo:hi[:step] or a comma list"},
        {"eps-hit", "tracer hit tolerance (default 1e-4)"},
        {"escape-radius", "tracer escape radius; for sigma: continuation reach"},
        {"out", "primary CSV output path"},
        {"svg", "SVG output path"},
        {"config", "key=value config file; explicit flags override it"},
    };
    static const std::pair<const char*, const char*> cmds[] = {
        {"classify", "apex region (Omega1 / Sigma band / Omega2) with traced-short cross-check"},
        {"graph", "trace the critical graph and write CSV + SVG"},
        {"sigma", "continue the classification curve S = 0 and export it"},
        {"periods", "closed-contour and conjugate-arc period identities"},
        {"spectrum", "eigenvalue sweep, rescaled root scatter, delta-scaling table"},
        {"measure", "support, arc masses, and density of the limit root measure"},
        {"verify", "run the invariant suite and report pass/fail with margins"},
    };

    std::map<std::string, std::string> given;
    for (const auto& [name, help] : cmds) {
        CLI::App* sub = app.add_subcommand(name, help);
        for (const auto& f : flags) {
            const std::string key = f.key;
            sub->add_option_function<std::string>(
                "--" + key, [&given, key](const std::string& v) { given[key] = v; }, f.help);
        }
    }

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kInvalidInput;
    }

    try {
        Options o;
        if (given.count("config")) o.kv = parse_config_file(given.at("config"));
        for (const auto& [k, v] : given) o.kv[k] = v;

        if (app.got_subcommand("classify")) return cmd_classify(o, out, err);
        if (app.got_subcommand("graph")) return cmd_graph(o, out, err);
        if (app.got_subcommand("sigma")) return cmd_sigma(o, out, err);
        if (app.got_subcommand("periods")) return cmd_periods(o, out, err);
        if (app.got_subcommand("spectrum")) return cmd_spectrum(o, out, err);
        if (app.got_subcommand("measure")) return cmd_measure(o, out, err);
        if (app.got_subcommand("verify")) return cmd_verify(o, out, err);
        err << "unknown command\n";
        return kInvalidInput;
    } catch (const DegreeError& e) {
        err << e.what() << "\n";
        return kInvalidInput;
    } catch (const DomainError& e) {
        err << e.what() << "\n";
        return kInvalidInput;
    } catch (const NotApplicable& e) {
        err << e.what() << "\n";
        return kInvalidInput;
    } catch (const PathTooClose& e) {
        err << e.what() << "\n";
        return kIncomplete;
    } catch (const BranchJump& e) {
        err << e.what() << "\n";
        return kIncomplete;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInvariantFailure;
    }
}

} // namespace qd
