#include <doctest.h>

#include <random>

#include "qd/periods.hpp"
#include "qd/sigma.hpp"

using namespace qd;

namespace {

// Independent evaluation of S along the literal composite path
// [0,x] then the vertical segment up to a, through the period machinery.
// Real-axis pieces are seeded with the principal branch, which is
// positive real on (1,x) and on (x,0), matching the defining convention.
double sigma_direct(cplx a) {
    double x = a.real();
    auto qd = QuadDifferential::from_apex(a);
    double total = 0.0;
    if (x > 1.0) {
        PathSpec p01, p1x;
        p01.waypoints = {cplx(0.0), cplx(1.0)};
        p01.start = EndpointSingularity::OriginPole;
        p01.end = EndpointSingularity::ZeroOfQ;
        p1x.waypoints = {cplx(1.0), cplx(x)};
        p1x.start = EndpointSingularity::ZeroOfQ;
        total += period_integral(qd, p01).real();
        total += period_integral(qd, p1x).real();
    } else if (x != 0.0) {
        PathSpec p0x;
        p0x.waypoints = {cplx(0.0), cplx(x)};
        p0x.start = EndpointSingularity::OriginPole;
        total += period_integral(qd, p0x).real();
    }
    PathSpec vert;
    vert.waypoints = {cplx(x, 0.0), a};
    vert.end = EndpointSingularity::ZeroOfQ;
    if (x == 0.0) vert.start = EndpointSingularity::OriginPole;
    total += period_integral(qd, vert).real();
    return total;
}

}  // namespace

TEST_CASE("classification function reproduces high-precision anchors") {
    struct Anchor { cplx a; double S; };
    const Anchor anchors[] = {
        {{1.6, 2.0}, 0.089985450650079599},
        {{1.8, 2.0}, 0.43424009354930032},
        {{0.5, 2.0}, -1.8155633676496546},
        {{0.0, 2.0}, -2.8101154159851321},
        {{1.55, 2.0}, 0.0048240350816423951},
        {{2.0, 0.5}, 0.35882489390635828},
        {{3.0, 1.0}, 1.7891880656133624},
    };
    for (const auto& [a, S] : anchors)
        CHECK(sigma_value(a) == doctest::Approx(S).epsilon(1e-9));
    CHECK_THROWS_AS(sigma_value(cplx(1.0, -2.0)), DomainError);
}

TEST_CASE("classification function is negative whenever Re a <= 1") {
    for (double x : {-3.0, -1.0, 0.0, 0.3, 0.99, 1.0})
        for (double y : {0.3, 1.0, 2.0, 4.0})
            CHECK(sigma_value(cplx(x, y)) < 0.0);
}

TEST_CASE("split evaluation agrees with direct composite-path quadrature") {
    const cplx pts[] = {
        {1.6, 2.0},  {1.8, 2.0},  {0.5, 2.0},  {0.0, 2.0},  {1.55, 2.0},
        {2.0, 0.5},  {3.0, 1.0},  {-2.0, 0.7}, {-0.5, 1.3}, {0.25, 0.6},
        {0.75, 2.5}, {1.2, 0.4},  {2.5, 3.0},  {4.0, 4.0},  {1.01, 0.35},
        {-3.5, 4.0}, {0.5, 0.21}, {3.3, 0.8},  {1.5, 1.5},  {2.2, 1.1},
    };
    for (cplx a : pts)
        CHECK(sigma_value(a) == doctest::Approx(sigma_direct(a)).epsilon(1e-8).scale(1.0));
}

TEST_CASE("conjugate-path evaluation gives the same value") {
    // mirror path through the lower half-plane: same real part by symmetry
    for (cplx a : {cplx(1.6, 2.0), cplx(0.5, 2.0), cplx(2.5, 3.0)}) {
        auto qd = QuadDifferential::from_apex(a);
        PathSpec lower;
        lower.waypoints = {cplx(a.real(), 0.0), std::conj(a)};
        lower.end = EndpointSingularity::ZeroOfQ;
        double x = a.real();
        double total = 0.0;
        if (x > 1.0) {
            PathSpec p01, p1x;
            p01.waypoints = {cplx(0.0), cplx(1.0)};
            p01.start = EndpointSingularity::OriginPole;
            p01.end = EndpointSingularity::ZeroOfQ;
            p1x.waypoints = {cplx(1.0), cplx(x)};
            p1x.start = EndpointSingularity::ZeroOfQ;
            total = period_integral(qd, p01).real() + period_integral(qd, p1x).real();
        } else {
            PathSpec p0x;
            p0x.waypoints = {cplx(0.0), cplx(x)};
            p0x.start = EndpointSingularity::OriginPole;
            total = period_integral(qd, p0x).real();
        }
        total += period_integral(qd, lower).real();
        CHECK(sigma_value(a) == doctest::Approx(total).epsilon(1e-8).scale(1.0));
    }
}

TEST_CASE("classifier reproduces the anchor regions") {
    CHECK(classify_apex(cplx(1.6, 2.0)).region == Region::Omega1);
    CHECK(classify_apex(cplx(1.8, 2.0)).region == Region::Omega1);
    CHECK(classify_apex(cplx(0.5, 2.0)).region == Region::Omega2);
    CHECK(classify_apex(cplx(0.0, 2.0)).region == Region::Omega2);

    // the near-boundary anchor has by far the smallest margin of the five
    double m = classify_apex(cplx(1.55, 2.0)).margin;
    for (cplx a : {cplx(1.6, 2.0), cplx(1.8, 2.0), cplx(0.5, 2.0), cplx(0.0, 2.0)})
        CHECK(m < 0.1 * classify_apex(a).margin);

    // any Re a <= 1 point is in the one-short region regardless of sign
    CHECK(classify_apex(cplx(-2.0, 0.7)).region == Region::Omega2);
    CHECK(region_name(Region::Sigma) == std::string("Sigma"));
}

TEST_CASE("a corrected point lands inside the boundary band") {
    // walk x at fixed y=2 onto the boundary, then classify
    double lo = 1.5, hi = 1.6;
    for (int i = 0; i < 60; ++i) {
        double mid = 0.5 * (lo + hi);
        (sigma_value(cplx(mid, 2.0)) < 0 ? lo : hi) = mid;
    }
    auto c = classify_apex(cplx(0.5 * (lo + hi), 2.0));
    CHECK(c.region == Region::Sigma);
    CHECK(c.margin <= 1e-6);
}

TEST_CASE("curve tracing: residuals, monotonicity, strict Re z > 1") {
    SigmaCurve c = trace_sigma(60.0);
    REQUIRE(c.points.size() > 10);
    CHECK(c.complete);
    CHECK(c.points.front() == cplx(1.0, 0.0));
    for (std::size_t i = 1; i < c.points.size(); ++i) {
        CHECK(c.points[i].real() > 1.0);
        CHECK(std::abs(c.residual[i]) <= 1e-8);
        CHECK(c.points[i].imag() > c.points[i - 1].imag());
        CHECK(c.arclen[i] > c.arclen[i - 1]);
    }
    CHECK(std::abs(c.points.back()) >= 60.0);
    // the locus leaves z=1 steeply; the measured departure angle is ~65.2 deg,
    // noticeably steeper than the pi/3 launch direction of the trajectory itself
    CHECK(c.tangent_deg_at_origin > 60.0);
    CHECK(c.tangent_deg_at_origin == doctest::Approx(65.2).epsilon(0.02));
    CHECK(c.far_arg_deg > 85.0);
}

TEST_CASE("curve tracing approaches the vertical direction far out") {
    SigmaCurve c = trace_sigma(300.0);
    CHECK(c.complete);
    CHECK(c.far_arg_deg > 89.0);
    CHECK(c.far_arg_deg < 90.0);
}

TEST_CASE("x-derivative of the classification function is positive on the swept region") {
    CHECK(sigma_partial_derivative_check(cplx(1.55, 2.0)) > 0.0);
    CHECK(sigma_partial_derivative_check(cplx(2.0, 0.5)) > 0.0);
    CHECK(sigma_partial_derivative_check(cplx(4.0, 4.0)) > 0.0);
    CHECK_THROWS_AS(sigma_partial_derivative_check(cplx(0.5, 2.0)), DomainError);
}
