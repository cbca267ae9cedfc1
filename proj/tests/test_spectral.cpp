#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qd/roots.hpp"
#include "qd/spectral.hpp"

using namespace qd;

namespace {

// Independent route: apply L = -4z d^2/dz^2 + (4z^2 + 2 g sqrt(m) z - 2) d/dz
// - (4mz - g sqrt(m)/2) through polynomial arithmetic.
Poly apply_operator(const Poly& q, int m, double gamma) {
    const double gs = gamma * std::sqrt(static_cast<double>(m));
    const Poly A(std::vector<cplx>{cplx(0.0), cplx(-4.0)});
    const Poly B(std::vector<cplx>{cplx(-2.0), cplx(2.0 * gs), cplx(4.0)});
    const Poly C(std::vector<cplx>{cplx(gs / 2.0), cplx(-4.0 * m)});
    const Poly dq = q.derivative();
    return A * dq.derivative() + B * dq + C * q;
}

cplx lambda_from_root_sum(const std::vector<cplx>& roots, int m, double gamma) {
    cplx lam = gamma * std::sqrt(static_cast<double>(m)) / 2.0;
    for (const cplx& z : roots) lam += 2.0 / z;
    return lam;
}

} // namespace

TEST_CASE("operator matrix columns agree with symbolic application to monomials") {
    for (int m : {1, 2, 3, 5, 8, 12, 40, 100}) {
        for (double gamma : {0.0, 1.0, -2.5}) {
            const TriMatrix M = operator_matrix({m, gamma});
            REQUIRE(M.size() == m + 1);
            for (int k = 0; k <= m; ++k) {
                std::vector<cplx> mono(k + 1, cplx(0.0));
                mono[k] = 1.0;
                const Poly img = apply_operator(Poly(mono), m, gamma);
                // the image must stay inside degree <= m (invariant subspace)
                CHECK(img.degree() <= m);
                for (int j = 0; j <= m; ++j) {
                    cplx entry(0.0);
                    if (j == k) entry = M.diag[k];
                    else if (j == k + 1) entry = M.sub[k];
                    else if (j == k - 1) entry = M.sup[k - 1];
                    CHECK(std::abs(img.coeff(j) - entry) <=
                          1e-10 * (1.0 + std::abs(entry)));
                }
            }
        }
    }
}

TEST_CASE("two-dimensional sector: eigenvalues +-2 sqrt(2), roots +-1/sqrt(2)") {
    const SpectralSolution sol = spectrum({1, 0.0});
    REQUIRE(sol.eigenvalues.size() == 2);
    const double r8 = 2.0 * std::sqrt(2.0);
    CHECK(std::abs(sol.eigenvalues[0] - cplx(-r8)) < 1e-14);
    CHECK(std::abs(sol.eigenvalues[1] - cplx(r8)) < 1e-14);
    REQUIRE(sol.roots[0].size() == 1);
    REQUIRE(sol.roots[1].size() == 1);
    CHECK(std::abs(sol.roots[0][0] - cplx(-1.0 / std::sqrt(2.0))) < 1e-12);
    CHECK(std::abs(sol.roots[1][0] - cplx(1.0 / std::sqrt(2.0))) < 1e-12);
    CHECK(!sol.defective_warning);
}

TEST_CASE("frozen spectra from a 40-digit independent eigensolve") {
    SUBCASE("m=2, gamma=1") {
        const SpectralSolution sol = spectrum({2, 1.0});
        const double expect[] = {-4.232934223836542733, 2.2488708351581086012,
                                 12.590665106476646998};
        REQUIRE(sol.eigenvalues.size() == 3);
        for (int k = 0; k < 3; ++k) {
            CHECK(sol.eigenvalues[k].imag() == 0.0);
            CHECK(std::abs(sol.eigenvalues[k].real() - expect[k]) < 1e-11);
        }
    }
    SUBCASE("m=6, gamma=-1.5") {
        const SpectralSolution sol = spectrum({6, -1.5});
        const double expect[] = {-77.78536315281033776, -54.924252754102698584,
                                 -34.566849999779206052, -17.152364800016640182,
                                 -4.0616084393423126634, 4.3040447595228824506,
                                 17.008719441576407589};
        REQUIRE(sol.eigenvalues.size() == 7);
        for (int k = 0; k < 7; ++k)
            CHECK(std::abs(sol.eigenvalues[k].real() - expect[k]) < 1e-9);
    }
}

TEST_CASE("eigenpairs satisfy the eigenvalue equation coefficient-wise") {
    const int m = 9;
    const double gamma = 0.3;
    const SpectralSolution sol = spectrum({m, gamma});
    REQUIRE(sol.eigenvalues.size() == static_cast<size_t>(m + 1));
    CHECK(!sol.defective_warning);
    for (size_t k = 0; k < sol.eigenvalues.size(); ++k) {
        const Poly q(sol.eigenpolys[k]);
        REQUIRE(q.degree() == m);
        CHECK(q.leading() == cplx(1.0));  // normalized monic exactly
        const Poly lhs = apply_operator(q, m, gamma);
        const Poly rhs = q * sol.eigenvalues[k];
        const double scale =
            (1.0 + std::abs(sol.eigenvalues[k])) * std::max(1.0, q.max_coeff_abs());
        for (int j = 0; j <= m; ++j)
            CHECK(std::abs(lhs.coeff(j) - rhs.coeff(j)) <= 1e-10 * scale);
        // real gamma: the symmetric solve keeps everything real
        for (const cplx& c : sol.eigenpolys[k]) CHECK(c.imag() == 0.0);
    }
    // eigenvalues strictly increasing (unreduced tridiagonal, similar to symmetric)
    for (size_t k = 1; k < sol.eigenvalues.size(); ++k)
        CHECK(sol.eigenvalues[k].real() > sol.eigenvalues[k - 1].real() + 1e-9);
}

TEST_CASE("spectrum agrees with the characteristic-polynomial route") {
    const TriMatrix M = operator_matrix({5, 0.8});
    const SpectralSolution sol = spectrum({5, 0.8});
    std::vector<cplx> ch = poly_roots(tridiagonal_charpoly(M));
    REQUIRE(ch.size() == sol.eigenvalues.size());
    for (size_t k = 0; k < ch.size(); ++k)
        CHECK(std::abs(ch[k] - sol.eigenvalues[k]) < 1e-7 * (1.0 + std::abs(ch[k])));
}

TEST_CASE("riccati residual vanishes on eigenpairs and flags a shifted eigenvalue") {
    const int m = 6;
    const double gamma = 0.7;
    const SpectralSolution sol = spectrum({m, gamma});
    for (size_t k = 0; k < sol.eigenvalues.size(); ++k) {
        double rad = 2.0;
        for (const cplx& r : sol.roots[k]) rad = std::max(rad, std::abs(r) + 2.0);
        for (int t = 0; t < 20; ++t) {
            const cplx z = rad * std::exp(cplx(0.0, 2.0 * PI * t / 20.0 + 0.1));
            const cplx res =
                riccati_residual(sol.eigenpolys[k], sol.eigenvalues[k], m, gamma, z);
            CHECK(std::abs(res) <= 1e-8);
            // shifting lambda by 0.1 moves the residual by exactly 0.1/m
            const cplx bad = riccati_residual(sol.eigenpolys[k],
                                              sol.eigenvalues[k] + 0.1, m, gamma, z);
            CHECK(std::abs(bad) >= 0.1 / m - 1e-7);
        }
    }
}

TEST_CASE("equilibrium polish restores root accuracy lost by coefficient extraction") {
    const int m = 40;
    const SpectralSolution sol = spectrum({m, 0.0});
    REQUIRE(sol.eigenvalues.size() == static_cast<size_t>(m + 1));
    const cplx lam = sol.eigenvalues.back();
    CHECK(std::abs(lam.real() - 775.59262181446726445) < 1e-8);

    // top branch: the refined roots reproduce the eigenvalue through the
    // constant-term identity lambda = g sqrt(m)/2 + 2 sum 1/z_i
    const std::vector<cplx>& good = sol.roots.back();
    REQUIRE(good.size() == static_cast<size_t>(m));
    CHECK(std::abs(lambda_from_root_sum(good, m, 0.0) - lam) <= 1e-8 * std::abs(lam));

    // raw coefficient-based roots of the same eigenpolynomial do not
    const std::vector<cplx> raw = poly_roots(Poly(sol.eigenpolys.back()));
    CHECK(std::abs(lambda_from_root_sum(raw, m, 0.0) - lam) > 1e-6 * std::abs(lam));

    // the refined configuration satisfies the stationarity system tightly
    std::vector<cplx> x(good);
    const double sm = std::sqrt(static_cast<double>(m));
    for (cplx& xi : x) xi /= sm;
    double worst = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        cplx s(0.0);
        for (size_t j = 0; j < x.size(); ++j)
            if (j != i) s += 1.0 / (x[i] - x[j]);
        worst = std::max(worst,
                         std::abs(s - 0.5 * m * x[i] - 0.0 + 0.25 / x[i]));
    }
    CHECK(worst <= 1e-9);

    // gamma=0 extremal branch: all roots real and positive
    for (const cplx& z : good) {
        CHECK(std::abs(z.imag()) <= 1e-8);
        CHECK(z.real() > 0.0);
    }

    // polishing already-accurate roots is a no-op within rounding
    const SpectralSolution small = spectrum({8, 0.0});
    std::vector<cplx> xs(small.roots.back());
    for (cplx& xi : xs) xi /= std::sqrt(8.0);
    std::vector<cplx> xs2(xs);
    REQUIRE(equilibrium_polish(xs2, 8, 0.0));
    for (size_t i = 0; i < xs.size(); ++i) CHECK(std::abs(xs2[i] - xs[i]) < 1e-9);

    // wrong root count: refuses rather than solving an inconsistent system
    std::vector<cplx> short_list(xs.begin(), xs.begin() + 3);
    CHECK(!equilibrium_polish(short_list, 8, 0.0));
}

TEST_CASE("rescaled root measure") {
    const SpectralSolution sol = spectrum({12, 0.0});
    const RootMeasure mu = rescaled_root_measure(sol, 12);
    REQUIRE(mu.points.size() == 12);
    CHECK(mu.weight == doctest::Approx(1.0 / 12.0));
    const double sm = std::sqrt(12.0);
    for (int i = 0; i < 12; ++i)
        CHECK(std::abs(mu.points[i] - sol.roots[12][i] / sm) == 0.0);
    CHECK_THROWS_AS(rescaled_root_measure(sol, 13), DomainError);
    CHECK_THROWS_AS(rescaled_root_measure(sol, -1), DomainError);
}

TEST_CASE("cauchy transform of a root-counting measure is the partial-fraction sum") {
    const std::vector<cplx> roots = {cplx(1.0), cplx(0.0, 2.0), cplx(-0.5, 0.0)};
    const Poly p = Poly::from_roots(roots);
    for (const cplx z : {cplx(3.0, 1.0), cplx(-2.0, 0.5), cplx(0.7, -1.3)}) {
        cplx direct(0.0);
        for (const cplx& r : roots) direct += 1.0 / (z - r);
        direct /= 3.0;
        CHECK(std::abs(cauchy_of_roots(p, z) - direct) < 1e-13);
    }
    CHECK_THROWS_AS(cauchy_of_roots(Poly(std::vector<cplx>{cplx(2.0)}), cplx(1.0)),
                    DomainError);
    CHECK_THROWS_AS(cauchy_of_roots(p, cplx(1.0)), DomainError);
}

TEST_CASE("the 3/2-rescaled top eigenvalue stabilizes; the 4/3 one does not") {
    const DeltaEstimates est = delta_estimates({1, 10, 20, 40, 80}, 0.0);
    REQUIRE(est.rows.size() == 5);
    const double frozen32[] = {2.8284271247461900976, 3.02555181392492616,
                               3.05238826613626071, 3.06579902669414033,
                               3.07250142171722821};
    for (int i = 0; i < 5; ++i) {
        CHECK(std::abs(est.rows[i].scaled_32 - frozen32[i]) < 1e-9);
        // successive 3/2 differences shrink; 4/3 ones grow once the list is
        // geometric in m (the first gap 1 -> 10 is oversized)
        if (i >= 2) CHECK(std::abs(est.rows[i].diff_32) < std::abs(est.rows[i - 1].diff_32));
        if (i >= 3) CHECK(std::abs(est.rows[i].diff_43) > std::abs(est.rows[i - 1].diff_43));
    }
    CHECK(est.stabilizing_exponent_num == 3);
    CHECK(est.stabilizing_exponent_den == 2);
    CHECK(est.delta_hat == doctest::Approx(3.07250142171722821 / 4.0).epsilon(1e-9));
    // heading toward the analytic limit 16/(3 sqrt 3) from below
    const double limit = 16.0 / (3.0 * std::sqrt(3.0));
    CHECK(est.rows[4].scaled_32 < limit);
    CHECK(limit - est.rows[4].scaled_32 < 0.007);

    // a lower branch scales lower
    const DeltaEstimates second = delta_estimates({20, 40}, 0.0, 1);
    CHECK(second.rows[1].lambda.real() < est.rows[3].lambda.real());

    CHECK_THROWS_AS(delta_estimates({}, 0.0), DomainError);
    CHECK_THROWS_AS(delta_estimates({3}, 0.0, 10), DomainError);
}
