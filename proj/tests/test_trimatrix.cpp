#include <doctest.h>

#include <random>

#include "qd/roots.hpp"
#include "qd/trimatrix.hpp"

using namespace qd;

TEST_CASE("diagonal matrix") {
    TriMatrix m{{}, {cplx(1.0), cplx(2.0), cplx(3.0)}, {}};
    m.sub = {cplx(0.0), cplx(0.0)};
    m.sup = {cplx(0.0), cplx(0.0)};
    auto r = eig_tridiagonal(m);
    CHECK(std::abs(r.values[0] - cplx(1.0)) < 1e-12);
    CHECK(std::abs(r.values[1] - cplx(2.0)) < 1e-12);
    CHECK(std::abs(r.values[2] - cplx(3.0)) < 1e-12);
}

TEST_CASE("2x2 swap matrix has eigenvalues -1, 1") {
    TriMatrix m{{cplx(1.0)}, {cplx(0.0), cplx(0.0)}, {cplx(1.0)}};
    auto r = eig_tridiagonal(m);
    CHECK(std::abs(r.values[0] - cplx(-1.0)) < 1e-12);
    CHECK(std::abs(r.values[1] - cplx(1.0)) < 1e-12);
}

TEST_CASE("eigenvalues match the determinant-recurrence characteristic polynomial") {
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 3 + trial % 6;
        TriMatrix m;
        m.diag.resize(n);
        m.sub.resize(n - 1);
        m.sup.resize(n - 1);
        for (auto& x : m.diag) x = cplx(u(rng), u(rng));
        for (int i = 0; i < n - 1; ++i) {
            m.sub[i] = cplx(u(rng), u(rng));
            m.sup[i] = cplx(u(rng), u(rng));
        }
        auto eig = eig_tridiagonal(m);
        auto chroots = poly_roots(tridiagonal_charpoly(m));
        REQUIRE(eig.values.size() == chroots.size());
        for (size_t i = 0; i < chroots.size(); ++i) {
            double best = 1e300;
            for (const auto& v : eig.values) best = std::min(best, std::abs(v - chroots[i]));
            CHECK(best < 1e-6);
        }
    }
}

TEST_CASE("residual bound over random tridiagonal matrices up to n=64") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> nn(1, 64);
    int checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        int n = nn(rng);
        TriMatrix m;
        m.diag.resize(n);
        m.sub.resize(n - 1);
        m.sup.resize(n - 1);
        for (auto& x : m.diag) x = cplx(u(rng), u(rng));
        for (int i = 0; i < n - 1; ++i) {
            m.sub[i] = cplx(u(rng), u(rng));
            m.sup[i] = cplx(u(rng), u(rng));
        }
        auto r = eig_tridiagonal(m);
        if (r.defective_warning) continue;  // flagged, not silently wrong
        for (size_t k = 0; k < r.values.size(); ++k)
            CHECK(eig_residual(m, r.values[k], r.vectors[k]) <= 1e-8);
        ++checked;
    }
    CHECK(checked > 900);  // defective draws should be rare
}
