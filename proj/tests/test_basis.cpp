#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tubeband/basis.hpp"
#include "tubeband/error.hpp"

using namespace tubeband;

TEST_SUITE("basis") {

TEST_CASE("make_knots interior layout") {
    const auto k4 = make_knots(4, 4);
    CHECK(k4.interior_count() == 0);
    CHECK(k4.dimension() == 4);

    const auto k7 = make_knots(7, 4);
    REQUIRE(k7.interior().size() == 3);
    CHECK(k7.interior()[0] == doctest::Approx(0.25));
    CHECK(k7.interior()[1] == doctest::Approx(0.5));
    CHECK(k7.interior()[2] == doctest::Approx(0.75));
    CHECK(k7.extended().size() == 11u);

    CHECK_THROWS_AS((void)make_knots(3, 4), Error);
    CHECK_THROWS_AS((void)make_knots(3, 0), Error);
}

TEST_CASE("Bernstein case at zero interior knots") {
    const auto kv = make_knots(4, 4);
    const auto b0 = eval(kv, 0.0);
    CHECK(b0.offset == 0);
    CHECK(b0[0] == 1.0);
    CHECK(b0[1] == 0.0);
    CHECK(b0[2] == 0.0);
    CHECK(b0[3] == 0.0);

    // Cubic Bernstein polynomials.
    for (double x : {0.1, 0.33, 0.5, 0.9, 1.0}) {
        const auto b = eval(kv, x);
        const double y = 1.0 - x;
        CHECK(b[0] == doctest::Approx(y * y * y).epsilon(1e-14));
        CHECK(b[1] == doctest::Approx(3 * x * y * y).epsilon(1e-14));
        CHECK(b[2] == doctest::Approx(3 * x * x * y).epsilon(1e-14));
        CHECK(b[3] == doctest::Approx(x * x * x).epsilon(1e-14));
    }

    const auto d0 = eval_deriv(kv, 0.0);
    CHECK(d0[0] == doctest::Approx(-3.0));
    CHECK(d0[1] == doctest::Approx(3.0));
    CHECK(d0[2] == 0.0);
    CHECK(d0[3] == 0.0);
}

TEST_CASE("Cox-de Boor oracle entrywise") {
    const auto kv = make_knots(10, 4);
    const auto b = eval(kv, 0.37);
    const auto ref = oracle::basis(10, 4, 0.37);
    for (int j = 0; j < 10; ++j) CHECK(std::abs(b[j] - ref(j)) <= 1e-13);

    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int q : {1, 2, 3, 4, 5}) {
        for (int J : {q, q + 1, q + 7, 25}) {
            const auto k = make_knots(J, q);
            for (int rep = 0; rep < 40; ++rep) {
                const double x = rep == 0 ? 1.0 : (rep == 1 ? 0.0 : u(gen));
                const auto v = eval(k, x);
                const auto r = oracle::basis(J, q, x);
                for (int j = 0; j < J; ++j) REQUIRE(std::abs(v[j] - r(j)) <= 1e-13);
            }
        }
    }
}

TEST_CASE("knot points are right-continuous, x = 1 is a left limit") {
    const auto kv = make_knots(7, 4);
    const auto at = eval(kv, 0.5);
    const auto ref = oracle::basis(7, 4, 0.5);
    for (int j = 0; j < 7; ++j) CHECK(at[j] == doctest::Approx(ref(j)).epsilon(1e-14));
    const auto one = eval(kv, 1.0);
    CHECK(one[6] == doctest::Approx(1.0));
    CHECK(kv.span(1.0) == kv.span(1.0 - 1e-12));
    CHECK(kv.span(0.5) > kv.span(0.5 - 1e-12));
}

TEST_CASE("partition of unity, support size and the q^-1 <= |b|^2 <= 1 bounds") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int q : {1, 2, 3, 4, 6}) {
        const auto kv = make_knots(q + 13, q);
        for (int rep = 0; rep < 1000; ++rep) {
            const double x = u(gen);
            const auto b = eval(kv, x);
            REQUIRE(std::abs(b.sum() - 1.0) <= 1e-12);
            REQUIRE(static_cast<int>(b.values.size()) <= q);
            REQUIRE(b.norm_sq() >= 1.0 / q - 1e-14);
            REQUIRE(b.norm_sq() <= 1.0 + 1e-14);
            for (double v : b.values) REQUIRE(v >= -1e-15);
        }
    }
}

TEST_CASE("derivative: sums to zero and matches finite differences") {
    const auto kv = make_knots(10, 4);
    const double h = 1e-6;
    const auto d = eval_deriv(kv, 0.37);
    const auto lo = eval(kv, 0.37 - h);
    const auto hi = eval(kv, 0.37 + h);
    for (int j = 0; j < 10; ++j) CHECK(std::abs(d[j] - (hi[j] - lo[j]) / (2 * h)) <= 1e-5);

    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.01, 0.99);
    for (int q : {2, 3, 4, 5}) {
        const auto k = make_knots(q + 9, q);
        for (int rep = 0; rep < 200; ++rep) {
            const double x = u(gen);
            // Finite differences straddling a knot are meaningless for q = 2.
            if (k.span(x - h) != k.span(x + h)) continue;
            const auto dv = eval_deriv(k, x);
            REQUIRE(std::abs(dv.sum()) <= 1e-10);
            const auto a = eval(k, x - h);
            const auto b = eval(k, x + h);
            for (int j = 0; j < k.dimension(); ++j) {
                REQUIRE(std::abs(dv[j] - (b[j] - a[j]) / (2 * h)) <= 1e-5 * (1.0 + std::abs(dv[j])));
            }
        }
    }
}

TEST_CASE("order 1 has zero derivative") {
    const auto kv = make_knots(5, 1);
    const auto d = eval_deriv(kv, 0.3);
    for (int j = 0; j < 5; ++j) CHECK(d[j] == 0.0);
    CHECK_THROWS_AS((void)derivative_matrix(kv), Error);
}

TEST_CASE("derivative matrix") {
    const auto k4 = make_knots(4, 4);
    const auto W = derivative_matrix(k4);
    CHECK(W.rows() == 4);
    CHECK(W.cols() == 3);
    CHECK(W(0, 0) == doctest::Approx(-3.0));

    const auto kv = make_knots(12, 4);
    const auto D = derivative_matrix(kv);
    for (int c = 0; c < D.cols(); ++c) {
        double s = 0.0;
        for (int r = 0; r < D.rows(); ++r) s += D(r, c);
        CHECK(std::abs(s) <= 1e-12);
    }

    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> u(0.01, 0.99);
    const double h = 1e-6;
    for (int rep = 0; rep < 50; ++rep) {
        const double x = u(gen);
        const auto wb = D.apply(eval_lower(kv, x));
        const auto a = eval(kv, x - h);
        const auto b = eval(kv, x + h);
        for (int j = 0; j < 12; ++j) REQUIRE(std::abs(wb[j] - (b[j] - a[j]) / (2 * h)) <= 1e-5);
    }
}

TEST_CASE("eval outside [0, 1] is a domain error") {
    const auto kv = make_knots(6, 4);
    try {
        (void)eval(kv, 1.5);
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Domain);
    }
    CHECK_THROWS_AS((void)eval(kv, -0.01), Error);
    CHECK_THROWS_AS((void)eval(kv, std::nan("")), Error);
}

}  // TEST_SUITE
