#include <doctest.h>

#include <stbclab/constellation.hpp>
#include <stbclab/rng.hpp>

#include <algorithm>
#include <cmath>

using namespace stbclab;

TEST_SUITE_BEGIN("constellation");

TEST_CASE("4-QAM is the unit-energy QPSK set") {
    auto A = make_qam(4);
    REQUIRE(A.size() == 4);
    CHECK(A.bits_per_symbol() == 2);
    const double u = 1.0 / std::sqrt(2.0);
    // each of (+-1 +-i)/sqrt(2) present exactly once
    int found = 0;
    for (double re : {-u, u})
        for (double im : {-u, u})
            for (const auto& p : A.points())
                if (std::abs(p - Complex(re, im)) < 1e-14)
                    ++found;
    CHECK(found == 4);
}

TEST_CASE("QAM energies are exactly normalized") {
    for (int order : {4, 16, 64, 256}) {
        auto A = make_qam(order);
        REQUIRE(A.size() == order);
        double e = 0.0;
        for (const auto& p : A.points())
            e += std::norm(p);
        e /= order;
        CHECK(std::abs(e - 1.0) < 1e-12); // direct summation oracle
    }
}

TEST_CASE("16-QAM scale factor is 1/sqrt(10)") {
    auto A = make_qam(16);
    // the largest point is (3+3i)/sqrt(10)
    double maxmag = 0.0;
    for (const auto& p : A.points())
        maxmag = std::max(maxmag, std::abs(p));
    CHECK(maxmag == doctest::Approx(std::abs(Complex(3, 3)) / std::sqrt(10.0)).epsilon(1e-13));
}

TEST_CASE("unsupported orders throw") {
    CHECK_THROWS_AS(make_qam(8), UnsupportedOrder);
    CHECK_THROWS_AS(make_qam(32), UnsupportedOrder);
    CHECK_THROWS_AS(make_qam(0), UnsupportedOrder);
    CHECK_THROWS_AS(constellation_by_name("qam32"), UnsupportedOrder);
}

TEST_CASE("lookup by name") {
    CHECK(constellation_by_name("qam4").size() == 4);
    CHECK(constellation_by_name("qam256").size() == 256);
    CHECK(constellation_by_name("qam64").label() == "qam64");
}

TEST_CASE("raw constructor enforces the invariants") {
    CHECK_THROWS_AS(Constellation({{2.0, 0.0}, {0.0, 0.0}}, "bad-energy"), Error);
    CHECK_THROWS_AS(Constellation({{1.0, 0.0}, {1.0, 0.0}}, "dup"), Error);
    CHECK_THROWS_AS(Constellation({{1.0, 0.0}, {-0.5, 0.5}, {0.0, 0.0}}, "three"), Error);
    // BPSK is fine
    Constellation bpsk({{-1.0, 0.0}, {1.0, 0.0}}, "bpsk");
    CHECK(bpsk.bits_per_symbol() == 1);
}

TEST_CASE("difference set of BPSK") {
    Constellation bpsk({{-1.0, 0.0}, {1.0, 0.0}}, "bpsk");
    auto d = difference_set(bpsk);
    REQUIRE(d.size() == 3);
    CHECK(std::abs(d[0] - Complex(-2, 0)) < 1e-14);
    CHECK(std::abs(d[1] - Complex(0, 0)) < 1e-14);
    CHECK(std::abs(d[2] - Complex(2, 0)) < 1e-14);
}

TEST_CASE("difference set of 4-QAM has 9 values") {
    auto d = difference_set(make_qam(4));
    CHECK(d.size() == 9);
}

TEST_CASE("difference-set properties") {
    for (int order : {4, 16}) {
        auto A = make_qam(order);
        auto d = difference_set(A);
        CHECK(d.size() <= size_t(A.size()) * A.size());
        bool has_zero = false;
        for (const auto& v : d)
            if (std::abs(v) < 1e-14)
                has_zero = true;
        CHECK(has_zero);
        // closed under negation
        for (const auto& v : d) {
            bool found = false;
            for (const auto& w : d)
                if (std::abs(v + w) < 1e-12)
                    found = true;
            CHECK(found);
        }
    }
}

TEST_CASE("slice is idempotent on the points") {
    for (int order : {4, 16, 64}) {
        auto A = make_qam(order);
        for (int k = 0; k < A.size(); ++k)
            CHECK(A.slice(A.point(k)) == k);
    }
}

TEST_CASE("slice tie at the origin goes to index 0") {
    auto A = make_qam(4);
    CHECK(A.slice(Complex(0, 0)) == 0);
}

TEST_CASE("slice matches brute force on random points") {
    auto A = make_qam(16);
    TrialRng rng(3, 0, 0);
    for (int t = 0; t < 500; ++t) {
        Complex z = 2.0 * rng.next_cgauss();
        int best = 0;
        double bd = std::abs(z - A.point(0));
        for (int k = 1; k < A.size(); ++k) {
            double d = std::abs(z - A.point(k));
            if (d < bd) {
                bd = d;
                best = k;
            }
        }
        CHECK(A.slice(z) == best);
    }
}

TEST_CASE("slice rejects non-finite inputs") {
    auto A = make_qam(4);
    CHECK_THROWS_AS(A.slice(Complex(std::numeric_limits<double>::infinity(), 0)), Error);
}

TEST_SUITE_END();
