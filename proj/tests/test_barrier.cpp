#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "qtime/barrier.hpp"
#include "qtime/errors.hpp"

using namespace qtime;

TEST_CASE("square barrier") {
    const auto b = square(0.5, 2.0);
    REQUIRE(b.segments().size() == 1);
    CHECK(b.total_width() == 2.0);
    CHECK(b.parity_symmetric());
    CHECK(b == piecewise({{2.0, 0.5}}));
    CHECK(b.reversed() == b);
    CHECK_THROWS_AS(square(0.0, 2.0), InputError);
    CHECK_THROWS_AS(square(0.5, -1.0), InputError);
}

TEST_CASE("piecewise barriers") {
    CHECK_FALSE(piecewise({{1, 0.3}, {1, 0.6}}).parity_symmetric());
    CHECK(piecewise({{1, 0.3}, {2, 0.6}, {1, 0.3}}).parity_symmetric());
    CHECK(piecewise({{1, 0.0}}).max_height() == 0.0);
    CHECK_THROWS_AS(piecewise({}), InputError);
    CHECK_THROWS_AS(piecewise({{0.0, 0.3}}), InputError);
    CHECK_THROWS_AS(piecewise({{1.0, -0.3}}), InputError);
    CHECK(piecewise({{1, 0.3}, {2, 0.6}}).max_height() == 0.6);
}

TEST_CASE("reversal invariants") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        auto b = oracle::random_profile(rng, 5, 0.9);
        if (i % 3 == 0) {
            std::vector<Segment> pal(b.segments().begin(), b.segments().end());
            pal.insert(pal.end(), b.segments().rbegin(), b.segments().rend());
            b = piecewise(pal);
            CHECK(b.parity_symmetric());
        }
        const auto r = b.reversed();
        CHECK(r.parity_symmetric() == b.parity_symmetric());
        CHECK(r.total_width() == doctest::Approx(b.total_width()).epsilon(1e-15));
        CHECK(r.reversed() == b);
        double sum = 0.0;
        for (const auto& s : b.segments()) sum += s.width;
        CHECK(b.total_width() == doctest::Approx(sum).epsilon(1e-15));
    }
}
