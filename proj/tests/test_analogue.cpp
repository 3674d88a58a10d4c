#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qtime/analogue.hpp"
#include "qtime/errors.hpp"

using namespace qtime;

TEST_CASE("layer dispersion") {
    CHECK(permittivity_layer(1.0, 2.25).q_squared(2.0) == doctest::Approx(9.0));
    CHECK(permittivity_layer(1.0, -4.0).q_squared(1.0) < 0.0);
    CHECK(cutoff_layer(1.0, 1.0).q_squared(0.5) == doctest::Approx(-0.75));
    const auto tab = tabulated_layer(1.0, {{1.0, 2.0}, {3.0, 4.0}});
    CHECK(tab.q_squared(2.0) == doctest::Approx(3.0 * 4.0));
    CHECK(tab.q_squared(0.5) == doctest::Approx(2.0 * 0.25));
    CHECK_THROWS_AS(tabulated_layer(1.0, {{1.0, 2.0}}), InputError);
    CHECK_THROWS_AS(tabulated_layer(1.0, {{1.0, 2.0}, {1.0, 3.0}}), InputError);
    CHECK_THROWS_AS(permittivity_layer(0.0, 1.0), InputError);
}

TEST_CASE("quantum mapping") {
    const double m = 1.0, E = 0.3;
    CHECK(mapped_frequency(m, E) == doctest::Approx(std::sqrt(2.0 * m * E)));
    const auto bare = map_from_quantum(piecewise({{2.0, 0.0}}), m, E);
    CHECK(bare.layers().front().q_squared(mapped_frequency(m, E)) == doctest::Approx(2.0 * m * E));
    const auto opaque = map_from_quantum(square(0.5, 2.0), m, E);
    CHECK(opaque.layers().front().q_squared(mapped_frequency(m, E)) < 0.0);
    CHECK(opaque.source().has_value());
    CHECK(opaque.total_width() == 2.0);

    std::mt19937_64 rng(17);
    for (int i = 0; i < 40; ++i) {
        const auto profile = oracle::random_profile(rng, 5, 0.8);
        for (double k : {0.2, 0.6, 1.3}) {
            const double En = k * k / (2.0 * m);
            const double w = mapped_frequency(m, En);
            const auto stack = map_from_quantum(profile, m, En);
            const cplx mapped = helmholtz_coefficients(stack, w).T * std::exp(cplx{0.0, -w * stack.total_width()});
            const cplx nr = nonrelativistic_coefficients(profile, k, m).T;
            CHECK(std::abs(mapped - nr) < 1e-12 * std::max(1.0, std::abs(nr)));
        }
    }
}

TEST_CASE("vacuum stacks") {
    const SlabStack empty({});
    CHECK(std::abs(helmholtz_coefficients(empty, 1.3).T - 1.0) < 1e-15);
    CHECK(std::abs(helmholtz_coefficients(empty, 1.3).R) < 1e-15);
    const SlabStack vac({permittivity_layer(1.5, 1.0), permittivity_layer(2.0, 1.0)});
    for (double w : {0.3, 1.0, 4.0}) {
        CHECK(std::abs(helmholtz_coefficients(vac, w).T - std::exp(cplx{0.0, 3.5 * w})) < 1e-12);
        CHECK(*group_delay(vac, w) == doctest::Approx(3.5).epsilon(1e-8));
    }
}

TEST_CASE("evanescent slab against closed form") {
    for (double eps : {-0.5, -2.0, -9.0}) {
        for (double X : {0.5, 2.0, 6.0}) {
            const double w = 1.1;
            const SlabStack s({permittivity_layer(X, eps)});
            const auto c = helmholtz_coefficients(s, w);
            const cplx q{0.0, w * std::sqrt(-eps)};
            const cplx expect = oracle::slab_transmission(w, q, X) * std::exp(cplx{0.0, w * X});
            CHECK(std::abs(c.T - expect) < 1e-10 * std::max(1.0, std::abs(expect)));
            CHECK(std::abs(std::norm(c.T) + std::norm(c.R) - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("dispersive barrier delay saturates") {
    const double w = 0.6, wc2 = 1.0;
    const double kappa = std::sqrt(wc2 - w * w);
    const double d5 = 5.0 / kappa, d10 = 10.0 / kappa;
    const double g5 = *group_delay(SlabStack({cutoff_layer(d5, wc2)}), w);
    const double g10 = *group_delay(SlabStack({cutoff_layer(d10, wc2)}), w);
    CHECK(std::abs(g10 - g5) / g5 < 0.01);
}

TEST_CASE("delay comparison") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 20; ++i) {
        const auto profile = oracle::random_profile(rng, 4, 0.9);
        for (double E : {0.05, 0.2, 0.6}) {
            const double m = 1.0;
            const auto cmp = compare_delays(profile, m, E);
            CHECK(cmp.omega == doctest::Approx(std::sqrt(2.0 * m * E)));
            CHECK(cmp.free_crossing == profile.total_width());
            const double chain = cmp.free_crossing + cmp.omega / m * cmp.nonrelativistic_delay;
            CHECK(std::abs(cmp.group_delay - chain) < 1e-6 * std::max(1.0, std::abs(chain)));
            CHECK(cmp.caveat.find("not a signal transit time") != std::string::npos);
        }
    }
    CHECK_THROWS_AS(compare_delays(square(0.5, 1.0), 1.0, 0.0), InputError);
}
