#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qtime/errors.hpp"
#include "qtime/kinematics.hpp"
#include "qtime/quadrature.hpp"

using namespace qtime;

TEST_CASE("energy") {
    CHECK(energy(0.0, 1.0) == 1.0);
    CHECK(energy(1.0, 1.0) == doctest::Approx(std::numbers::sqrt2).epsilon(1e-15));
    const double k = 1e6;
    CHECK(std::abs(energy(k, 1.0) - (k + 0.5 / k)) / k < 1e-9);
    CHECK(energy(-3.0, 2.0) == energy(3.0, 2.0));
    CHECK_THROWS_AS(energy(std::numeric_limits<double>::quiet_NaN(), 1.0), InputError);
    CHECK_THROWS_AS(energy(1.0, 0.0), InputError);
}

TEST_CASE("velocity") {
    CHECK(velocity(0.0, 1.0) == 0.0);
    CHECK(velocity(1.0, 1.0) == doctest::Approx(1.0 / std::numbers::sqrt2).epsilon(1e-15));
    double last = 0.0;
    for (double k : {1.0, 10.0, 100.0}) {
        const double v = velocity(k, 1.0);
        CHECK(v > last);
        CHECK(v < 1.0);
        last = v;
    }
}

TEST_CASE("mass-shell and subluminal properties") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ks(-50.0, 50.0);
    std::uniform_real_distribution<double> ms(0.01, 10.0);
    for (int i = 0; i < 2000; ++i) {
        const double k = ks(rng);
        const double m = ms(rng);
        const double E = energy(k, m);
        CHECK(std::abs((E * E - k * k) - m * m) <= 1e-12 * E * E);
        CHECK(velocity(k, m) == k / E);
        CHECK(std::abs(velocity(k, m)) < 1.0);
        CHECK(E >= m);
    }
}

TEST_CASE("tunneling velocity bounds") {
    CHECK(max_tunneling_velocity(1.0 - 1e-12, 1.0) == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-9));
    CHECK(max_tunneling_velocity(0.0, 1.0) == 0.0);
    CHECK(max_tunneling_velocity(0.5, 1.0) == doctest::Approx(std::sqrt(5.0) / 3.0).epsilon(1e-14));
    CHECK(max_tunneling_velocity(0.5, 1.0) == doctest::Approx(0.745).epsilon(1e-3));
    CHECK_THROWS_AS(max_tunneling_velocity(1.0, 1.0), DomainError);
    CHECK_THROWS_AS(max_tunneling_velocity(2.0, 1.0), DomainError);

    const double pair = pair_production_velocity_bound();
    CHECK(pair == doctest::Approx(0.9428).epsilon(1e-4));
    CHECK(pair > std::sqrt(3.0) / 2.0);
    CHECK(pair < 1.0);
}

TEST_CASE("wave packet construction") {
    CHECK_NOTHROW(WavePacketSpec(1.0, 1.0, 0.2, 10.0));
    CHECK_THROWS_AS(WavePacketSpec(1.0, 1.0, 0.21, 10.0), InputError);
    CHECK_THROWS_AS(WavePacketSpec(1.0, 1.0, 0.05, 0.0), InputError);
    CHECK_THROWS_AS(WavePacketSpec(0.0, 1.0, 0.05, 1.0), InputError);
    CHECK_THROWS_AS(WavePacketSpec(1.0, -1.0, 0.05, 1.0), InputError);
    const WavePacketSpec p(1.0, 1.0, 0.05, 10.0);
    CHECK(p.sigma_x() == doctest::Approx(10.0));
}

TEST_CASE("gaussian amplitude normalization and phase") {
    const WavePacketSpec p(1.0, 1.0, 0.05, 10.0);
    CHECK(std::norm(gaussian_amplitude(p, 1.0)) ==
          doctest::Approx(std::sqrt(2.0 * std::numbers::pi) / 0.05).epsilon(1e-13));

    const auto rule = gauss_legendre(400, p.k0() - 8 * p.sigma_p(), p.k0() + 8 * p.sigma_p());
    double norm = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        norm += rule.weights[j] * std::norm(gaussian_amplitude(p, rule.nodes[j])) / (2.0 * std::numbers::pi);
    }
    CHECK(std::abs(norm - 1.0) < 1e-9);

    const WavePacketSpec wide(1.0, 1.0, 0.2, 3.0);
    const auto psi0 = gaussian_amplitude(wide, 0.0);
    for (double k : {0.3, 0.9, 1.7}) {
        const double diff = std::arg(gaussian_amplitude(wide, k)) - std::arg(psi0);
        CHECK(std::abs(oracle::wrap(diff - k * wide.x0())) < 1e-12);
    }
    CHECK(as_amplitude(wide)(0.7) == gaussian_amplitude(wide, 0.7));
}
