#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "jiosm/set_membership.hpp"
#include "oracles.hpp"

using namespace jiosm;

TEST_CASE("gate examples") {
    BoundState b = BoundState::fixed(1.0);
    CHECK_FALSE(violates_bound(Complex(0.0, 0.0), b));
    CHECK_FALSE(violates_bound(Complex(1.0, 0.0), b));
    CHECK_FALSE(violates_bound(Complex(0.6, 0.8), b));
    CHECK(violates_bound(Complex(1.1, 0.0), b));
    CHECK(b.snapshots_seen == 4);
    CHECK(b.updates_performed == 0);
}

TEST_CASE("gate is monotone in the output magnitude") {
    const double delta = 0.73;
    bool opened = false;
    for (int k = 0; k <= 400; ++k) {
        const double mag = 0.005 * k;
        const bool v = exceeds_bound(std::polar(mag, 0.3 * k), delta);
        if (opened) {
            CHECK(v);
        }
        opened |= v;
    }
    CHECK(opened);
}

TEST_CASE("always-update bound opens on any nonzero output") {
    BoundState b = BoundState::always_update();
    CHECK(violates_bound(Complex(1e-9, 0.0), b));
    CHECK_FALSE(violates_bound(Complex(0.0, 0.0), b));
}

TEST_CASE("bound recursion hand evaluation") {
    BoundState b;
    b.delta = 1.0;
    b.alpha = 22.0;
    b.beta = 0.99;
    b.noise_power_estimate = 1.0;
    CVector w = CVector::Zero(3);
    w(1) = 1.0;
    CHECK(bound_update(b, w) == doctest::Approx(0.99 + 0.01 * std::sqrt(22.0)).epsilon(1e-15));
    CHECK(b.delta == doctest::Approx(1.0369041575982342));
}

TEST_CASE("bound recursion with beta near one barely moves") {
    BoundState b;
    b.delta = 2.0;
    b.alpha = 50.0;
    b.beta = 1.0 - 1e-12;
    const CVector w = CVector::Ones(4);
    CHECK(bound_update(b, w) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("initial bound is the fixed point for constant weights") {
    std::mt19937_64 rng(1);
    const CVector w = oracle::random_vector(rng, 5);
    BoundState b = BoundState::parameter_dependent(22.0, 0.99, 0.1, w);
    const double d0 = b.delta;
    CHECK(d0 == doctest::Approx(std::sqrt(22.0 * w.squaredNorm() * 0.1)));
    for (int i = 0; i < 10; ++i) {
        bound_update(b, w);
    }
    CHECK(b.delta == doctest::Approx(d0).epsilon(1e-14));
}

TEST_CASE("bound stays within its convex envelope") {
    std::mt19937_64 rng(2);
    const double alpha = 9.0;
    const double sigma2 = 0.4;
    const CVector w0 = oracle::random_vector(rng, 4);
    BoundState b = BoundState::parameter_dependent(alpha, 0.95, sigma2, w0);
    double sup_w = w0.norm();
    const double d0 = b.delta;
    for (int i = 0; i < 500; ++i) {
        const CVector w = oracle::random_vector(rng, 4, 0.5 + (i % 7));
        sup_w = std::max(sup_w, w.norm());
        bound_update(b, w);
        CHECK(b.delta <= std::max(d0, std::sqrt(alpha * sigma2) * sup_w) * (1 + 1e-12));
    }
}

TEST_CASE("fixed bound never changes") {
    BoundState b = BoundState::fixed(1.4);
    bound_update(b, CVector::Ones(8) * 10.0);
    CHECK(b.delta == 1.4);
}

TEST_CASE("update rate") {
    BoundState b;
    CHECK_THROWS_AS(update_rate(b), std::domain_error);
    b.snapshots_seen = 100;
    CHECK(update_rate(b) == 0.0);
    b.updates_performed = 100;
    CHECK(update_rate(b) == 1.0);
    b.snapshots_seen = 1000;
    b.updates_performed = 172;
    CHECK(update_rate(b) == doctest::Approx(0.172));
}

TEST_CASE("bound construction validates its tuning") {
    const CVector w = CVector::Ones(2);
    CHECK_THROWS_AS(BoundState::parameter_dependent(0.5, 0.99, 1.0, w), std::invalid_argument);
    CHECK_THROWS_AS(BoundState::parameter_dependent(22.0, 1.0, 1.0, w), std::invalid_argument);
    CHECK_THROWS_AS(BoundState::parameter_dependent(22.0, 0.99, 0.0, w), std::invalid_argument);
    CHECK_THROWS_AS(BoundState::fixed(-1.0), std::invalid_argument);
}
