#include <doctest.h>

#include <cmath>
#include <random>

#include "jiosm/array_model.hpp"
#include "jiosm/errors.hpp"
#include "jiosm/lcmv.hpp"
#include "oracles.hpp"

using namespace jiosm;

namespace {

ReducedRankState random_state(std::mt19937_64& rng, int m, int r) {
    return {oracle::random_matrix(rng, m, r), oracle::random_vector(rng, r)};
}

}  // namespace

TEST_CASE("identity-column transform selects leading entries") {
    std::mt19937_64 rng(1);
    const CVector x = oracle::random_vector(rng, 6);
    ReducedRankState s{CMatrix::Identity(6, 3), CVector::Ones(3)};
    CHECK((reduce(s, x) - x.head(3)).norm() < 1e-15);
    s.transform.setZero();
    CHECK(reduce(s, x).norm() == 0.0);
}

TEST_CASE("reduce matches a triple-loop conjugate-transpose multiply") {
    std::mt19937_64 rng(2);
    const ReducedRankState s = random_state(rng, 6, 3);
    const CVector x = oracle::random_vector(rng, 6);
    CHECK((reduce(s, x) - oracle::adjoint_times(s.transform, x)).norm() < 1e-12);
}

TEST_CASE("array output with a canonical weight picks the first entry") {
    std::mt19937_64 rng(3);
    const CVector x = oracle::random_vector(rng, 5);
    ReducedRankState s{CMatrix::Identity(5, 2), CVector::Zero(2)};
    s.weights(0) = 1.0;
    CHECK(std::abs(array_output(s, x) - x(0)) < 1e-15);
}

TEST_CASE("array output equals the full-rank output of T w") {
    std::mt19937_64 rng(4);
    const ReducedRankState s = random_state(rng, 7, 3);
    const CVector x = oracle::random_vector(rng, 7);
    CHECK(std::abs(array_output(s, x) - oracle::inner(s.effective_weights(), x)) < 1e-12);
}

TEST_CASE("initial state satisfies the constraint and returns the gain on the SOI") {
    const UlaConfig cfg{16, 0.5};
    for (double gain : {1.0, 2.5, -0.7}) {
        const GainConstraint c{steering_vector(cfg, 72.0), gain};
        for (int r : {1, 3, 5, 16}) {
            for (auto init : {TransformInit::Identity, TransformInit::Subarray}) {
                const auto s = ReducedRankState::initial(c, r, init);
                CHECK(constraint_residual(s.effective_weights(), c) < 1e-12);
                CHECK(std::abs(array_output(s, c.steering) - gain) < 1e-8);
            }
        }
    }
}

TEST_CASE("identity initialization is [I_r; 0]") {
    const GainConstraint c{steering_vector({8, 0.5}, 50.0), 1.0};
    const auto s = ReducedRankState::initial(c, 3);
    CHECK((s.transform - CMatrix::Identity(8, 3)).norm() == 0.0);
    CHECK(s.effective_weights().squaredNorm() == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("subarray initialization starts at the conventional beamformer") {
    const GainConstraint c{steering_vector({16, 0.5}, 65.0), 1.0};
    for (int r : {1, 2, 4, 8, 16}) {
        const auto s = ReducedRankState::initial(c, r, TransformInit::Subarray);
        CHECK((s.effective_weights() - c.steering / 16.0).norm() < 1e-12);
    }
}

TEST_CASE("initial rejects out-of-range ranks") {
    const GainConstraint c{steering_vector({4, 0.5}, 50.0), 1.0};
    CHECK_THROWS_AS(ReducedRankState::initial(c, 0), std::invalid_argument);
    CHECK_THROWS_AS(ReducedRankState::initial(c, 5), std::invalid_argument);
}

TEST_CASE("MVDR with white covariance is the conventional beamformer") {
    const GainConstraint c{steering_vector({6, 0.5}, 80.0), 1.0};
    const CMatrix I = CMatrix::Identity(6, 6);
    const CVector w1 = optimal_full_rank(I, c).w;
    CHECK((w1 - c.steering / 6.0).norm() < 1e-14);
    CHECK((optimal_full_rank(2.0 * I, c).w - w1).norm() < 1e-14);
}

TEST_CASE("MVDR is invariant to positive scaling and matches a dense solve") {
    std::mt19937_64 rng(5);
    const GainConstraint c{steering_vector({6, 0.5}, 100.0), 1.3};
    const CMatrix R = oracle::random_hpd(rng, 6);
    const CVector w = optimal_full_rank(R, c).w;
    CHECK((w - oracle::mvdr(R, c.steering, 1.3)).norm() < 1e-10 * w.norm());
    CHECK((optimal_full_rank(7.5 * R, c).w - w).norm() < 1e-10 * w.norm());
    CHECK(constraint_residual(w, c) < 1e-12);
}

TEST_CASE("MVDR places a deep null on a strong interferer") {
    const UlaConfig cfg{4, 0.5};
    ScenarioInstant s;
    s.noise_power = 1.0;
    s.sources = {{90.0, 1.0, true}, {40.0, 10.0, false}};
    const GainConstraint c{steering_vector(cfg, 90.0), 1.0};
    const CVector w = optimal_full_rank(true_covariance(cfg, s), c).w;
    const double toward_soi = std::norm(oracle::inner(w, c.steering));
    const double toward_int = std::norm(oracle::inner(w, steering_vector(cfg, 40.0)));
    CHECK(10.0 * std::log10(toward_soi / toward_int) >= 20.0);
}

TEST_CASE("MVDR reports a singular covariance") {
    const CVector a = steering_vector({4, 0.5}, 60.0);
    const CVector b = steering_vector({4, 0.5}, 120.0);
    CHECK_THROWS_AS(optimal_full_rank(b * b.adjoint(), {a, 1.0}), NumericError);
}

TEST_CASE("reduced-rank optimum") {
    std::mt19937_64 rng(6);
    const CVector a_bar = oracle::random_vector(rng, 3);
    CHECK((optimal_reduced_rank(CMatrix::Identity(3, 3), a_bar, 2.0) - 2.0 * a_bar / a_bar.squaredNorm()).norm() <
          1e-14);

    const CMatrix Rb = oracle::random_hpd(rng, 3);
    const CVector wb = optimal_reduced_rank(Rb, a_bar, 1.0);
    CHECK(std::abs(oracle::inner(wb, a_bar) - 1.0) < 1e-10);
}

TEST_CASE("full reduction reproduces the full-rank optimum") {
    std::mt19937_64 rng(7);
    const GainConstraint c{steering_vector({5, 0.5}, 33.0), 1.0};
    const CMatrix R = oracle::random_hpd(rng, 5);
    const CVector w = optimal_full_rank(R, c).w;
    CHECK((optimal_reduced_rank(R, c.steering, 1.0) - w).norm() < 1e-10);

    // unitary T: output power of the reduced optimum equals the full-rank optimum
    const CMatrix Q = oracle::random_matrix(rng, 5, 5).householderQr().householderQ();
    const CVector wb = optimal_reduced_rank(Q.adjoint() * R * Q, Q.adjoint() * c.steering, 1.0);
    const double p_red = oracle::inner(wb, Q.adjoint() * R * Q * wb).real();
    const double p_full = oracle::inner(w, R * w).real();
    CHECK(std::abs(p_red - p_full) <= 1e-8 * p_full);
}
