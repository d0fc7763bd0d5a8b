#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "jiosm/adaptive_rls.hpp"
#include "jiosm/array_model.hpp"
#include "jiosm/metrics.hpp"
#include "oracles.hpp"

using namespace jiosm;

TEST_CASE("Riccati with zero coefficient is a no-op") {
    std::mt19937_64 rng(1);
    const CMatrix P = oracle::random_hpd(rng, 5);
    const CVector x = oracle::random_vector(rng, 5);
    const RiccatiResult res = riccati_update(P, x, 0.0);
    CHECK((res.P - P).norm() < 1e-14);
    CHECK((res.gain - P * x).norm() < 1e-12);
}

TEST_CASE("Riccati rank-one update by hand") {
    CVector e1 = CVector::Zero(4);
    e1(0) = 1.0;
    const RiccatiResult res = riccati_update(CMatrix::Identity(4, 4), e1, 1.0);
    CMatrix expect = CMatrix::Identity(4, 4);
    expect(0, 0) = 0.5;
    CHECK((res.P - expect).norm() < 1e-15);
}

TEST_CASE("Riccati recursion tracks the inverse of the accumulated covariance") {
    std::mt19937_64 rng(2);
    const int m = 6;
    const double rho = 0.7;
    CMatrix P = CMatrix::Identity(m, m) / rho;
    CMatrix R = rho * CMatrix::Identity(m, m);
    for (int i = 0; i < 50; ++i) {
        const CVector x = oracle::random_vector(rng, m);
        P = riccati_update(P, x, 0.998).P;
        R += 0.998 * x * x.adjoint();
        CHECK((P - oracle::dense_inverse(R)).norm() < 1e-8);
        CHECK((P - P.adjoint()).norm() == 0.0);
    }
}

TEST_CASE("transform update collapses for an identity inverse covariance") {
    std::mt19937_64 rng(3);
    const CVector a = steering_vector({6, 0.5}, 70.0);
    const CVector w_prev = oracle::random_vector(rng, 3);
    const CMatrix T = rls_update_transform(CMatrix::Identity(6, 6), a, w_prev, 1.0);
    const CMatrix expect = (a / a.squaredNorm()) * w_prev.adjoint() / w_prev.squaredNorm();
    CHECK((T - expect).norm() < 1e-14);
    CHECK(std::abs(oracle::inner(w_prev, T.adjoint() * a) - 1.0) < 1e-12);
}

TEST_CASE("transform update rows are multiples of the previous weights") {
    std::mt19937_64 rng(4);
    const CVector a = steering_vector({6, 0.5}, 40.0);
    const CVector w_prev = oracle::random_vector(rng, 3);
    const CMatrix T = rls_update_transform(oracle::random_hpd(rng, 6), a, w_prev, 1.0);
    const CMatrix wh = w_prev.adjoint();
    for (int row = 0; row < 6; ++row) {
        const Complex coef = T(row, 0) / wh(0, 0);
        CHECK((T.row(row) - coef * wh).norm() < 1e-12 * std::max(1.0, T.norm()));
    }
}

TEST_CASE("transform update has minimum Frobenius norm among feasible solutions") {
    std::mt19937_64 rng(5);
    const CVector a = steering_vector({6, 0.5}, 110.0);
    const CVector w_prev = oracle::random_vector(rng, 3);
    const CMatrix T = rls_update_transform(oracle::random_hpd(rng, 6), a, w_prev, 1.0);
    const CMatrix null_proj =
        CMatrix::Identity(3, 3) - w_prev * w_prev.adjoint() / w_prev.squaredNorm();
    for (int trial = 0; trial < 100; ++trial) {
        const CMatrix delta = oracle::random_matrix(rng, 6, 3) * null_proj;
        CHECK((delta * w_prev).norm() < 1e-12);
        CHECK((T + delta).norm() >= T.norm());
    }
}

TEST_CASE("reduced weight update") {
    std::mt19937_64 rng(6);
    const CVector a_bar = oracle::random_vector(rng, 4);
    const CVector w1 = rls_update_weights(CMatrix::Identity(4, 4), a_bar, 1.0);
    CHECK((w1 - a_bar / a_bar.squaredNorm()).norm() < 1e-14);
    CHECK((rls_update_weights(5.0 * CMatrix::Identity(4, 4), a_bar, 1.0) - w1).norm() < 1e-14);
    const CVector w = rls_update_weights(oracle::random_hpd(rng, 4), a_bar, 1.0);
    CHECK(std::abs(oracle::inner(w, a_bar) - 1.0) < 1e-10);
}

TEST_CASE("lambda1 matches a dense evaluation and is clipped") {
    std::mt19937_64 rng(7);
    const RlsConfig cfg;
    int clipped_high = 0;
    int clipped_low = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const CVector a = oracle::random_vector(rng, 4);
        const CMatrix P = oracle::random_hpd(rng, 4);
        const CVector x = oracle::random_vector(rng, 4);
        const CVector k = oracle::random_vector(rng, 4);
        const double delta = 0.4;
        const Complex y(1.0, 0.2);
        const CVector v = delta * a - x;
        const CMatrix Pv = P * v;
        const Complex num = (a.adjoint() * Pv)(0, 0);
        const Complex den = (a.adjoint() * k)(0, 0) * (x.adjoint() * Pv)(0, 0);
        const double raw = (num / den).real();
        const Lambda1 l = lambda1(P, k, x, a, delta, 1.0, y, cfg);
        REQUIRE_FALSE(l.fallback);
        CHECK(l.raw == doctest::Approx(raw).epsilon(1e-10));
        CHECK(l.value == std::clamp(l.raw, 0.1, 0.998));
        clipped_high += l.raw > 0.998;
        clipped_low += l.raw < 0.1;
    }
    CHECK(clipped_high > 0);
    CHECK(clipped_low > 0);
    const Lambda1 closed = lambda1(CMatrix::Identity(4, 4), CVector::Ones(4), CVector::Ones(4), CVector::Ones(4), 2.0,
                                   1.0, Complex(2.0, 0.0), cfg);
    CHECK(closed.value == 0.0);
}

TEST_CASE("closed gate leaves every RLS state bitwise unchanged") {
    std::mt19937_64 rng(8);
    const GainConstraint c{steering_vector({8, 0.5}, 90.0), 1.0};
    const RlsConfig cfg;
    JioRlsState s = JioRlsState::initial(c, 3, cfg);
    const JioRlsState before = s;
    FrRlsState f = FrRlsState::initial(c, cfg);
    const FrRlsState fbefore = f;
    BoundState b = BoundState::fixed(1e9);
    BoundState bf = BoundState::fixed(1e9);
    for (int i = 0; i < 20; ++i) {
        const CVector x = oracle::random_vector(rng, 8);
        CHECK_FALSE(jio_sm_rls_step(s, b, x, c, cfg).updated);
        CHECK_FALSE(fr_sm_rls_step(f, bf, x, c, cfg).updated);
    }
    CHECK(s.P == before.P);
    CHECK(s.P_bar == before.P_bar);
    CHECK(s.rr.transform == before.rr.transform);
    CHECK(s.rr.weights == before.rr.weights);
    CHECK(f.weights.w == fbefore.weights.w);
    CHECK(f.weights.w == c.steering / 8.0);
    CHECK(b.snapshots_seen == 20);
    CHECK(b.updates_performed == 0);
}

TEST_CASE("zero bound with pinned lambda reduces to the plain JIO-RLS") {
    const UlaConfig arr{8, 0.5};
    const GainConstraint c{steering_vector(arr, 90.0), 1.0};
    ScenarioInstant scene;
    scene.noise_power = 0.1;
    scene.sources = {{90.0, 1.0, true}, {45.0, 3.0, false}};
    RlsConfig cfg;
    cfg.rho = 1.0;
    cfg.fixed_lambda = 0.998;
    JioRlsState sm = JioRlsState::initial(c, 3, cfg);
    JioRlsState plain = sm;
    BoundState b = BoundState::always_update();
    auto stream = make_stream(3, 0);
    for (int i = 0; i < 100; ++i) {
        const CVector x = generate_snapshot(arr, scene, stream).received;
        CHECK(jio_sm_rls_step(sm, b, x, c, cfg).updated);
        jio_rls_step(plain, x, c, cfg);
    }
    CHECK((sm.rr.effective_weights() - plain.rr.effective_weights()).norm() == 0.0);
    CHECK(update_rate(b) == 1.0);
}

TEST_CASE("RLS constraint is exact and the Riccati state follows the applied lambda") {
    const UlaConfig arr{8, 0.5};
    const GainConstraint c{steering_vector(arr, 90.0), 1.0};
    ScenarioInstant scene;
    scene.noise_power = 0.1;
    scene.sources = {{90.0, 1.0, true}, {30.0, 4.0, false}, {140.0, 4.0, false}};
    RlsConfig cfg;
    cfg.rho = 5.0;
    JioRlsState s = JioRlsState::initial(c, 4, cfg, TransformInit::Subarray);
    FrRlsState f = FrRlsState::initial(c, cfg);
    BoundState b = BoundState::parameter_dependent(20.0, 0.99, 0.1, s.rr.effective_weights());
    BoundState bf = BoundState::parameter_dependent(20.0, 0.99, 0.1, f.weights.w);
    CMatrix R = cfg.rho * CMatrix::Identity(8, 8);
    CMatrix Rf = R;
    auto stream = make_stream(5, 0);
    for (int i = 0; i < 200; ++i) {
        const CVector x = generate_snapshot(arr, scene, stream).received;
        jio_sm_rls_step(s, b, x, c, cfg);
        fr_sm_rls_step(f, bf, x, c, cfg);
        R += s.lambda1 * x * x.adjoint();
        Rf += f.lambda1 * x * x.adjoint();
        CHECK(constraint_residual(s.rr.effective_weights(), c) <= 1e-10);
        CHECK(constraint_residual(f.weights.w, c) <= 1e-10);
        const CVector a_bar = s.rr.transform.adjoint() * c.steering;
        CHECK(std::abs(oracle::inner(s.rr.weights, a_bar) - 1.0) <= 1e-10);
    }
    CHECK((s.P - oracle::dense_inverse(R)).norm() < 1e-6);
    CHECK((f.P - oracle::dense_inverse(Rf)).norm() < 1e-6);
    CHECK(b.updates_performed > 0);
    CHECK(b.updates_performed < 200);
}

TEST_CASE("full-rank RLS initial weights") {
    const GainConstraint c{steering_vector({8, 0.5}, 60.0), 2.0};
    const FrRlsState f = FrRlsState::initial(c, RlsConfig{});
    CHECK((f.weights.w - 2.0 * c.steering / 8.0).norm() < 1e-15);
    CHECK((f.P - CMatrix::Identity(8, 8) / 1.3e-3).norm() < 1e-9);
}

TEST_CASE("full-rank RLS nears the MVDR SINR against a strong interferer") {
    const UlaConfig arr{8, 0.5};
    ScenarioInstant scene;
    scene.noise_power = 1.0;
    scene.sources = {{90.0, 1.0, true}, {50.0, std::sqrt(1000.0), false}};
    const GainConstraint c{steering_vector(arr, 90.0), 1.0};
    const double bound = mvdr_sinr_db(arr, scene);
    double mean = 0.0;
    const int runs = 20;
    for (int run = 0; run < runs; ++run) {
        auto stream = make_stream(9, static_cast<std::uint64_t>(run));
        FrRlsState f = FrRlsState::initial(c, RlsConfig{});
        for (int i = 0; i < 500; ++i) {
            fr_rls_step(f, generate_snapshot(arr, scene, stream).received, c, RlsConfig{});
        }
        mean += sinr_db(f.weights.w, arr, scene) / runs;
    }
    CHECK(mean >= bound - 1.0);
}

TEST_CASE("RLS configuration validation") {
    RlsConfig cfg;
    cfg.rho = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.lambda_min = 0.999;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    CHECK_THROWS_AS(riccati_update(CMatrix::Identity(2, 2), CVector::Ones(2), -0.1), std::invalid_argument);
}
