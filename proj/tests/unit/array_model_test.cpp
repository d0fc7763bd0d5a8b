#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "jiosm/array_model.hpp"
#include "oracles.hpp"

using namespace jiosm;

namespace {

ScenarioInstant two_sources() {
    ScenarioInstant s;
    s.noise_power = 0.5;
    s.sources = {{90.0, 1.0, true}, {40.0, 2.0, false}};
    return s;
}

}  // namespace

TEST_CASE("steering at broadside is all ones") {
    const CVector a = steering_vector({4, 0.5}, 90.0);
    for (int p = 0; p < 4; ++p) {
        CHECK(std::abs(a(p) - Complex(1.0, 0.0)) < 1e-15);
    }
}

TEST_CASE("steering near endfire alternates sign") {
    const CVector a = steering_vector({2, 0.5}, 1e-7);
    CHECK(std::abs(a(0) - Complex(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(a(1) - Complex(-1.0, 0.0)) < 1e-12);
}

TEST_CASE("steering has squared norm m and unit-modulus entries") {
    for (double doa : {0.3, 17.0, 60.0, 133.3, 179.9}) {
        const CVector a = steering_vector({8, 0.5}, doa);
        CHECK(a.squaredNorm() == doctest::Approx(8.0).epsilon(1e-14));
        for (int p = 0; p < 8; ++p) {
            CHECK(std::abs(a(p)) == doctest::Approx(1.0).epsilon(1e-15));
        }
        CHECK((a - oracle::steering(8, 0.5, doa)).norm() < 1e-12);
    }
}

TEST_CASE("steering rejects DOAs outside the open half plane") {
    CHECK_THROWS_AS(steering_vector({4, 0.5}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(steering_vector({4, 0.5}, 180.0), std::invalid_argument);
    CHECK_THROWS_AS(steering_vector({4, 0.5}, -5.0), std::invalid_argument);
}

TEST_CASE("noise-free single source reproduces the steering vector") {
    const UlaConfig cfg{6, 0.5};
    ScenarioInstant s;
    s.noise_power = 1e-300;
    s.sources = {{70.0, 1.0, true}};
    const CVector a = steering_vector(cfg, 70.0);
    auto rng = make_stream(3, 0);
    bool seen_plus = false;
    bool seen_minus = false;
    for (int i = 0; i < 64; ++i) {
        const Snapshot snap = generate_snapshot(cfg, s, rng);
        CHECK(snap.desired_symbol == snap.symbols[0]);
        CHECK((snap.received - snap.desired_symbol * a).norm() < 1e-12);
        seen_plus |= snap.desired_symbol > 0;
        seen_minus |= snap.desired_symbol < 0;
    }
    CHECK(seen_plus);
    CHECK(seen_minus);
}

TEST_CASE("identical seeds give bitwise identical snapshots") {
    const UlaConfig cfg{8, 0.5};
    ScenarioInstant s;
    s.sources = {{90.0, 1.0, true}, {30.0, 3.0, false}, {120.0, 3.0, false}};
    auto r1 = make_stream(42, 7);
    auto r2 = make_stream(42, 7);
    for (int i = 0; i < 20; ++i) {
        const Snapshot a = generate_snapshot(cfg, s, r1);
        const Snapshot b = generate_snapshot(cfg, s, r2);
        CHECK(a.received == b.received);
        CHECK(a.symbols == b.symbols);
    }
    auto r3 = make_stream(42, 8);
    auto r4 = make_stream(42, 7);
    CHECK(generate_snapshot(cfg, s, r3).received != generate_snapshot(cfg, s, r4).received);
}

TEST_CASE("sample means of received entries vanish") {
    const UlaConfig cfg{4, 0.5};
    const ScenarioInstant s = two_sources();
    const int N = 20000;
    const double sigma = std::sqrt(1.0 + 4.0 + s.noise_power);
    for (std::uint64_t seed : {1ULL, 2ULL}) {
        auto rng = make_stream(seed, 0);
        CVector mean = CVector::Zero(4);
        for (int i = 0; i < N; ++i) {
            mean += generate_snapshot(cfg, s, rng).received;
        }
        mean /= N;
        for (int p = 0; p < 4; ++p) {
            CHECK(std::abs(mean(p)) < 4.0 * sigma / std::sqrt(double(N)));
        }
    }
}

TEST_CASE("covariance of the empty scene is identity") {
    ScenarioInstant s;
    s.noise_power = 1.0;
    const CMatrix R = true_covariance({5, 0.5}, s);
    CHECK((R - CMatrix::Identity(5, 5)).norm() < 1e-15);
}

TEST_CASE("noise-free covariance is a rank-one outer product") {
    const UlaConfig cfg{4, 0.5};
    ScenarioInstant s;
    s.noise_power = 0.0;
    s.sources = {{55.0, 1.0, true}};
    const CVector a = steering_vector(cfg, 55.0);
    const CMatrix R = true_covariance(cfg, s);
    CHECK((R - a * a.adjoint()).norm() < 1e-14);
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(R);
    CHECK(eig.eigenvalues()(2) < 1e-12);
    CHECK(eig.eigenvalues()(3) == doctest::Approx(4.0));
}

TEST_CASE("sample covariance converges to the true covariance") {
    const UlaConfig cfg{4, 0.5};
    const ScenarioInstant s = two_sources();
    const CMatrix R = true_covariance(cfg, s);
    const CMatrix A = steering_matrix(cfg, s.sources);
    auto rng = make_stream(11, 0);
    const int N = 1000000;
    CMatrix S = CMatrix::Zero(4, 4);
    for (int i = 0; i < N; ++i) {
        const CVector x = generate_snapshot(A, s, rng).received;
        S.noalias() += x * x.adjoint();
    }
    S /= N;
    CHECK((S - R).norm() / R.norm() < 0.01);
}

TEST_CASE("interference-plus-noise covariance drops the SOI term") {
    const UlaConfig cfg{4, 0.5};
    ScenarioInstant s;
    s.noise_power = 1.0;
    s.sources = {{90.0, 1.0, true}};
    CHECK((interference_noise_covariance(cfg, s) - CMatrix::Identity(4, 4)).norm() < 1e-15);

    s.sources = {{90.0, 1.5, true}, {20.0, 2.0, false}, {150.0, 0.5, false}};
    s.noise_power = 0.3;
    const CVector a0 = steering_vector(cfg, 90.0);
    const CMatrix Rin = interference_noise_covariance(cfg, s);
    CHECK((Rin - (true_covariance(cfg, s) - 2.25 * a0 * a0.adjoint())).norm() < 1e-12);
    CHECK((Rin - Rin.adjoint()).norm() < 1e-15);
    CHECK(oracle::min_eig_hermitian_part(Rin) >= s.noise_power - 1e-12);
}

TEST_CASE("scenario change events apply from their snapshot on") {
    SourceScenario sc;
    sc.sources = {{90.0, 1.0, true}, {30.0, 1.0, false}};
    sc.change_events = {{10, {{60.0, 1.0, false}}, {30.0}}};
    CHECK(sc.at(9).sources.size() == 2);
    const ScenarioInstant after = sc.at(10);
    REQUIRE(after.sources.size() == 2);
    CHECK(after.sources[1].doa_deg == 60.0);
    CHECK(sc.segment_starts() == std::vector<std::size_t>{0, 10});
}

TEST_CASE("distinct DOA draws respect the separation") {
    auto rng = make_stream(5, 0);
    const double reserved[] = {90.0};
    const auto doas = draw_distinct_doas(rng, 30, reserved, 2.0);
    REQUIRE(doas.size() == 30);
    for (std::size_t i = 0; i < doas.size(); ++i) {
        CHECK(doas[i] > 0.0);
        CHECK(doas[i] < 180.0);
        CHECK(std::abs(doas[i] - 90.0) >= 2.0);
        for (std::size_t j = i + 1; j < doas.size(); ++j) {
            CHECK(std::abs(doas[i] - doas[j]) >= 2.0);
        }
    }
}

TEST_CASE("amplitude from a power ratio") {
    CHECK(amplitude_from_db(20.0, 1.0) == doctest::Approx(10.0));
    CHECK(amplitude_from_db(-10.0, 0.1) == doctest::Approx(0.1));
}
