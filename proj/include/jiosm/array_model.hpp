#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "jiosm/types.hpp"

namespace jiosm {

/// Uniform linear array. Spacing is expressed in carrier wavelengths.
struct UlaConfig {
    int num_elements = 16;
    double element_spacing = 0.5;

    void validate() const;
};

struct SourceSpec {
    double doa_deg = 90.0;
    double amplitude = 1.0;
    bool is_soi = false;
};

/// Sources entering (`add`) or leaving (`remove_doas`, matched by DOA) at a
/// given snapshot index; the event takes effect from that snapshot onward.
struct ChangeEvent {
    std::size_t snapshot_index = 0;
    std::vector<SourceSpec> add;
    std::vector<double> remove_doas;
};

/// The signal environment seen at one snapshot.
struct ScenarioInstant {
    std::vector<SourceSpec> sources;
    double noise_power = 1.0;

    const SourceSpec& soi() const;
    void validate() const;
};

struct SourceScenario {
    std::vector<SourceSpec> sources;
    double noise_power = 1.0;
    std::vector<ChangeEvent> change_events;

    void validate() const;
    /// Environment in force at snapshot `index` (0-based).
    ScenarioInstant at(std::size_t index) const;
    /// Snapshot indices at which the environment changes, including 0.
    std::vector<std::size_t> segment_starts() const;
};

struct Snapshot {
    CVector received;
    std::vector<double> symbols;
    double desired_symbol = 0.0;
};

using RandomStream = std::mt19937_64;

/// Deterministic per-run stream derived from a master seed.
RandomStream make_stream(std::uint64_t master_seed, std::uint64_t run_index);

/// a(θ) with element p equal to exp(-2πj·p·spacing·cos θ).
CVector steering_vector(const UlaConfig& cfg, double doa_deg);

/// Steering vectors of a source list, one column per source.
CMatrix steering_matrix(const UlaConfig& cfg, std::span<const SourceSpec> sources);

/// x = Σ_k B_k s_k a(θ_k) + n with BPSK symbols and circular complex
/// Gaussian noise of per-element variance σ_n².
Snapshot generate_snapshot(const UlaConfig& cfg, const ScenarioInstant& scene, RandomStream& rng);

/// Same as generate_snapshot with precomputed steering columns.
Snapshot generate_snapshot(const CMatrix& steering, const ScenarioInstant& scene, RandomStream& rng);

/// R = Σ_k B_k² a_k a_k^H + σ_n² I.
CMatrix true_covariance(const UlaConfig& cfg, const ScenarioInstant& scene);

/// R with the signal-of-interest term removed.
CMatrix interference_noise_covariance(const UlaConfig& cfg, const ScenarioInstant& scene);

/// Draw `count` DOAs uniform on (0°, 180°), rejecting draws closer than
/// `min_separation_deg` to any already accepted (or to `reserved`).
std::vector<double> draw_distinct_doas(RandomStream& rng, std::size_t count,
                                       std::span<const double> reserved = {},
                                       double min_separation_deg = 0.5);

/// Amplitude giving power `ratio_db` relative to `reference_power`.
double amplitude_from_db(double ratio_db, double reference_power);

}  // namespace jiosm
