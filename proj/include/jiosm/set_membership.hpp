#pragma once

#include <cstddef>

#include "jiosm/types.hpp"

namespace jiosm {

enum class BoundMode { ParameterDependent, Fixed };

/// Time-varying output bound δ(i) and the update-rate counters.
///
/// In ParameterDependent mode δ follows
///     δ(i) = β δ(i-1) + (1-β) sqrt(α ‖T_r w̄‖² σ̂_n²).
/// In Fixed mode δ never changes and α, β are ignored.
struct BoundState {
    double delta = 0.0;
    double alpha = 22.0;
    double beta = 0.99;
    double noise_power_estimate = 1.0;
    BoundMode mode = BoundMode::ParameterDependent;
    std::size_t updates_performed = 0;
    std::size_t snapshots_seen = 0;

    /// δ(0) = sqrt(α ‖w(0)‖² σ̂_n²), the fixed point of the recursion for constant weights.
    static BoundState parameter_dependent(double alpha, double beta, double noise_power_estimate,
                                          const CVector& initial_weights);
    static BoundState fixed(double delta);
    /// δ ≡ 0: every nonzero output violates the bound.
    static BoundState always_update();

    void record_update() { ++updates_performed; }
};

/// |y|² > δ²; the boundary counts as inside the constraint set.
/// Counts the snapshot in `bound.snapshots_seen`.
bool violates_bound(Complex y, BoundState& bound);

/// Same test without touching counters.
bool exceeds_bound(Complex y, double delta);

/// Advance δ with the post-update effective weights; returns the new δ.
double bound_update(BoundState& bound, const CVector& effective_weights);

/// τ = updates / snapshots. Throws std::domain_error before the first snapshot.
double update_rate(const BoundState& bound);

}  // namespace jiosm
