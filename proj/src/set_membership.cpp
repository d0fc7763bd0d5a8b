#include "jiosm/set_membership.hpp"

#include <cmath>
#include <stdexcept>

namespace jiosm {

BoundState BoundState::parameter_dependent(double alpha, double beta, double noise_power_estimate,
                                           const CVector& initial_weights) {
    if (!(alpha > 1.0)) {
        throw std::invalid_argument("bound tuning alpha must exceed 1");
    }
    if (!(beta > 0.0 && beta < 1.0)) {
        throw std::invalid_argument("bound smoothing beta must lie in (0, 1)");
    }
    if (!(noise_power_estimate > 0.0)) {
        throw std::invalid_argument("noise power estimate must be positive");
    }
    BoundState b;
    b.alpha = alpha;
    b.beta = beta;
    b.noise_power_estimate = noise_power_estimate;
    b.mode = BoundMode::ParameterDependent;
    b.delta = std::sqrt(alpha * initial_weights.squaredNorm() * noise_power_estimate);
    return b;
}

BoundState BoundState::fixed(double delta) {
    if (!(delta >= 0.0)) {
        throw std::invalid_argument("fixed bound must be nonnegative");
    }
    BoundState b;
    b.mode = BoundMode::Fixed;
    b.delta = delta;
    return b;
}

BoundState BoundState::always_update() { return fixed(0.0); }

bool exceeds_bound(Complex y, double delta) { return std::norm(y) > delta * delta; }

bool violates_bound(Complex y, BoundState& bound) {
    ++bound.snapshots_seen;
    return exceeds_bound(y, bound.delta);
}

double bound_update(BoundState& bound, const CVector& effective_weights) {
    if (bound.mode == BoundMode::Fixed) {
        return bound.delta;
    }
    const double target = std::sqrt(bound.alpha * effective_weights.squaredNorm() * bound.noise_power_estimate);
    bound.delta = bound.beta * bound.delta + (1.0 - bound.beta) * target;
    return bound.delta;
}

double update_rate(const BoundState& bound) {
    if (bound.snapshots_seen == 0) {
        throw std::domain_error("update rate is undefined before any snapshot");
    }
    return static_cast<double>(bound.updates_performed) / static_cast<double>(bound.snapshots_seen);
}

}  // namespace jiosm
