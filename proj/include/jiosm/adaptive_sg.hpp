#pragma once

#include "jiosm/lcmv.hpp"
#include "jiosm/op_counter.hpp"
#include "jiosm/set_membership.hpp"
#include "jiosm/types.hpp"

namespace jiosm {

/// How the T_r and w̄ corrections of one snapshot are chained.
enum class SgUpdateOrder {
    /// T_r first, then x̄, ā and y are recomputed and w̄ is updated from the refreshed output.
    Sequential,
    /// Both corrections are computed from the same pre-update output y(i).
    Simultaneous,
};

struct SgConfig {
    /// Fixed steps of the non set-membership variants (JIO-SG, FR-SG).
    double fixed_step_T = 0.05;
    double fixed_step_w = 0.05;
    /// When set, fixed steps are divided by the instantaneous input power
    /// (‖x‖² for T_r and full-rank w, ‖x̄‖² for w̄).
    bool normalize_fixed_steps = true;
    /// Nominal μ_T(1) = μ_w̄(1) of the set-membership variants. Before the
    /// first gated update no step is applied, so this is carried only for
    /// configuration fidelity.
    double initial_step = 0.05;
    /// Use I - aa^H/(a^H a) in the μ_T denominator (true) or the printed
    /// unnormalized I - aa^H (false). The T_r update itself always uses the
    /// normalized projector.
    bool projector_normalized = true;
    SgUpdateOrder order = SgUpdateOrder::Sequential;
};

struct StepOutcome {
    bool updated = false;
    Complex output{};
};

/// I - aa^H/(a^H a), or I - aa^H when `normalized` is false.
CMatrix projector_full(const CVector& a, bool normalized = true);

/// P x without forming P.
CVector apply_projector(const CVector& a, const CVector& x, bool normalized = true);

/// T_r - μ_T y* [I - aa^H/(a^H a)] x w̄^H
CMatrix sg_update_transform(const ReducedRankState& state, const CVector& x, Complex y, double mu_T,
                            const CVector& steering);

/// w̄ - μ_w̄ y* [I - āā^H/(ā^H ā)] x̄
CVector sg_update_weights(const CVector& weights, const CVector& x_bar, const CVector& a_bar, Complex y,
                          double mu_w);

/// (1 - δ/|y|) / (‖w̄‖² x^H P x) when |y|² > δ², else 0.
/// Throws NumericError when the gate is open but x^H P x vanishes.
double sm_step_size_T(Complex y, double delta, const CVector& x, const CVector& weights, const CVector& steering,
                      bool projector_normalized = true);

/// (1 - δ/|y|) / (x̄^H P̄ x̄) when |y|² > δ², else 0.
double sm_step_size_w(Complex y, double delta, const CVector& x_bar, const CVector& a_bar);

/// One JIO-SM-SG snapshot: gated T_r and w̄ updates followed by the bound recursion.
StepOutcome jio_sm_sg_step(ReducedRankState& state, BoundState& bound, const CVector& x, const GainConstraint& c,
                           const SgConfig& cfg, OpCounter* ops = nullptr);

/// One JIO-SG snapshot: unconditional T_r and w̄ updates with fixed steps.
StepOutcome jio_sg_step(ReducedRankState& state, const CVector& x, const GainConstraint& c, const SgConfig& cfg,
                        OpCounter* ops = nullptr);

/// Frost-type constrained SG on the full-rank filter.
StepOutcome fr_sg_step(FullRankWeights& weights, const CVector& x, const GainConstraint& c, const SgConfig& cfg,
                       OpCounter* ops = nullptr);

/// Set-membership constrained SG on the full-rank filter.
StepOutcome fr_sm_sg_step(FullRankWeights& weights, BoundState& bound, const CVector& x, const GainConstraint& c,
                          const SgConfig& cfg, OpCounter* ops = nullptr);

}  // namespace jiosm
