#pragma once

#include <cstddef>
#include <optional>

#include "jiosm/lcmv.hpp"
#include "jiosm/op_counter.hpp"
#include "jiosm/set_membership.hpp"
#include "jiosm/types.hpp"

namespace jiosm {

struct RlsConfig {
    /// P(0) = ρ⁻¹ I_m
    double rho = 1.3e-3;
    /// P̄(0) = ϱ⁻¹ I_r
    double varrho = 1.0e-4;
    double lambda_min = 0.1;
    double lambda_max = 0.998;
    /// When set, λ₁ is pinned to this value on every update (JIO-RLS / FR-RLS).
    std::optional<double> fixed_lambda;

    void validate() const;
};

struct RiccatiResult {
    CVector gain;  // k
    CMatrix P;     // P'
};

/// k = Px / (1 + λ₁ x^H P x), P' = P - λ₁ k x^H P, then P' ← (P' + P'^H)/2.
/// Throws NumericError when 1 + λ₁ x^H P x ≤ 0.
RiccatiResult riccati_update(const CMatrix& P, const CVector& x, double lambda1, OpCounter* ops = nullptr);

/// T_r = [γ P a / (a^H P a)] w̄_prev^H / ‖w̄_prev‖² (rank 1, minimum Frobenius norm).
CMatrix rls_update_transform(const CMatrix& P, const CVector& steering, const CVector& prev_weights, double gain,
                             OpCounter* ops = nullptr);

/// w̄ = γ P̄ ā / (ā^H P̄ ā)
CVector rls_update_weights(const CMatrix& P_bar, const CVector& a_bar, double gain, OpCounter* ops = nullptr);

struct Lambda1 {
    double value = 0.0;      // clipped λ₁, or 0 when the gate is closed
    double raw = 0.0;        // unclipped ratio (NaN when it fell back)
    bool fallback = false;   // denominator vanished; value = λ_max
};

/// Forgetting/multiplier coefficient for one gated update:
///     Re{ a^H P v / (a^H k · x^H P v) },  v = δ a - γ² x
/// clipped to [λ_min, λ_max]. Returns value 0 when |y|² ≤ δ².
Lambda1 lambda1(const CMatrix& P_prev, const CVector& k, const CVector& x, const CVector& steering, double delta,
                double gain, Complex y, const RlsConfig& cfg, OpCounter* ops = nullptr);

struct JioRlsState {
    ReducedRankState rr;
    CMatrix P;
    CMatrix P_bar;
    /// λ₁ of the latest snapshot (0 if it did not update).
    double lambda1 = 0.0;
    /// λ₁ of the latest update; seeds k in the next λ₁ evaluation.
    double lambda1_prev = 0.0;
    std::size_t lambda_fallbacks = 0;

    static JioRlsState initial(const GainConstraint& c, int rank, const RlsConfig& cfg,
                               TransformInit init = TransformInit::Identity);
};

struct FrRlsState {
    FullRankWeights weights;
    CMatrix P;
    double lambda1 = 0.0;
    double lambda1_prev = 0.0;
    std::size_t lambda_fallbacks = 0;

    /// w(0) = γ a / ‖a‖², P(0) = ρ⁻¹ I.
    static FrRlsState initial(const GainConstraint& c, const RlsConfig& cfg);
};

struct RlsStepOutcome {
    bool updated = false;
    Complex output{};
    double lambda1 = 0.0;
};

/// One JIO-SM-RLS snapshot: gate, λ₁, P and T_r, P̄ and w̄, then the bound recursion.
RlsStepOutcome jio_sm_rls_step(JioRlsState& state, BoundState& bound, const CVector& x, const GainConstraint& c,
                               const RlsConfig& cfg, OpCounter* ops = nullptr);

/// JIO-RLS: every snapshot updates with λ₁ = cfg.fixed_lambda (λ_max if unset).
RlsStepOutcome jio_rls_step(JioRlsState& state, const CVector& x, const GainConstraint& c, const RlsConfig& cfg,
                            OpCounter* ops = nullptr);

/// Constrained RLS on the full-rank filter, w = γ P a / (a^H P a).
RlsStepOutcome fr_rls_step(FrRlsState& state, const CVector& x, const GainConstraint& c, const RlsConfig& cfg,
                           OpCounter* ops = nullptr);

RlsStepOutcome fr_sm_rls_step(FrRlsState& state, BoundState& bound, const CVector& x, const GainConstraint& c,
                              const RlsConfig& cfg, OpCounter* ops = nullptr);

}  // namespace jiosm
