#pragma once

#include "jiosm/types.hpp"

namespace jiosm {

/// Unit-gain (γ) response toward the signal of interest: w^H a(θ₀) = γ.
struct GainConstraint {
    CVector steering;
    double gain = 1.0;

    void validate() const;
};

struct FullRankWeights {
    CVector w;
};

enum class TransformInit {
    /// T_r = [I_r; 0]
    Identity,
    /// Column j holds a(θ₀) restricted to the j-th of r contiguous element
    /// blocks, so T_r w̄ starts at (nearly) the conventional beamformer a/m.
    Subarray,
};

/// Transformation matrix T_r (m×r) and reduced-rank weights w̄ (r).
/// The effective full-rank filter is T_r w̄.
struct ReducedRankState {
    CMatrix transform;
    CVector weights;

    int rank() const { return static_cast<int>(transform.cols()); }
    int num_elements() const { return static_cast<int>(transform.rows()); }
    CVector effective_weights() const { return transform * weights; }

    /// T_r from `init` and w̄ = γ ā / ‖ā‖², so the gain constraint holds at i = 0.
    static ReducedRankState initial(const GainConstraint& c, int rank, TransformInit init = TransformInit::Identity);
};

/// x̄ = T_r^H x
CVector reduce(const ReducedRankState& state, const CVector& x);

/// y = w̄^H T_r^H x
Complex array_output(const ReducedRankState& state, const CVector& x);

/// |w^H a - γ| / |γ|
double constraint_residual(const CVector& effective_weights, const GainConstraint& c);

/// w = γ R⁻¹a / (a^H R⁻¹ a), via a Cholesky solve.
FullRankWeights optimal_full_rank(const CMatrix& R, const GainConstraint& c);

/// w̄ = γ R̄⁻¹ā / (ā^H R̄⁻¹ ā)
CVector optimal_reduced_rank(const CMatrix& R_bar, const CVector& a_bar, double gain);

}  // namespace jiosm
