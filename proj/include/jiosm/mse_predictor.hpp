#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "jiosm/array_model.hpp"
#include "jiosm/lcmv.hpp"
#include "jiosm/types.hpp"

namespace jiosm {

/// How the excess MSE is formed from the ensemble of weight errors.
enum class EmseForm {
    /// σ_x² tr{cov[e_w]} with σ_x² = Σ B_k² (the closed form as printed).
    TraceCovariance,
    /// E[e_w^H R e_w] with the true covariance (the expression the trace form approximates).
    CovarianceWeighted,
};

struct MsePredictorConfig {
    int rank = 5;
    TransformInit init = TransformInit::Identity;
    double alpha = 9.7;
    double beta = 0.99;
    double p_min = 0.163;
    std::size_t horizon = 1000;
    std::size_t ensemble = 200;
    std::uint64_t seed = 1;
    /// Normalized projector in G_r (true) or the printed I - aa^H (false).
    bool projector_normalized = true;
    EmseForm emse = EmseForm::TraceCovariance;
    double gain = 1.0;
    /// Start every member at T_r w̄ = w_opt instead of `init`.
    bool start_at_optimum = false;
    /// Replaces 2Q(δ/σ_n) + P_min when set.
    std::optional<double> fixed_update_probability;
    unsigned workers = 0;  // 0: hardware concurrency
};

struct MsePrediction {
    std::vector<double> j_mse;      // per snapshot, length horizon
    std::vector<double> emse;       // j_mse - j_min
    std::vector<double> p_e;        // ensemble mean update probability
    double j_min = 0.0;
    double sigma_x2 = 0.0;
};

/// Propagates the weight-error recursion
///     e_w(i+1) = [I - V(i)] e_w(i) - V(i) w_opt + step_scalar(i) G_r(i) ḡ(i)
/// over an ensemble of simulated snapshot streams, with the update
/// probability P_e(i) = 2Q(δ(i)/σ_n) + P_min scaling both corrections.
/// Each member carries its own T_r, w̄ and δ so V(i) can be formed.
MsePrediction predict_mse_trajectory(const UlaConfig& cfg, const ScenarioInstant& scene,
                                     const MsePredictorConfig& pcfg);

}  // namespace jiosm
