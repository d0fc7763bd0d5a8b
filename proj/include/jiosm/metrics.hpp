#pragma once

#include "jiosm/array_model.hpp"
#include "jiosm/types.hpp"

namespace jiosm {

/// 10 log10( B₀² |w^H a₀|² / (w^H R_in w) ). Returns -inf when w ⟂ a₀.
/// Throws std::invalid_argument for zero weights.
double sinr_db(const CVector& w, const CVector& soi_steering, double soi_power, const CMatrix& interference_noise);

double sinr_db(const CVector& w, const UlaConfig& cfg, const ScenarioInstant& scene);

/// |d₀ - y|²
double empirical_mse(double desired, Complex output);

/// E|d₀|² - w^H a - a^H w + w^H R w for the optimal weights.
double mmse(const CVector& w_opt, const CMatrix& R, const CVector& soi_steering, double desired_power);

/// Gaussian tail Q(x) = erfc(x / √2) / 2.
double q_function(double x);

/// 2 Q(δ / σ_n) + P_min
double update_probability(double delta, double noise_std, double p_min);

/// SINR of the closed-form MVDR filter.
double mvdr_sinr_db(const UlaConfig& cfg, const ScenarioInstant& scene);

}  // namespace jiosm
