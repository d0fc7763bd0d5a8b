#include "jiosm/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "jiosm/lcmv.hpp"

namespace jiosm {

double sinr_db(const CVector& w, const CVector& soi_steering, double soi_power, const CMatrix& interference_noise) {
    if (w.size() == 0 || w.squaredNorm() == 0.0) {
        throw std::invalid_argument("SINR of a zero filter is undefined");
    }
    const double signal = soi_power * std::norm(w.dot(soi_steering));
    const double noise = w.dot(interference_noise * w).real();
    if (signal == 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    return 10.0 * std::log10(signal / noise);
}

double sinr_db(const CVector& w, const UlaConfig& cfg, const ScenarioInstant& scene) {
    const SourceSpec& soi = scene.soi();
    return sinr_db(w, steering_vector(cfg, soi.doa_deg), soi.amplitude * soi.amplitude,
                   interference_noise_covariance(cfg, scene));
}

double empirical_mse(double desired, Complex output) { return std::norm(Complex(desired) - output); }

double mmse(const CVector& w_opt, const CMatrix& R, const CVector& soi_steering, double desired_power) {
    const Complex wa = w_opt.dot(soi_steering);
    const Complex j = desired_power - wa - std::conj(wa) + w_opt.dot(R * w_opt);
    return j.real();
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double update_probability(double delta, double noise_std, double p_min) {
    if (!(noise_std > 0.0)) {
        throw std::invalid_argument("noise standard deviation must be positive");
    }
    return 2.0 * q_function(delta / noise_std) + p_min;
}

double mvdr_sinr_db(const UlaConfig& cfg, const ScenarioInstant& scene) {
    const SourceSpec& soi = scene.soi();
    const CVector a = steering_vector(cfg, soi.doa_deg);
    const CVector w = optimal_full_rank(true_covariance(cfg, scene), GainConstraint{a, 1.0}).w;
    return sinr_db(w, a, soi.amplitude * soi.amplitude, interference_noise_covariance(cfg, scene));
}

}  // namespace jiosm
