#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "jiosm/experiment.hpp"
#include "jiosm/mse_predictor.hpp"

namespace jiosm {

/// Everything one configuration file describes.
struct RunConfig {
    ExperimentConfig experiment;
    /// [predictor] section; used by predict-mse.
    MsePredictorConfig predictor;
    /// [sweep] ranks; used by sweep-rank.
    std::vector<int> sweep_ranks{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
};

/// Parses INI text. Sections:
///   [experiment] name, snapshots, runs, seed, output, gain, workers
///   [array]      elements, spacing
///   [scenario]   snr_db, sir_db | inr_db, soi_doa, interferer_doas | interferers,
///                random_doas, min_separation, change_at, change_add_doas | change_add_count,
///                change_add_inr_db, change_remove_doas
///   [algorithm:LABEL] type, rank, init (identity|subarray), bound (pdb|fixed), alpha, beta, delta, noise_estimate,
///                mu_T, mu_w, normalize_steps, projector_normalized, order (sequential|simultaneous),
///                rho, varrho, lambda_min, lambda_max, lambda_fixed
///   [predictor]  algorithm (label to copy r, α, β from), p_min, ensemble, snapshots, emse (trace|weighted),
///                projector_normalized, seed
///   [sweep]      ranks
/// Throws ConfigError with the offending key.
RunConfig parse_config(const std::string& ini_text);
RunConfig load_config(const std::filesystem::path& path);

/// Builds the source list for a scenario section: SOI amplitude 1, noise
/// power 10^(-SNR/10), interferers splitting the SIR budget equally unless
/// an INR is given.
SourceScenario make_scenario(double snr_db, double sir_db, double soi_doa, const std::vector<double>& interferer_doas);

}  // namespace jiosm
