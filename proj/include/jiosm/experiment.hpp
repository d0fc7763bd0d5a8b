#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "jiosm/array_model.hpp"
#include "jiosm/beamformer.hpp"

namespace jiosm {

struct ExperimentConfig {
    std::string name = "experiment";
    UlaConfig array;
    /// Source layout. With random_doas, every non-SOI DOA (including
    /// sources added by change events) is redrawn per run.
    SourceScenario scenario;
    bool random_doas = false;
    double min_doa_separation = 0.5;
    std::vector<AlgorithmSpec> algorithms;
    std::size_t num_snapshots = 1000;
    std::size_t num_runs = 200;
    std::uint64_t master_seed = 1;
    std::string output_dir;
    double gain = 1.0;
    unsigned workers = 0;  // 0: hardware concurrency

    void validate() const;
};

/// Monte-Carlo aggregate for one algorithm. Per-snapshot series have
/// length N and average over completed runs.
struct TrajectoryRecord {
    std::string label;
    AlgorithmKind kind = AlgorithmKind::JioSmSg;
    std::vector<double> sinr_db_mean;     // mean of per-run SINR in dB after the step at i
    std::vector<double> mse_mean;         // mean of |d₀ - y|² with the a-priori output
    std::vector<double> update_rate_cum;  // mean of (updates up to i) / (i + 1)
    std::vector<double> final_sinr_db;    // per completed run
    std::vector<double> final_update_rate;  // per completed run
    std::size_t lambda_fallbacks = 0;

    double mean_final_sinr_db() const;
    double mean_update_rate() const;
};

struct ExperimentResult {
    std::vector<TrajectoryRecord> records;
    std::vector<double> mvdr_sinr_db;  // closed-form bound per snapshot, averaged over runs
    std::size_t completed_runs = 0;
    std::size_t failed_runs = 0;
    std::vector<std::string> failures;  // "run k: message"

    const TrajectoryRecord& record(const std::string& label) const;
    /// More than 10% of runs aborted on numeric failures.
    bool numeric_failure() const;
};

/// Runs every algorithm on the same snapshot stream per run; run k is seeded
/// from (master_seed, k). The reduction is ordered by run index, so results
/// do not depend on the worker count.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct RankSweepRow {
    int rank = 0;
    std::vector<std::string> labels;
    std::vector<double> final_sinr_db;  // per label, mean over runs
};

/// Re-runs the reduced-rank algorithms of `cfg` at each rank. Full-rank
/// algorithms in the config are dropped.
std::vector<RankSweepRow> rank_sweep(const ExperimentConfig& cfg, const std::vector<int>& ranks);

/// Rank with the largest final SINR for `label`; values within 1e-9 dB tie
/// and the smallest tied rank wins.
int best_rank(const std::vector<RankSweepRow>& rows, const std::string& label);
double sweep_value(const std::vector<RankSweepRow>& rows, const std::string& label, int rank);

}  // namespace jiosm
