#include "jiosm/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "jiosm/errors.hpp"
#include "jiosm/lcmv.hpp"
#include "jiosm/metrics.hpp"
#include "jiosm/parallel.hpp"

namespace jiosm {

namespace {

constexpr double kRankTieTolerance = 1e-9;  // dB
constexpr std::uint64_t kDoaStreamSalt = 0x5eed'd0a5'0000'0001ULL;

struct RunTrace {
    std::vector<double> sinr, mse, rate;
    double final_rate = 0.0;
    std::size_t fallbacks = 0;
};

struct RunResult {
    bool ok = false;
    std::string error;
    std::vector<RunTrace> traces;  // per algorithm
    std::vector<double> mvdr;      // per snapshot
};

struct Segment {
    std::size_t start = 0;
    ScenarioInstant scene;
    CMatrix A;
    CMatrix R_in;
    CVector soi_steering;
    double soi_power = 0.0;
    double mvdr_db = 0.0;
};

SourceScenario randomize_doas(const SourceScenario& base, RandomStream& rng, double min_sep) {
    SourceScenario sc = base;
    std::vector<double> reserved;
    for (const auto& s : base.sources) {
        if (s.is_soi) {
            reserved.push_back(s.doa_deg);
        }
    }
    std::size_t count = 0;
    for (const auto& s : base.sources) {
        count += s.is_soi ? 0 : 1;
    }
    for (const auto& ev : base.change_events) {
        count += ev.add.size();
    }
    const std::vector<double> fresh = draw_distinct_doas(rng, count, reserved, min_sep);
    std::map<double, double> remap;
    std::size_t next = 0;
    for (auto& s : sc.sources) {
        if (!s.is_soi) {
            remap[s.doa_deg] = fresh[next];
            s.doa_deg = fresh[next++];
        }
    }
    for (auto& ev : sc.change_events) {
        for (auto& s : ev.add) {
            remap[s.doa_deg] = fresh[next];
            s.doa_deg = fresh[next++];
        }
        for (double& d : ev.remove_doas) {
            auto it = remap.find(d);
            if (it != remap.end()) {
                d = it->second;
            }
        }
    }
    return sc;
}

std::vector<Segment> build_segments(const UlaConfig& array, const SourceScenario& sc, double gain) {
    std::vector<Segment> segs;
    for (std::size_t start : sc.segment_starts()) {
        Segment seg;
        seg.start = start;
        seg.scene = sc.at(start);
        seg.A = steering_matrix(array, seg.scene.sources);
        seg.R_in = interference_noise_covariance(array, seg.scene);
        const SourceSpec& soi = seg.scene.soi();
        seg.soi_steering = steering_vector(array, soi.doa_deg);
        seg.soi_power = soi.amplitude * soi.amplitude;
        const CVector w =
            optimal_full_rank(true_covariance(array, seg.scene), GainConstraint{seg.soi_steering, gain}).w;
        seg.mvdr_db = sinr_db(w, seg.soi_steering, seg.soi_power, seg.R_in);
        segs.push_back(std::move(seg));
    }
    return segs;
}

RunResult execute_run(const ExperimentConfig& cfg, std::size_t run) {
    RunResult out;
    const std::size_t N = cfg.num_snapshots;
    try {
        SourceScenario sc = cfg.scenario;
        if (cfg.random_doas) {
            RandomStream doa_rng = make_stream(cfg.master_seed ^ kDoaStreamSalt, run);
            sc = randomize_doas(cfg.scenario, doa_rng, cfg.min_doa_separation);
        }
        sc.validate();
        const std::vector<Segment> segs = build_segments(cfg.array, sc, cfg.gain);
        const GainConstraint c{segs.front().soi_steering, cfg.gain};

        std::vector<std::unique_ptr<AdaptiveBeamformer>> algos;
        for (const auto& spec : cfg.algorithms) {
            algos.push_back(make_beamformer(spec, c, sc.noise_power));
        }
        out.traces.resize(algos.size());
        for (auto& t : out.traces) {
            t.sinr.resize(N);
            t.mse.resize(N);
            t.rate.resize(N);
        }
        out.mvdr.resize(N);
        std::vector<std::size_t> updates(algos.size(), 0);

        RandomStream rng = make_stream(cfg.master_seed, run);
        std::size_t s = 0;
        for (std::size_t i = 0; i < N; ++i) {
            while (s + 1 < segs.size() && segs[s + 1].start <= i) {
                ++s;
            }
            const Segment& seg = segs[s];
            const Snapshot snap = generate_snapshot(seg.A, seg.scene, rng);
            out.mvdr[i] = seg.mvdr_db;
            for (std::size_t k = 0; k < algos.size(); ++k) {
                const BeamformerStep st = algos[k]->step(snap.received);
                updates[k] += st.updated ? 1 : 0;
                RunTrace& t = out.traces[k];
                t.sinr[i] = sinr_db(algos[k]->effective_weights(), seg.soi_steering, seg.soi_power, seg.R_in);
                t.mse[i] = empirical_mse(snap.desired_symbol, st.output);
                t.rate[i] = static_cast<double>(updates[k]) / static_cast<double>(i + 1);
                if (!std::isfinite(t.sinr[i])) {
                    throw NumericError(std::string(cfg.algorithms[k].display_name()) +
                                       " produced a non-finite SINR at snapshot " + std::to_string(i));
                }
            }
        }
        for (std::size_t k = 0; k < algos.size(); ++k) {
            out.traces[k].final_rate = out.traces[k].rate.back();
            out.traces[k].fallbacks = algos[k]->lambda_fallbacks();
        }
        out.ok = true;
    } catch (const NumericError& e) {
        out.ok = false;
        out.error = e.what();
    }
    return out;
}

}  // namespace

void ExperimentConfig::validate() const {
    array.validate();
    scenario.validate();
    if (num_snapshots < 1) {
        throw std::invalid_argument("experiment needs at least one snapshot");
    }
    if (num_runs < 1) {
        throw std::invalid_argument("experiment needs at least one run");
    }
    if (algorithms.empty()) {
        throw std::invalid_argument("experiment lists no algorithms");
    }
    if (gain == 0.0) {
        throw std::invalid_argument("constraint gain must be nonzero");
    }
    std::vector<std::string> labels;
    for (const auto& a : algorithms) {
        a.validate(array.num_elements);
        labels.push_back(a.display_name());
    }
    std::sort(labels.begin(), labels.end());
    if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
        throw std::invalid_argument("algorithm labels must be unique");
    }
}

double TrajectoryRecord::mean_final_sinr_db() const {
    if (final_sinr_db.empty()) {
        return std::nan("");
    }
    return std::accumulate(final_sinr_db.begin(), final_sinr_db.end(), 0.0) /
           static_cast<double>(final_sinr_db.size());
}

double TrajectoryRecord::mean_update_rate() const {
    if (final_update_rate.empty()) {
        return std::nan("");
    }
    return std::accumulate(final_update_rate.begin(), final_update_rate.end(), 0.0) /
           static_cast<double>(final_update_rate.size());
}

const TrajectoryRecord& ExperimentResult::record(const std::string& label) const {
    for (const auto& r : records) {
        if (r.label == label) {
            return r;
        }
    }
    throw std::out_of_range("no record labelled '" + label + "'");
}

bool ExperimentResult::numeric_failure() const {
    const std::size_t total = completed_runs + failed_runs;
    return total > 0 && 10 * failed_runs > total;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<RunResult> runs(cfg.num_runs);
    parallel_for(
        cfg.num_runs, [&](std::size_t k) { runs[k] = execute_run(cfg, k); },
        cfg.workers == 0 ? default_workers() : cfg.workers);

    const std::size_t N = cfg.num_snapshots;
    ExperimentResult res;
    res.records.resize(cfg.algorithms.size());
    for (std::size_t k = 0; k < cfg.algorithms.size(); ++k) {
        auto& rec = res.records[k];
        rec.label = cfg.algorithms[k].display_name();
        rec.kind = cfg.algorithms[k].kind;
        rec.sinr_db_mean.assign(N, 0.0);
        rec.mse_mean.assign(N, 0.0);
        rec.update_rate_cum.assign(N, 0.0);
    }
    res.mvdr_sinr_db.assign(N, 0.0);

    for (std::size_t run = 0; run < runs.size(); ++run) {
        const RunResult& rr = runs[run];
        if (!rr.ok) {
            ++res.failed_runs;
            res.failures.push_back("run " + std::to_string(run) + ": " + rr.error);
            continue;
        }
        ++res.completed_runs;
        for (std::size_t i = 0; i < N; ++i) {
            res.mvdr_sinr_db[i] += rr.mvdr[i];
        }
        for (std::size_t k = 0; k < rr.traces.size(); ++k) {
            auto& rec = res.records[k];
            const RunTrace& t = rr.traces[k];
            for (std::size_t i = 0; i < N; ++i) {
                rec.sinr_db_mean[i] += t.sinr[i];
                rec.mse_mean[i] += t.mse[i];
                rec.update_rate_cum[i] += t.rate[i];
            }
            rec.final_sinr_db.push_back(t.sinr.back());
            rec.final_update_rate.push_back(t.final_rate);
            rec.lambda_fallbacks += t.fallbacks;
        }
    }
    if (res.completed_runs > 0) {
        const double inv = 1.0 / static_cast<double>(res.completed_runs);
        for (double& v : res.mvdr_sinr_db) {
            v *= inv;
        }
        for (auto& rec : res.records) {
            for (std::size_t i = 0; i < N; ++i) {
                rec.sinr_db_mean[i] *= inv;
                rec.mse_mean[i] *= inv;
                rec.update_rate_cum[i] *= inv;
            }
        }
    }
    return res;
}

std::vector<RankSweepRow> rank_sweep(const ExperimentConfig& cfg, const std::vector<int>& ranks) {
    ExperimentConfig base = cfg;
    base.algorithms.clear();
    for (const auto& a : cfg.algorithms) {
        if (is_reduced_rank(a.kind)) {
            base.algorithms.push_back(a);
        }
    }
    if (base.algorithms.empty()) {
        throw std::invalid_argument("rank sweep needs at least one reduced-rank algorithm");
    }
    std::vector<RankSweepRow> rows;
    for (int r : ranks) {
        if (r < 1 || r > cfg.array.num_elements) {
            throw std::invalid_argument("sweep rank " + std::to_string(r) + " outside [1, m]");
        }
        ExperimentConfig c = base;
        for (auto& a : c.algorithms) {
            a.rank = r;
        }
        const ExperimentResult res = run_experiment(c);
        if (res.numeric_failure()) {
            throw NumericError("rank " + std::to_string(r) + ": numeric failure in more than 10% of runs");
        }
        RankSweepRow row;
        row.rank = r;
        for (const auto& rec : res.records) {
            row.labels.push_back(rec.label);
            row.final_sinr_db.push_back(rec.mean_final_sinr_db());
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

double sweep_value(const std::vector<RankSweepRow>& rows, const std::string& label, int rank) {
    for (const auto& row : rows) {
        if (row.rank != rank) {
            continue;
        }
        for (std::size_t k = 0; k < row.labels.size(); ++k) {
            if (row.labels[k] == label) {
                return row.final_sinr_db[k];
            }
        }
    }
    throw std::out_of_range("no sweep value for '" + label + "' at rank " + std::to_string(rank));
}

int best_rank(const std::vector<RankSweepRow>& rows, const std::string& label) {
    int best = -1;
    double best_v = -std::numeric_limits<double>::infinity();
    for (const auto& row : rows) {
        const double v = sweep_value(rows, label, row.rank);
        if (v > best_v + kRankTieTolerance) {
            best_v = v;
            best = row.rank;
        }
    }
    if (best < 0) {
        throw std::out_of_range("empty rank sweep");
    }
    return best;
}

}  // namespace jiosm
