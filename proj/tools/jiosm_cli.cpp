#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jiosm/complexity.hpp"
#include "jiosm/config.hpp"
#include "jiosm/csv.hpp"
#include "jiosm/errors.hpp"
#include "jiosm/experiment.hpp"
#include "jiosm/hessian.hpp"
#include "jiosm/lcmv.hpp"
#include "jiosm/metrics.hpp"
#include "jiosm/mse_predictor.hpp"
#include "jiosm/presets.hpp"
#include "jiosm/stability.hpp"

namespace {

using namespace jiosm;

constexpr int kExitConfig = 1;
constexpr int kExitNumeric = 2;

struct CommonFlags {
    std::string source;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> runs;
    std::optional<std::size_t> snapshots;
    std::string out;
    unsigned workers = 0;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool needs_source = true) {
    if (needs_source) {
        cmd->add_option("source", f.source, "Preset name or configuration file")->required();
    }
    cmd->add_option("--seed", f.seed, "Master seed");
    cmd->add_option("--runs", f.runs, "Monte-Carlo runs");
    cmd->add_option("--snapshots", f.snapshots, "Snapshots per run");
    cmd->add_option("--out", f.out, "Output path");
    cmd->add_option("--workers", f.workers, "Worker threads (0: all cores)");
}

RunConfig resolve(const CommonFlags& f) {
    RunConfig rc = is_preset(f.source) ? parse_config(preset_text(f.source)) : load_config(f.source);
    ExperimentConfig& ex = rc.experiment;
    if (f.seed) {
        ex.master_seed = *f.seed;
        rc.predictor.seed = *f.seed;
    }
    if (f.runs) {
        if (*f.runs < 1) {
            throw ConfigError("--runs must be at least 1");
        }
        ex.num_runs = *f.runs;
    }
    if (f.snapshots) {
        if (*f.snapshots < 1) {
            throw ConfigError("--snapshots must be at least 1");
        }
        ex.num_snapshots = *f.snapshots;
        rc.predictor.horizon = *f.snapshots;
    }
    if (!f.out.empty()) {
        ex.output_dir = f.out;
    }
    if (f.workers != 0) {
        ex.workers = f.workers;
        rc.predictor.workers = f.workers;
    }
    try {
        ex.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return rc;
}

int report_failures(const ExperimentResult& res) {
    for (const auto& f : res.failures) {
        std::cerr << "numeric failure: " << f << '\n';
    }
    if (res.numeric_failure()) {
        std::cerr << res.failed_runs << " of " << res.failed_runs + res.completed_runs
                  << " runs failed numerically\n";
        return kExitNumeric;
    }
    return 0;
}

int cmd_run(const CommonFlags& f) {
    const RunConfig rc = resolve(f);
    const ExperimentResult res = run_experiment(rc.experiment);
    std::printf("%-24s %14s %12s\n", "algorithm", "final_sinr_db", "update_rate");
    for (const auto& rec : res.records) {
        std::printf("%-24s %14.3f %12.4f\n", rec.label.c_str(), rec.mean_final_sinr_db(), rec.mean_update_rate());
    }
    if (!res.mvdr_sinr_db.empty()) {
        std::printf("%-24s %14.3f\n", "MVDR", res.mvdr_sinr_db.back());
    }
    if (!rc.experiment.output_dir.empty()) {
        for (const auto& p : emit_csv(res, rc.experiment.output_dir)) {
            std::cerr << "wrote " << p.string() << '\n';
        }
    }
    return report_failures(res);
}

int cmd_sweep(const CommonFlags& f, const std::vector<int>& ranks_flag) {
    const RunConfig rc = resolve(f);
    const std::vector<int> ranks = ranks_flag.empty() ? rc.sweep_ranks : ranks_flag;
    const auto rows = rank_sweep(rc.experiment, ranks);
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!f.out.empty()) {
        file.open(f.out);
        if (!file) {
            throw std::runtime_error("cannot open " + f.out + " for writing");
        }
        out = &file;
    }
    *out << "rank,algorithm,final_sinr_db\n";
    char buf[64];
    for (const auto& row : rows) {
        for (std::size_t k = 0; k < row.labels.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", row.final_sinr_db[k]);
            *out << row.rank << ',' << row.labels[k] << ',' << buf << '\n';
        }
    }
    return 0;
}

int cmd_complexity(const std::vector<int>& ms, int r, long long N, double tau, const std::string& out_path) {
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) {
            throw std::runtime_error("cannot open " + out_path + " for writing");
        }
        out = &file;
    }
    *out << "algorithm,m,r,N,tau,additions,multiplications\n";
    char buf[160];
    for (int m : ms) {
        for (const auto& tag : complexity_tags()) {
            const ComplexityCount c = complexity_count(tag, m, r, N, tau);
            std::snprintf(buf, sizeof buf, "%s,%d,%d,%lld,%.15g,%.17g,%.17g", tag.c_str(), m, r, N, tau,
                          c.additions, c.multiplications);
            *out << buf << '\n';
        }
    }
    return 0;
}

int cmd_predict(const CommonFlags& f, std::optional<std::size_t> ensemble, std::optional<double> p_min,
                const std::string& emse, bool simulate) {
    RunConfig rc = resolve(f);
    MsePredictorConfig pc = rc.predictor;
    if (ensemble) {
        pc.ensemble = *ensemble;
    }
    if (p_min) {
        pc.p_min = *p_min;
    }
    if (!emse.empty()) {
        if (emse == "trace") {
            pc.emse = EmseForm::TraceCovariance;
        } else if (emse == "weighted") {
            pc.emse = EmseForm::CovarianceWeighted;
        } else {
            throw ConfigError("--emse must be trace or weighted");
        }
    }
    const ExperimentConfig& ex = rc.experiment;
    if (ex.random_doas) {
        throw ConfigError("predict-mse needs fixed interferer DOAs");
    }
    const MsePrediction pred = predict_mse_trajectory(ex.array, ex.scenario.at(0), pc);

    std::vector<double> sim;
    if (simulate) {
        ExperimentConfig sc = ex;
        sc.num_snapshots = pc.horizon;
        sc.algorithms.clear();
        for (const auto& a : ex.algorithms) {
            if (a.kind == AlgorithmKind::JioSmSg) {
                sc.algorithms.push_back(a);
                break;
            }
        }
        if (sc.algorithms.empty()) {
            throw ConfigError("--simulate needs a JIO-SM-SG algorithm in the configuration");
        }
        const ExperimentResult res = run_experiment(sc);
        if (int code = report_failures(res); code != 0) {
            return code;
        }
        sim = res.records.front().mse_mean;
    }

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!f.out.empty()) {
        file.open(f.out);
        if (!file) {
            throw std::runtime_error("cannot open " + f.out + " for writing");
        }
        out = &file;
    }
    *out << (simulate ? "snapshot,predicted_mse,simulated_mse\n" : "snapshot,predicted_mse\n");
    char buf[128];
    for (std::size_t i = 0; i < pred.j_mse.size(); ++i) {
        if (simulate) {
            std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g", i + 1, pred.j_mse[i], sim[i]);
        } else {
            std::snprintf(buf, sizeof buf, "%zu,%.17g", i + 1, pred.j_mse[i]);
        }
        *out << buf << '\n';
    }
    std::cerr << "J_min = " << pred.j_min << ", sigma_x^2 = " << pred.sigma_x2 << '\n';
    return 0;
}

int cmd_diagnose(const CommonFlags& f, std::size_t gated_target) {
    const RunConfig rc = resolve(f);
    const ExperimentConfig& ex = rc.experiment;
    if (ex.random_doas) {
        throw ConfigError("diagnose needs fixed interferer DOAs");
    }
    const AlgorithmSpec* spec = nullptr;
    for (const auto& a : ex.algorithms) {
        if (a.kind == AlgorithmKind::JioSmSg) {
            spec = &a;
            break;
        }
    }
    if (!spec) {
        throw ConfigError("diagnose needs a JIO-SM-SG algorithm in the configuration");
    }
    const ScenarioInstant scene = ex.scenario.at(0);
    const CVector a = steering_vector(ex.array, scene.soi().doa_deg);
    const GainConstraint c{a, ex.gain};
    ReducedRankState st = ReducedRankState::initial(c, spec->rank, spec->init);
    BoundState bound = BoundState::parameter_dependent(
        spec->bound.alpha, spec->bound.beta, spec->bound.noise_power_estimate.value_or(scene.noise_power),
        st.effective_weights());
    RandomStream rng = make_stream(ex.master_seed, 0);
    const CMatrix A = steering_matrix(ex.array, scene.sources);

    std::size_t gated = 0, contractive = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < ex.num_snapshots && gated < gated_target; ++i) {
        const CVector x = generate_snapshot(A, scene, rng).received;
        const StabilityReport s = stability_matrix(x, st, bound.delta, c);
        if (s.gate_open) {
            ++gated;
            contractive += s.contractive ? 1 : 0;
            worst = std::max(worst, s.max_gram_eigenvalue);
        }
        jio_sm_sg_step(st, bound, x, c, spec->sg);
    }
    std::printf("stability: %zu gated snapshots, %zu contractive, max eig(U^H U) = %.6f\n", gated, contractive,
                worst);

    std::printf("hessian: lambda,min_eigenvalue,is_psd\n");
    for (int k = 0; k <= 20; ++k) {
        const double lambda = 0.1 * k;
        const HessianReport h = hessian_condition(ex.array, scene, st, lambda);
        std::printf("%.2f,%.6e,%d\n", lambda, h.min_eigenvalue, h.is_psd ? 1 : 0);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Set-membership reduced-rank LCMV beamforming experiments"};
    app.require_subcommand(1);

    CommonFlags run_f, sweep_f, pred_f, diag_f;
    auto* run = app.add_subcommand("run", "Monte-Carlo SINR/MSE trajectories");
    add_common(run, run_f);

    auto* sweep = app.add_subcommand("sweep-rank", "Final SINR versus rank");
    add_common(sweep, sweep_f);
    std::vector<int> ranks;
    sweep->add_option("--ranks", ranks, "Ranks to sweep")->delimiter(',');

    auto* cx = app.add_subcommand("complexity", "Evaluate the complexity table");
    std::vector<int> ms{64};
    int r = 5;
    long long N = 1000;
    double tau = 0.15;
    std::string cx_out;
    cx->add_option("--m", ms, "Array sizes")->delimiter(',');
    cx->add_option("--r", r, "Rank");
    cx->add_option("--N", N, "Snapshots");
    cx->add_option("--tau", tau, "Update rate");
    cx->add_option("--out", cx_out, "CSV path (stdout when omitted)");

    auto* pred = app.add_subcommand("predict-mse", "Predicted MSE trajectory of JIO-SM-SG");
    add_common(pred, pred_f);
    std::optional<std::size_t> ensemble;
    std::optional<double> p_min;
    std::string emse;
    bool simulate = false;
    pred->add_option("--ensemble", ensemble, "Predictor ensemble size");
    pred->add_option("--p-min", p_min, "Minimum update probability");
    pred->add_option("--emse", emse, "trace | weighted");
    pred->add_flag("--simulate", simulate, "Also simulate JIO-SM-SG on the same configuration");

    auto* diag = app.add_subcommand("diagnose", "Stability and Hessian diagnostics");
    add_common(diag, diag_f);
    std::size_t gated = 1000;
    diag->add_option("--gated", gated, "Number of gated snapshots to examine");

    app.add_subcommand("presets", "List embedded presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*run) {
            return cmd_run(run_f);
        }
        if (*sweep) {
            return cmd_sweep(sweep_f, ranks);
        }
        if (*cx) {
            return cmd_complexity(ms, r, N, tau, cx_out);
        }
        if (*pred) {
            return cmd_predict(pred_f, ensemble, p_min, emse, simulate);
        }
        if (*diag) {
            return cmd_diagnose(diag_f, gated);
        }
        for (const auto& name : preset_names()) {
            std::cout << name << '\n';
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
}
