#include "jiosm/array_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace jiosm {

namespace {

void check_doa(double doa_deg) {
    if (!(doa_deg > 0.0 && doa_deg < 180.0)) {
        throw std::invalid_argument("DOA must lie in the open interval (0, 180) degrees, got " +
                                    std::to_string(doa_deg));
    }
}

void validate_sources(const std::vector<SourceSpec>& sources) {
    std::size_t soi_count = 0;
    for (std::size_t k = 0; k < sources.size(); ++k) {
        check_doa(sources[k].doa_deg);
        if (!(sources[k].amplitude > 0.0)) {
            throw std::invalid_argument("source amplitude must be positive");
        }
        if (sources[k].is_soi) {
            ++soi_count;
        }
        for (std::size_t l = 0; l < k; ++l) {
            if (sources[l].doa_deg == sources[k].doa_deg) {
                throw std::invalid_argument("source DOAs must be pairwise distinct");
            }
        }
    }
    if (soi_count != 1) {
        throw std::invalid_argument("scenario must contain exactly one signal of interest");
    }
}

void apply_event(std::vector<SourceSpec>& sources, const ChangeEvent& ev) {
    for (double doa : ev.remove_doas) {
        auto it = std::find_if(sources.begin(), sources.end(),
                               [doa](const SourceSpec& s) { return s.doa_deg == doa; });
        if (it == sources.end()) {
            throw std::invalid_argument("change event removes unknown source at " +
                                        std::to_string(doa) + " deg");
        }
        sources.erase(it);
    }
    sources.insert(sources.end(), ev.add.begin(), ev.add.end());
}

// splitmix64 finalizer; decorrelates neighbouring run indices.
std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

void UlaConfig::validate() const {
    if (num_elements < 1) {
        throw std::invalid_argument("array needs at least one element");
    }
    if (!(element_spacing > 0.0)) {
        throw std::invalid_argument("element spacing must be positive");
    }
}

const SourceSpec& ScenarioInstant::soi() const {
    auto it = std::find_if(sources.begin(), sources.end(), [](const SourceSpec& s) { return s.is_soi; });
    if (it == sources.end()) {
        throw std::invalid_argument("scenario has no signal of interest");
    }
    return *it;
}

void ScenarioInstant::validate() const {
    if (!(noise_power > 0.0)) {
        throw std::invalid_argument("noise power must be positive");
    }
    validate_sources(sources);
}

void SourceScenario::validate() const {
    if (!(noise_power > 0.0)) {
        throw std::invalid_argument("noise power must be positive");
    }
    validate_sources(sources);
    std::vector<SourceSpec> current = sources;
    for (std::size_t e = 0; e < change_events.size(); ++e) {
        if (e > 0 && change_events[e].snapshot_index < change_events[e - 1].snapshot_index) {
            throw std::invalid_argument("change events must be sorted by snapshot index");
        }
        apply_event(current, change_events[e]);
        validate_sources(current);
    }
}

ScenarioInstant SourceScenario::at(std::size_t index) const {
    ScenarioInstant inst{sources, noise_power};
    for (const auto& ev : change_events) {
        if (ev.snapshot_index > index) {
            break;
        }
        apply_event(inst.sources, ev);
    }
    return inst;
}

std::vector<std::size_t> SourceScenario::segment_starts() const {
    std::vector<std::size_t> starts{0};
    for (const auto& ev : change_events) {
        if (ev.snapshot_index != starts.back()) {
            starts.push_back(ev.snapshot_index);
        }
    }
    return starts;
}

RandomStream make_stream(std::uint64_t master_seed, std::uint64_t run_index) {
    return RandomStream(mix(master_seed ^ mix(run_index + 1)));
}

CVector steering_vector(const UlaConfig& cfg, double doa_deg) {
    cfg.validate();
    check_doa(doa_deg);
    const double phase_step =
        -2.0 * std::numbers::pi * cfg.element_spacing * std::cos(doa_deg * std::numbers::pi / 180.0);
    CVector a(cfg.num_elements);
    for (int p = 0; p < cfg.num_elements; ++p) {
        a(p) = std::polar(1.0, phase_step * p);
    }
    return a;
}

CMatrix steering_matrix(const UlaConfig& cfg, std::span<const SourceSpec> sources) {
    CMatrix A(cfg.num_elements, static_cast<Eigen::Index>(sources.size()));
    for (std::size_t k = 0; k < sources.size(); ++k) {
        A.col(static_cast<Eigen::Index>(k)) = steering_vector(cfg, sources[k].doa_deg);
    }
    return A;
}

Snapshot generate_snapshot(const CMatrix& steering, const ScenarioInstant& scene, RandomStream& rng) {
    const Eigen::Index m = steering.rows();
    std::bernoulli_distribution coin(0.5);
    std::normal_distribution<double> gauss(0.0, std::sqrt(scene.noise_power / 2.0));

    Snapshot snap;
    snap.symbols.resize(scene.sources.size());
    snap.received = CVector::Zero(m);
    for (std::size_t k = 0; k < scene.sources.size(); ++k) {
        const double s = coin(rng) ? 1.0 : -1.0;
        snap.symbols[k] = s;
        if (scene.sources[k].is_soi) {
            snap.desired_symbol = s;
        }
        snap.received += (scene.sources[k].amplitude * s) * steering.col(static_cast<Eigen::Index>(k));
    }
    for (Eigen::Index p = 0; p < m; ++p) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        snap.received(p) += Complex(re, im);
    }
    return snap;
}

Snapshot generate_snapshot(const UlaConfig& cfg, const ScenarioInstant& scene, RandomStream& rng) {
    return generate_snapshot(steering_matrix(cfg, scene.sources), scene, rng);
}

CMatrix true_covariance(const UlaConfig& cfg, const ScenarioInstant& scene) {
    CMatrix R = scene.noise_power * CMatrix::Identity(cfg.num_elements, cfg.num_elements);
    for (const auto& src : scene.sources) {
        const CVector a = steering_vector(cfg, src.doa_deg);
        R += (src.amplitude * src.amplitude) * (a * a.adjoint());
    }
    return R;
}

CMatrix interference_noise_covariance(const UlaConfig& cfg, const ScenarioInstant& scene) {
    CMatrix R = scene.noise_power * CMatrix::Identity(cfg.num_elements, cfg.num_elements);
    for (const auto& src : scene.sources) {
        if (src.is_soi) {
            continue;
        }
        const CVector a = steering_vector(cfg, src.doa_deg);
        R += (src.amplitude * src.amplitude) * (a * a.adjoint());
    }
    return R;
}

std::vector<double> draw_distinct_doas(RandomStream& rng, std::size_t count, std::span<const double> reserved,
                                       double min_separation_deg) {
    std::uniform_real_distribution<double> uni(0.0, 180.0);
    std::vector<double> taken(reserved.begin(), reserved.end());
    std::vector<double> out;
    out.reserve(count);
    std::size_t attempts = 0;
    while (out.size() < count) {
        if (++attempts > 100000) {
            throw std::invalid_argument("cannot place that many distinct DOAs with the requested separation");
        }
        const double d = uni(rng);
        if (!(d > 0.0 && d < 180.0)) {
            continue;
        }
        const bool clash = std::any_of(taken.begin(), taken.end(),
                                       [&](double t) { return std::abs(t - d) < min_separation_deg; });
        if (clash) {
            continue;
        }
        taken.push_back(d);
        out.push_back(d);
    }
    return out;
}

double amplitude_from_db(double ratio_db, double reference_power) {
    return std::sqrt(reference_power * std::pow(10.0, ratio_db / 10.0));
}

}  // namespace jiosm
