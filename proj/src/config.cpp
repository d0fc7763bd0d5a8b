#include "jiosm/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "jiosm/errors.hpp"

namespace jiosm {

namespace {

namespace pt = boost::property_tree;

constexpr std::string_view kAlgorithmPrefix = "algorithm:";

std::string trim(std::string s) {
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

// Typed access to one section with key-qualified errors and unknown-key detection.
class Section {
public:
    Section(std::string name, const pt::ptree* tree) : name_(std::move(name)), tree_(tree) {}

    bool has(const std::string& key) {
        used_.push_back(key);
        return tree_ && tree_->find(key) != tree_->not_found();
    }

    std::string text(const std::string& key, const std::string& fallback) {
        if (!has(key)) {
            return fallback;
        }
        return trim(tree_->find(key)->second.data());
    }

    double real(const std::string& key, double fallback) {
        if (!has(key)) {
            return fallback;
        }
        return parse_real(key, text(key, ""));
    }

    long long integer(const std::string& key, long long fallback) {
        if (!has(key)) {
            return fallback;
        }
        const std::string v = text(key, "");
        std::size_t pos = 0;
        long long out = 0;
        try {
            out = std::stoll(v, &pos);
        } catch (const std::exception&) {
            fail(key, "expected an integer, got '" + v + "'");
        }
        if (pos != v.size()) {
            fail(key, "expected an integer, got '" + v + "'");
        }
        return out;
    }

    bool boolean(const std::string& key, bool fallback) {
        if (!has(key)) {
            return fallback;
        }
        const std::string v = lower(text(key, ""));
        if (v == "true" || v == "1" || v == "yes" || v == "on") {
            return true;
        }
        if (v == "false" || v == "0" || v == "no" || v == "off") {
            return false;
        }
        fail(key, "expected a boolean, got '" + v + "'");
    }

    std::vector<double> reals(const std::string& key) {
        std::vector<double> out;
        if (!has(key)) {
            return out;
        }
        std::stringstream ss(text(key, ""));
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (!item.empty()) {
                out.push_back(parse_real(key, item));
            }
        }
        return out;
    }

    [[noreturn]] void fail(const std::string& key, const std::string& why) const {
        throw ConfigError("[" + name_ + "] " + key + ": " + why);
    }

    void reject_unknown() const {
        if (!tree_) {
            return;
        }
        for (const auto& [key, value] : *tree_) {
            if (std::find(used_.begin(), used_.end(), key) == used_.end()) {
                fail(key, "unknown key");
            }
        }
    }

private:
    double parse_real(const std::string& key, const std::string& v) const {
        std::size_t pos = 0;
        double out = 0.0;
        try {
            out = std::stod(v, &pos);
        } catch (const std::exception&) {
            fail(key, "expected a number, got '" + v + "'");
        }
        if (pos != v.size() || !std::isfinite(out)) {
            fail(key, "expected a finite number, got '" + v + "'");
        }
        return out;
    }

    std::string name_;
    const pt::ptree* tree_;
    std::vector<std::string> used_;
};

const pt::ptree* child(const pt::ptree& root, const std::string& name) {
    auto it = root.find(name);
    return it == root.not_found() ? nullptr : &it->second;
}

// read_ini drops sections without keys, so headers are taken from the text.
std::vector<std::string> section_headers(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.size() >= 2 && line.front() == '[' && line.back() == ']') {
            out.push_back(trim(line.substr(1, line.size() - 2)));
        }
    }
    return out;
}

double amplitude_for_power(double power) { return std::sqrt(power); }

SourceScenario parse_scenario(Section& s, std::size_t num_snapshots, bool& random_doas, double& min_sep) {
    const double snr_db = s.real("snr_db", 10.0);
    const double sir_db = s.real("sir_db", -20.0);
    const double soi_doa = s.real("soi_doa", 90.0);
    random_doas = s.boolean("random_doas", false);
    min_sep = s.real("min_separation", 0.5);

    std::vector<double> doas = s.reals("interferer_doas");
    const long long count = s.integer("interferers", static_cast<long long>(doas.size()));
    if (doas.empty() && count > 0) {
        if (!random_doas) {
            s.fail("interferers", "a count without interferer_doas requires random_doas = true");
        }
        // Placeholders only; every run redraws them.
        for (long long k = 0; k < count; ++k) {
            doas.push_back(1.0 + static_cast<double>(k) * 170.0 / static_cast<double>(count + 1));
        }
    } else if (count != static_cast<long long>(doas.size())) {
        s.fail("interferers", "count disagrees with interferer_doas");
    }

    SourceScenario sc;
    if (!doas.empty() && s.has("inr_db") && s.has("sir_db")) {
        s.fail("inr_db", "give either sir_db or inr_db, not both");
    }
    sc = make_scenario(snr_db, sir_db, soi_doa, doas);
    double interferer_power = doas.empty() ? 0.0 : sc.sources.back().amplitude * sc.sources.back().amplitude;
    if (s.has("inr_db")) {
        interferer_power = sc.noise_power * std::pow(10.0, s.real("inr_db", 0.0) / 10.0);
        for (auto& src : sc.sources) {
            if (!src.is_soi) {
                src.amplitude = amplitude_for_power(interferer_power);
            }
        }
    }

    if (s.has("change_at")) {
        const long long at = s.integer("change_at", 0);
        if (at < 1 || static_cast<std::size_t>(at) >= num_snapshots) {
            s.fail("change_at", "must lie inside the snapshot horizon");
        }
        ChangeEvent ev;
        ev.snapshot_index = static_cast<std::size_t>(at);
        std::vector<double> add = s.reals("change_add_doas");
        const long long add_count = s.integer("change_add_count", static_cast<long long>(add.size()));
        if (add.empty() && add_count > 0) {
            if (!random_doas) {
                s.fail("change_add_count", "a count without change_add_doas requires random_doas = true");
            }
            for (long long k = 0; k < add_count; ++k) {
                add.push_back(2.0 + static_cast<double>(k) * 170.0 / static_cast<double>(add_count + 1));
            }
        } else if (add_count != static_cast<long long>(add.size())) {
            s.fail("change_add_count", "count disagrees with change_add_doas");
        }
        double add_power = interferer_power;
        if (s.has("change_add_inr_db")) {
            add_power = sc.noise_power * std::pow(10.0, s.real("change_add_inr_db", 0.0) / 10.0);
        }
        if (!add.empty() && !(add_power > 0.0)) {
            s.fail("change_add_inr_db", "added interferers need a power (set change_add_inr_db)");
        }
        for (double d : add) {
            ev.add.push_back({d, amplitude_for_power(add_power), false});
        }
        ev.remove_doas = s.reals("change_remove_doas");
        sc.change_events.push_back(ev);
    } else {
        for (const char* key : {"change_add_doas", "change_add_count", "change_add_inr_db", "change_remove_doas"}) {
            if (s.has(key)) {
                s.fail(key, "requires change_at");
            }
        }
    }
    return sc;
}

SgUpdateOrder parse_order(Section& s) {
    const std::string v = lower(s.text("order", "sequential"));
    if (v == "sequential") {
        return SgUpdateOrder::Sequential;
    }
    if (v == "simultaneous") {
        return SgUpdateOrder::Simultaneous;
    }
    s.fail("order", "expected sequential or simultaneous, got '" + v + "'");
}

TransformInit parse_init(Section& s) {
    const std::string v = lower(s.text("init", "identity"));
    if (v == "identity") {
        return TransformInit::Identity;
    }
    if (v == "subarray") {
        return TransformInit::Subarray;
    }
    s.fail("init", "expected identity or subarray, got '" + v + "'");
}

AlgorithmSpec parse_algorithm_section(const std::string& label, Section& s) {
    AlgorithmSpec a;
    a.label = label;
    const std::string type = s.text("type", label);
    try {
        a.kind = parse_algorithm(type);
    } catch (const std::invalid_argument&) {
        s.fail("type", "unknown algorithm '" + type + "'");
    }
    a.rank = static_cast<int>(s.integer("rank", a.rank));
    a.init = parse_init(s);

    const std::string bound = lower(s.text("bound", "pdb"));
    if (bound == "pdb") {
        a.bound.mode = BoundMode::ParameterDependent;
    } else if (bound == "fixed") {
        a.bound.mode = BoundMode::Fixed;
    } else {
        s.fail("bound", "expected pdb or fixed, got '" + bound + "'");
    }
    a.bound.alpha = s.real("alpha", a.bound.alpha);
    a.bound.beta = s.real("beta", a.bound.beta);
    a.bound.fixed_delta = s.real("delta", a.bound.fixed_delta);
    if (s.has("noise_estimate")) {
        a.bound.noise_power_estimate = s.real("noise_estimate", 1.0);
    }

    a.sg.fixed_step_T = s.real("mu_T", a.sg.fixed_step_T);
    a.sg.fixed_step_w = s.real("mu_w", a.sg.fixed_step_w);
    a.sg.initial_step = s.real("mu_initial", a.sg.initial_step);
    a.sg.normalize_fixed_steps = s.boolean("normalize_steps", a.sg.normalize_fixed_steps);
    a.sg.projector_normalized = s.boolean("projector_normalized", a.sg.projector_normalized);
    a.sg.order = parse_order(s);

    a.rls.rho = s.real("rho", a.rls.rho);
    a.rls.varrho = s.real("varrho", a.rls.varrho);
    a.rls.lambda_min = s.real("lambda_min", a.rls.lambda_min);
    a.rls.lambda_max = s.real("lambda_max", a.rls.lambda_max);
    if (s.has("lambda_fixed")) {
        a.rls.fixed_lambda = s.real("lambda_fixed", a.rls.lambda_max);
    }
    s.reject_unknown();
    return a;
}

}  // namespace

SourceScenario make_scenario(double snr_db, double sir_db, double soi_doa, const std::vector<double>& interferer_doas) {
    SourceScenario sc;
    sc.noise_power = std::pow(10.0, -snr_db / 10.0);
    sc.sources.push_back({soi_doa, 1.0, true});
    if (!interferer_doas.empty()) {
        const double each = std::pow(10.0, -sir_db / 10.0) / static_cast<double>(interferer_doas.size());
        for (double d : interferer_doas) {
            sc.sources.push_back({d, std::sqrt(each), false});
        }
    }
    return sc;
}

RunConfig parse_config(const std::string& ini_text) {
    pt::ptree root;
    try {
        std::istringstream in(ini_text);
        pt::read_ini(in, root);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("malformed configuration: ") + e.what());
    }

    const std::vector<std::string> headers = section_headers(ini_text);
    for (const auto& name : headers) {
        const bool known = name == "experiment" || name == "array" || name == "scenario" || name == "predictor" ||
                           name == "sweep" || name.rfind(kAlgorithmPrefix, 0) == 0;
        if (!known) {
            throw ConfigError("unknown section [" + name + "]");
        }
    }

    RunConfig rc;
    ExperimentConfig& ex = rc.experiment;
    try {
        Section e("experiment", child(root, "experiment"));
        ex.name = e.text("name", ex.name);
        const long long snapshots = e.integer("snapshots", static_cast<long long>(ex.num_snapshots));
        const long long runs = e.integer("runs", static_cast<long long>(ex.num_runs));
        if (snapshots < 1) {
            e.fail("snapshots", "must be at least 1");
        }
        if (runs < 1) {
            e.fail("runs", "must be at least 1");
        }
        ex.num_snapshots = static_cast<std::size_t>(snapshots);
        ex.num_runs = static_cast<std::size_t>(runs);
        const long long seed = e.integer("seed", 1);
        if (seed < 0) {
            e.fail("seed", "must be nonnegative");
        }
        ex.master_seed = static_cast<std::uint64_t>(seed);
        ex.output_dir = e.text("output", "");
        ex.gain = e.real("gain", 1.0);
        const long long workers = e.integer("workers", 0);
        if (workers < 0) {
            e.fail("workers", "must be nonnegative");
        }
        ex.workers = static_cast<unsigned>(workers);
        e.reject_unknown();

        Section a("array", child(root, "array"));
        const long long m = a.integer("elements", 16);
        if (m < 1) {
            a.fail("elements", "must be at least 1");
        }
        ex.array.num_elements = static_cast<int>(m);
        ex.array.element_spacing = a.real("spacing", 0.5);
        if (!(ex.array.element_spacing > 0.0)) {
            a.fail("spacing", "must be positive");
        }
        a.reject_unknown();

        Section s("scenario", child(root, "scenario"));
        ex.scenario = parse_scenario(s, ex.num_snapshots, ex.random_doas, ex.min_doa_separation);
        s.reject_unknown();

        const pt::ptree empty;
        for (const auto& name : headers) {
            if (name.rfind(kAlgorithmPrefix, 0) != 0) {
                continue;
            }
            const pt::ptree* tree = child(root, name);
            const std::string label = trim(name.substr(kAlgorithmPrefix.size()));
            if (label.empty()) {
                throw ConfigError("[" + name + "]: algorithm section needs a label");
            }
            Section as(name, tree ? tree : &empty);
            ex.algorithms.push_back(parse_algorithm_section(label, as));
        }
        if (ex.algorithms.empty()) {
            throw ConfigError("configuration lists no [algorithm:LABEL] sections");
        }

        Section p("predictor", child(root, "predictor"));
        MsePredictorConfig& pc = rc.predictor;
        const std::string source = p.text("algorithm", "");
        if (!source.empty()) {
            auto it = std::find_if(ex.algorithms.begin(), ex.algorithms.end(),
                                   [&](const AlgorithmSpec& al) { return al.display_name() == source; });
            if (it == ex.algorithms.end()) {
                p.fail("algorithm", "no algorithm labelled '" + source + "'");
            }
            pc.rank = it->rank;
            pc.init = it->init;
            pc.alpha = it->bound.alpha;
            pc.beta = it->bound.beta;
        }
        pc.p_min = p.real("p_min", pc.p_min);
        const long long ens = p.integer("ensemble", static_cast<long long>(pc.ensemble));
        if (ens < 2) {
            p.fail("ensemble", "must be at least 2");
        }
        pc.ensemble = static_cast<std::size_t>(ens);
        const long long horizon = p.integer("snapshots", static_cast<long long>(ex.num_snapshots));
        if (horizon < 1) {
            p.fail("snapshots", "must be at least 1");
        }
        pc.horizon = static_cast<std::size_t>(horizon);
        pc.seed = static_cast<std::uint64_t>(p.integer("seed", static_cast<long long>(ex.master_seed)));
        pc.projector_normalized = p.boolean("projector_normalized", pc.projector_normalized);
        const std::string emse = lower(p.text("emse", "trace"));
        if (emse == "trace") {
            pc.emse = EmseForm::TraceCovariance;
        } else if (emse == "weighted") {
            pc.emse = EmseForm::CovarianceWeighted;
        } else {
            p.fail("emse", "expected trace or weighted, got '" + emse + "'");
        }
        pc.gain = ex.gain;
        pc.workers = ex.workers;
        p.reject_unknown();

        Section sw("sweep", child(root, "sweep"));
        if (sw.has("ranks")) {
            rc.sweep_ranks.clear();
            for (double r : sw.reals("ranks")) {
                if (r != std::floor(r) || r < 1) {
                    sw.fail("ranks", "ranks must be positive integers");
                }
                rc.sweep_ranks.push_back(static_cast<int>(r));
            }
        }
        sw.reject_unknown();

        ex.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid configuration: ") + e.what());
    }
    return rc;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read configuration file " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace jiosm
