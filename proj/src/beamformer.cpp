#include "jiosm/beamformer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <stdexcept>
#include <utility>

namespace jiosm {

namespace {

constexpr std::array<std::pair<AlgorithmKind, std::string_view>, 8> kTags{{
    {AlgorithmKind::FrSg, "FR-SG"},
    {AlgorithmKind::FrSmSg, "FR-SM-SG"},
    {AlgorithmKind::JioSg, "JIO-SG"},
    {AlgorithmKind::JioSmSg, "JIO-SM-SG"},
    {AlgorithmKind::FrRls, "FR-RLS"},
    {AlgorithmKind::FrSmRls, "FR-SM-RLS"},
    {AlgorithmKind::JioRls, "JIO-RLS"},
    {AlgorithmKind::JioSmRls, "JIO-SM-RLS"},
}};

std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char ch) { return std::toupper(ch); });
    return out;
}

BoundState make_bound(const BoundSpec& spec, double noise_power, const CVector& w0) {
    if (spec.mode == BoundMode::Fixed) {
        return BoundState::fixed(spec.fixed_delta);
    }
    return BoundState::parameter_dependent(spec.alpha, spec.beta, spec.noise_power_estimate.value_or(noise_power),
                                           w0);
}

class FrSg final : public AdaptiveBeamformer {
public:
    FrSg(const AlgorithmSpec& spec, const GainConstraint& c)
        : AdaptiveBeamformer(spec.kind), cfg_(spec.sg), c_(c),
          w_{(c.gain / c.steering.squaredNorm()) * c.steering} {}

    BeamformerStep step(const CVector& x, OpCounter* ops) override {
        const StepOutcome o = fr_sg_step(w_, x, c_, cfg_, ops);
        return {o.updated, o.output};
    }
    CVector effective_weights() const override { return w_.w; }

private:
    SgConfig cfg_;
    GainConstraint c_;
    FullRankWeights w_;
};

class FrSmSg final : public AdaptiveBeamformer {
public:
    FrSmSg(const AlgorithmSpec& spec, const GainConstraint& c, double noise_power)
        : AdaptiveBeamformer(spec.kind), cfg_(spec.sg), c_(c),
          w_{(c.gain / c.steering.squaredNorm()) * c.steering}, bound_(make_bound(spec.bound, noise_power, w_.w)) {}

    BeamformerStep step(const CVector& x, OpCounter* ops) override {
        const StepOutcome o = fr_sm_sg_step(w_, bound_, x, c_, cfg_, ops);
        return {o.updated, o.output};
    }
    CVector effective_weights() const override { return w_.w; }
    const BoundState* bound() const override { return &bound_; }

private:
    SgConfig cfg_;
    GainConstraint c_;
    FullRankWeights w_;
    BoundState bound_;
};

class JioSg final : public AdaptiveBeamformer {
public:
    JioSg(const AlgorithmSpec& spec, const GainConstraint& c)
        : AdaptiveBeamformer(spec.kind), cfg_(spec.sg), c_(c), state_(ReducedRankState::initial(c, spec.rank, spec.init)) {}

    BeamformerStep step(const CVector& x, OpCounter* ops) override {
        const StepOutcome o = jio_sg_step(state_, x, c_, cfg_, ops);
        return {o.updated, o.output};
    }
    CVector effective_weights() const override { return state_.effective_weights(); }

private:
    SgConfig cfg_;
    GainConstraint c_;
    ReducedRankState state_;
};

class JioSmSg final : public AdaptiveBeamformer {
public:
    JioSmSg(const AlgorithmSpec& spec, const GainConstraint& c, double noise_power)
        : AdaptiveBeamformer(spec.kind), cfg_(spec.sg), c_(c), state_(ReducedRankState::initial(c, spec.rank, spec.init)),
          bound_(make_bound(spec.bound, noise_power, state_.effective_weights())) {}

    BeamformerStep step(const CVector& x, OpCounter* ops) override {
        const StepOutcome o = jio_sm_sg_step(state_, bound_, x, c_, cfg_, ops);
        return {o.updated, o.output};
    }
    CVector effective_weights() const override { return state_.effective_weights(); }
    const BoundState* bound() const override { return &bound_; }

private:
    SgConfig cfg_;
    GainConstraint c_;
    ReducedRankState state_;
    BoundState bound_;
};

class FrRls final : public AdaptiveBeamformer {
public:
    FrRls(const AlgorithmSpec& spec, const GainConstraint& c, double noise_power)
        : AdaptiveBeamformer(spec.kind), cfg_(spec.rls), c_(c), state_(FrRlsState::initial(c, spec.rls)) {
        if (is_set_membership(spec.kind)) {
            bound_ = make_bound(spec.bound, noise_power, state_.weights.w);
        }
    }

    BeamformerStep step(const CVector& x, OpCounter* ops) override {
        const RlsStepOutcome o = bound_ ? fr_sm_rls_step(state_, *bound_, x, c_, cfg_, ops)
                                        : fr_rls_step(state_, x, c_, cfg_, ops);
        return {o.updated, o.output};
    }
    CVector effective_weights() const override { return state_.weights.w; }
    const BoundState* bound() const override { return bound_ ? &*bound_ : nullptr; }
    std::size_t lambda_fallbacks() const override { return state_.lambda_fallbacks; }

private:
    RlsConfig cfg_;
    GainConstraint c_;
    FrRlsState state_;
    std::optional<BoundState> bound_;
};

class JioRls final : public AdaptiveBeamformer {
public:
    JioRls(const AlgorithmSpec& spec, const GainConstraint& c, double noise_power)
        : AdaptiveBeamformer(spec.kind), cfg_(spec.rls), c_(c),
          state_(JioRlsState::initial(c, spec.rank, spec.rls, spec.init)) {
        if (is_set_membership(spec.kind)) {
            bound_ = make_bound(spec.bound, noise_power, state_.rr.effective_weights());
        }
    }

    BeamformerStep step(const CVector& x, OpCounter* ops) override {
        const RlsStepOutcome o = bound_ ? jio_sm_rls_step(state_, *bound_, x, c_, cfg_, ops)
                                        : jio_rls_step(state_, x, c_, cfg_, ops);
        return {o.updated, o.output};
    }
    CVector effective_weights() const override { return state_.rr.effective_weights(); }
    const BoundState* bound() const override { return bound_ ? &*bound_ : nullptr; }
    std::size_t lambda_fallbacks() const override { return state_.lambda_fallbacks; }

private:
    RlsConfig cfg_;
    GainConstraint c_;
    JioRlsState state_;
    std::optional<BoundState> bound_;
};

}  // namespace

std::string_view algorithm_tag(AlgorithmKind kind) {
    for (const auto& [k, tag] : kTags) {
        if (k == kind) {
            return tag;
        }
    }
    throw std::invalid_argument("unknown algorithm kind");
}

AlgorithmKind parse_algorithm(std::string_view tag) {
    const std::string u = upper(tag);
    for (const auto& [k, t] : kTags) {
        if (u == t) {
            return k;
        }
    }
    throw std::invalid_argument("unknown algorithm tag '" + std::string(tag) + "'");
}

const std::vector<AlgorithmKind>& all_algorithms() {
    static const std::vector<AlgorithmKind> kinds = [] {
        std::vector<AlgorithmKind> v;
        for (const auto& [k, t] : kTags) {
            v.push_back(k);
        }
        return v;
    }();
    return kinds;
}

bool is_set_membership(AlgorithmKind kind) {
    return kind == AlgorithmKind::FrSmSg || kind == AlgorithmKind::JioSmSg || kind == AlgorithmKind::FrSmRls ||
           kind == AlgorithmKind::JioSmRls;
}

bool is_reduced_rank(AlgorithmKind kind) {
    return kind == AlgorithmKind::JioSg || kind == AlgorithmKind::JioSmSg || kind == AlgorithmKind::JioRls ||
           kind == AlgorithmKind::JioSmRls;
}

bool is_rls(AlgorithmKind kind) {
    return kind == AlgorithmKind::FrRls || kind == AlgorithmKind::FrSmRls || kind == AlgorithmKind::JioRls ||
           kind == AlgorithmKind::JioSmRls;
}

std::string AlgorithmSpec::display_name() const {
    return label.empty() ? std::string(algorithm_tag(kind)) : label;
}

void AlgorithmSpec::validate(int num_elements) const {
    if (is_reduced_rank(kind) && (rank < 1 || rank > num_elements)) {
        throw std::invalid_argument(display_name() + ": rank must satisfy 1 <= r <= m");
    }
    if (is_set_membership(kind)) {
        if (bound.mode == BoundMode::ParameterDependent) {
            if (!(bound.alpha > 1.0)) {
                throw std::invalid_argument(display_name() + ": alpha must exceed 1");
            }
            if (!(bound.beta > 0.0 && bound.beta < 1.0)) {
                throw std::invalid_argument(display_name() + ": beta must lie in (0, 1)");
            }
        } else if (!(bound.fixed_delta >= 0.0)) {
            throw std::invalid_argument(display_name() + ": fixed bound must be nonnegative");
        }
    }
    if (is_rls(kind)) {
        rls.validate();
    } else if (!(sg.fixed_step_T >= 0.0 && sg.fixed_step_w >= 0.0)) {
        throw std::invalid_argument(display_name() + ": step sizes must be nonnegative");
    }
}

std::unique_ptr<AdaptiveBeamformer> make_beamformer(const AlgorithmSpec& spec, const GainConstraint& constraint,
                                                    double noise_power) {
    spec.validate(static_cast<int>(constraint.steering.size()));
    switch (spec.kind) {
        case AlgorithmKind::FrSg:
            return std::make_unique<FrSg>(spec, constraint);
        case AlgorithmKind::FrSmSg:
            return std::make_unique<FrSmSg>(spec, constraint, noise_power);
        case AlgorithmKind::JioSg:
            return std::make_unique<JioSg>(spec, constraint);
        case AlgorithmKind::JioSmSg:
            return std::make_unique<JioSmSg>(spec, constraint, noise_power);
        case AlgorithmKind::FrRls:
        case AlgorithmKind::FrSmRls:
            return std::make_unique<FrRls>(spec, constraint, noise_power);
        case AlgorithmKind::JioRls:
        case AlgorithmKind::JioSmRls:
            return std::make_unique<JioRls>(spec, constraint, noise_power);
    }
    throw std::invalid_argument("unknown algorithm kind");
}

}  // namespace jiosm
