#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jiosm/adaptive_rls.hpp"
#include "jiosm/adaptive_sg.hpp"
#include "jiosm/lcmv.hpp"
#include "jiosm/op_counter.hpp"
#include "jiosm/set_membership.hpp"

namespace jiosm {

enum class AlgorithmKind { FrSg, FrSmSg, JioSg, JioSmSg, FrRls, FrSmRls, JioRls, JioSmRls };

/// Canonical tag, e.g. "JIO-SM-RLS".
std::string_view algorithm_tag(AlgorithmKind kind);
/// Inverse of algorithm_tag (case-insensitive). Throws std::invalid_argument.
AlgorithmKind parse_algorithm(std::string_view tag);
const std::vector<AlgorithmKind>& all_algorithms();

bool is_set_membership(AlgorithmKind kind);
bool is_reduced_rank(AlgorithmKind kind);
bool is_rls(AlgorithmKind kind);

struct BoundSpec {
    BoundMode mode = BoundMode::ParameterDependent;
    double alpha = 22.0;
    double beta = 0.99;
    double fixed_delta = 1.0;
    /// σ̂_n² used by the bound; defaults to the scenario's true noise power.
    std::optional<double> noise_power_estimate;
};

struct AlgorithmSpec {
    AlgorithmKind kind = AlgorithmKind::JioSmSg;
    /// Output label; defaults to the tag. Distinguishes e.g. fixed-bound runs.
    std::string label;
    int rank = 5;
    TransformInit init = TransformInit::Identity;
    BoundSpec bound;
    SgConfig sg;
    RlsConfig rls;

    std::string display_name() const;
    void validate(int num_elements) const;
};

struct BeamformerStep {
    bool updated = false;
    Complex output{};
};

class AdaptiveBeamformer {
public:
    virtual ~AdaptiveBeamformer() = default;

    virtual BeamformerStep step(const CVector& x, OpCounter* ops = nullptr) = 0;
    /// Full-rank equivalent filter (T_r w̄ for reduced-rank algorithms).
    virtual CVector effective_weights() const = 0;
    /// Present only for set-membership algorithms.
    virtual const BoundState* bound() const { return nullptr; }
    /// λ₁ fallback events (RLS family only).
    virtual std::size_t lambda_fallbacks() const { return 0; }

    AlgorithmKind kind() const { return kind_; }

protected:
    explicit AdaptiveBeamformer(AlgorithmKind kind) : kind_(kind) {}

private:
    AlgorithmKind kind_;
};

/// Builds the algorithm in its initial state for the given constraint.
/// `noise_power` seeds σ̂_n² unless the spec overrides it.
std::unique_ptr<AdaptiveBeamformer> make_beamformer(const AlgorithmSpec& spec, const GainConstraint& constraint,
                                                    double noise_power);

}  // namespace jiosm
