#include "jiosm/adaptive_sg.hpp"

#include <cmath>
#include <stdexcept>

#include "jiosm/errors.hpp"

namespace jiosm {

namespace {

// Outputs below this magnitude never open the gate (avoids δ/|y| overflow).
constexpr double kTinyOutput = 1e-12;

bool gate_open(Complex y, double delta) {
    if (!exceeds_bound(y, delta)) {
        return false;
    }
    return !(delta > 0.0 && std::abs(y) < kTinyOutput);
}

void check_steering(const CVector& a) {
    if (a.size() == 0 || a.squaredNorm() == 0.0) {
        throw std::invalid_argument("steering vector must be nonzero");
    }
}

double fixed_step(double mu, double power, bool normalize) {
    if (!normalize) {
        return mu;
    }
    return power > 0.0 ? mu / power : 0.0;
}


}  // namespace

CMatrix projector_full(const CVector& a, bool normalized) {
    check_steering(a);
    const auto m = a.size();
    const double scale = normalized ? 1.0 / a.squaredNorm() : 1.0;
    return CMatrix::Identity(m, m) - scale * (a * a.adjoint());
}

CVector apply_projector(const CVector& a, const CVector& x, bool normalized) {
    check_steering(a);
    const double scale = normalized ? 1.0 / a.squaredNorm() : 1.0;
    return x - (scale * a.dot(x)) * a;
}

CMatrix sg_update_transform(const ReducedRankState& state, const CVector& x, Complex y, double mu_T,
                            const CVector& steering) {
    const CVector px = apply_projector(steering, x);
    return state.transform - (mu_T * std::conj(y)) * (px * state.weights.adjoint());
}

CVector sg_update_weights(const CVector& weights, const CVector& x_bar, const CVector& a_bar, Complex y,
                          double mu_w) {
    if (a_bar.squaredNorm() == 0.0) {
        throw std::invalid_argument("reduced steering vector vanished (degenerate transformation)");
    }
    return weights - (mu_w * std::conj(y)) * apply_projector(a_bar, x_bar);
}

double sm_step_size_T(Complex y, double delta, const CVector& x, const CVector& weights, const CVector& steering,
                      bool projector_normalized) {
    if (!gate_open(y, delta)) {
        return 0.0;
    }
    const double xpx = apply_projector(steering, x, projector_normalized).dot(x).real();
    const double denom = weights.squaredNorm() * xpx;
    if (!(std::abs(denom) > 0.0)) {
        throw NumericError("bound unreachable by the transformation update: x lies in span{a}");
    }
    return (1.0 - delta / std::abs(y)) / denom;
}

double sm_step_size_w(Complex y, double delta, const CVector& x_bar, const CVector& a_bar) {
    if (!gate_open(y, delta)) {
        return 0.0;
    }
    if (a_bar.squaredNorm() == 0.0) {
        throw std::invalid_argument("reduced steering vector vanished (degenerate transformation)");
    }
    const double denom = apply_projector(a_bar, x_bar).dot(x_bar).real();
    if (!(denom > 0.0)) {
        throw NumericError("bound unreachable by the weight update: x_bar lies in span{a_bar}");
    }
    return (1.0 - delta / std::abs(y)) / denom;
}

namespace {

// Projection of x against a computed once per snapshot.
struct Projection {
    CVector px;
    double xpx = 0.0;  // x^H P x for the projector selected by the config
};

Projection project_input(const CVector& x, const CVector& a, double a_norm2, bool normalized, OpCounter* ops) {
    const auto m = static_cast<std::uint64_t>(x.size());
    const Complex ax = a.dot(x);
    tally_dot(ops, m);
    Projection p;
    p.px = x - (ax / a_norm2) * a;
    tally_mul(ops, 1);
    tally_axpy(ops, m);
    if (normalized) {
        p.xpx = p.px.squaredNorm();
    } else {
        p.xpx = x.squaredNorm() - std::norm(ax);
    }
    tally_dot(ops, m);
    return p;
}

constexpr double kRefreshedTolerance = 1e-10;

// Step-size oracle for one JIO snapshot. Implementations decide the gate and
// the μ values; the core applies the corrections.
struct JioStepPolicy {
    virtual ~JioStepPolicy() = default;
    virtual bool gate(Complex y) = 0;
    /// Gate for the refreshed output of the sequential w̄ stage.
    virtual bool gate_refreshed(Complex y) const = 0;
    virtual double step_T(Complex y, const Projection& p, const CVector& weights) = 0;
    virtual double step_w(Complex y, const CVector& x_bar, const CVector& g, const CVector& a_bar) = 0;
};

struct SetMembershipPolicy final : JioStepPolicy {
    BoundState& bound;
    OpCounter* ops;
    SetMembershipPolicy(BoundState& b, OpCounter* o) : bound(b), ops(o) {}

    bool gate(Complex y) override { return violates_bound(y, bound) && gate_open(y, bound.delta); }
    // After the T_r step |y| = δ up to rounding; that is not a violation.
    bool gate_refreshed(Complex y) const override {
        return std::abs(y) > bound.delta * (1.0 + kRefreshedTolerance);
    }
    double step_T(Complex y, const Projection& p, const CVector& weights) override {
        if (!gate_open(y, bound.delta)) {
            return 0.0;
        }
        const double denom = weights.squaredNorm() * p.xpx;
        tally_dot(ops, weights.size());
        tally_mul(ops, 3);
        tally_add(ops, 1);
        if (!(std::abs(denom) > 0.0)) {
            throw NumericError("bound unreachable by the transformation update: x lies in span{a}");
        }
        return (1.0 - bound.delta / std::abs(y)) / denom;
    }
    double step_w(Complex y, const CVector& x_bar, const CVector& g, const CVector&) override {
        if (!gate_open(y, bound.delta)) {
            return 0.0;
        }
        const double denom = x_bar.dot(g).real();
        tally_dot(ops, x_bar.size());
        tally_mul(ops, 2);
        tally_add(ops, 1);
        if (!(denom > 0.0)) {
            throw NumericError("bound unreachable by the weight update: x_bar lies in span{a_bar}");
        }
        return (1.0 - bound.delta / std::abs(y)) / denom;
    }
};

struct FixedStepPolicy final : JioStepPolicy {
    const SgConfig& cfg;
    double input_power;
    FixedStepPolicy(const SgConfig& c, double p) : cfg(c), input_power(p) {}

    bool gate(Complex) override { return true; }
    bool gate_refreshed(Complex) const override { return true; }
    double step_T(Complex, const Projection&, const CVector&) override {
        return fixed_step(cfg.fixed_step_T, input_power, cfg.normalize_fixed_steps);
    }
    double step_w(Complex, const CVector& x_bar, const CVector&, const CVector&) override {
        return fixed_step(cfg.fixed_step_w, x_bar.squaredNorm(), cfg.normalize_fixed_steps);
    }
};

CVector reduced_projection(const CVector& a_bar, const CVector& x_bar, OpCounter* ops) {
    const double a_norm2 = a_bar.squaredNorm();
    if (a_norm2 == 0.0) {
        throw std::invalid_argument("reduced steering vector vanished (degenerate transformation)");
    }
    const auto r = static_cast<std::uint64_t>(x_bar.size());
    tally_dot(ops, r);
    tally_dot(ops, r);
    tally_mul(ops, 1);
    tally_axpy(ops, r);
    return x_bar - (a_bar.dot(x_bar) / a_norm2) * a_bar;
}

StepOutcome jio_core(ReducedRankState& state, const CVector& x, const GainConstraint& c, const SgConfig& cfg,
                     JioStepPolicy& policy, OpCounter* ops) {
    const auto m = static_cast<std::uint64_t>(state.num_elements());
    const auto r = static_cast<std::uint64_t>(state.rank());
    const CVector& a = c.steering;

    CVector x_bar = state.transform.adjoint() * x;
    tally_matvec(ops, r, m);
    const Complex y = state.weights.dot(x_bar);
    tally_dot(ops, r);

    StepOutcome out{false, y};
    if (!policy.gate(y)) {
        return out;
    }

    const Projection p = project_input(x, a, c.steering.squaredNorm(), cfg.projector_normalized, ops);
    const double mu_T = policy.step_T(y, p, state.weights);
    const CVector weights_before = state.weights;

    auto apply_T = [&] {
        state.transform -= (mu_T * std::conj(y)) * (p.px * weights_before.adjoint());
        tally_mul(ops, 1);
        tally_scale(ops, m);
        tally_rank_one(ops, m, r);
    };

    if (cfg.order == SgUpdateOrder::Simultaneous) {
        const CVector a_bar = state.transform.adjoint() * a;
        tally_matvec(ops, r, m);
        const CVector g = reduced_projection(a_bar, x_bar, ops);
        const double mu_w = policy.step_w(y, x_bar, g, a_bar);
        if (mu_T != 0.0) {
            apply_T();
        }
        if (mu_w != 0.0) {
            state.weights -= (mu_w * std::conj(y)) * g;
            tally_mul(ops, 1);
            tally_axpy(ops, r);
        }
        out.updated = mu_T != 0.0 || mu_w != 0.0;
        return out;
    }

    Complex y_w = y;
    if (mu_T != 0.0) {
        apply_T();
        x_bar = state.transform.adjoint() * x;
        tally_matvec(ops, r, m);
        y_w = state.weights.dot(x_bar);
        tally_dot(ops, r);
        out.updated = true;
    }
    const CVector a_bar = state.transform.adjoint() * a;
    tally_matvec(ops, r, m);
    const CVector g = reduced_projection(a_bar, x_bar, ops);
    const bool open = mu_T == 0.0 || policy.gate_refreshed(y_w);
    const double mu_w = open ? policy.step_w(y_w, x_bar, g, a_bar) : 0.0;
    if (mu_w != 0.0) {
        state.weights -= (mu_w * std::conj(y_w)) * g;
        tally_mul(ops, 1);
        tally_axpy(ops, r);
        out.updated = true;
    }
    return out;
}

void tally_bound(OpCounter* ops, std::uint64_t m, std::uint64_t r) {
    if (r > 0) {
        tally_matvec(ops, m, r);
    }
    tally_dot(ops, m);
    tally_mul(ops, 4);
    tally_add(ops, 1);
}

}  // namespace

StepOutcome jio_sm_sg_step(ReducedRankState& state, BoundState& bound, const CVector& x, const GainConstraint& c,
                           const SgConfig& cfg, OpCounter* ops) {
    SetMembershipPolicy policy(bound, ops);
    StepOutcome out = jio_core(state, x, c, cfg, policy, ops);
    if (out.updated) {
        bound.record_update();
    }
    bound_update(bound, state.effective_weights());
    tally_bound(ops, state.num_elements(), state.rank());
    return out;
}

StepOutcome jio_sg_step(ReducedRankState& state, const CVector& x, const GainConstraint& c, const SgConfig& cfg,
                        OpCounter* ops) {
    const double power = cfg.normalize_fixed_steps ? x.squaredNorm() : 0.0;
    FixedStepPolicy policy(cfg, power);
    return jio_core(state, x, c, cfg, policy, ops);
}

StepOutcome fr_sg_step(FullRankWeights& weights, const CVector& x, const GainConstraint& c, const SgConfig& cfg,
                       OpCounter* ops) {
    const auto m = static_cast<std::uint64_t>(x.size());
    const Complex y = weights.w.dot(x);
    tally_dot(ops, m);
    const double mu = fixed_step(cfg.fixed_step_w, x.squaredNorm(), cfg.normalize_fixed_steps);
    StepOutcome out{mu != 0.0, y};
    if (mu != 0.0) {
        const Complex ax = c.steering.dot(x);
        tally_dot(ops, m);
        const CVector px = x - (ax / c.steering.squaredNorm()) * c.steering;
        tally_mul(ops, 1);
        tally_axpy(ops, m);
        weights.w -= (mu * std::conj(y)) * px;
        tally_mul(ops, 1);
        tally_axpy(ops, m);
    }
    return out;
}

StepOutcome fr_sm_sg_step(FullRankWeights& weights, BoundState& bound, const CVector& x, const GainConstraint& c,
                          const SgConfig& cfg, OpCounter* ops) {
    const auto m = static_cast<std::uint64_t>(x.size());
    const Complex y = weights.w.dot(x);
    tally_dot(ops, m);
    StepOutcome out{false, y};
    if (violates_bound(y, bound) && gate_open(y, bound.delta)) {
        const Projection p = project_input(x, c.steering, c.steering.squaredNorm(), cfg.projector_normalized, ops);
        if (!(p.xpx > 0.0)) {
            throw NumericError("bound unreachable by the weight update: x lies in span{a}");
        }
        const double mu = (1.0 - bound.delta / std::abs(y)) / p.xpx;
        tally_mul(ops, 3);
        tally_add(ops, 1);
        weights.w -= (mu * std::conj(y)) * p.px;
        tally_mul(ops, 1);
        tally_axpy(ops, m);
        out.updated = true;
        bound.record_update();
    }
    bound_update(bound, weights.w);
    tally_bound(ops, m, 0);
    return out;
}

}  // namespace jiosm
