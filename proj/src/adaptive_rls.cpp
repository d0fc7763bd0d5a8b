#include "jiosm/adaptive_rls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "jiosm/errors.hpp"

namespace jiosm {

namespace {

constexpr double kRelativeDenominatorFloor = 1e-12;

void symmetrize(CMatrix& P) { P = (0.5 * (P + P.adjoint())).eval(); }

bool rls_gate(Complex y, BoundState& bound) { return violates_bound(y, bound); }

CVector constrained_direction(const CVector& Pa, const CVector& a, double gain, OpCounter* ops) {
    const auto n = static_cast<std::uint64_t>(a.size());
    const double denom = a.dot(Pa).real();
    tally_dot(ops, n);
    if (!(denom > 0.0)) {
        throw NumericError("degenerate constraint: a^H P a is not positive");
    }
    tally_mul(ops, 1);
    tally_scale(ops, n);
    return (gain / denom) * Pa;
}

Lambda1 finish_lambda(Complex num, Complex den, const RlsConfig& cfg) {
    Lambda1 out;
    if (!(std::abs(den) > kRelativeDenominatorFloor * std::abs(num)) || !std::isfinite(std::abs(den))) {
        out.value = cfg.lambda_max;
        out.raw = std::numeric_limits<double>::quiet_NaN();
        out.fallback = true;
        return out;
    }
    out.raw = (num / den).real();
    out.value = std::clamp(out.raw, cfg.lambda_min, cfg.lambda_max);
    return out;
}

// Shared λ₁ evaluation, given P(i-1)x and P(i-1)a already formed.
Lambda1 lambda1_from_products(const CVector& Px, const CVector& Pa, double xPx, const CVector& x,
                              const CVector& a, double delta, double gain, double lambda_for_gain,
                              const RlsConfig& cfg, OpCounter* ops) {
    const auto m = static_cast<std::uint64_t>(x.size());
    // k with the provisional coefficient
    const double kden = 1.0 + lambda_for_gain * xPx;
    const CVector k = Px / kden;
    tally_mul(ops, 1 + m);
    tally_add(ops, 1);
    // P v = δ P a - γ² P x
    const CVector Pv = delta * Pa - (gain * gain) * Px;
    tally_mul(ops, 2 * m + 1);
    tally_add(ops, m);
    const Complex num = a.dot(Pv);
    const Complex den = a.dot(k) * x.dot(Pv);
    tally_dot(ops, m);
    tally_dot(ops, m);
    tally_dot(ops, m);
    tally_mul(ops, 2);

    return finish_lambda(num, den, cfg);
}

// Riccati step reusing P(i-1)x; returns k and overwrites P.
CVector riccati_in_place(CMatrix& P, const CVector& Px, double xPx, double lambda, OpCounter* ops) {
    const auto m = static_cast<std::uint64_t>(Px.size());
    const double den = 1.0 + lambda * xPx;
    tally_mul(ops, 1);
    tally_add(ops, 1);
    if (!(den > 0.0)) {
        throw NumericError("Riccati denominator is not positive: inverse covariance lost definiteness");
    }
    const CVector k = Px / den;
    tally_scale(ops, m);
    P.noalias() -= (lambda * k) * Px.adjoint();
    tally_scale(ops, m);
    tally_rank_one(ops, m, m);
    symmetrize(P);
    return k;
}

double provisional_lambda(double previous, const RlsConfig& cfg) {
    return previous > 0.0 ? previous : cfg.lambda_max;
}

template <typename Gate>
RlsStepOutcome jio_core(JioRlsState& state, const CVector& x, const GainConstraint& c, const RlsConfig& cfg,
                        double delta, Gate gate, OpCounter* ops) {
    const auto m = static_cast<std::uint64_t>(state.rr.num_elements());
    const auto r = static_cast<std::uint64_t>(state.rr.rank());
    const CVector& a = c.steering;

    const CVector x_bar0 = state.rr.transform.adjoint() * x;
    tally_matvec(ops, r, m);
    const Complex y = state.rr.weights.dot(x_bar0);
    tally_dot(ops, r);

    RlsStepOutcome out{false, y, 0.0};
    state.lambda1 = 0.0;
    if (!gate(y)) {
        return out;
    }

    const CVector Px = state.P * x;
    tally_matvec(ops, m, m);
    const double xPx = x.dot(Px).real();
    tally_dot(ops, m);

    double lam;
    if (cfg.fixed_lambda) {
        lam = *cfg.fixed_lambda;
    } else {
        const CVector Pa_prev = state.P * a;
        tally_matvec(ops, m, m);
        const Lambda1 l = lambda1_from_products(Px, Pa_prev, xPx, x, a, delta, c.gain,
                                                provisional_lambda(state.lambda1_prev, cfg), cfg, ops);
        lam = l.value;
        if (l.fallback) {
            ++state.lambda_fallbacks;
        }
    }

    riccati_in_place(state.P, Px, xPx, lam, ops);
    const CVector prev_weights = state.rr.weights;
    state.rr.transform = rls_update_transform(state.P, a, prev_weights, c.gain, ops);

    const CVector x_bar = state.rr.transform.adjoint() * x;
    const CVector a_bar = state.rr.transform.adjoint() * a;
    tally_matvec(ops, r, m);
    tally_matvec(ops, r, m);

    const CVector Pbx = state.P_bar * x_bar;
    tally_matvec(ops, r, r);
    const double xPbx = x_bar.dot(Pbx).real();
    tally_dot(ops, r);
    riccati_in_place(state.P_bar, Pbx, xPbx, lam, ops);
    state.rr.weights = rls_update_weights(state.P_bar, a_bar, c.gain, ops);

    state.lambda1 = lam;
    state.lambda1_prev = lam;
    out.updated = true;
    out.lambda1 = lam;
    return out;
}

template <typename Gate>
RlsStepOutcome fr_core(FrRlsState& state, const CVector& x, const GainConstraint& c, const RlsConfig& cfg,
                       double delta, Gate gate, OpCounter* ops) {
    const auto m = static_cast<std::uint64_t>(x.size());
    const CVector& a = c.steering;

    const Complex y = state.weights.w.dot(x);
    tally_dot(ops, m);
    RlsStepOutcome out{false, y, 0.0};
    state.lambda1 = 0.0;
    if (!gate(y)) {
        return out;
    }

    const CVector Px = state.P * x;
    tally_matvec(ops, m, m);
    const double xPx = x.dot(Px).real();
    tally_dot(ops, m);

    double lam;
    if (cfg.fixed_lambda) {
        lam = *cfg.fixed_lambda;
    } else {
        const CVector Pa_prev = state.P * a;
        tally_matvec(ops, m, m);
        const Lambda1 l = lambda1_from_products(Px, Pa_prev, xPx, x, a, delta, c.gain,
                                                provisional_lambda(state.lambda1_prev, cfg), cfg, ops);
        lam = l.value;
        if (l.fallback) {
            ++state.lambda_fallbacks;
        }
    }

    riccati_in_place(state.P, Px, xPx, lam, ops);
    const CVector Pa = state.P * a;
    tally_matvec(ops, m, m);
    state.weights.w = constrained_direction(Pa, a, c.gain, ops);

    state.lambda1 = lam;
    state.lambda1_prev = lam;
    out.updated = true;
    out.lambda1 = lam;
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

RlsConfig with_fixed_lambda(const RlsConfig& cfg) {
    RlsConfig out = cfg;
    if (!out.fixed_lambda) {
        out.fixed_lambda = cfg.lambda_max;
    }
    return out;
}

}  // namespace

void RlsConfig::validate() const {
    if (!(rho > 0.0) || !(varrho > 0.0)) {
        throw std::invalid_argument("RLS regularization must be positive");
    }
    if (!(lambda_min > 0.0 && lambda_min <= lambda_max)) {
        throw std::invalid_argument("lambda clip range must satisfy 0 < lambda_min <= lambda_max");
    }
    if (fixed_lambda && !(*fixed_lambda >= 0.0)) {
        throw std::invalid_argument("fixed lambda must be nonnegative");
    }
}

RiccatiResult riccati_update(const CMatrix& P, const CVector& x, double lambda1, OpCounter* ops) {
    if (lambda1 < 0.0) {
        throw std::invalid_argument("Riccati coefficient must be nonnegative");
    }
    const auto m = static_cast<std::uint64_t>(x.size());
    RiccatiResult out{CVector(), P};
    const CVector Px = P * x;
    tally_matvec(ops, m, m);
    const double xPx = x.dot(Px).real();
    tally_dot(ops, m);
    out.gain = riccati_in_place(out.P, Px, xPx, lambda1, ops);
    return out;
}

CMatrix rls_update_transform(const CMatrix& P, const CVector& steering, const CVector& prev_weights, double gain,
                             OpCounter* ops) {
    const double wn = prev_weights.squaredNorm();
    if (!(wn > 0.0)) {
        throw std::invalid_argument("previous reduced-rank weights are zero");
    }
    const auto m = static_cast<std::uint64_t>(steering.size());
    const auto r = static_cast<std::uint64_t>(prev_weights.size());
    const CVector Pa = P * steering;
    tally_matvec(ops, m, m);
    const CVector dir = constrained_direction(Pa, steering, gain, ops);
    tally_dot(ops, r);
    tally_mul(ops, 1);
    tally_mul(ops, m * r);
    return dir * (prev_weights.adjoint() / wn);
}

CVector rls_update_weights(const CMatrix& P_bar, const CVector& a_bar, double gain, OpCounter* ops) {
    if (a_bar.size() == 0 || a_bar.squaredNorm() == 0.0) {
        throw std::invalid_argument("reduced steering vector vanished (degenerate transformation)");
    }
    const auto r = static_cast<std::uint64_t>(a_bar.size());
    const CVector Pa = P_bar * a_bar;
    tally_matvec(ops, r, r);
    return constrained_direction(Pa, a_bar, gain, ops);
}

Lambda1 lambda1(const CMatrix& P_prev, const CVector& k, const CVector& x, const CVector& steering, double delta,
                double gain, Complex y, const RlsConfig& cfg, OpCounter* ops) {
    if (!exceeds_bound(y, delta)) {
        return {};
    }
    const auto m = static_cast<std::uint64_t>(x.size());
    const CVector Pv = P_prev * (delta * steering - (gain * gain) * x);
    tally_mul(ops, 2 * m + 1);
    tally_add(ops, m);
    tally_matvec(ops, m, m);
    const Complex num = steering.dot(Pv);
    const Complex den = steering.dot(k) * x.dot(Pv);
    tally_dot(ops, m);
    tally_dot(ops, m);
    tally_dot(ops, m);
    tally_mul(ops, 2);

    return finish_lambda(num, den, cfg);
}

JioRlsState JioRlsState::initial(const GainConstraint& c, int rank, const RlsConfig& cfg, TransformInit init) {
    cfg.validate();
    JioRlsState s;
    s.rr = ReducedRankState::initial(c, rank, init);
    const auto m = c.steering.size();
    s.P = (1.0 / cfg.rho) * CMatrix::Identity(m, m);
    s.P_bar = (1.0 / cfg.varrho) * CMatrix::Identity(rank, rank);
    return s;
}

FrRlsState FrRlsState::initial(const GainConstraint& c, const RlsConfig& cfg) {
    cfg.validate();
    c.validate();
    FrRlsState s;
    const auto m = c.steering.size();
    s.weights.w = (c.gain / c.steering.squaredNorm()) * c.steering;
    s.P = (1.0 / cfg.rho) * CMatrix::Identity(m, m);
    return s;
}

RlsStepOutcome jio_sm_rls_step(JioRlsState& state, BoundState& bound, const CVector& x, const GainConstraint& c,
                               const RlsConfig& cfg, OpCounter* ops) {
    RlsStepOutcome out =
        jio_core(state, x, c, cfg, bound.delta, [&](Complex y) { return rls_gate(y, bound); }, ops);
    if (out.updated) {
        bound.record_update();
    }
    bound_update(bound, state.rr.effective_weights());
    tally_bound(ops, state.rr.num_elements(), state.rr.rank());
    return out;
}

RlsStepOutcome jio_rls_step(JioRlsState& state, const CVector& x, const GainConstraint& c, const RlsConfig& cfg,
                            OpCounter* ops) {
    return jio_core(state, x, c, with_fixed_lambda(cfg), 0.0, [](Complex) { return true; }, ops);
}

RlsStepOutcome fr_rls_step(FrRlsState& state, const CVector& x, const GainConstraint& c, const RlsConfig& cfg,
                           OpCounter* ops) {
    return fr_core(state, x, c, with_fixed_lambda(cfg), 0.0, [](Complex) { return true; }, ops);
}

RlsStepOutcome fr_sm_rls_step(FrRlsState& state, BoundState& bound, const CVector& x, const GainConstraint& c,
                              const RlsConfig& cfg, OpCounter* ops) {
    RlsStepOutcome out = fr_core(state, x, c, cfg, bound.delta, [&](Complex y) { return rls_gate(y, bound); }, ops);
    if (out.updated) {
        bound.record_update();
    }
    bound_update(bound, state.weights.w);
    tally_bound(ops, state.weights.w.size(), 0);
    return out;
}

}  // namespace jiosm
