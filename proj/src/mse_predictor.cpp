#include "jiosm/mse_predictor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "jiosm/errors.hpp"
#include "jiosm/lcmv.hpp"
#include "jiosm/metrics.hpp"
#include "jiosm/parallel.hpp"
#include "jiosm/set_membership.hpp"

namespace jiosm {

namespace {

// Fixed block count keeps the reduction order independent of the worker count.
constexpr std::size_t kBlocks = 32;

struct BlockSums {
    CMatrix e_sum;                 // m × N
    std::vector<double> e_norm2;   // Σ ‖e‖²
    std::vector<double> e_weighted;  // Σ e^H R e
    std::vector<double> p_e;
};

struct Shared {
    CMatrix A;
    CVector a;
    CVector w_opt;
    CMatrix R;
    ScenarioInstant scene;
    double noise_std;
};

void run_member(const Shared& sh, const MsePredictorConfig& pc, std::size_t member, BlockSums& acc) {
    RandomStream rng = make_stream(pc.seed, member);
    const GainConstraint c{sh.a, pc.gain};
    ReducedRankState st = ReducedRankState::initial(c, pc.rank, pc.init);
    if (pc.start_at_optimum) {
        st.transform = sh.w_opt * (st.weights.adjoint() / st.weights.squaredNorm());
    }
    CVector e = st.effective_weights() - sh.w_opt;
    double delta = std::sqrt(pc.alpha * st.effective_weights().squaredNorm() * sh.noise_std * sh.noise_std);
    const double a_norm2 = sh.a.squaredNorm();

    for (std::size_t i = 0; i < pc.horizon; ++i) {
        acc.e_sum.col(static_cast<Eigen::Index>(i)) += e;
        acc.e_norm2[i] += e.squaredNorm();
        acc.e_weighted[i] += e.dot(sh.R * e).real();

        const double pe = pc.fixed_update_probability.value_or(update_probability(delta, sh.noise_std, pc.p_min));
        acc.p_e[i] += pe;

        const CVector x = generate_snapshot(sh.A, sh.scene, rng).received;
        const CVector x_bar = st.transform.adjoint() * x;
        const CVector a_bar = st.transform.adjoint() * sh.a;
        const Complex y = st.weights.dot(x_bar);
        const double f = (exceeds_bound(y, delta) && std::abs(y) > 0.0) ? 1.0 - delta / std::abs(y) : 0.0;

        if (f != 0.0 && pe != 0.0) {
            const Complex ax = sh.a.dot(x);
            const CVector px_norm = x - (ax / a_norm2) * sh.a;
            const CVector px_gr = pc.projector_normalized ? px_norm : CVector(x - ax * sh.a);
            const double xpx = x.dot(px_gr).real();
            const double xpx_norm = x.dot(px_norm).real();
            const CVector g = x_bar - (a_bar.dot(x_bar) / a_bar.squaredNorm()) * a_bar;
            const double xg = x_bar.dot(g).real();
            const double wn = st.weights.squaredNorm();
            if (!(xpx > 0.0) || !(xg > 0.0) || !(xpx_norm > 0.0)) {
                throw NumericError("degenerate snapshot in the MSE predictor: input lies in the constraint span");
            }
            const CVector Tg = st.transform * g;
            const Complex wg = st.weights.dot(g);
            const Complex ys = std::conj(y);

            // V v = P_e f (x^H v) [G_r x / (x^H P x) + T_r ḡ / (x̄^H ḡ)]
            const CVector v_dir = pe * f * (px_gr / xpx + Tg / xg);
            const CVector w = e + sh.w_opt;
            const Complex step_scalar = pe * pe * ys * ys * f * f / (wn * xpx * xg);
            e = e - x.dot(w) * v_dir + step_scalar * (px_gr * wg);

            const double mu_T = f / (wn * xpx_norm);
            const double mu_w = f / xg;
            const CVector w_prev = st.weights;
            st.transform -= (pe * mu_T * ys) * (px_norm * w_prev.adjoint());
            st.weights -= (pe * mu_w * ys) * g;
        }
        delta = pc.beta * delta +
                (1.0 - pc.beta) * std::sqrt(pc.alpha * st.effective_weights().squaredNorm() * sh.noise_std *
                                            sh.noise_std);
    }
}

}  // namespace

MsePrediction predict_mse_trajectory(const UlaConfig& cfg, const ScenarioInstant& scene,
                                     const MsePredictorConfig& pc) {
    scene.validate();
    if (pc.ensemble < 2) {
        throw std::invalid_argument("MSE prediction needs an ensemble of at least two members");
    }
    if (pc.horizon == 0) {
        throw std::invalid_argument("MSE prediction horizon must be positive");
    }
    if (!(pc.alpha > 1.0) || !(pc.beta > 0.0 && pc.beta < 1.0)) {
        throw std::invalid_argument("bound parameters out of range");
    }

    Shared sh;
    sh.scene = scene;
    sh.A = steering_matrix(cfg, scene.sources);
    const SourceSpec& soi = scene.soi();
    sh.a = steering_vector(cfg, soi.doa_deg);
    sh.R = true_covariance(cfg, scene);
    sh.w_opt = optimal_full_rank(sh.R, GainConstraint{sh.a, pc.gain}).w;
    sh.noise_std = std::sqrt(scene.noise_power);

    const auto m = sh.a.size();
    const auto N = static_cast<Eigen::Index>(pc.horizon);
    std::vector<BlockSums> blocks(kBlocks);
    for (auto& b : blocks) {
        b.e_sum = CMatrix::Zero(m, N);
        b.e_norm2.assign(pc.horizon, 0.0);
        b.e_weighted.assign(pc.horizon, 0.0);
        b.p_e.assign(pc.horizon, 0.0);
    }
    parallel_for(
        kBlocks,
        [&](std::size_t blk) {
            for (std::size_t member = blk; member < pc.ensemble; member += kBlocks) {
                run_member(sh, pc, member, blocks[blk]);
            }
        },
        pc.workers == 0 ? default_workers() : pc.workers);

    MsePrediction out;
    out.j_min = mmse(sh.w_opt, sh.R, sh.a, soi.amplitude * soi.amplitude);
    out.sigma_x2 = 0.0;
    for (const auto& s : scene.sources) {
        out.sigma_x2 += s.amplitude * s.amplitude;
    }

    CMatrix e_sum = CMatrix::Zero(m, N);
    std::vector<double> n2(pc.horizon, 0.0), wr(pc.horizon, 0.0), pe(pc.horizon, 0.0);
    for (const auto& b : blocks) {
        e_sum += b.e_sum;
        for (std::size_t i = 0; i < pc.horizon; ++i) {
            n2[i] += b.e_norm2[i];
            wr[i] += b.e_weighted[i];
            pe[i] += b.p_e[i];
        }
    }
    const double M = static_cast<double>(pc.ensemble);
    out.j_mse.resize(pc.horizon);
    out.emse.resize(pc.horizon);
    out.p_e.resize(pc.horizon);
    for (std::size_t i = 0; i < pc.horizon; ++i) {
        double emse;
        if (pc.emse == EmseForm::TraceCovariance) {
            const double mean_norm2 = (e_sum.col(static_cast<Eigen::Index>(i)) / M).squaredNorm();
            const double trace_cov = std::max(0.0, n2[i] / M - mean_norm2);
            emse = out.sigma_x2 * trace_cov;
        } else {
            emse = wr[i] / M;
        }
        out.emse[i] = emse;
        out.j_mse[i] = out.j_min + emse;
        out.p_e[i] = pe[i] / M;
    }
    return out;
}

}  // namespace jiosm
