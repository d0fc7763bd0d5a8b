#include "jiosm/hessian.hpp"

#include <random>
#include <stdexcept>

namespace jiosm {

namespace {

CMatrix hermitian_part(const CMatrix& X) { return 0.5 * (X + X.adjoint()); }

struct Terms {
    CMatrix H01, H02, H03;
};

// One symbol realization; `symbols` already includes the amplitudes.
Terms terms_for(const std::vector<CVector>& f, const std::vector<Complex>& symbols, std::size_t soi, int rank) {
    const auto n = 2 * rank;
    Terms t{CMatrix::Zero(n, n), CMatrix::Zero(n, n), CMatrix::Zero(n, n)};
    for (std::size_t k = 0; k < f.size(); ++k) {
        const CMatrix S = signal_block(symbols[k], rank);
        const CVector& fk = f[k];
        const Complex c = fk.dot(S * fk);                // f^H S f
        const Complex c_adj = fk.dot(S.adjoint() * fk);  // f^H S^H f
        const CMatrix second = c_adj * S + c * S.adjoint();
        if (k == soi) {
            const CVector Sf = S * fk;
            const CVector SHf = S.adjoint() * fk;
            t.H01 = Sf * Sf.adjoint() + SHf * SHf.adjoint();
            t.H02 = second;
        } else {
            t.H03 += second;
        }
    }
    return t;
}

}  // namespace

CMatrix signal_block(Complex symbol, int rank) {
    CMatrix S = CMatrix::Zero(2 * rank, 2 * rank);
    S.bottomLeftCorner(rank, rank) = symbol * CMatrix::Identity(rank, rank);
    return S;
}

CVector parameter_vector(const ReducedRankState& state, const CVector& steering) {
    const auto r = state.rank();
    CVector f(2 * r);
    f.head(r) = state.weights.conjugate();
    f.tail(r) = state.transform.transpose() * steering.conjugate();
    return f;
}

HessianReport hessian_condition(const UlaConfig& cfg, const ScenarioInstant& scene, const ReducedRankState& state,
                                double lambda, const HessianOptions& opts) {
    const int r = state.rank();
    const std::size_t q = scene.sources.size();
    if (q == 0) {
        throw std::invalid_argument("Hessian diagnostic needs at least the signal of interest");
    }
    std::vector<CVector> f;
    std::size_t soi = 0;
    for (std::size_t k = 0; k < q; ++k) {
        f.push_back(parameter_vector(state, steering_vector(cfg, scene.sources[k].doa_deg)));
        if (scene.sources[k].is_soi) {
            soi = k;
        }
    }

    HessianReport rep;
    const auto n = 2 * r;
    rep.H01 = CMatrix::Zero(n, n);
    rep.H02 = CMatrix::Zero(n, n);
    rep.H03 = CMatrix::Zero(n, n);

    std::vector<Complex> symbols(q);
    auto accumulate = [&](auto&& bit) {
        for (std::size_t k = 0; k < q; ++k) {
            symbols[k] = scene.sources[k].amplitude * (bit(k) ? -1.0 : 1.0);
        }
        const Terms t = terms_for(f, symbols, soi, r);
        rep.H01 += t.H01;
        rep.H02 += t.H02;
        rep.H03 += t.H03;
        ++rep.patterns;
    };

    if (static_cast<int>(q) <= opts.max_exhaustive_users) {
        rep.exhaustive = true;
        const std::uint64_t total = std::uint64_t{1} << q;
        for (std::uint64_t mask = 0; mask < total; ++mask) {
            accumulate([mask](std::size_t k) { return ((mask >> k) & 1U) != 0; });
        }
    } else {
        rep.exhaustive = false;
        std::mt19937_64 rng(opts.seed);
        std::bernoulli_distribution coin(0.5);
        for (std::size_t s = 0; s < opts.samples; ++s) {
            std::vector<bool> bits(q);
            for (std::size_t k = 0; k < q; ++k) {
                bits[k] = coin(rng);
            }
            accumulate([&bits](std::size_t k) { return static_cast<bool>(bits[k]); });
        }
    }
    const double inv = 1.0 / static_cast<double>(rep.patterns);
    rep.H01 *= inv;
    rep.H02 *= inv;
    rep.H03 *= inv;

    rep.H0 = rep.H01 + rep.H02 + 2.0 * lambda * hermitian_part(rep.H01 + rep.H02 + rep.H03);
    rep.H0_prime = rep.H02 + 2.0 * lambda * hermitian_part(rep.H02 + rep.H03);

    Eigen::SelfAdjointEigenSolver<CMatrix> eig(hermitian_part(rep.H0_prime), Eigen::EigenvaluesOnly);
    rep.min_eigenvalue = eig.eigenvalues().minCoeff();
    const double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
    rep.is_psd = rep.min_eigenvalue >= -opts.psd_tolerance * scale;
    return rep;
}

}  // namespace jiosm
