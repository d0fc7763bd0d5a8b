#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "jiosm/array_model.hpp"
#include "jiosm/lcmv.hpp"
#include "jiosm/types.hpp"

namespace jiosm {

struct HessianOptions {
    /// Exhaustive BPSK enumeration up to this many users; sampling beyond.
    int max_exhaustive_users = 10;
    std::size_t samples = 4096;
    std::uint64_t seed = 1;
    double psd_tolerance = 1e-9;
};

struct HessianReport {
    CMatrix H01;       // E[H01]
    CMatrix H02;       // E[H02]
    CMatrix H03;       // E[H03]
    CMatrix H0;        // E[H01 + H02] + 2λ Re[H01 + H02 + H03]
    CMatrix H0_prime;  // E[H02] + 2λ Re[H02 + H03]
    double min_eigenvalue = 0.0;  // of the Hermitian part of H0_prime
    bool is_psd = false;
    bool exhaustive = true;
    std::size_t patterns = 0;     // symbol vectors averaged
};

/// 2r×2r block matrix [[0, 0], [diag(s), 0]].
CMatrix signal_block(Complex symbol, int rank);

/// [w̄*; T_r^T a*]
CVector parameter_vector(const ReducedRankState& state, const CVector& steering);

/// Hessian of the bounded-output cost with respect to the SOI parameter
/// vector, noise-free. Symbols are B_k b_k with b_k BPSK; the SOI is the
/// scenario's is_soi source. Re[X] is taken as (X + X^H)/2.
HessianReport hessian_condition(const UlaConfig& cfg, const ScenarioInstant& scene, const ReducedRankState& state,
                                double lambda, const HessianOptions& opts = {});

}  // namespace jiosm
