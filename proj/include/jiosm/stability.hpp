#pragma once

#include "jiosm/lcmv.hpp"
#include "jiosm/types.hpp"

namespace jiosm {

struct StabilityReport {
    CMatrix U1;       // m×m, acts on the transformation error
    CMatrix U2;       // r×r, acts on the reduced weight error
    double radius = 0.0;             // largest singular value of diag(U1, U2)
    double max_gram_eigenvalue = 0.0;  // largest eigenvalue of U^H U
    bool contractive = false;        // max_gram_eigenvalue ≤ 1 + 1e-6
    bool gate_open = false;
};

/// Mean-error transition of the set-membership SG recursion for one snapshot:
///     U1 = I - f P x x^H / (‖w̄‖² x^H P x),  U2 = I - f P̄ x̄ x̄^H / (x̄^H P̄ x̄)
/// with f = 1 - δ/|y| when |y|² > δ² and 0 otherwise. P, P̄ are the
/// normalized projectors orthogonal to a and ā = T_r^H a.
StabilityReport stability_matrix(const CVector& x, const ReducedRankState& state, double delta,
                                 const GainConstraint& c);

}  // namespace jiosm
