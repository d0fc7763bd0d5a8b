#include "jiosm/stability.hpp"

#include <algorithm>
#include <cmath>

#include "jiosm/set_membership.hpp"

namespace jiosm {

namespace {

CMatrix transition(const CVector& v, const CVector& steering, double f, double scale) {
    const auto n = v.size();
    const CVector pv = v - (steering.dot(v) / steering.squaredNorm()) * steering;
    const double vpv = v.dot(pv).real();
    CMatrix U = CMatrix::Identity(n, n);
    if (f != 0.0 && vpv > 0.0) {
        U -= (f / (scale * vpv)) * (pv * v.adjoint());
    }
    return U;
}

double largest_singular(const CMatrix& M) {
    Eigen::JacobiSVD<CMatrix> svd(M);
    return svd.singularValues()(0);
}

}  // namespace

StabilityReport stability_matrix(const CVector& x, const ReducedRankState& state, double delta,
                                 const GainConstraint& c) {
    const CVector x_bar = state.transform.adjoint() * x;
    const CVector a_bar = state.transform.adjoint() * c.steering;
    const Complex y = state.weights.dot(x_bar);

    StabilityReport out;
    out.gate_open = exceeds_bound(y, delta) && std::abs(y) > 0.0;
    const double f = out.gate_open ? 1.0 - delta / std::abs(y) : 0.0;
    out.U1 = transition(x, c.steering, f, state.weights.squaredNorm());
    out.U2 = transition(x_bar, a_bar, f, 1.0);

    out.radius = std::max(largest_singular(out.U1), largest_singular(out.U2));
    const auto n1 = out.U1.rows();
    const auto n2 = out.U2.rows();
    CMatrix U = CMatrix::Zero(n1 + n2, n1 + n2);
    U.topLeftCorner(n1, n1) = out.U1;
    U.bottomRightCorner(n2, n2) = out.U2;
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(U.adjoint() * U, Eigen::EigenvaluesOnly);
    out.max_gram_eigenvalue = eig.eigenvalues().maxCoeff();
    out.contractive = out.max_gram_eigenvalue <= 1.0 + 1e-6;
    return out;
}

}  // namespace jiosm
