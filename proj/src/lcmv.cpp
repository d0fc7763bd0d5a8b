#include "jiosm/lcmv.hpp"

#include <sstream>
#include <stdexcept>

#include "jiosm/errors.hpp"

namespace jiosm {

namespace {

CVector constrained_solve(const CMatrix& R, const CVector& a, double gain) {
    if (R.rows() != R.cols() || R.rows() != a.size()) {
        throw std::invalid_argument("covariance and steering dimensions disagree");
    }
    Eigen::LLT<CMatrix> llt(R);
    if (llt.info() != Eigen::Success) {
        Eigen::SelfAdjointEigenSolver<CMatrix> eig(R, Eigen::EigenvaluesOnly);
        const auto& ev = eig.eigenvalues();
        std::ostringstream msg;
        msg << "covariance is not positive definite (eigenvalue range [" << ev.minCoeff() << ", "
            << ev.maxCoeff() << "], condition number " << ev.maxCoeff() / std::abs(ev.minCoeff()) << ")";
        throw NumericError(msg.str());
    }
    const CVector Ria = llt.solve(a);
    const double denom = a.dot(Ria).real();
    if (!(denom > 0.0)) {
        throw NumericError("degenerate constraint: a^H R^-1 a is not positive");
    }
    return (gain / denom) * Ria;
}

}  // namespace

void GainConstraint::validate() const {
    if (steering.size() == 0 || steering.squaredNorm() == 0.0) {
        throw std::invalid_argument("steering vector must be nonzero");
    }
    if (gain == 0.0) {
        throw std::invalid_argument("constraint gain must be nonzero");
    }
}

ReducedRankState ReducedRankState::initial(const GainConstraint& c, int rank, TransformInit init) {
    c.validate();
    const auto m = c.steering.size();
    if (rank < 1 || rank > m) {
        throw std::invalid_argument("rank must satisfy 1 <= r <= m");
    }
    ReducedRankState s;
    if (init == TransformInit::Identity) {
        s.transform = CMatrix::Identity(m, rank);
    } else {
        s.transform = CMatrix::Zero(m, rank);
        for (Eigen::Index p = 0; p < m; ++p) {
            s.transform(p, p * rank / m) = c.steering(p);
        }
    }
    const CVector a_bar = s.transform.adjoint() * c.steering;
    s.weights = (c.gain / a_bar.squaredNorm()) * a_bar;
    return s;
}

CVector reduce(const ReducedRankState& state, const CVector& x) {
    if (state.transform.rows() != x.size()) {
        throw std::invalid_argument("snapshot length does not match transformation matrix");
    }
    return state.transform.adjoint() * x;
}

Complex array_output(const ReducedRankState& state, const CVector& x) {
    if (state.weights.size() != state.transform.cols()) {
        throw std::invalid_argument("reduced-rank weights do not match transformation rank");
    }
    return state.weights.dot(reduce(state, x));
}

double constraint_residual(const CVector& effective_weights, const GainConstraint& c) {
    return std::abs(effective_weights.dot(c.steering) - c.gain) / std::abs(c.gain);
}

FullRankWeights optimal_full_rank(const CMatrix& R, const GainConstraint& c) {
    c.validate();
    return FullRankWeights{constrained_solve(R, c.steering, c.gain)};
}

CVector optimal_reduced_rank(const CMatrix& R_bar, const CVector& a_bar, double gain) {
    if (a_bar.squaredNorm() == 0.0) {
        throw std::invalid_argument("reduced steering vector is zero");
    }
    return constrained_solve(R_bar, a_bar, gain);
}

}  // namespace jiosm
