#pragma once

// Independent reference computations for the unit and acceptance tests.
// Everything here is written without calling the library's numerics.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;

inline CVector random_vector(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    CVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v(i) = Complex(g(rng), g(rng));
    }
    return v;
}

inline CMatrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> g(0.0, 1.0);
    CMatrix M(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            M(i, j) = Complex(g(rng), g(rng));
        }
    }
    return M;
}

/// B B^H + shift I
inline CMatrix random_hpd(std::mt19937_64& rng, Eigen::Index n, double shift = 0.5) {
    const CMatrix B = random_matrix(rng, n, n);
    return B * B.adjoint() + shift * CMatrix::Identity(n, n);
}

/// Element p: exp(-2πj p d cos θ), written out from the definition.
inline CVector steering(int m, double spacing, double doa_deg) {
    CVector a(m);
    const double c = std::cos(doa_deg * kPi / 180.0);
    for (int p = 0; p < m; ++p) {
        const double phase = -2.0 * kPi * p * spacing * c;
        a(p) = Complex(std::cos(phase), std::sin(phase));
    }
    return a;
}

/// T^H x with explicit loops.
inline CVector adjoint_times(const CMatrix& T, const CVector& x) {
    CVector out = CVector::Zero(T.cols());
    for (Eigen::Index j = 0; j < T.cols(); ++j) {
        Complex acc{};
        for (Eigen::Index p = 0; p < T.rows(); ++p) {
            acc += std::conj(T(p, j)) * x(p);
        }
        out(j) = acc;
    }
    return out;
}

/// Σ conj(u_i) v_i with explicit loop.
inline Complex inner(const CVector& u, const CVector& v) {
    Complex acc{};
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        acc += std::conj(u(i)) * v(i);
    }
    return acc;
}

/// Dense inverse by full-pivot LU (the library uses Cholesky / recursions).
inline CMatrix dense_inverse(const CMatrix& A) { return A.fullPivLu().inverse(); }

/// γ R⁻¹ a / (a^H R⁻¹ a) through an explicit LU inverse.
inline CVector mvdr(const CMatrix& R, const CVector& a, double gain = 1.0) {
    const CVector Ria = dense_inverse(R) * a;
    return gain * Ria / inner(a, Ria).real();
}

/// Smallest eigenvalue of the Hermitian part, from a complex Schur-free
/// route: eigenvalues of the real 2n×2n embedding [[Re, -Im], [Im, Re]].
inline double min_eig_hermitian_part(const CMatrix& H) {
    const CMatrix S = 0.5 * (H + H.adjoint());
    const Eigen::Index n = S.rows();
    Eigen::MatrixXd E(2 * n, 2 * n);
    E << S.real(), -S.imag(), S.imag(), S.real();
    Eigen::EigenSolver<Eigen::MatrixXd> es(E, false);
    double lo = INFINITY;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        lo = std::min(lo, es.eigenvalues()(i).real());
    }
    return lo;
}

/// 10 log10( p |w^H a|² / (w^H R_in w) )
inline double sinr_db(const CVector& w, const CVector& a, double p, const CMatrix& R_in) {
    const double s = p * std::norm(inner(w, a));
    const double n = inner(w, R_in * w).real();
    return 10.0 * std::log10(s / n);
}

/// Complexity table rows evaluated independently in exact rational
/// arithmetic; one entry per (tag, additions, multiplications).
struct ComplexityRow {
    const char* tag;
    long long additions;
    long long multiplications;
};

/// (m, r, N, τ) = (64, 5, 1000, 0.15)
inline const std::vector<ComplexityRow>& complexity_64_5_1000_015() {
    static const std::vector<ComplexityRow> rows{
        {"FR-SG", 191000, 257000},         {"FR-SM-SG", 156800, 171850},
        {"FR-RLS", 16319000, 20799000},    {"FR-SM-RLS", 2585450, 3262900},
        {"MSWF-SG", 20872000, 21147000},   {"MSWF-RLS", 20948000, 25361000},
        {"AVF", 102645000, 136256000},     {"JIO-SG", 1351000, 1382000},
        {"JIO-SM-SG", 804100, 884250},     {"JIO-RLS", 17039000, 21802000},
        {"JIO-SM-RLS", 3165550, 3955200},
    };
    return rows;
}

/// (m, r, N, τ) = (32, 4, 500, 1.0)
inline const std::vector<ComplexityRow>& complexity_32_4_500_1() {
    static const std::vector<ComplexityRow> rows{
        {"FR-SG", 47500, 64500},         {"FR-SM-SG", 80000, 100000},   {"FR-RLS", 2031500, 2639500},
        {"FR-SM-RLS", 2079500, 2691500}, {"MSWF-SG", 2131000, 2187000}, {"MSWF-RLS", 2153500, 2736000},
        {"AVF", 10795500, 14560000},     {"JIO-SG", 274500, 287500},    {"JIO-SM-SG", 354000, 392000},
        {"JIO-RLS", 2183500, 2856000},   {"JIO-SM-RLS", 2275500, 2972000},
    };
    return rows;
}

}  // namespace oracle
