#pragma once

#include <cstdint>

namespace jiosm {

/// Tally of complex additions and multiplications performed by an
/// instrumented algorithm step. Divisions count as multiplications and
/// subtractions as additions.
struct OpCounter {
    std::uint64_t additions = 0;
    std::uint64_t multiplications = 0;

    void add(std::uint64_t n) { additions += n; }
    void mul(std::uint64_t n) { multiplications += n; }

    // Common kernels, n = vector length.
    void dot(std::uint64_t n) { mul(n); add(n - 1); }
    void axpy(std::uint64_t n) { mul(n); add(n); }
    void scale(std::uint64_t n) { mul(n); }
    void matvec(std::uint64_t rows, std::uint64_t cols) { mul(rows * cols); add(rows * (cols - 1)); }
    void rank_one_update(std::uint64_t rows, std::uint64_t cols) { mul(rows * cols); add(rows * cols); }
};

inline void tally_dot(OpCounter* c, std::uint64_t n) { if (c) c->dot(n); }
inline void tally_axpy(OpCounter* c, std::uint64_t n) { if (c) c->axpy(n); }
inline void tally_scale(OpCounter* c, std::uint64_t n) { if (c) c->scale(n); }
inline void tally_matvec(OpCounter* c, std::uint64_t rows, std::uint64_t cols) { if (c) c->matvec(rows, cols); }
inline void tally_rank_one(OpCounter* c, std::uint64_t rows, std::uint64_t cols) { if (c) c->rank_one_update(rows, cols); }
inline void tally_mul(OpCounter* c, std::uint64_t n) { if (c) c->mul(n); }
inline void tally_add(OpCounter* c, std::uint64_t n) { if (c) c->add(n); }

}  // namespace jiosm
