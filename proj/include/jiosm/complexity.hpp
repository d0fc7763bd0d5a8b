#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace jiosm {

struct ComplexityCount {
    double additions = 0.0;
    double multiplications = 0.0;
};

/// Every row of the complexity table, in table order:
/// FR-SG, FR-SM-SG, FR-RLS, FR-SM-RLS, MSWF-SG, MSWF-RLS, AVF,
/// JIO-SG, JIO-SM-SG, JIO-RLS, JIO-SM-RLS.
const std::vector<std::string>& complexity_tags();

/// Closed-form additions and multiplications for N snapshots.
/// τ is the update rate (used only by the set-membership rows).
/// Throws std::invalid_argument for an unknown tag or m, r, N < 1, τ ∉ (0, 1].
ComplexityCount complexity_count(std::string_view tag, int m, int r, long long N, double tau);

}  // namespace jiosm
