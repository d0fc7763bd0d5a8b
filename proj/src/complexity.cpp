#include "jiosm/complexity.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace jiosm {

namespace {

std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char ch) { return std::toupper(ch); });
    return out;
}

}  // namespace

const std::vector<std::string>& complexity_tags() {
    static const std::vector<std::string> tags{"FR-SG",   "FR-SM-SG", "FR-RLS",    "FR-SM-RLS",
                                               "MSWF-SG", "MSWF-RLS", "AVF",       "JIO-SG",
                                               "JIO-SM-SG", "JIO-RLS", "JIO-SM-RLS"};
    return tags;
}

ComplexityCount complexity_count(std::string_view tag, int m_in, int r_in, long long N_in, double tau) {
    if (m_in < 1 || r_in < 1 || N_in < 1) {
        throw std::invalid_argument("complexity parameters m, r, N must be positive");
    }
    if (!(tau > 0.0 && tau <= 1.0)) {
        throw std::invalid_argument("update rate must lie in (0, 1]");
    }
    const double m = m_in;
    const double r = r_in;
    const double N = static_cast<double>(N_in);
    const double tN = tau * N;
    const std::string t = upper(tag);

    if (t == "FR-SG") {
        return {N * (3 * m - 1), N * (4 * m + 1)};
    }
    if (t == "FR-SM-SG") {
        return {2 * N * m + 3 * tN * m, N * (2 * m + 5) + tN * (4 * m + 3)};
    }
    if (t == "FR-RLS") {
        return {N * (4 * m * m - m - 1), N * (5 * m * m + 5 * m - 1)};
    }
    if (t == "FR-SM-RLS") {
        return {2 * N * m + tN * (4 * m * m - 1), N * (2 * m + 5) + tN * (5 * m * m + 6 * m + 2)};
    }
    if (t == "MSWF-SG") {
        return {N * (r * m * m + (r + 1) * m + 2 * r - 2), N * (r * m * m + 2 * r * m + 5 * r + 2)};
    }
    if (t == "MSWF-RLS") {
        return {N * (r * m * m + (r + 1) * m + 4 * r * r - 3 * r - 1),
                N * ((r + 1) * m * m + 2 * r * m + 5 * r * r + 4 * r)};
    }
    if (t == "AVF") {
        return {N * ((4 * r + 5) * m * m + (r - 1) * m - 2 * r - 1), N * ((5 * r + 8) * m * m + (3 * r + 2) * m)};
    }
    if (t == "JIO-SG") {
        return {N * (4 * r * m + m + 2 * r - 3), N * (4 * r * m + m + 7 * r + 3)};
    }
    if (t == "JIO-SM-SG") {
        return {2 * N * r * m + tN * (3 * r * m + 2 * m + 2 * r - 4),
                N * (2 * r * m + m + r + 5) + tN * (3 * r * m + 2 * m + 8 * r + 7)};
    }
    if (t == "JIO-RLS") {
        return {N * (4 * m * m + (2 * r - 1) * m + 4 * r * r - 4 * r - 1),
                N * (5 * m * m + (3 * r + 3) * m + 6 * r * r + 4 * r)};
    }
    if (t == "JIO-SM-RLS") {
        return {2 * N * m * r + tN * (4 * m * m + r * m + m + 4 * r * r - 6 * r - 1),
                N * (2 * r * m + m + r + 5) + tN * (5 * m * m + 2 * r * m + 5 * m + 6 * r * r + 3 * r + 3)};
    }
    throw std::invalid_argument("unknown complexity tag '" + std::string(tag) + "'");
}

}  // namespace jiosm
