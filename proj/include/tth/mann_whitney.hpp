#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace tth {

enum class Alternative { less, greater, two_sided };
enum class UMethod { automatic, exact, normal };

std::string_view to_string(Alternative alt) noexcept;
std::string_view to_string(UMethod method) noexcept;

struct UTestResult {
    double u = 0;  // U statistic of the first sample
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    double p_value = 1;
    UMethod method = UMethod::exact;  // exact or normal, never automatic
};

/// Largest pooled sample size for which `automatic` picks the exact distribution.
inline constexpr std::size_t kExactLimit = 20;

/// Rank-sum test. Ties get midranks. `less` asks whether `x` tends to be smaller than
/// `y`. The exact p-value enumerates all splits of the pooled midranks; the normal
/// approximation is tie- and continuity-corrected; two-sided p is twice the smaller
/// one-sided p, capped at 1. Empty samples raise argument errors.
UTestResult mann_whitney_u(std::span<const double> x, std::span<const double> y,
                           Alternative alternative = Alternative::two_sided, UMethod method = UMethod::automatic);

}  // namespace tth
