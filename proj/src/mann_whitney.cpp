#include "tth/mann_whitney.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "tth/error.hpp"

namespace tth {

std::string_view to_string(Alternative alt) noexcept {
    switch (alt) {
        case Alternative::less: return "less";
        case Alternative::greater: return "greater";
        case Alternative::two_sided: return "two-sided";
    }
    return "?";
}

std::string_view to_string(UMethod method) noexcept {
    switch (method) {
        case UMethod::automatic: return "auto";
        case UMethod::exact: return "exact";
        case UMethod::normal: return "normal";
    }
    return "?";
}

namespace {

// Doubled midranks (integers) of the pooled sample, first x then y.
std::vector<long> doubled_midranks(std::span<const double> x, std::span<const double> y, double* tie_term) {
    const std::size_t n = x.size() + y.size();
    std::vector<std::pair<double, std::size_t>> pooled;
    pooled.reserve(n);
    for (std::size_t i = 0; i < x.size(); ++i) pooled.emplace_back(x[i], i);
    for (std::size_t i = 0; i < y.size(); ++i) pooled.emplace_back(y[i], x.size() + i);
    std::sort(pooled.begin(), pooled.end());
    std::vector<long> ranks(n);
    *tie_term = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && pooled[j].first == pooled[i].first) ++j;
        // positions i..j-1 hold ranks i+1..j; doubled midrank = i + 1 + j
        long twice = static_cast<long>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) ranks[pooled[k].second] = twice;
        double t = static_cast<double>(j - i);
        *tie_term += t * t * t - t;
        i = j;
    }
    return ranks;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

UTestResult mann_whitney_u(std::span<const double> x, std::span<const double> y, Alternative alternative,
                           UMethod method) {
    if (x.empty() || y.empty()) {
        fail(ErrorKind::argument, "Mann-Whitney U needs two non-empty samples");
    }
    const std::size_t n1 = x.size();
    const std::size_t n2 = y.size();
    const std::size_t n = n1 + n2;
    double tie_term = 0;
    std::vector<long> ranks = doubled_midranks(x, y, &tie_term);
    long twice_rx = 0;
    for (std::size_t i = 0; i < n1; ++i) twice_rx += ranks[i];
    const double base = static_cast<double>(n1) * static_cast<double>(n1 + 1) / 2.0;

    UTestResult result;
    result.n1 = n1;
    result.n2 = n2;
    result.u = static_cast<double>(twice_rx) / 2.0 - base;
    result.method = method == UMethod::automatic ? (n <= kExactLimit ? UMethod::exact : UMethod::normal) : method;

    double p_less = 1;
    double p_greater = 1;
    if (result.method == UMethod::exact) {
        if (n > 60) {
            fail(ErrorKind::argument, "exact Mann-Whitney p-values are limited to 60 pooled observations");
        }
        long max_sum = 0;
        for (long r : ranks) max_sum += r;
        // ways[k][s]: subsets of size k with doubled rank sum s
        std::vector<std::vector<double>> ways(n1 + 1, std::vector<double>(static_cast<std::size_t>(max_sum) + 1, 0.0));
        ways[0][0] = 1;
        for (std::size_t i = 0; i < n; ++i) {
            const auto r = static_cast<std::size_t>(ranks[i]);
            for (std::size_t k = std::min(i + 1, n1); k >= 1; --k) {
                auto& dst = ways[k];
                const auto& src = ways[k - 1];
                for (std::size_t s = dst.size(); s-- > r;) dst[s] += src[s - r];
            }
        }
        double total = 0;
        double le = 0;
        double ge = 0;
        for (std::size_t s = 0; s < ways[n1].size(); ++s) {
            double w = ways[n1][s];
            total += w;
            if (static_cast<long>(s) <= twice_rx) le += w;
            if (static_cast<long>(s) >= twice_rx) ge += w;
        }
        p_less = le / total;
        p_greater = ge / total;
    } else {
        const double mu = static_cast<double>(n1) * static_cast<double>(n2) / 2.0;
        const double dn = static_cast<double>(n);
        const double var = static_cast<double>(n1) * static_cast<double>(n2) / 12.0 *
                           ((dn + 1.0) - tie_term / (dn * (dn - 1.0)));
        if (var > 0) {
            const double sigma = std::sqrt(var);
            p_less = normal_cdf((result.u + 0.5 - mu) / sigma);
            p_greater = 1.0 - normal_cdf((result.u - 0.5 - mu) / sigma);
        }
    }
    switch (alternative) {
        case Alternative::less: result.p_value = p_less; break;
        case Alternative::greater: result.p_value = p_greater; break;
        case Alternative::two_sided: result.p_value = std::min(1.0, 2.0 * std::min(p_less, p_greater)); break;
    }
    result.p_value = std::clamp(result.p_value, 0.0, 1.0);
    return result;
}

}  // namespace tth
