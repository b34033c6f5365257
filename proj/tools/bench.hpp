#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tth/tth.hpp"

namespace tth::bench {

/// Histogram with `rows` rows laid out term-major over `intervals` one-day intervals.
/// Each row holds one document with id 2k + parity, so histograms built with different
/// parities merge without overlap. Counts are drawn from [1, 5] under `seed`.
TTH synthetic_tth(std::size_t rows, std::uint64_t seed, int parity = 0, std::int64_t intervals = 96);

/// Same as above but sharing `vocabulary`, which must hold enough terms.
TTH synthetic_tth(std::size_t rows, std::uint64_t seed, int parity, std::int64_t intervals,
                  std::shared_ptr<const Vocabulary> vocabulary);

/// Vocabulary "w0000", "w0001", ... with `size` terms.
std::shared_ptr<const Vocabulary> synthetic_vocabulary(std::size_t size);

struct BenchOptions {
    std::size_t base = 20000;
    std::vector<std::size_t> multipliers{1, 2, 4, 8};
    std::int64_t ratio = 8;  // coarsen width
    int repetitions = 15;    // best time is reported
    std::uint64_t seed = 1;
};

struct BenchRow {
    std::string op;  // "merge" or "coarsen"
    std::size_t size = 0;
    std::size_t rows_in = 0;
    std::size_t rows_out = 0;
    std::size_t min_rows_out = 0;  // analytic lower bound on the output cardinality
    bool bound_ok = true;
    double seconds = 0;
};

std::vector<BenchRow> run_bench(const BenchOptions& options);

struct LinearFit {
    double slope = 0;
    double intercept = 0;
    double r_squared = 0;
    double max_relative_residual = 0;  // max |y - fit| / fit
};

/// Least-squares line through (x, y).
LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace tth::bench
