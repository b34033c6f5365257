#include "bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include "tth/algebra.hpp"
#include "tth/error.hpp"

namespace tth::bench {

std::shared_ptr<const Vocabulary> synthetic_vocabulary(std::size_t size) {
    std::vector<std::string> terms(size);
    char buf[32];
    for (std::size_t i = 0; i < size; ++i) {
        std::snprintf(buf, sizeof buf, "w%04zu", i);
        terms[i] = buf;
    }
    return std::make_shared<const Vocabulary>(terms);
}

TTH synthetic_tth(std::size_t rows, std::uint64_t seed, int parity, std::int64_t intervals,
                  std::shared_ptr<const Vocabulary> vocabulary) {
    if (intervals <= 0) fail(ErrorKind::argument, "intervals must be positive");
    const auto per_term = static_cast<std::size_t>(intervals);
    const std::size_t terms = (rows + per_term - 1) / per_term;
    if (vocabulary->size() < terms) fail(ErrorKind::argument, "vocabulary too small for synthetic histogram");
    std::mt19937_64 rng(seed);
    std::vector<TTHRow> out;
    out.reserve(rows);
    for (std::size_t k = 0; k < rows; ++k) {
        TTHRow r;
        r.term = static_cast<TermId>(k / per_term);
        r.interval = static_cast<Interval>(k % per_term);
        r.count = 1 + static_cast<Count>(rng() % 5);
        r.docs = {static_cast<DocId>(2 * k + static_cast<std::size_t>(parity))};
        out.push_back(std::move(r));
    }
    return TTH(TimeGrid::uniform(Date::from_ymd(2017, 1, 1), 1), {}, std::move(vocabulary)).with_rows(std::move(out));
}

TTH synthetic_tth(std::size_t rows, std::uint64_t seed, int parity, std::int64_t intervals) {
    const auto per_term = static_cast<std::size_t>(std::max<std::int64_t>(intervals, 1));
    return synthetic_tth(rows, seed, parity, intervals, synthetic_vocabulary((rows + per_term - 1) / per_term));
}

namespace {

double seconds_of(const std::function<void()>& f) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchOptions& options) {
    if (options.ratio <= 0) fail(ErrorKind::argument, "coarsen ratio must be positive");
#if defined(__GLIBC__)
    // Keep freed memory in the process so repetitions do not pay fresh page faults.
    mallopt(M_MMAP_THRESHOLD, 1 << 30);
    mallopt(M_TRIM_THRESHOLD, 1 << 30);
#endif
    const auto m = static_cast<std::size_t>(options.ratio);
    std::vector<BenchRow> out;
    for (std::size_t mult : options.multipliers) {
        const std::size_t n = options.base * mult;
        auto vocab = synthetic_vocabulary(n / 96 + 1);
        const TTH a = synthetic_tth(n, options.seed, 0, 96, vocab);
        const TTH b = synthetic_tth(n, options.seed + 1, 1, 96, vocab);
        BenchRow mr{"merge", n, 2 * n, 0, n, true, INFINITY};
        BenchRow cr{"coarsen", n, n, 0, (n + m - 1) / m, true, INFINITY};
        // The first round is a warm-up and is not timed.
        for (int rep = 0; rep <= std::max(options.repetitions, 1); ++rep) {
            double t = seconds_of([&] { mr.rows_out = merge(a, b).size(); });
            if (rep > 0) mr.seconds = std::min(mr.seconds, t);
            t = seconds_of([&] { cr.rows_out = coarsen(a, Width::days(options.ratio)).size(); });
            if (rep > 0) cr.seconds = std::min(cr.seconds, t);
        }
        mr.bound_ok = mr.rows_out >= mr.min_rows_out && mr.rows_out <= mr.rows_in;
        cr.bound_ok = cr.rows_out >= cr.min_rows_out && cr.rows_out <= cr.rows_in;
        out.push_back(mr);
        out.push_back(cr);
    }
    return out;
}

LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) fail(ErrorKind::argument, "linear fit needs two or more points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LinearFit f;
    f.slope = sxx > 0 ? sxy / sxx : 0;
    f.intercept = my - f.slope * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double fit = f.intercept + f.slope * x[i];
        const double r = y[i] - fit;
        ss_res += r * r;
        if (fit > 0) f.max_relative_residual = std::max(f.max_relative_residual, std::abs(r) / fit);
        else f.max_relative_residual = INFINITY;
    }
    f.r_squared = syy > 0 ? 1 - ss_res / syy : 1;
    return f;
}

}  // namespace tth::bench
