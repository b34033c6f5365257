#pragma once

#include <string>
#include <vector>

#include "fixtures.hpp"
#include "tth/plan.hpp"

namespace tth::testing {

/// Random well-typed plans over one-day sources that share a grid. Every coarsen width
/// is a multiple of its input's width, so the plans evaluate without alignment errors.
class PlanGenerator {
public:
    PlanGenerator(Rng& rng, std::vector<std::string> sources, std::vector<std::string> terms)
        : rng_(rng), sources_(std::move(sources)), terms_(std::move(terms)) {
        if (terms_.empty()) terms_.push_back("absent");
    }

    /// Histogram-valued plan whose result grid has width `width` days.
    PlanExpr histogram(int depth, std::int64_t width);
    /// Histogram plan, optionally finished by a consumer (project, collapse, top, ...).
    PlanExpr any(int depth);
    Predicate predicate();

private:
    Rng& rng_;
    std::vector<std::string> sources_;
    std::vector<std::string> terms_;
};

}  // namespace tth::testing
