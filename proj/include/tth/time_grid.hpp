#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tth/date.hpp"

namespace tth {

/// Index of a time interval on a TimeGrid.
using Interval = std::int64_t;

/// Discretized time axis.
///
/// A uniform grid has interval i = [origin + i*width, origin + (i+1)*width), for any
/// integer i. An explicit grid is a strictly increasing list of boundary dates b_0..b_n
/// with interval i = [b_i, b_{i+1}) for 0 <= i < n; calendar months and quarters are
/// expressed this way because they are not a fixed number of days.
class TimeGrid {
public:
    /// Uniform one-day grid at the epoch.
    TimeGrid() = default;

    static TimeGrid uniform(Date origin, std::int64_t width_days);
    static TimeGrid from_boundaries(std::vector<Date> boundaries);

    /// Boundaries `start, start+step months, ...` up to and including `end`.
    /// `end` must itself be reachable from `start` in whole steps.
    static TimeGrid calendar_months(Date start, Date end, int step_months);

    bool is_uniform() const noexcept { return boundaries_.empty(); }

    /// Uniform grids: the origin. Explicit grids: the first boundary.
    Date origin() const noexcept;

    /// Width in days; throws alignment error for explicit grids.
    std::int64_t width() const;

    const std::vector<Date>& boundaries() const noexcept { return boundaries_; }

    /// Number of intervals of an explicit grid; nullopt for uniform grids.
    std::optional<std::int64_t> interval_count() const noexcept;

    std::optional<Interval> interval_of(Date date) const;
    Date interval_start(Interval interval) const;
    Date interval_end(Interval interval) const;

    /// The interval whose start date is exactly `date`.
    std::optional<Interval> interval_starting_at(Date date) const;

    /// Whether `date` is an interval boundary of this grid.
    bool is_boundary(Date date) const;

    std::string describe() const;

    bool operator==(const TimeGrid&) const = default;

private:
    Date origin_{};
    std::int64_t width_ = 1;
    std::vector<Date> boundaries_;
};

}  // namespace tth
