#include "tth/time_grid.hpp"

#include <algorithm>

#include "tth/error.hpp"

namespace tth {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) {
        --q;
    }
    return q;
}

}  // namespace

TimeGrid TimeGrid::uniform(Date origin, std::int64_t width_days) {
    if (width_days <= 0) {
        fail(ErrorKind::argument, "grid width must be a positive number of days, got " +
                                      std::to_string(width_days));
    }
    TimeGrid grid;
    grid.origin_ = origin;
    grid.width_ = width_days;
    return grid;
}

TimeGrid TimeGrid::from_boundaries(std::vector<Date> boundaries) {
    if (boundaries.size() < 2) {
        fail(ErrorKind::argument, "an explicit grid needs at least two boundaries");
    }
    for (std::size_t i = 1; i < boundaries.size(); ++i) {
        if (!(boundaries[i - 1] < boundaries[i])) {
            fail(ErrorKind::argument, "grid boundaries must be strictly increasing at " +
                                          format_date(boundaries[i]));
        }
    }
    TimeGrid grid;
    grid.origin_ = boundaries.front();
    grid.width_ = 0;
    grid.boundaries_ = std::move(boundaries);
    return grid;
}

TimeGrid TimeGrid::calendar_months(Date start, Date end, int step_months) {
    if (step_months <= 0) {
        fail(ErrorKind::argument, "month step must be positive");
    }
    std::vector<Date> bounds{start};
    for (int k = 1;; ++k) {
        Date next = start.add_months(k * step_months);
        if (next > end) {
            break;
        }
        bounds.push_back(next);
    }
    if (bounds.back() != end) {
        fail(ErrorKind::alignment, "range " + format_date(start) + ".." + format_date(end) +
                                       " is not a whole number of " + std::to_string(step_months) +
                                       "-month steps");
    }
    return from_boundaries(std::move(bounds));
}

Date TimeGrid::origin() const noexcept { return origin_; }

std::int64_t TimeGrid::width() const {
    if (!is_uniform()) {
        fail(ErrorKind::alignment, "explicit-boundary grid has no uniform width");
    }
    return width_;
}

std::optional<std::int64_t> TimeGrid::interval_count() const noexcept {
    if (is_uniform()) {
        return std::nullopt;
    }
    return static_cast<std::int64_t>(boundaries_.size()) - 1;
}

std::optional<Interval> TimeGrid::interval_of(Date date) const {
    if (is_uniform()) {
        return floor_div(date - origin_, width_);
    }
    if (date < boundaries_.front() || !(date < boundaries_.back())) {
        return std::nullopt;
    }
    auto it = std::upper_bound(boundaries_.begin(), boundaries_.end(), date);
    return static_cast<Interval>(it - boundaries_.begin()) - 1;
}

Date TimeGrid::interval_start(Interval interval) const {
    if (is_uniform()) {
        return origin_ + interval * width_;
    }
    if (interval < 0 || interval >= *interval_count()) {
        fail(ErrorKind::range, "interval " + std::to_string(interval) + " outside grid " + describe());
    }
    return boundaries_[static_cast<std::size_t>(interval)];
}

Date TimeGrid::interval_end(Interval interval) const {
    if (is_uniform()) {
        return origin_ + (interval + 1) * width_;
    }
    if (interval < 0 || interval >= *interval_count()) {
        fail(ErrorKind::range, "interval " + std::to_string(interval) + " outside grid " + describe());
    }
    return boundaries_[static_cast<std::size_t>(interval) + 1];
}

std::optional<Interval> TimeGrid::interval_starting_at(Date date) const {
    if (is_uniform()) {
        if ((date - origin_) % width_ != 0) {
            return std::nullopt;
        }
        return floor_div(date - origin_, width_);
    }
    auto it = std::lower_bound(boundaries_.begin(), boundaries_.end() - 1, date);
    if (it == boundaries_.end() - 1 || *it != date) {
        return std::nullopt;
    }
    return static_cast<Interval>(it - boundaries_.begin());
}

bool TimeGrid::is_boundary(Date date) const {
    if (is_uniform()) {
        return (date - origin_) % width_ == 0;
    }
    return std::binary_search(boundaries_.begin(), boundaries_.end(), date);
}

std::string TimeGrid::describe() const {
    if (is_uniform()) {
        return "uniform(origin=" + format_date(origin_) + ", width=" + std::to_string(width_) + "d)";
    }
    return "explicit(" + format_date(boundaries_.front()) + ".." + format_date(boundaries_.back()) +
           ", " + std::to_string(boundaries_.size() - 1) + " intervals)";
}

}  // namespace tth
