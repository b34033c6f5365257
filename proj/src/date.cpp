#include "tth/date.hpp"

#include <chrono>
#include <cstdio>

#include "tth/error.hpp"

namespace tth {

namespace {

using std::chrono::sys_days;
using std::chrono::year_month_day;

year_month_day to_ymd(Date d) {
    return year_month_day{sys_days{std::chrono::days{d.days()}}};
}

struct Fields {
    int year = -1;
    int month = -1;
    int day = -1;
    int hour = 0;
    int minute = 0;
    int second = 0;
};

// Reads exactly `width` digits.
bool read_digits(std::string_view text, std::size_t& pos, int width, int& out) {
    if (pos + static_cast<std::size_t>(width) > text.size()) {
        return false;
    }
    int value = 0;
    for (int i = 0; i < width; ++i) {
        char c = text[pos + static_cast<std::size_t>(i)];
        if (c < '0' || c > '9') {
            return false;
        }
        value = value * 10 + (c - '0');
    }
    pos += static_cast<std::size_t>(width);
    out = value;
    return true;
}

// Converts the annotation dialect (YYYY-MM-DD) into the strftime subset.
std::string normalize_format(std::string_view format) {
    if (format.find('%') != std::string_view::npos) {
        return std::string(format);
    }
    std::string out;
    for (std::size_t i = 0; i < format.size();) {
        auto rest = format.substr(i);
        if (rest.starts_with("YYYY")) {
            out += "%Y";
            i += 4;
        } else if (rest.starts_with("MM")) {
            out += "%m";
            i += 2;
        } else if (rest.starts_with("DD")) {
            out += "%d";
            i += 2;
        } else if (rest.starts_with("HH")) {
            out += "%H";
            i += 2;
        } else if (rest.starts_with("mm")) {
            out += "%M";
            i += 2;
        } else if (rest.starts_with("SS")) {
            out += "%S";
            i += 2;
        } else {
            out += format[i];
            ++i;
        }
    }
    return out;
}

}  // namespace

Date Date::from_ymd(int year, unsigned month, unsigned day) {
    year_month_day ymd{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}};
    if (!ymd.ok()) {
        fail(ErrorKind::parse, "invalid calendar date " + std::to_string(year) + "-" +
                                   std::to_string(month) + "-" + std::to_string(day));
    }
    return Date(sys_days{ymd}.time_since_epoch().count());
}

int Date::year() const { return static_cast<int>(to_ymd(*this).year()); }
unsigned Date::month() const { return static_cast<unsigned>(to_ymd(*this).month()); }
unsigned Date::day() const { return static_cast<unsigned>(to_ymd(*this).day()); }

Date Date::add_months(int months) const {
    auto ymd = to_ymd(*this);
    auto shifted = ymd.year() / ymd.month() / std::chrono::day{1};
    shifted += std::chrono::months{months};
    auto last = std::chrono::year_month_day_last{shifted.year(), std::chrono::month_day_last{shifted.month()}};
    auto day = std::min(ymd.day(), last.day());
    return Date(sys_days{shifted.year() / shifted.month() / day}.time_since_epoch().count());
}

std::string format_date(Date date) {
    auto ymd = to_ymd(date);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

Date parse_iso_date(std::string_view text) { return parse_date(text, "%Y-%m-%d"); }

Date parse_date(std::string_view text, std::string_view format) {
    const std::string fmt = normalize_format(format);
    Fields f;
    std::size_t pos = 0;
    auto bad = [&]() -> Date {
        fail(ErrorKind::parse, "timestamp '" + std::string(text) + "' does not match format '" +
                                   std::string(format) + "'");
    };
    for (std::size_t i = 0; i < fmt.size(); ++i) {
        if (fmt[i] != '%') {
            if (pos >= text.size() || text[pos] != fmt[i]) {
                return bad();
            }
            ++pos;
            continue;
        }
        if (++i >= fmt.size()) {
            return bad();
        }
        bool ok = true;
        switch (fmt[i]) {
            case 'Y': ok = read_digits(text, pos, 4, f.year); break;
            case 'm': ok = read_digits(text, pos, 2, f.month); break;
            case 'd': ok = read_digits(text, pos, 2, f.day); break;
            case 'H': ok = read_digits(text, pos, 2, f.hour); break;
            case 'M': ok = read_digits(text, pos, 2, f.minute); break;
            case 'S': ok = read_digits(text, pos, 2, f.second); break;
            case '%':
                ok = pos < text.size() && text[pos] == '%';
                ++pos;
                break;
            default: ok = false;
        }
        if (!ok) {
            return bad();
        }
    }
    if (pos != text.size() || f.year < 0 || f.month < 0 || f.day < 0) {
        return bad();
    }
    if (f.hour > 23 || f.minute > 59 || f.second > 60) {
        return bad();
    }
    return Date::from_ymd(f.year, static_cast<unsigned>(f.month), static_cast<unsigned>(f.day));
}

}  // namespace tth
