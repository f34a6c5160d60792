#include "textpm/timestamp.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>

namespace textpm {
namespace {

using std::chrono::day;
using std::chrono::month;
using std::chrono::sys_days;
using std::chrono::year;
using std::chrono::year_month_day;

bool read_int(std::string_view s, std::size_t& pos, std::size_t width, int& out) {
    if (pos + width > s.size()) return false;
    for (std::size_t i = 0; i < width; ++i) {
        if (s[pos + i] < '0' || s[pos + i] > '9') return false;
    }
    auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + width, out);
    if (ec != std::errc{} || ptr != s.data() + pos + width) return false;
    pos += width;
    return true;
}

bool expect(std::string_view s, std::size_t& pos, char c) {
    if (pos >= s.size() || s[pos] != c) return false;
    ++pos;
    return true;
}

std::int64_t floor_days(double t) { return static_cast<std::int64_t>(std::floor(t / kSecondsPerDay)); }

}  // namespace

std::optional<double> parse_timestamp(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);

    std::size_t pos = 0;
    int y = 0, mo = 0, d = 0, hh = 0, mm = 0, ss = 0;
    if (!read_int(s, pos, 4, y)) return std::nullopt;
    if (pos >= s.size() || (s[pos] != '-' && s[pos] != '/')) return std::nullopt;
    const char date_sep = s[pos++];
    if (!read_int(s, pos, 2, mo) || !expect(s, pos, date_sep) || !read_int(s, pos, 2, d)) return std::nullopt;

    double frac = 0.0;
    int offset_seconds = 0;
    if (pos < s.size()) {
        const char time_sep = s[pos++];
        if (time_sep != ' ' && !(time_sep == 'T' && date_sep == '-')) return std::nullopt;
        if (!read_int(s, pos, 2, hh) || !expect(s, pos, ':') || !read_int(s, pos, 2, mm) ||
            !expect(s, pos, ':') || !read_int(s, pos, 2, ss)) {
            return std::nullopt;
        }
        if (pos < s.size() && (s[pos] == '.' || s[pos] == ',')) {
            ++pos;
            const std::size_t start = pos;
            std::int64_t digits = 0;
            std::int64_t scale = 1;
            while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
                if (pos - start < 9) {
                    digits = digits * 10 + (s[pos] - '0');
                    scale *= 10;
                }
                ++pos;
            }
            if (pos == start) return std::nullopt;
            frac = static_cast<double>(digits) / static_cast<double>(scale);
        }
        if (pos < s.size()) {
            if (time_sep != 'T') return std::nullopt;
            if (s[pos] == 'Z') {
                ++pos;
            } else if (s[pos] == '+' || s[pos] == '-') {
                const int sign = s[pos++] == '+' ? 1 : -1;
                int oh = 0, om = 0;
                if (!read_int(s, pos, 2, oh)) return std::nullopt;
                if (pos < s.size() && s[pos] == ':') ++pos;
                if (!read_int(s, pos, 2, om)) return std::nullopt;
                if (oh > 23 || om > 59) return std::nullopt;
                offset_seconds = sign * (oh * 3600 + om * 60);
            } else {
                return std::nullopt;
            }
            if (pos != s.size()) return std::nullopt;
        }
    }
    if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;

    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    const std::int64_t days = sys_days{ymd}.time_since_epoch().count();
    const std::int64_t whole = days * 86400 + hh * 3600 + mm * 60 + ss - offset_seconds;
    return static_cast<double>(whole) + frac;
}

std::string format_timestamp(double t) {
    double whole = std::floor(t);
    long long ms = std::llround((t - whole) * 1000.0);
    if (ms >= 1000) {
        whole += 1.0;
        ms -= 1000;
    }
    const auto secs = static_cast<std::int64_t>(whole);
    std::int64_t days = secs / 86400;
    std::int64_t rem = secs % 86400;
    if (rem < 0) {
        rem += 86400;
        days -= 1;
    }
    const year_month_day ymd{sys_days{std::chrono::days{days}}};
    char buf[48];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%03lld", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(rem / 3600), static_cast<int>(rem / 60 % 60), static_cast<int>(rem % 60), ms);
    return buf;
}

double seconds_since_midnight(double t) { return t - static_cast<double>(floor_days(t)) * kSecondsPerDay; }

double seconds_since_monday(double t) {
    const std::int64_t days = floor_days(t);
    // 1970-01-01 was a Thursday, three days after a Monday.
    const std::int64_t since_monday = ((days + 3) % 7 + 7) % 7;
    return static_cast<double>(since_monday) * kSecondsPerDay + seconds_since_midnight(t);
}

double seconds_since_new_year(double t) {
    const std::int64_t days = floor_days(t);
    const year_month_day ymd{sys_days{std::chrono::days{days}}};
    const std::int64_t jan1 = sys_days{ymd.year() / 1 / 1}.time_since_epoch().count();
    return static_cast<double>(days - jan1) * kSecondsPerDay + seconds_since_midnight(t);
}

}  // namespace textpm
