#include "tsagent/core/time.hpp"

#include <array>
#include <charconv>
#include <cstdio>

#include "tsagent/core/error.hpp"

namespace tsagent {

using namespace std::chrono;

namespace {

bool read_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    for (std::size_t i = pos; i < pos + len; ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
    }
    auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, out);
    return ec == std::errc{} && ptr == s.data() + pos + len;
}

Timestamp add_months(Timestamp anchor, std::int64_t months_to_add) {
    const sys_days day_part = floor<days>(anchor);
    const auto time_of_day = anchor - day_part;
    const year_month_day ymd{day_part};
    const bool month_end = year_month_day_last{ymd.year(), month_day_last{ymd.month()}}.day() == ymd.day();

    const year_month target = year_month{ymd.year(), ymd.month()} + months{months_to_add};
    const day last = year_month_day_last{target.year(), month_day_last{target.month()}}.day();
    const day d = (month_end || ymd.day() > last) ? last : ymd.day();
    return sys_days{target / d} + time_of_day;
}

constexpr std::array kUnitsByResolution = {
    FrequencyUnit::hourly, FrequencyUnit::daily,     FrequencyUnit::weekly,
    FrequencyUnit::monthly, FrequencyUnit::quarterly, FrequencyUnit::yearly,
};

}  // namespace

Frequency Frequency::of(FrequencyUnit unit) {
    switch (unit) {
        case FrequencyUnit::yearly: return {unit, 1};
        case FrequencyUnit::quarterly: return {unit, 4};
        case FrequencyUnit::monthly: return {unit, 12};
        case FrequencyUnit::weekly: return {unit, 52};
        case FrequencyUnit::daily: return {unit, 7};
        case FrequencyUnit::hourly: return {unit, 24};
    }
    return {};
}

Frequency Frequency::from_code(std::string_view code) {
    if (code == "Y" || code == "A") return of(FrequencyUnit::yearly);
    if (code == "Q") return of(FrequencyUnit::quarterly);
    if (code == "M") return of(FrequencyUnit::monthly);
    if (code == "W") return of(FrequencyUnit::weekly);
    if (code == "D") return of(FrequencyUnit::daily);
    if (code == "H") return of(FrequencyUnit::hourly);
    throw Error(ErrorCategory::frequency, "unknown frequency code '" + std::string(code) + "'");
}

char Frequency::code() const {
    switch (unit) {
        case FrequencyUnit::yearly: return 'Y';
        case FrequencyUnit::quarterly: return 'Q';
        case FrequencyUnit::monthly: return 'M';
        case FrequencyUnit::weekly: return 'W';
        case FrequencyUnit::daily: return 'D';
        case FrequencyUnit::hourly: return 'H';
    }
    return '?';
}

std::string_view Frequency::name() const {
    switch (unit) {
        case FrequencyUnit::yearly: return "yearly";
        case FrequencyUnit::quarterly: return "quarterly";
        case FrequencyUnit::monthly: return "monthly";
        case FrequencyUnit::weekly: return "weekly";
        case FrequencyUnit::daily: return "daily";
        case FrequencyUnit::hourly: return "hourly";
    }
    return "unknown";
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);

    int y = 0, mo = 0, d = 0;
    if (text.size() < 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    if (!read_int(text, 0, 4, y) || !read_int(text, 5, 2, mo) || !read_int(text, 8, 2, d)) return std::nullopt;
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;

    int hh = 0, mm = 0, ss = 0;
    if (text.size() > 10) {
        if (text[10] != ' ' && text[10] != 'T') return std::nullopt;
        if (text.size() != 16 && text.size() != 19) return std::nullopt;
        if (text[13] != ':' || !read_int(text, 11, 2, hh) || !read_int(text, 14, 2, mm)) return std::nullopt;
        if (text.size() == 19 && (text[16] != ':' || !read_int(text, 17, 2, ss))) return std::nullopt;
        if (hh > 23 || mm > 59 || ss > 59) return std::nullopt;
    }
    return sys_days{ymd} + hours{hh} + minutes{mm} + seconds{ss};
}

std::string format_timestamp(Timestamp t) {
    const sys_days day_part = floor<days>(t);
    const year_month_day ymd{day_part};
    const auto tod = hh_mm_ss{t - day_part};
    char buf[32];
    if (tod.to_duration().count() == 0) {
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                      static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    } else {
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", static_cast<int>(ymd.year()),
                      static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                      static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                      static_cast<int>(tod.seconds().count()));
    }
    return buf;
}

Timestamp advance(Timestamp anchor, Frequency freq, std::int64_t k) {
    switch (freq.unit) {
        case FrequencyUnit::hourly: return anchor + hours{k};
        case FrequencyUnit::daily: return anchor + days{k};
        case FrequencyUnit::weekly: return anchor + weeks{k};
        case FrequencyUnit::monthly: return add_months(anchor, k);
        case FrequencyUnit::quarterly: return add_months(anchor, 3 * k);
        case FrequencyUnit::yearly: return add_months(anchor, 12 * k);
    }
    return anchor;
}

bool on_grid(std::span<const Timestamp> timestamps, Frequency freq) {
    if (timestamps.empty()) return true;
    for (std::size_t i = 1; i < timestamps.size(); ++i) {
        if (timestamps[i] != advance(timestamps[0], freq, static_cast<std::int64_t>(i))) return false;
    }
    return true;
}

Frequency infer_frequency(std::span<const Timestamp> timestamps) {
    if (timestamps.size() < 3) {
        throw Error(ErrorCategory::insufficient_data,
                    "frequency inference needs at least 3 timestamps, got " + std::to_string(timestamps.size()));
    }
    for (std::size_t i = 1; i < timestamps.size(); ++i) {
        if (timestamps[i] <= timestamps[i - 1]) {
            throw Error(ErrorCategory::frequency, "timestamps are not strictly increasing at position " +
                                                      std::to_string(i));
        }
    }
    for (FrequencyUnit unit : kUnitsByResolution) {
        const Frequency freq = Frequency::of(unit);
        if (on_grid(timestamps, freq)) return freq;
    }
    throw Error(ErrorCategory::frequency, "irregular spacing: timestamps starting at " +
                                              format_timestamp(timestamps[0]) + " fit no supported frequency");
}

std::vector<Timestamp> future_grid(Timestamp last, Frequency freq, int h) {
    if (h < 1) throw Error(ErrorCategory::invalid_argument, "horizon must be >= 1, got " + std::to_string(h));
    std::vector<Timestamp> out;
    out.reserve(static_cast<std::size_t>(h));
    for (int k = 1; k <= h; ++k) out.push_back(advance(last, freq, k));
    return out;
}

}  // namespace tsagent
