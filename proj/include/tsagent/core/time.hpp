#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tsagent {

/// Naive calendar instant (no time zone), second resolution.
using Timestamp = std::chrono::sys_seconds;

enum class FrequencyUnit { yearly, quarterly, monthly, weekly, daily, hourly };

/// Sampling frequency plus the season length it implies (Y 1, Q 4, M 12, W 52, D 7, H 24).
struct Frequency {
    FrequencyUnit unit = FrequencyUnit::monthly;
    int season_length = 12;

    static Frequency of(FrequencyUnit unit);
    static Frequency from_code(std::string_view code);  // "Y", "Q", "M", "W", "D", "H"

    char code() const;
    std::string_view name() const;

    friend bool operator==(const Frequency&, const Frequency&) = default;
};

/// Accepts "YYYY-MM-DD", "YYYY-MM-DD HH:MM[:SS]" and the "T"-separated form.
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// Date-only when the instant falls on midnight, "YYYY-MM-DD HH:MM:SS" otherwise.
std::string format_timestamp(Timestamp t);

/// The instant `k` steps after `anchor` on the frequency grid.
///
/// Monthly, quarterly and yearly steps are calendar steps measured from the
/// anchor: the day of month is kept and clamped to the month end, and an anchor
/// on the last day of its month stays on month ends. Weekly, daily and hourly
/// steps are fixed durations.
Timestamp advance(Timestamp anchor, Frequency freq, std::int64_t k);

/// Recovers the grid the timestamps lie on. Needs at least three strictly increasing points.
Frequency infer_frequency(std::span<const Timestamp> timestamps);

/// True when every timestamp equals advance(timestamps[0], freq, i).
bool on_grid(std::span<const Timestamp> timestamps, Frequency freq);

/// The h instants following `last`.
std::vector<Timestamp> future_grid(Timestamp last, Frequency freq, int h);

}  // namespace tsagent
