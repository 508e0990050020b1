#pragma once

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace waste {

// All times are integer seconds. Times of day count from midnight; simulation
// times count from midnight of day 0.
using Seconds = std::int64_t;

inline constexpr Seconds kSecondsPerMinute = 60;
inline constexpr Seconds kSecondsPerHour = 3600;
inline constexpr Seconds kSecondsPerDay = 86400;

// Parses "HH:MM" into seconds of day.
inline Seconds parse_clock(const std::string& text)
{
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("clock time must be HH:MM, got '" + text + "'");

    int hours = std::stoi(text.substr(0, colon));
    int minutes = std::stoi(text.substr(colon + 1));
    if (hours < 0 || hours > 23 || minutes < 0 || minutes > 59)
        throw std::invalid_argument("clock time out of range: '" + text + "'");

    return hours * kSecondsPerHour + minutes * kSecondsPerMinute;
}

inline std::string format_clock(Seconds secondsOfDay)
{
    if (secondsOfDay < 0 || secondsOfDay >= kSecondsPerDay)
        throw std::invalid_argument("clock time out of range");

    char buf[6];
    std::snprintf(buf, sizeof(buf), "%02d:%02d",
                  static_cast<int>(secondsOfDay / kSecondsPerHour),
                  static_cast<int>(secondsOfDay % kSecondsPerHour / kSecondsPerMinute));
    return buf;
}

}  // namespace waste
