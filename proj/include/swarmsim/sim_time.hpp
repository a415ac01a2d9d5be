#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace swarmsim {

/// Simulation clock value. Stored as integer nanoseconds so that queue
/// ordering and equality are exact; exposed in seconds.
///
/// A SimTime is never negative. The same type doubles as a duration.
class SimTime {
public:
    constexpr SimTime() noexcept = default;

    /// @throws std::invalid_argument on negative input.
    static SimTime from_nanos(std::int64_t ns);

    /// Rounds to the nearest nanosecond.
    /// @throws std::invalid_argument if @p s is negative or not finite.
    static SimTime from_seconds(double s);

    static constexpr SimTime zero() noexcept { return SimTime{}; }

    [[nodiscard]] constexpr std::int64_t nanos() const noexcept { return ns_; }
    [[nodiscard]] constexpr double seconds() const noexcept {
        return static_cast<double>(ns_) / 1e9;
    }

    constexpr auto operator<=>(const SimTime&) const noexcept = default;

    SimTime& operator+=(SimTime d);

    /// Exact decimal seconds, trailing zeros trimmed ("12.5", "3", "0.000000001").
    [[nodiscard]] std::string to_string() const;

private:
    constexpr explicit SimTime(std::int64_t ns) noexcept : ns_(ns) {}

    std::int64_t ns_ = 0;
};

SimTime operator+(SimTime a, SimTime b);

/// @throws std::invalid_argument if b > a.
SimTime operator-(SimTime a, SimTime b);

/// Signed difference (to - from) in seconds.
inline double seconds_between(SimTime from, SimTime to) noexcept {
    return static_cast<double>(to.nanos() - from.nanos()) / 1e9;
}

std::ostream& operator<<(std::ostream& os, SimTime t);

}  // namespace swarmsim
