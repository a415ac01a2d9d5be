#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <vector>

namespace swarmsim {

/// Node identity, unique within one simulation.
struct NodeId {
    std::uint32_t value = 0;

    constexpr auto operator<=>(const NodeId&) const noexcept = default;
};

using Bytes = std::vector<std::uint8_t>;

/// Local Euclidean coordinates in meters; ground plane is z = 0.
struct Position {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr bool operator==(const Position&) const noexcept = default;

    [[nodiscard]] bool is_finite() const noexcept {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

constexpr Position operator+(Position a, Position b) noexcept {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
}
constexpr Position operator-(Position a, Position b) noexcept {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
}
constexpr Position operator*(Position a, double k) noexcept {
    return {a.x * k, a.y * k, a.z * k};
}

inline double norm(Position v) noexcept {
    return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
}

inline double distance(Position a, Position b) noexcept {
    return norm(a - b);
}

/// Geographic coordinates: degrees, degrees, meters.
struct GeoPosition {
    double latitude = 0.0;
    double longitude = 0.0;
    double altitude = 0.0;

    constexpr bool operator==(const GeoPosition&) const noexcept = default;

    [[nodiscard]] bool is_valid() const noexcept {
        return std::isfinite(latitude) && std::isfinite(longitude) && std::isfinite(altitude) &&
               latitude >= -90.0 && latitude <= 90.0 && longitude >= -180.0 && longitude <= 180.0;
    }
};

}  // namespace swarmsim

template <>
struct std::hash<swarmsim::NodeId> {
    std::size_t operator()(swarmsim::NodeId id) const noexcept {
        return std::hash<std::uint32_t>{}(id.value);
    }
};
