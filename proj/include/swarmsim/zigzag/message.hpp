#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "swarmsim/types.hpp"

namespace swarmsim::zigzag {

enum class MessageKind : std::uint8_t {
    heartbeat = 0,
    sensor_data = 1,
    pair_request = 2,
    pair_confirm = 3,
};

enum class Role : std::uint8_t {
    uav = 0,
    sensor = 1,
    ground_station = 2,
};

const char* to_string(Role role) noexcept;

struct Message {
    MessageKind kind = MessageKind::heartbeat;
    NodeId sender;
    Role sender_role = Role::uav;
    std::uint64_t data_count = 0;
    double mission_progress = 0.0;

    bool operator==(const Message&) const = default;
};

/// kind u8 | sender u32 | role u8 | data_count u64 | progress f64, little-endian.
inline constexpr std::size_t wire_size = 1 + 4 + 1 + 8 + 8;

Bytes encode(const Message& m);

/// Returns nullopt for payloads of the wrong size or with unknown enum values.
std::optional<Message> decode(std::span<const std::uint8_t> payload);

}  // namespace swarmsim::zigzag
