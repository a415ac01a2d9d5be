#include "swarmsim/zigzag/message.hpp"

#include <bit>

namespace swarmsim::zigzag {

namespace {

template <class T>
void put_le(Bytes& out, T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
}

template <class T>
T get_le(std::span<const std::uint8_t> in, std::size_t& pos) {
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        v |= static_cast<T>(in[pos + i]) << (8 * i);
    }
    pos += sizeof(T);
    return v;
}

}  // namespace

const char* to_string(Role role) noexcept {
    switch (role) {
        case Role::uav:
            return "uav";
        case Role::sensor:
            return "sensor";
        case Role::ground_station:
            return "ground_station";
    }
    return "unknown";
}

Bytes encode(const Message& m) {
    Bytes out;
    out.reserve(wire_size);
    out.push_back(static_cast<std::uint8_t>(m.kind));
    put_le<std::uint32_t>(out, m.sender.value);
    out.push_back(static_cast<std::uint8_t>(m.sender_role));
    put_le<std::uint64_t>(out, m.data_count);
    put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(m.mission_progress));
    return out;
}

std::optional<Message> decode(std::span<const std::uint8_t> payload) {
    if (payload.size() != wire_size) {
        return std::nullopt;
    }
    std::size_t pos = 0;
    const std::uint8_t kind = payload[pos++];
    if (kind > static_cast<std::uint8_t>(MessageKind::pair_confirm)) {
        return std::nullopt;
    }
    Message m;
    m.kind = static_cast<MessageKind>(kind);
    m.sender = NodeId{get_le<std::uint32_t>(payload, pos)};
    const std::uint8_t role = payload[pos++];
    if (role > static_cast<std::uint8_t>(Role::ground_station)) {
        return std::nullopt;
    }
    m.sender_role = static_cast<Role>(role);
    m.data_count = get_le<std::uint64_t>(payload, pos);
    m.mission_progress = std::bit_cast<double>(get_le<std::uint64_t>(payload, pos));
    return m;
}

}  // namespace swarmsim::zigzag
