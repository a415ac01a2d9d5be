#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "swarmsim/protocol.hpp"
#include "swarmsim/simulation.hpp"

namespace swarmsim::harness {

struct FrameNode {
    std::uint32_t id = 0;
    std::string role;
    Position position;
    std::string color;
};

/// Point-in-time snapshot of a running simulation.
struct TelemetryFrame {
    SimTime simulation_time;
    std::vector<FrameNode> nodes;
    std::map<std::uint32_t, TrackedVariables> tracked_variables;
};

/// Display colour for a node role ("uav", "sensor", "ground_station").
std::string role_color(std::string_view role);

TelemetryFrame capture_frame(const Simulation& sim);

/// One-line JSON text:
///   {"type":"frame","simulation_time":<s>,
///    "nodes":[{"id":n,"role":r,"position":[x,y,z],"color":c},...],
///    "tracked_variables":{"<id>":{"<name>":<number|string>,...},...}}
/// Doubles are written with round-trip precision.
std::string to_json_text(const TelemetryFrame& frame);

/// Empty iff @p json_text is a well-formed frame per the layout above.
std::vector<std::string> frame_schema_problems(std::string_view json_text);

/// Receiver of frames produced during a run. Implementations must not
/// block the caller for long; the simulation thread calls publish().
class FrameSink {
public:
    virtual ~FrameSink() = default;
    virtual void publish(const TelemetryFrame& frame) = 0;
};

}  // namespace swarmsim::harness
