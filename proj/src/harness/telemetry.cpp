#include "swarmsim/harness/telemetry.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

namespace swarmsim::harness {

using nlohmann::json;

std::string role_color(std::string_view role) {
    if (role == "uav") {
        return "#1f77b4";
    }
    if (role == "sensor") {
        return "#2ca02c";
    }
    if (role == "ground_station") {
        return "#d62728";
    }
    return "#7f7f7f";
}

TelemetryFrame capture_frame(const Simulation& sim) {
    TelemetryFrame frame;
    frame.simulation_time = sim.now();
    frame.nodes.reserve(sim.node_count());
    for (std::uint32_t i = 0; i < sim.node_count(); ++i) {
        const NodeId id{i};
        const std::string& role = sim.role_of(id);
        frame.nodes.push_back(FrameNode{i, role, sim.position_of(id), role_color(role)});
        const auto& vars = sim.tracked_variables(id);
        if (!vars.empty()) {
            frame.tracked_variables.emplace(i, vars);
        }
    }
    return frame;
}

std::string to_json_text(const TelemetryFrame& frame) {
    json nodes = json::array();
    for (const auto& n : frame.nodes) {
        nodes.push_back({{"id", n.id},
                         {"role", n.role},
                         {"position", {n.position.x, n.position.y, n.position.z}},
                         {"color", n.color}});
    }
    json tracked = json::object();
    for (const auto& [id, vars] : frame.tracked_variables) {
        json obj = json::object();
        for (const auto& [name, value] : vars) {
            std::visit([&](const auto& v) { obj[name] = v; }, value);
        }
        tracked[std::to_string(id)] = std::move(obj);
    }
    json doc{{"type", "frame"},
             {"simulation_time", frame.simulation_time.seconds()},
             {"nodes", std::move(nodes)},
             {"tracked_variables", std::move(tracked)}};
    return doc.dump();
}

std::vector<std::string> frame_schema_problems(std::string_view json_text) {
    std::vector<std::string> out;
    const json doc = json::parse(json_text, nullptr, false);
    if (doc.is_discarded()) {
        return {"not valid JSON"};
    }
    if (!doc.is_object()) {
        return {"frame must be an object"};
    }
    if (doc.value("type", "") != "frame") {
        out.emplace_back("type must be \"frame\"");
    }
    if (!doc.contains("simulation_time") || !doc["simulation_time"].is_number() ||
        doc["simulation_time"].get<double>() < 0.0) {
        out.emplace_back("simulation_time must be a non-negative number");
    }
    if (!doc.contains("nodes") || !doc["nodes"].is_array()) {
        out.emplace_back("nodes must be an array");
    } else {
        for (const auto& n : doc["nodes"]) {
            if (!n.is_object() || !n.contains("id") || !n["id"].is_number_unsigned()) {
                out.emplace_back("node.id must be an unsigned integer");
                continue;
            }
            const std::string where = "node " + std::to_string(n["id"].get<std::uint64_t>());
            if (!n.contains("role") || !n["role"].is_string()) {
                out.push_back(where + ": role must be a string");
            }
            if (!n.contains("color") || !n["color"].is_string()) {
                out.push_back(where + ": color must be a string");
            }
            const bool pos_ok = n.contains("position") && n["position"].is_array() &&
                                n["position"].size() == 3 &&
                                std::all_of(n["position"].begin(), n["position"].end(),
                                            [](const json& c) {
                                                return c.is_number() &&
                                                       std::isfinite(c.get<double>());
                                            });
            if (!pos_ok) {
                out.push_back(where + ": position must be three finite numbers");
            }
        }
    }
    if (!doc.contains("tracked_variables") || !doc["tracked_variables"].is_object()) {
        out.emplace_back("tracked_variables must be an object");
    } else {
        for (const auto& [id, vars] : doc["tracked_variables"].items()) {
            if (!vars.is_object()) {
                out.push_back("tracked_variables." + id + " must be an object");
                continue;
            }
            for (const auto& [name, v] : vars.items()) {
                if (!v.is_number() && !v.is_string()) {
                    out.push_back("tracked_variables." + id + "." + name +
                                  " must be a number or string");
                }
            }
        }
    }
    return out;
}

}  // namespace swarmsim::harness
