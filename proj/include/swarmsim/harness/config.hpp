#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "swarmsim/medium.hpp"
#include "swarmsim/sim_time.hpp"
#include "swarmsim/zigzag/protocols.hpp"

namespace swarmsim::harness {

struct FieldIssue {
    std::string field;  // dotted path, e.g. "medium.drop_probability"
    std::string message;
};

/// Invalid scenario configuration, with one entry per offending field.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<FieldIssue> issues);

    [[nodiscard]] const std::vector<FieldIssue>& issues() const noexcept { return issues_; }

private:
    std::vector<FieldIssue> issues_;
};

/// Declarative experiment description. Defaults are the "small" preset.
struct ScenarioConfig {
    std::string preset = "small";
    int sensor_count = 5;
    int uav_count = 2;
    double sensor_spacing = 300.0;
    MediumConfig medium;
    zigzag::Params zigzag;
    double uav_speed = 10.0;
    double uav_altitude = 0.0;
    double stagger_interval = 20.0;
    SimTime duration = SimTime::from_seconds(3600.0);
    std::uint64_t seed = 0;
    int runs = 1;
    double telemetry_interval = 1.0;
    std::optional<GeoPosition> geo_reference;
};

/// "small" (5 sensors, 2 UAVs), "medium" (15, 7) or "large" (25, 12).
/// @throws ConfigError for unknown names.
ScenarioConfig preset_config(std::string_view name);

[[nodiscard]] const std::vector<std::string>& preset_names();

std::vector<FieldIssue> validate_config(const ScenarioConfig& cfg);

/// @throws ConfigError if validate_config reports anything.
void require_valid(const ScenarioConfig& cfg);

/// Applies a JSON document on top of @p base. A "preset" key first resets
/// the base to that preset. Unknown keys and wrong types are errors.
/// @throws ConfigError
ScenarioConfig parse_config(std::string_view json_text, ScenarioConfig base = {});

/// @throws ConfigError (including for unreadable files).
ScenarioConfig load_config_file(const std::filesystem::path& path, ScenarioConfig base = {});

/// Serialises every field; parse_config(to_json_text(c)) == c.
std::string to_json_text(const ScenarioConfig& cfg);

}  // namespace swarmsim::harness
