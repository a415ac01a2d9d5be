#include "swarmsim/harness/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace swarmsim::harness {

using nlohmann::json;

namespace {

std::string join_issues(const std::vector<FieldIssue>& issues) {
    std::string out;
    for (const auto& i : issues) {
        if (!out.empty()) {
            out += "; ";
        }
        out += i.field + ": " + i.message;
    }
    return out;
}

// Collects problems while walking a JSON object so every bad field is
// reported, not just the first one.
class Reader {
public:
    explicit Reader(std::vector<FieldIssue>& issues) : issues_(issues) {}

    template <class T>
    void read(const json& obj, const std::string& prefix, const char* key, T& out) {
        const auto it = obj.find(key);
        if (it == obj.end()) {
            return;
        }
        const std::string field = prefix + key;
        if constexpr (std::is_same_v<T, bool>) {
            if (!it->is_boolean()) {
                return fail(field, "expected true or false");
            }
            out = it->template get<bool>();
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!it->is_string()) {
                return fail(field, "expected a string");
            }
            out = it->template get<std::string>();
        } else if constexpr (std::is_integral_v<T>) {
            if (!it->is_number_integer()) {
                return fail(field, "expected an integer");
            }
            if constexpr (std::is_unsigned_v<T>) {
                if (it->is_number_unsigned()) {
                    out = it->template get<T>();
                } else if (it->template get<std::int64_t>() < 0) {
                    return fail(field, "must be >= 0");
                } else {
                    out = static_cast<T>(it->template get<std::int64_t>());
                }
            } else {
                const auto v = it->template get<std::int64_t>();
                if (v < std::numeric_limits<T>::min() || v > std::numeric_limits<T>::max()) {
                    return fail(field, "out of range");
                }
                out = static_cast<T>(v);
            }
        } else {
            if (!it->is_number()) {
                return fail(field, "expected a number");
            }
            out = it->template get<double>();
        }
    }

    void check_keys(const json& obj, const std::string& prefix,
                    std::initializer_list<const char*> allowed) {
        for (const auto& [k, v] : obj.items()) {
            bool known = false;
            for (const char* a : allowed) {
                known = known || k == a;
            }
            if (!known) {
                fail(prefix + k, "unknown key");
            }
        }
    }

    void fail(const std::string& field, const std::string& message) {
        issues_.push_back(FieldIssue{field, message});
    }

private:
    std::vector<FieldIssue>& issues_;
};

}  // namespace

ConfigError::ConfigError(std::vector<FieldIssue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"small", "medium", "large"};
    return names;
}

ScenarioConfig preset_config(std::string_view name) {
    ScenarioConfig cfg;
    cfg.preset = std::string(name);
    if (name == "small") {
        cfg.sensor_count = 5;
        cfg.uav_count = 2;
    } else if (name == "medium") {
        cfg.sensor_count = 15;
        cfg.uav_count = 7;
    } else if (name == "large") {
        cfg.sensor_count = 25;
        cfg.uav_count = 12;
    } else {
        throw ConfigError(std::vector<FieldIssue>{{"preset", "unknown preset '" + std::string(name) +
                                          "' (expected small, medium or large)"}});
    }
    return cfg;
}

std::vector<FieldIssue> validate_config(const ScenarioConfig& cfg) {
    std::vector<FieldIssue> out;
    auto positive = [&](const char* field, double v) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            out.push_back({field, "must be > 0"});
        }
    };
    if (cfg.sensor_count < 0) {
        out.push_back({"sensor_count", "must be >= 0"});
    }
    if (cfg.uav_count < 0) {
        out.push_back({"uav_count", "must be >= 0"});
    }
    if (cfg.runs < 1) {
        out.push_back({"runs", "must be >= 1"});
    }
    positive("sensor_spacing", cfg.sensor_spacing);
    positive("uav_speed", cfg.uav_speed);
    positive("telemetry_interval", cfg.telemetry_interval);
    if (!(cfg.stagger_interval >= 0.0) || !std::isfinite(cfg.stagger_interval)) {
        out.push_back({"stagger_interval", "must be >= 0"});
    }
    if (!std::isfinite(cfg.uav_altitude)) {
        out.push_back({"uav_altitude", "must be finite"});
    }
    if (cfg.duration == SimTime::zero()) {
        out.push_back({"duration", "must be > 0"});
    }
    for (const std::string& p : cfg.medium.problems()) {
        const auto colon = p.find(':');
        out.push_back({"medium." + p.substr(0, colon), p.substr(colon + 2)});
    }
    for (const std::string& p : cfg.zigzag.problems()) {
        const auto colon = p.find(':');
        out.push_back({"zigzag." + p.substr(0, colon), p.substr(colon + 2)});
    }
    if (cfg.geo_reference && !cfg.geo_reference->is_valid()) {
        out.push_back({"geo_reference", "latitude must be in [-90, 90] and longitude in [-180, 180]"});
    }
    return out;
}

void require_valid(const ScenarioConfig& cfg) {
    auto issues = validate_config(cfg);
    if (!issues.empty()) {
        throw ConfigError(std::move(issues));
    }
}

ScenarioConfig parse_config(std::string_view json_text, ScenarioConfig base) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::vector<FieldIssue>{{"<document>", std::string("malformed JSON: ") + e.what()}});
    }
    if (!doc.is_object()) {
        throw ConfigError(std::vector<FieldIssue>{{"<document>", "top level must be an object"}});
    }

    std::vector<FieldIssue> issues;
    Reader r(issues);
    r.check_keys(doc, "",
                 {"preset", "sensor_count", "uav_count", "sensor_spacing", "medium", "zigzag",
                  "uav_speed", "uav_altitude", "stagger_interval", "duration", "seed", "runs",
                  "telemetry_interval", "geo_reference"});

    ScenarioConfig cfg = base;
    if (const auto it = doc.find("preset"); it != doc.end()) {
        if (!it->is_string()) {
            r.fail("preset", "expected a string");
        } else {
            try {
                cfg = preset_config(it->get<std::string>());
            } catch (const ConfigError& e) {
                issues.insert(issues.end(), e.issues().begin(), e.issues().end());
            }
        }
    }

    r.read(doc, "", "sensor_count", cfg.sensor_count);
    r.read(doc, "", "uav_count", cfg.uav_count);
    r.read(doc, "", "sensor_spacing", cfg.sensor_spacing);
    r.read(doc, "", "uav_speed", cfg.uav_speed);
    r.read(doc, "", "uav_altitude", cfg.uav_altitude);
    r.read(doc, "", "stagger_interval", cfg.stagger_interval);
    r.read(doc, "", "seed", cfg.seed);
    r.read(doc, "", "runs", cfg.runs);
    r.read(doc, "", "telemetry_interval", cfg.telemetry_interval);

    double duration = cfg.duration.seconds();
    r.read(doc, "", "duration", duration);
    if (!std::isfinite(duration) || duration < 0.0) {
        r.fail("duration", "must be a finite number of seconds >= 0");
    } else {
        cfg.duration = SimTime::from_seconds(duration);
    }

    if (const auto it = doc.find("medium"); it != doc.end()) {
        if (!it->is_object()) {
            r.fail("medium", "expected an object");
        } else {
            r.check_keys(*it, "medium.",
                         {"range", "delay", "drop_probability", "collision_model",
                          "transmission_duration"});
            r.read(*it, "medium.", "range", cfg.medium.range);
            r.read(*it, "medium.", "delay", cfg.medium.delay);
            r.read(*it, "medium.", "drop_probability", cfg.medium.drop_probability);
            r.read(*it, "medium.", "collision_model", cfg.medium.collision_model);
            r.read(*it, "medium.", "transmission_duration", cfg.medium.transmission_duration);
        }
    }

    if (const auto it = doc.find("zigzag"); it != doc.end()) {
        if (!it->is_object()) {
            r.fail("zigzag", "expected an object");
        } else {
            r.check_keys(*it, "zigzag.",
                         {"heartbeat_interval", "interaction_timeout", "offset_mode",
                          "pair_confirm_deadline"});
            r.read(*it, "zigzag.", "heartbeat_interval", cfg.zigzag.heartbeat_interval);
            r.read(*it, "zigzag.", "interaction_timeout", cfg.zigzag.interaction_timeout);
            r.read(*it, "zigzag.", "pair_confirm_deadline", cfg.zigzag.pair_confirm_deadline);
            std::string mode = cfg.zigzag.offset_mode == zigzag::OffsetMode::random ? "random" : "zero";
            r.read(*it, "zigzag.", "offset_mode", mode);
            if (mode == "random") {
                cfg.zigzag.offset_mode = zigzag::OffsetMode::random;
            } else if (mode == "zero") {
                cfg.zigzag.offset_mode = zigzag::OffsetMode::zero;
            } else {
                r.fail("zigzag.offset_mode", "expected \"random\" or \"zero\"");
            }
        }
    }

    if (const auto it = doc.find("geo_reference"); it != doc.end()) {
        if (it->is_null()) {
            cfg.geo_reference.reset();
        } else if (!it->is_object()) {
            r.fail("geo_reference", "expected an object or null");
        } else {
            r.check_keys(*it, "geo_reference.", {"latitude", "longitude", "altitude"});
            GeoPosition g = cfg.geo_reference.value_or(GeoPosition{});
            r.read(*it, "geo_reference.", "latitude", g.latitude);
            r.read(*it, "geo_reference.", "longitude", g.longitude);
            r.read(*it, "geo_reference.", "altitude", g.altitude);
            cfg.geo_reference = g;
        }
    }

    auto semantic = validate_config(cfg);
    issues.insert(issues.end(), semantic.begin(), semantic.end());
    if (!issues.empty()) {
        throw ConfigError(std::move(issues));
    }
    return cfg;
}

ScenarioConfig load_config_file(const std::filesystem::path& path, ScenarioConfig base) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(std::vector<FieldIssue>{{"<file>", "cannot read " + path.string()}});
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), std::move(base));
}

std::string to_json_text(const ScenarioConfig& cfg) {
    json doc{
        {"preset", cfg.preset},
        {"sensor_count", cfg.sensor_count},
        {"uav_count", cfg.uav_count},
        {"sensor_spacing", cfg.sensor_spacing},
        {"uav_speed", cfg.uav_speed},
        {"uav_altitude", cfg.uav_altitude},
        {"stagger_interval", cfg.stagger_interval},
        {"duration", cfg.duration.seconds()},
        {"seed", cfg.seed},
        {"runs", cfg.runs},
        {"telemetry_interval", cfg.telemetry_interval},
        {"medium",
         {{"range", cfg.medium.range},
          {"delay", cfg.medium.delay},
          {"drop_probability", cfg.medium.drop_probability},
          {"collision_model", cfg.medium.collision_model},
          {"transmission_duration", cfg.medium.transmission_duration}}},
        {"zigzag",
         {{"heartbeat_interval", cfg.zigzag.heartbeat_interval},
          {"interaction_timeout", cfg.zigzag.interaction_timeout},
          {"offset_mode", cfg.zigzag.offset_mode == zigzag::OffsetMode::random ? "random" : "zero"},
          {"pair_confirm_deadline", cfg.zigzag.pair_confirm_deadline}}},
    };
    if (cfg.geo_reference) {
        doc["geo_reference"] = {{"latitude", cfg.geo_reference->latitude},
                                {"longitude", cfg.geo_reference->longitude},
                                {"altitude", cfg.geo_reference->altitude}};
    }
    return doc.dump(2);
}

}  // namespace swarmsim::harness
