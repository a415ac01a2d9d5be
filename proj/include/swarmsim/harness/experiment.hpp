#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "swarmsim/harness/config.hpp"
#include "swarmsim/harness/telemetry.hpp"

namespace swarmsim::harness {

struct MetricSample {
    SimTime sim_time;
    std::uint64_t gs_collected = 0;
    double wall_time = 0.0;  // seconds since the run started
};

struct MetricSeries {
    int run_id = 0;
    std::uint64_t seed = 0;
    std::vector<MetricSample> samples;
};

/// A PAIR_CONFIRM leaving @p responder for @p requester: the instant a
/// pairing commits.
struct Pairing {
    SimTime at;
    NodeId responder;
    NodeId requester;
};

struct RunResult {
    MetricSeries series;
    RunStats stats;
    std::uint64_t sensor_deliveries = 0;  // SENSOR_DATA handed to UAVs
    std::uint64_t conservation_checks = 0;
    std::uint64_t conservation_violations = 0;
    std::vector<Pairing> pairings;

    [[nodiscard]] std::uint64_t final_gs_collected() const {
        return series.samples.empty() ? 0 : series.samples.back().gs_collected;
    }
};

struct AggregateSample {
    SimTime sim_time;
    double gs_collected = 0.0;
    double wall_time = 0.0;
};

struct ExperimentResult {
    std::vector<RunResult> runs;
    std::vector<AggregateSample> average;
    double wall_seconds = 0.0;
};

struct RunOptions {
    PacingMode pacing = PacingMode::fast;
    /// Frames go here when set (e.g. a TelemetryServer).
    FrameSink* sink = nullptr;
    /// When set, frames are also written one JSON document per line.
    std::ostream* frame_log = nullptr;
    /// Observer called with every captured frame, on the simulation thread.
    std::function<void(const Simulation&, const TelemetryFrame&)> on_frame;
};

/// One simulation with seed cfg.seed + run_index. Samples gs_collected and
/// wall time at every telemetry interval from t = 0 to the duration, and
/// checks data conservation at each sample.
RunResult run_single(const ScenarioConfig& cfg, int run_index, const RunOptions& options = {});

/// cfg.runs independent runs plus their per-sample mean. With @p out_dir,
/// run_<i>.csv is written as each run finishes and average.csv plus
/// summary.json at the end; if a run throws, the files for the completed
/// runs are still written before the exception propagates.
ExperimentResult run_experiment(const ScenarioConfig& cfg, const RunOptions& options = {},
                                const std::optional<std::filesystem::path>& out_dir = std::nullopt,
                                const std::function<void(const RunResult&)>& on_run = {});

/// Mean across runs per sample index. All series must share sample times.
/// @throws std::invalid_argument on mismatched series.
std::vector<AggregateSample> average_series(std::span<const MetricSeries> series);

/// Header: run,seed,sim_time,gs_collected,wall_time
void write_run_csv(std::ostream& out, const MetricSeries& series);
/// Header: runs,sim_time,gs_collected,wall_time
void write_average_csv(std::ostream& out, std::span<const AggregateSample> average, int runs);

}  // namespace swarmsim::harness
