#include "swarmsim/harness/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "swarmsim/harness/scenario.hpp"
#include "swarmsim/zigzag/message.hpp"

namespace swarmsim::harness {

namespace {

using clock_type = std::chrono::steady_clock;

// Frame cadence in real-time mode: 10 frames per wall-clock second.
const SimTime real_time_frame_period = SimTime::from_seconds(0.1);

double tracked_number(const TrackedVariables& vars, const char* name) {
    const auto it = vars.find(name);
    if (it == vars.end()) {
        return 0.0;
    }
    const double* v = std::get_if<double>(&it->second);
    return v ? *v : 0.0;
}

std::string fixed(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

RunResult run_single(const ScenarioConfig& cfg, int run_index, const RunOptions& options) {
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(run_index);
    Scenario scenario = build_scenario(cfg, seed, options.pacing);
    Simulation& sim = *scenario.sim;

    RunResult result;
    result.series.run_id = run_index;
    result.series.seed = seed;

    sim.set_delivery_observer([&](NodeId receiver, std::span<const std::uint8_t> payload) {
        const auto m = zigzag::decode(payload);
        if (m && m->kind == zigzag::MessageKind::sensor_data && sim.role_of(receiver) == "uav") {
            result.sensor_deliveries += m->data_count;
        }
    });
    sim.set_transmission_observer([&](NodeId sender, const CommunicationCommand& cmd) {
        const auto* send = std::get_if<SendMessage>(&cmd);
        if (send == nullptr) {
            return;
        }
        const auto m = zigzag::decode(send->payload);
        if (m && m->kind == zigzag::MessageKind::pair_confirm) {
            result.pairings.push_back(Pairing{sim.now(), sender, send->target});
        }
    });

    const bool want_frames = options.sink || options.frame_log || options.on_frame;
    auto emit_frame = [&] {
        const TelemetryFrame frame = capture_frame(sim);
        if (options.on_frame) {
            options.on_frame(sim, frame);
        }
        if (options.sink) {
            options.sink->publish(frame);
        }
        if (options.frame_log) {
            *options.frame_log << to_json_text(frame) << '\n';
        }
    };

    const auto wall_start = clock_type::now();
    const std::int64_t period = SimTime::from_seconds(cfg.telemetry_interval).nanos();
    const SimTime duration = cfg.duration;
    const bool frames_on_samples = want_frames && options.pacing == PacingMode::fast;

    std::function<void(std::int64_t)> sample = [&](std::int64_t k) {
        MetricSample s;
        s.sim_time = sim.now();
        s.gs_collected = static_cast<std::uint64_t>(
            tracked_number(sim.tracked_variables(scenario.ground_station), "collected"));
        s.wall_time = std::chrono::duration<double>(clock_type::now() - wall_start).count();
        result.series.samples.push_back(s);

        double held = static_cast<double>(s.gs_collected);
        for (NodeId u : scenario.uavs) {
            held += tracked_number(sim.tracked_variables(u), "data_count");
        }
        ++result.conservation_checks;
        if (held != static_cast<double>(result.sensor_deliveries)) {
            ++result.conservation_violations;
        }
        if (frames_on_samples) {
            emit_frame();
        }

        const SimTime next = SimTime::from_nanos((k + 1) * period);
        if (next <= duration) {
            sim.engine().schedule(next, [&sample, k] { sample(k + 1); }, EventKind::sample);
        }
    };
    sim.engine().schedule(SimTime::zero(), [&sample] { sample(0); }, EventKind::sample);

    std::function<void()> frame_tick = [&] {
        emit_frame();
        const SimTime next = sim.now() + real_time_frame_period;
        if (next <= duration) {
            sim.engine().schedule(next, frame_tick, EventKind::internal);
        }
    };
    if (want_frames && !frames_on_samples) {
        sim.engine().schedule(SimTime::zero(), frame_tick, EventKind::internal);
    }

    result.stats = sim.run_until(duration);
    sim.finish();
    return result;
}

std::vector<AggregateSample> average_series(std::span<const MetricSeries> series) {
    std::vector<AggregateSample> out;
    if (series.empty()) {
        return out;
    }
    const std::size_t n = series.front().samples.size();
    for (const auto& s : series) {
        if (s.samples.size() != n) {
            throw std::invalid_argument("runs have different sample counts");
        }
    }
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const SimTime t = series.front().samples[i].sim_time;
        double gs = 0.0;
        double wall = 0.0;
        for (const auto& s : series) {
            if (s.samples[i].sim_time != t) {
                throw std::invalid_argument("runs are sampled at different times");
            }
            gs += static_cast<double>(s.samples[i].gs_collected);
            wall += s.samples[i].wall_time;
        }
        const double k = static_cast<double>(series.size());
        out[i] = AggregateSample{t, gs / k, wall / k};
    }
    return out;
}

void write_run_csv(std::ostream& out, const MetricSeries& series) {
    out << "run,seed,sim_time,gs_collected,wall_time\n";
    for (const auto& s : series.samples) {
        out << series.run_id << ',' << series.seed << ',' << s.sim_time.to_string() << ','
            << s.gs_collected << ',' << fixed(s.wall_time) << '\n';
    }
}

void write_average_csv(std::ostream& out, std::span<const AggregateSample> average, int runs) {
    out << "runs,sim_time,gs_collected,wall_time\n";
    for (const auto& s : average) {
        out << runs << ',' << s.sim_time.to_string() << ',' << fixed(s.gs_collected) << ','
            << fixed(s.wall_time) << '\n';
    }
}

namespace {

void write_summary(const std::filesystem::path& dir, const ScenarioConfig& cfg,
                   const ExperimentResult& r) {
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& run : r.runs) {
        runs.push_back({{"run", run.series.run_id},
                        {"seed", run.series.seed},
                        {"final_gs_collected", run.final_gs_collected()},
                        {"events_processed", run.stats.events_processed},
                        {"wall_seconds", run.stats.wall_seconds},
                        {"sensor_deliveries", run.sensor_deliveries},
                        {"conservation_violations", run.conservation_violations},
                        {"pairings", run.pairings.size()}});
    }
    nlohmann::json doc{{"preset", cfg.preset},
                       {"runs_requested", cfg.runs},
                       {"runs_completed", r.runs.size()},
                       {"total_wall_seconds", r.wall_seconds},
                       {"final_average_gs_collected",
                        r.average.empty() ? 0.0 : r.average.back().gs_collected},
                       {"runs", std::move(runs)}};
    std::ofstream(dir / "summary.json") << doc.dump(2) << '\n';
}

void write_aggregate(const std::filesystem::path& dir, const ScenarioConfig& cfg,
                     ExperimentResult& r) {
    std::vector<MetricSeries> series;
    for (const auto& run : r.runs) {
        series.push_back(run.series);
    }
    r.average = average_series(series);
    std::ofstream avg(dir / "average.csv");
    write_average_csv(avg, r.average, static_cast<int>(r.runs.size()));
    write_summary(dir, cfg, r);
}

}  // namespace

ExperimentResult run_experiment(const ScenarioConfig& cfg, const RunOptions& options,
                                const std::optional<std::filesystem::path>& out_dir,
                                const std::function<void(const RunResult&)>& on_run) {
    require_valid(cfg);
    if (out_dir) {
        std::filesystem::create_directories(*out_dir);
    }
    ExperimentResult result;
    const auto start = clock_type::now();
    try {
        for (int i = 0; i < cfg.runs; ++i) {
            RunResult run = run_single(cfg, i, options);
            if (out_dir) {
                std::ofstream csv(*out_dir / ("run_" + std::to_string(i) + ".csv"));
                write_run_csv(csv, run.series);
            }
            if (on_run) {
                on_run(run);
            }
            result.runs.push_back(std::move(run));
        }
    } catch (...) {
        result.wall_seconds = std::chrono::duration<double>(clock_type::now() - start).count();
        if (out_dir && !result.runs.empty()) {
            write_aggregate(*out_dir, cfg, result);
        }
        throw;
    }
    result.wall_seconds = std::chrono::duration<double>(clock_type::now() - start).count();
    if (out_dir) {
        write_aggregate(*out_dir, cfg, result);
    } else {
        std::vector<MetricSeries> series;
        for (const auto& run : result.runs) {
            series.push_back(run.series);
        }
        result.average = average_series(series);
    }
    return result;
}

}  // namespace swarmsim::harness
