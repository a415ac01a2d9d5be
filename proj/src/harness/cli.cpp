#include "swarmsim/harness/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "swarmsim/harness/config.hpp"
#include "swarmsim/harness/experiment.hpp"
#include "swarmsim/harness/telemetry_server.hpp"

namespace swarmsim::harness {

namespace {

struct RunFlags {
    std::optional<std::string> config;
    std::optional<std::string> preset;
    std::optional<int> runs;
    std::optional<std::uint64_t> seed;
    std::optional<double> duration;
    std::optional<std::string> out;
    std::optional<int> telemetry_port;
    std::string mode = "fast";
    std::optional<std::string> collision;
    std::optional<std::string> offset_mode;
    std::optional<double> interaction_timeout;
    std::optional<std::string> record;
};

struct ReplayFlags {
    std::string input;
    std::optional<int> telemetry_port;
    double rate = 10.0;
    int wait_clients = 0;
    double wait_timeout = 30.0;
};

std::optional<std::string> env(const char* name) {
    const char* v = std::getenv(name);
    if (v == nullptr || *v == '\0') {
        return std::nullopt;
    }
    return std::string(v);
}

void print_issues(std::ostream& err, const ConfigError& e) {
    err << "config error:\n";
    for (const auto& issue : e.issues()) {
        err << "  " << issue.field << ": " << issue.message << '\n';
    }
}

ScenarioConfig resolve_config(const RunFlags& f) {
    ScenarioConfig cfg = f.preset ? preset_config(*f.preset) : ScenarioConfig{};
    if (f.config) {
        cfg = load_config_file(*f.config, cfg);
    }
    if (f.runs) {
        cfg.runs = *f.runs;
    }
    if (f.seed) {
        cfg.seed = *f.seed;
    }
    if (f.duration) {
        if (!(*f.duration >= 0.0) || !std::isfinite(*f.duration)) {
            throw ConfigError(std::vector<FieldIssue>{{"duration", "must be a finite number of seconds >= 0"}});
        }
        cfg.duration = SimTime::from_seconds(*f.duration);
    }
    if (f.collision) {
        cfg.medium.collision_model = *f.collision == "on";
    }
    if (f.offset_mode) {
        cfg.zigzag.offset_mode =
            *f.offset_mode == "zero" ? zigzag::OffsetMode::zero : zigzag::OffsetMode::random;
    }
    if (f.interaction_timeout) {
        cfg.zigzag.interaction_timeout = *f.interaction_timeout;
    }
    require_valid(cfg);
    return cfg;
}

int do_run(const RunFlags& flags, std::ostream& out, std::ostream& err) {
    ScenarioConfig cfg;
    try {
        cfg = resolve_config(flags);
    } catch (const ConfigError& e) {
        print_issues(err, e);
        return exit_config_error;
    }

    const std::string out_dir = env("SWARMSIM_OUT").value_or(flags.out.value_or("results"));
    std::optional<int> port = flags.telemetry_port;
    if (const auto p = env("SWARMSIM_TELEMETRY_PORT")) {
        try {
            port = std::stoi(*p);
        } catch (const std::exception&) {
            err << "config error:\n  SWARMSIM_TELEMETRY_PORT: not an integer\n";
            return exit_config_error;
        }
    }
    if (port && (*port < 0 || *port > 65535)) {
        err << "config error:\n  telemetry-port: must be in [0, 65535]\n";
        return exit_config_error;
    }

    try {
        RunOptions options;
        options.pacing = flags.mode == "real-time" ? PacingMode::real_time : PacingMode::fast;

        std::unique_ptr<TelemetryServer> server;
        if (port) {
            server = std::make_unique<TelemetryServer>(static_cast<std::uint16_t>(*port));
            options.sink = server.get();
            out << "telemetry: ws://127.0.0.1:" << server->port() << "/\n";
        }
        std::ofstream record;
        if (flags.record) {
            record.open(*flags.record);
            if (!record) {
                err << "cannot open " << *flags.record << " for writing\n";
                return exit_runtime_failure;
            }
            options.frame_log = &record;
        }

        const auto result = run_experiment(cfg, options, std::filesystem::path(out_dir),
                                           [&](const RunResult& r) {
                                               out << "run " << r.series.run_id << " seed "
                                                   << r.series.seed << ": gs_collected "
                                                   << r.final_gs_collected() << ", "
                                                   << r.stats.events_processed << " events, "
                                                   << r.stats.wall_seconds << " s wall\n";
                                           });
        out << "runs: " << result.runs.size() << '\n';
        out << "average final gs_collected: "
            << (result.average.empty() ? 0.0 : result.average.back().gs_collected) << '\n';
        out << "total wall-clock: " << result.wall_seconds << " s\n";
        out << "output: " << out_dir << '\n';
        if (server) {
            server->stop();
        }
    } catch (const ConfigError& e) {
        print_issues(err, e);
        return exit_config_error;
    } catch (const PortInUse& e) {
        err << e.what() << '\n';
        return exit_runtime_failure;
    } catch (const std::exception& e) {
        err << "run failed: " << e.what() << '\n';
        return exit_runtime_failure;
    }
    return exit_ok;
}

int do_validate(const RunFlags& flags, std::ostream& out, std::ostream& err) {
    try {
        const ScenarioConfig cfg = resolve_config(flags);
        out << to_json_text(cfg) << '\n';
        return exit_ok;
    } catch (const ConfigError& e) {
        print_issues(err, e);
        return exit_config_error;
    }
}

int do_replay(const ReplayFlags& flags, std::ostream& out, std::ostream& err) {
    std::ifstream in(flags.input);
    if (!in) {
        err << "cannot open " << flags.input << '\n';
        return exit_runtime_failure;
    }
    std::optional<int> port = flags.telemetry_port;
    if (const auto p = env("SWARMSIM_TELEMETRY_PORT")) {
        port = std::atoi(p->c_str());
    }
    try {
        std::unique_ptr<TelemetryServer> server;
        if (port) {
            server = std::make_unique<TelemetryServer>(static_cast<std::uint16_t>(*port));
            out << "telemetry: ws://127.0.0.1:" << server->port() << "/\n" << std::flush;
            if (flags.wait_clients > 0) {
                const auto timeout = std::chrono::milliseconds(
                    static_cast<long long>(flags.wait_timeout * 1000.0));
                server->wait_for_clients(static_cast<std::size_t>(flags.wait_clients), timeout);
            }
        }
        const auto period = flags.rate > 0.0
                                ? std::chrono::duration<double>(1.0 / flags.rate)
                                : std::chrono::duration<double>(0.0);
        auto next = std::chrono::steady_clock::now();
        std::string line;
        std::size_t n = 0;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) {
                continue;
            }
            const auto problems = frame_schema_problems(line);
            if (!problems.empty()) {
                err << flags.input << ":" << lineno << ": " << problems.front() << '\n';
                return exit_runtime_failure;
            }
            if (server) {
                std::this_thread::sleep_until(next);
                next += std::chrono::duration_cast<std::chrono::steady_clock::duration>(period);
                server->publish_text(line);
            } else {
                out << line << '\n';
            }
            ++n;
        }
        if (server) {
            server->stop();
            out << "replayed " << n << " frames\n";
        }
    } catch (const std::exception& e) {
        err << "replay failed: " << e.what() << '\n';
        return exit_runtime_failure;
    }
    return exit_ok;
}

void add_config_flags(CLI::App& cmd, RunFlags& f) {
    cmd.add_option("--config", f.config, "JSON scenario file")->check(CLI::ExistingFile);
    cmd.add_option("--preset", f.preset, "Built-in scenario")
        ->check(CLI::IsMember({"small", "medium", "large"}));
    cmd.add_option("--runs", f.runs, "Independent runs (seeds seed, seed+1, ...)");
    cmd.add_option("--seed", f.seed, "Seed of run 0");
    cmd.add_option("--duration", f.duration, "Simulated seconds per run");
    cmd.add_option("--collision", f.collision, "Collision-window medium model")
        ->check(CLI::IsMember({"on", "off"}));
    cmd.add_option("--offset-mode", f.offset_mode, "Heartbeat start offsets")
        ->check(CLI::IsMember({"random", "zero"}));
    cmd.add_option("--interaction-timeout", f.interaction_timeout,
                   "Seconds a UAV ignores others after a pairing");
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Discrete-event swarm simulator with the ZigZag data-ferrying protocol"};
    app.name("swarmsim");
    app.require_subcommand(1);

    RunFlags run_flags;
    auto* run = app.add_subcommand("run", "Run an experiment and write CSV results");
    add_config_flags(*run, run_flags);
    run->add_option("--out", run_flags.out, "Output directory (default results)");
    run->add_option("--telemetry-port", run_flags.telemetry_port,
                    "Serve telemetry frames over WebSocket on this port (0 = any)");
    run->add_option("--mode", run_flags.mode, "Pacing")
        ->check(CLI::IsMember({"fast", "real-time"}));
    run->add_option("--record", run_flags.record, "Write telemetry frames to this file");

    RunFlags validate_flags;
    auto* validate = app.add_subcommand("validate", "Check a configuration and print it resolved");
    add_config_flags(*validate, validate_flags);

    ReplayFlags replay_flags;
    auto* replay = app.add_subcommand("replay", "Re-emit recorded telemetry frames");
    replay->add_option("--input", replay_flags.input, "File written by run --record")
        ->required()
        ->check(CLI::ExistingFile);
    replay->add_option("--telemetry-port", replay_flags.telemetry_port,
                       "Serve frames on this port; without it frames go to stdout");
    replay->add_option("--rate", replay_flags.rate, "Frames per second (0 = unthrottled)");
    replay->add_option("--wait-clients", replay_flags.wait_clients,
                       "Wait for this many clients before replaying");
    replay->add_option("--wait-timeout", replay_flags.wait_timeout, "Seconds to wait for clients");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? exit_ok : exit_config_error;
    }

    if (*run) {
        return do_run(run_flags, out, err);
    }
    if (*validate) {
        return do_validate(validate_flags, out, err);
    }
    return do_replay(replay_flags, out, err);
}

int cli_main(int argc, const char* const* argv) {
    return cli_main(argc, argv, std::cout, std::cerr);
}

}  // namespace swarmsim::harness
