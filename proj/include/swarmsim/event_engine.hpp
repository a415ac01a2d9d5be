#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "swarmsim/rng.hpp"
#include "swarmsim/sim_time.hpp"
#include "swarmsim/types.hpp"

namespace swarmsim {

class SchedulingInPast : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class ReentrantRun : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// What a scheduled event represents. Used for tracing only; the engine
/// itself just runs the attached action.
enum class EventKind : std::uint8_t {
    internal,
    timer,
    delivery,
    mobility,
    launch,
    telemetry,
    sample,
};

/// Token for a pending event. A default-constructed handle refers to nothing.
struct EventHandle {
    std::uint64_t id = 0;

    [[nodiscard]] constexpr bool valid() const noexcept { return id != 0; }
    constexpr bool operator==(const EventHandle&) const noexcept = default;
};

struct ScheduledEvent {
    SimTime fire_time;
    std::uint64_t sequence = 0;
    std::optional<NodeId> target;  // empty for engine-internal events
    EventKind kind = EventKind::internal;
    std::function<void()> action;
};

struct TraceEntry {
    SimTime time;
    std::uint64_t sequence = 0;
    EventKind kind = EventKind::internal;
    std::optional<NodeId> target;

    bool operator==(const TraceEntry&) const = default;
};

struct RunStats {
    std::uint64_t events_processed = 0;
    SimTime final_time;
    double wall_seconds = 0.0;
};

enum class PacingMode : std::uint8_t {
    fast,       // run as fast as possible
    real_time,  // sleep so that simulated time tracks wall-clock time
};

/// Single-threaded discrete-event scheduler.
///
/// Events fire in lexicographic (fire_time, sequence) order, where the
/// sequence is the insertion counter, so same-time events run FIFO. The
/// engine also owns the one random stream of the simulation; anything
/// that needs randomness draws from rng() while handling an event.
class EventEngine {
public:
    explicit EventEngine(std::uint64_t seed = 0, PacingMode pacing = PacingMode::fast);

    EventEngine(const EventEngine&) = delete;
    EventEngine& operator=(const EventEngine&) = delete;
    EventEngine(EventEngine&&) noexcept = default;
    EventEngine& operator=(EventEngine&&) noexcept = default;

    /// @throws SchedulingInPast if @p at is earlier than now().
    EventHandle schedule(SimTime at, std::function<void()> action,
                         EventKind kind = EventKind::internal,
                         std::optional<NodeId> target = std::nullopt);

    /// True iff the event was pending; it will then never fire.
    bool cancel(EventHandle handle);

    [[nodiscard]] bool is_pending(EventHandle handle) const {
        return pending_.contains(handle.id);
    }

    /// Processes every event with fire_time <= limit, including events
    /// scheduled along the way. On return now() == limit.
    /// @throws ReentrantRun when called from inside an event action.
    RunStats run_until(SimTime limit);

    [[nodiscard]] SimTime now() const noexcept { return now_; }
    [[nodiscard]] bool running() const noexcept { return running_; }
    [[nodiscard]] std::size_t pending_count() const noexcept { return pending_.size(); }

    Rng& rng() noexcept { return rng_; }

    /// Records a TraceEntry for every fired event while enabled.
    void enable_trace(bool on) { tracing_ = on; }
    [[nodiscard]] const std::vector<TraceEntry>& trace() const noexcept { return trace_; }

private:
    struct Later {
        bool operator()(const ScheduledEvent& a, const ScheduledEvent& b) const noexcept {
            if (a.fire_time != b.fire_time) {
                return a.fire_time > b.fire_time;
            }
            return a.sequence > b.sequence;
        }
    };

    void pace_to(SimTime t, SimTime run_start_sim, double run_start_wall) const;

    std::vector<ScheduledEvent> heap_;
    std::unordered_set<std::uint64_t> pending_;
    std::uint64_t next_sequence_ = 1;
    SimTime now_;
    bool running_ = false;
    PacingMode pacing_;
    Rng rng_;
    bool tracing_ = false;
    std::vector<TraceEntry> trace_;
};

}  // namespace swarmsim
