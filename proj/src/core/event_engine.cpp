#include "swarmsim/event_engine.hpp"

#include <algorithm>
#include <chrono>
#include <thread>

namespace swarmsim {

namespace {

double wall_now() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

// Clears the running flag even if an event action throws.
struct RunningGuard {
    bool& flag;
    explicit RunningGuard(bool& f) : flag(f) { flag = true; }
    ~RunningGuard() { flag = false; }
};

}  // namespace

EventEngine::EventEngine(std::uint64_t seed, PacingMode pacing) : pacing_(pacing), rng_(seed) {}

EventHandle EventEngine::schedule(SimTime at, std::function<void()> action, EventKind kind,
                                  std::optional<NodeId> target) {
    if (at < now_) {
        throw SchedulingInPast("event at " + at.to_string() + "s scheduled when now is " +
                               now_.to_string() + "s");
    }
    const std::uint64_t seq = next_sequence_++;
    heap_.push_back(ScheduledEvent{at, seq, target, kind, std::move(action)});
    std::push_heap(heap_.begin(), heap_.end(), Later{});
    pending_.insert(seq);
    return EventHandle{seq};
}

bool EventEngine::cancel(EventHandle handle) {
    // The heap entry stays behind and is skipped when popped.
    return pending_.erase(handle.id) > 0;
}

void EventEngine::pace_to(SimTime t, SimTime run_start_sim, double run_start_wall) const {
    if (pacing_ != PacingMode::real_time) {
        return;
    }
    const double target_wall = run_start_wall + seconds_between(run_start_sim, t);
    const double wait = target_wall - wall_now();
    if (wait > 0.0) {
        std::this_thread::sleep_for(std::chrono::duration<double>(wait));
    }
}

RunStats EventEngine::run_until(SimTime limit) {
    if (running_) {
        throw ReentrantRun("run_until called from inside an event");
    }
    RunningGuard guard(running_);
    const double wall_start = wall_now();
    const SimTime sim_start = now_;
    RunStats stats;

    while (!heap_.empty() && heap_.front().fire_time <= limit) {
        std::pop_heap(heap_.begin(), heap_.end(), Later{});
        ScheduledEvent ev = std::move(heap_.back());
        heap_.pop_back();
        if (pending_.erase(ev.sequence) == 0) {
            continue;  // cancelled
        }
        pace_to(ev.fire_time, sim_start, wall_start);
        now_ = ev.fire_time;
        if (tracing_) {
            trace_.push_back(TraceEntry{ev.fire_time, ev.sequence, ev.kind, ev.target});
        }
        ++stats.events_processed;
        ev.action();
    }

    if (limit > now_) {
        pace_to(limit, sim_start, wall_start);
        now_ = limit;
    }
    stats.final_time = now_;
    stats.wall_seconds = wall_now() - wall_start;
    return stats;
}

}  // namespace swarmsim
