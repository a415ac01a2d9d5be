#include "swarmsim/plugins/mission.hpp"

#include <algorithm>

namespace swarmsim::plugins {

Mission::Mission(LoopPolicy policy, double arrival_tolerance)
    : policy_(policy), tolerance_(arrival_tolerance) {
    if (!(arrival_tolerance >= 0.0)) {
        throw std::invalid_argument("arrival tolerance must be >= 0");
    }
}

void Mission::start(std::vector<Position> waypoints, Provider& provider,
                    std::optional<Position> current) {
    if (waypoints.empty()) {
        throw EmptyMission("a mission needs at least one waypoint");
    }
    waypoints_ = std::move(waypoints);
    index_ = 0;
    direction_ = Direction::forward;
    complete_ = false;
    head_to_current(provider);
    if (current && distance(*current, waypoints_[0]) <= tolerance_) {
        advance(provider);
    }
}

bool Mission::on_telemetry(const Position& position, Provider& provider) {
    if (!started() || complete_) {
        return false;
    }
    if (distance(position, waypoints_[index_]) > tolerance_) {
        return false;
    }
    advance(provider);
    return true;
}

void Mission::advance(Provider& provider) {
    const std::size_t last = waypoints_.size() - 1;
    if (last == 0) {
        complete_ = true;
        return;
    }
    const bool at_end = direction_ == Direction::forward ? index_ == last : index_ == 0;
    if (at_end) {
        if (policy_ == LoopPolicy::stop) {
            complete_ = true;
            return;
        }
        direction_ = opposite(direction_);
    }
    index_ = direction_ == Direction::forward ? index_ + 1 : index_ - 1;
    head_to_current(provider);
}

void Mission::reverse(Provider& provider) {
    if (!started()) {
        throw MissionNotStarted("reverse() before start()");
    }
    direction_ = opposite(direction_);
    complete_ = false;
    const std::size_t last = waypoints_.size() - 1;
    if (direction_ == Direction::forward) {
        index_ = std::min(index_ + 1, last);
    } else if (index_ > 0) {
        --index_;
    }
    head_to_current(provider);
}

void Mission::set_direction(Direction d, Provider& provider) {
    if (!started()) {
        throw MissionNotStarted("set_direction() before start()");
    }
    if (d != direction_) {
        reverse(provider);
    }
}

std::optional<std::size_t> Mission::previous_index() const {
    if (direction_ == Direction::forward) {
        return index_ > 0 ? std::optional(index_ - 1) : std::nullopt;
    }
    return index_ + 1 < waypoints_.size() ? std::optional(index_ + 1) : std::nullopt;
}

double Mission::progress(const Position& position) const {
    if (!started()) {
        return 0.0;
    }
    const auto prev = previous_index();
    if (!prev) {
        return static_cast<double>(index_);
    }
    const double leg = distance(waypoints_[*prev], waypoints_[index_]);
    const double remaining = distance(position, waypoints_[index_]);
    const double done = leg > 0.0 ? std::clamp(1.0 - remaining / leg, 0.0, 1.0) : 1.0;
    const double from = static_cast<double>(*prev);
    const double to = static_cast<double>(index_);
    return from + (to - from) * done;
}

void Mission::head_to_current(Provider& provider) const {
    provider.send_command(MobilityCommand{GotoCoords{waypoints_[index_]}});
}

}  // namespace swarmsim::plugins
