#include "swarmsim/medium.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace swarmsim {

std::vector<std::string> MediumConfig::problems() const {
    std::vector<std::string> out;
    if (!std::isfinite(range) || range < 0.0) {
        out.emplace_back("range: must be a finite number >= 0");
    }
    if (!std::isfinite(delay) || delay < 0.0) {
        out.emplace_back("delay: must be a finite number >= 0");
    }
    if (!(drop_probability >= 0.0 && drop_probability <= 1.0)) {
        out.emplace_back("drop_probability: must be in [0, 1]");
    }
    if (collision_model && (!std::isfinite(transmission_duration) || transmission_duration <= 0.0)) {
        out.emplace_back("transmission_duration: must be > 0 when collision_model is on");
    }
    return out;
}

bool in_range(Position a, Position b, double range) noexcept {
    const Position d = a - b;
    return d.x * d.x + d.y * d.y + d.z * d.z <= range * range;
}

Medium::Medium(MediumConfig config) : config_(config) {
    const auto issues = config_.problems();
    if (!issues.empty()) {
        throw std::invalid_argument("invalid medium config: " + issues.front());
    }
}

std::vector<Delivery> Medium::transmit(const Transmission& t,
                                       std::span<const NodePosition> positions, Rng& rng) const {
    const auto sender = std::find_if(positions.begin(), positions.end(),
                                     [&](const NodePosition& n) { return n.id == t.sender; });
    if (sender == positions.end()) {
        throw UnknownTarget("sender " + std::to_string(t.sender.value) + " is not registered");
    }
    if (t.target) {
        const bool known = std::any_of(positions.begin(), positions.end(),
                                       [&](const NodePosition& n) { return n.id == *t.target; });
        if (!known) {
            throw UnknownTarget("target " + std::to_string(t.target->value) + " is not registered");
        }
    }

    const SimTime arrival = t.sent_at + SimTime::from_seconds(config_.delay);
    std::vector<Delivery> out;
    for (const NodePosition& n : positions) {
        if (n.id == t.sender || (t.target && n.id != *t.target)) {
            continue;
        }
        if (!in_range(sender->position, n.position, config_.range)) {
            continue;
        }
        if (rng.bernoulli(config_.drop_probability)) {
            continue;
        }
        out.push_back(Delivery{n.id, arrival});
    }
    return out;
}

std::vector<std::size_t> resolve_collisions(std::span<const SimTime> arrivals, SimTime duration,
                                            std::span<const SimTime> own_transmissions) {
    std::vector<std::size_t> order(arrivals.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return arrivals[a] < arrivals[b]; });

    std::vector<SimTime> own(own_transmissions.begin(), own_transmissions.end());
    std::sort(own.begin(), own.end());

    const std::int64_t d = duration.nanos();
    // Equal-length windows overlap iff their starts differ by less than d,
    // so only the nearest neighbour on each side needs checking.
    auto overlaps = [d](SimTime a, SimTime b) {
        return std::llabs(a.nanos() - b.nanos()) < d;
    };

    std::vector<std::size_t> survivors;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const SimTime a = arrivals[order[k]];
        bool hit = (k > 0 && overlaps(a, arrivals[order[k - 1]])) ||
                   (k + 1 < order.size() && overlaps(a, arrivals[order[k + 1]]));
        if (!hit && !own.empty()) {
            const auto it = std::lower_bound(own.begin(), own.end(), a);
            hit = (it != own.end() && overlaps(a, *it)) ||
                  (it != own.begin() && overlaps(a, *std::prev(it)));
        }
        if (!hit) {
            survivors.push_back(order[k]);
        }
    }
    std::sort(survivors.begin(), survivors.end());
    return survivors;
}

}  // namespace swarmsim
