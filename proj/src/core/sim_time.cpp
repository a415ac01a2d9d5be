#include "swarmsim/sim_time.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace swarmsim {

SimTime SimTime::from_nanos(std::int64_t ns) {
    if (ns < 0) {
        throw std::invalid_argument("SimTime cannot be negative");
    }
    return SimTime{ns};
}

SimTime SimTime::from_seconds(double s) {
    if (!std::isfinite(s) || s < 0.0) {
        throw std::invalid_argument("SimTime requires a finite non-negative number of seconds");
    }
    const double ns = std::round(s * 1e9);
    if (ns >= static_cast<double>(std::numeric_limits<std::int64_t>::max())) {
        throw std::invalid_argument("SimTime out of range");
    }
    return SimTime{static_cast<std::int64_t>(ns)};
}

SimTime& SimTime::operator+=(SimTime d) {
    if (d.ns_ > std::numeric_limits<std::int64_t>::max() - ns_) {
        throw std::overflow_error("SimTime overflow");
    }
    ns_ += d.ns_;
    return *this;
}

std::string SimTime::to_string() const {
    std::string out = std::to_string(ns_ / 1'000'000'000);
    std::int64_t frac = ns_ % 1'000'000'000;
    if (frac == 0) {
        return out;
    }
    std::string digits = std::to_string(frac);
    digits.insert(0, 9 - digits.size(), '0');
    while (digits.back() == '0') {
        digits.pop_back();
    }
    return out + "." + digits;
}

SimTime operator+(SimTime a, SimTime b) {
    a += b;
    return a;
}

SimTime operator-(SimTime a, SimTime b) {
    if (b > a) {
        throw std::invalid_argument("SimTime subtraction would go negative");
    }
    return SimTime::from_nanos(a.nanos() - b.nanos());
}

std::ostream& operator<<(std::ostream& os, SimTime t) {
    return os << t.to_string() << 's';
}

}  // namespace swarmsim
