#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "aoisim/rng.hpp"

namespace aoisim {

// Thrown when a policy cannot run against the configured system (wrong
// battery capacity, threshold vector of the wrong length, bad horizon, ...).
struct IncompatibleError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SystemParams {
    int battery_capacity = 2;       // B, in energy units
    double arrival_rate = 1.0;      // Poisson recharge rate (units per time)
    double horizon = 1e6;           // simulated time T
    std::uint64_t seed = 1;

    void validate() const {
        if (battery_capacity < 1) {
            throw IncompatibleError("battery_capacity must be >= 1");
        }
        if (!(arrival_rate > 0.0)) {
            throw IncompatibleError("arrival_rate must be positive");
        }
        if (!(horizon > 0.0)) {
            throw IncompatibleError("horizon must be positive");
        }
    }
};

// Instantaneous sensor state: stored energy and the age clock. The age is
// now - last_update_time by definition, so it is exposed as a derived value
// rather than stored separately.
struct SensorState {
    int energy = 0;
    double now = 0.0;
    double last_update_time = 0.0;

    double age() const { return now - last_update_time; }
};

inline SensorState make_state(int energy, double age, double now) {
    return SensorState{energy, now, now - age};
}

// Seeded Poisson arrival source. Gaps are sampled by inverse CDF on the
// 53-bit output of a fully specified engine, so identical seeds replay
// identical sequences bit-exactly on any platform.
class ArrivalStream {
public:
    explicit ArrivalStream(std::uint64_t seed, double rate = 1.0)
        : seed_(seed), rate_(rate), engine_(derive_stream_seed(seed, 0)) {
        if (!(rate > 0.0)) {
            throw std::invalid_argument("ArrivalStream rate must be positive");
        }
    }

    // Exponential(rate) inter-arrival gap; always strictly positive.
    double next_interarrival() {
        const std::uint64_t bits = engine_() >> 11;  // top 53 bits
        const double u = (static_cast<double>(bits) + 0.5) * 0x1p-53;
        return -std::log(u) / rate_;
    }

    // Independent reproducible stream derived from this stream's seed.
    ArrivalStream substream(std::uint64_t index) const {
        return ArrivalStream(derive_stream_seed(seed_, index + 1), rate_);
    }

    double rate() const { return rate_; }
    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    double rate_;
    std::mt19937_64 engine_;
};

// Consumes one energy unit and resets the age clock (transmissions are
// instantaneous). Firing with an empty battery is a policy bug, not a
// recoverable condition.
inline void apply_update(SensorState& state) {
    if (state.energy < 1) {
        throw std::logic_error("energy causality violated: update with empty battery");
    }
    --state.energy;
    state.last_update_time = state.now;
}

// One incremental recharge; units beyond the battery capacity are discarded.
// Arrivals never touch the age clock.
inline void apply_arrival(SensorState& state, int battery_capacity) {
    if (state.energy < battery_capacity) {
        ++state.energy;
    }
}

}  // namespace aoisim
