#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "aoisim/model.hpp"
#include "aoisim/policies.hpp"

namespace aoisim {

// One renewal epoch between consecutive visits to the just-updated,
// empty-battery state. pattern_index counts the return-path pattern (equal
// to the number of updates in a complete epoch); 0 marks a truncated record.
struct EpochRecord {
    double length = 0.0;
    double area = 0.0;
    int update_count = 0;
    int pattern_index = 0;

    bool truncated() const { return pattern_index == 0; }
};

struct SimResult {
    double average_age = 0.0;   // r(T) / T
    double ci_halfwidth = 0.0;  // 95% halfwidth for average_age
    std::string ci_method;
    long long total_updates = 0;
    long long total_arrivals = 0;
    long long discarded_arrivals = 0;
    long long silent_slots = 0;
    double horizon_used = 0.0;
    std::vector<EpochRecord> epochs;  // complete epochs only
    double residual_length = 0.0;     // horizon minus the last epoch boundary
    double residual_area = 0.0;       // age area not covered by recorded epochs
    double area_total = 0.0;          // r(T), compensated summation
};

struct SimulateOptions {
    std::string* warnings = nullptr;
    // Test hook: called as (fire_time, inter_update_delay) on every update.
    std::function<void(double, double)> update_observer;
};

// Runs the event loop to the horizon and decomposes the path into renewal
// epochs (for threshold policies). Throws IncompatibleError when the policy
// cannot drive the configured system.
SimResult simulate(const SystemParams& params, const PolicySpec& policy,
                   const SimulateOptions& options = {});

// Traces one epoch of the B=2 threshold policy from the renewal state until
// the first return to it. The gap source supplies exp(1) inter-arrival times
// in the per-pattern convention: the arrival clock re-anchors at every
// update (full-battery overflows never surface as draws), which leaves the
// epoch law unchanged by memorylessness.
template <typename GapSource>
EpochRecord trace_epoch(GapSource& gaps, const ThresholdB2Params& policy,
                        long long max_updates = 1'000'000'000LL) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    double now = 0.0;
    double last_update = 0.0;
    double area = 0.0;
    int updates = 0;
    int energy = 0;
    double next_arrival = gaps.next_interarrival();
    double scheduled = kInf;

    while (updates < max_updates) {
        if (next_arrival <= scheduled) {  // arrival first on ties
            now = next_arrival;
            ++energy;
            const double threshold = (energy == 1) ? policy.x1 : policy.lambda;
            scheduled = now + std::max(0.0, threshold - (now - last_update));
            next_arrival = (energy < 2) ? now + gaps.next_interarrival() : kInf;
        } else {
            now = scheduled;
            const double delay = now - last_update;
            area += 0.5 * delay * delay;
            ++updates;
            --energy;
            last_update = now;
            if (energy == 0) {
                return EpochRecord{now, area, updates, updates};
            }
            scheduled = now + policy.x1;
            next_arrival = now + gaps.next_interarrival();
        }
    }
    return EpochRecord{now, area, updates, 0};  // truncated by the safety cap
}

inline EpochRecord simulate_single_epoch(ArrivalStream& stream, const ThresholdB2Params& policy) {
    return trace_epoch(stream, policy);
}

void write_epoch_csv(std::ostream& out, const std::vector<EpochRecord>& epochs);

}  // namespace aoisim
