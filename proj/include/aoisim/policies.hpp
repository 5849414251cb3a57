#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "aoisim/model.hpp"

namespace aoisim {

// Energy-dependent thresholds for B=2: update at age x1 with one unit
// stored, at age lambda with a full battery.
struct ThresholdB2Params {
    double lambda = 0.0;
    double x1 = 0.0;
};

// Single age threshold for B=1.
struct SingleThresholdParams {
    double threshold = 0.0;
};

// One age threshold per energy level 1..B. Monotone (nonincreasing) vectors
// mirror the proven B=2 structure; violations only warn, since nothing is
// proven for B>=3.
struct GeneralThresholdParams {
    std::vector<double> thresholds;
};

// Best-effort periodic updates: fire at each grid slot if energy allows.
struct UniformParams {
    double period = 1.0;
};

// Adaptive slotted baseline: the period stretches to 1/(1-beta) below half
// capacity, shrinks to 1/(1+beta) above it, with beta = z log(B)/B.
// battery_capacity == 0 means "inherit from the simulation parameters".
struct EnergyAwareParams {
    int z = 0;
    int battery_capacity = 0;
    bool restart_on_delivery = false;  // alternative clock reading, see README
};

using PolicySpec = std::variant<ThresholdB2Params, SingleThresholdParams,
                                GeneralThresholdParams, UniformParams, EnergyAwareParams>;

struct PolicyDecision {
    // Absolute fire time; empty means wait for the next energy arrival.
    std::optional<double> update_at;

    static PolicyDecision wait() { return PolicyDecision{}; }
    static PolicyDecision at(double t) { return PolicyDecision{t}; }
    bool waiting() const { return !update_at.has_value(); }
};

PolicyDecision decide_threshold_b2(const SensorState& state, const ThresholdB2Params& params,
                                   int battery_capacity);
PolicyDecision decide_single_threshold(const SensorState& state,
                                       const SingleThresholdParams& params,
                                       int battery_capacity);
PolicyDecision decide_general_threshold(const SensorState& state,
                                        const GeneralThresholdParams& params,
                                        int battery_capacity);

double energy_aware_beta(int z, int battery_capacity);  // throws past beta >= 1
double energy_aware_period(int energy, int battery_capacity, double beta);
PolicyDecision decide_energy_aware(const SensorState& state, const EnergyAwareParams& params,
                                   int battery_capacity, double anchor_time);

std::string policy_name(const PolicySpec& spec);

// Event-driven policy evaluator. The engine re-queries decide() after every
// arrival and every fired update; slot-based policies additionally get
// on_slot() when their scheduled instant passes (delivered or silent).
class PolicyRuntime {
public:
    virtual ~PolicyRuntime() = default;
    virtual PolicyDecision decide(const SensorState& state) = 0;
    virtual const char* name() const = 0;

    // Slot policies keep their own clock and never report wait-for-energy;
    // an empty battery at the slot is a silent skip.
    virtual bool slot_based() const { return false; }
    virtual void on_slot(const SensorState& /*state*/) {}

    // Whether epochs relative to the just-updated empty state are renewal
    // cycles worth recording (true for threshold policies).
    virtual bool renewal_epochs() const { return false; }
};

// Validates the spec against the system and builds the evaluator. Capacity
// and length mismatches throw IncompatibleError; beta >= 1 throws
// std::domain_error. Non-fatal findings go to `warnings` when given.
std::unique_ptr<PolicyRuntime> make_policy_runtime(const PolicySpec& spec,
                                                   const SystemParams& params,
                                                   std::string* warnings = nullptr);

}  // namespace aoisim
