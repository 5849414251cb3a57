#include "aoisim/policies.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aoisim {

namespace {

PolicyDecision threshold_decision(const SensorState& state, double threshold) {
    if (state.energy < 1) {
        return PolicyDecision::wait();
    }
    return PolicyDecision::at(state.now + std::max(0.0, threshold - state.age()));
}

void require_capacity(int expected, int actual, const char* what) {
    if (expected != actual) {
        throw IncompatibleError(std::string(what) + " requires battery_capacity " +
                                std::to_string(expected) + ", got " + std::to_string(actual));
    }
}

}  // namespace

PolicyDecision decide_threshold_b2(const SensorState& state, const ThresholdB2Params& params,
                                   int battery_capacity) {
    require_capacity(2, battery_capacity, "threshold_b2");
    if (state.energy < 1) {
        return PolicyDecision::wait();
    }
    return threshold_decision(state, state.energy == 1 ? params.x1 : params.lambda);
}

PolicyDecision decide_single_threshold(const SensorState& state,
                                       const SingleThresholdParams& params,
                                       int battery_capacity) {
    require_capacity(1, battery_capacity, "single_threshold");
    return threshold_decision(state, params.threshold);
}

PolicyDecision decide_general_threshold(const SensorState& state,
                                        const GeneralThresholdParams& params,
                                        int battery_capacity) {
    if (static_cast<int>(params.thresholds.size()) != battery_capacity) {
        throw IncompatibleError("general_threshold needs one threshold per energy level");
    }
    if (state.energy < 1) {
        return PolicyDecision::wait();
    }
    const int level = std::min(state.energy, battery_capacity);
    return threshold_decision(state, params.thresholds[static_cast<std::size_t>(level - 1)]);
}

double energy_aware_beta(int z, int battery_capacity) {
    if (z < 0) {
        throw std::invalid_argument("energy_aware z must be nonnegative");
    }
    if (battery_capacity < 1) {
        throw IncompatibleError("energy_aware battery_capacity must be >= 1");
    }
    const double beta = static_cast<double>(z) * std::log(static_cast<double>(battery_capacity)) /
                        static_cast<double>(battery_capacity);
    if (!(beta < 1.0)) {
        throw std::domain_error("energy_aware beta = z*log(B)/B must be < 1");
    }
    return beta;
}

double energy_aware_period(int energy, int battery_capacity, double beta) {
    if (2 * energy < battery_capacity) {
        return 1.0 / (1.0 - beta);
    }
    if (2 * energy > battery_capacity) {
        return 1.0 / (1.0 + beta);
    }
    return 1.0;
}

PolicyDecision decide_energy_aware(const SensorState& state, const EnergyAwareParams& params,
                                   int battery_capacity, double anchor_time) {
    const double beta = energy_aware_beta(params.z, battery_capacity);
    const double slot = anchor_time + energy_aware_period(state.energy, battery_capacity, beta);
    return PolicyDecision::at(std::max(slot, state.now));
}

std::string policy_name(const PolicySpec& spec) {
    struct Visitor {
        std::string operator()(const ThresholdB2Params&) const { return "threshold_b2"; }
        std::string operator()(const SingleThresholdParams&) const { return "single_threshold"; }
        std::string operator()(const GeneralThresholdParams&) const { return "general_threshold"; }
        std::string operator()(const UniformParams&) const { return "uniform"; }
        std::string operator()(const EnergyAwareParams&) const { return "energy_aware"; }
    };
    return std::visit(Visitor{}, spec);
}

namespace {

class ThresholdB2Runtime final : public PolicyRuntime {
public:
    ThresholdB2Runtime(ThresholdB2Params params, int battery) : params_(params), battery_(battery) {}
    PolicyDecision decide(const SensorState& state) override {
        return decide_threshold_b2(state, params_, battery_);
    }
    bool renewal_epochs() const override { return true; }
    const char* name() const override { return "threshold_b2"; }

private:
    ThresholdB2Params params_;
    int battery_;
};

class SingleThresholdRuntime final : public PolicyRuntime {
public:
    SingleThresholdRuntime(SingleThresholdParams params, int battery)
        : params_(params), battery_(battery) {}
    PolicyDecision decide(const SensorState& state) override {
        return decide_single_threshold(state, params_, battery_);
    }
    bool renewal_epochs() const override { return true; }
    const char* name() const override { return "single_threshold"; }

private:
    SingleThresholdParams params_;
    int battery_;
};

class GeneralThresholdRuntime final : public PolicyRuntime {
public:
    GeneralThresholdRuntime(GeneralThresholdParams params, int battery)
        : params_(std::move(params)), battery_(battery) {}
    PolicyDecision decide(const SensorState& state) override {
        return decide_general_threshold(state, params_, battery_);
    }
    bool renewal_epochs() const override { return true; }
    const char* name() const override { return "general_threshold"; }

private:
    GeneralThresholdParams params_;
    int battery_;
};

// Shared runtime for the slotted baselines. The next slot is fixed when the
// previous one fires or skips; with restart_on_delivery the pending slot is
// instead re-derived from the current energy level on every query.
class SlotRuntime final : public PolicyRuntime {
public:
    SlotRuntime(double fixed_period, int battery, const char* label)
        : uniform_period_(fixed_period), battery_(battery), label_(label) {
        next_slot_ = period_for(0);
    }
    SlotRuntime(const EnergyAwareParams& params, int battery)
        : beta_(energy_aware_beta(params.z, battery)),
          battery_(battery),
          restart_on_delivery_(params.restart_on_delivery),
          label_("energy_aware") {
        next_slot_ = period_for(0);
    }

    PolicyDecision decide(const SensorState& state) override {
        if (restart_on_delivery_) {
            return PolicyDecision::at(std::max(anchor_ + period_for(state.energy), state.now));
        }
        return PolicyDecision::at(next_slot_);
    }

    bool slot_based() const override { return true; }

    void on_slot(const SensorState& state) override {
        anchor_ = state.now;
        next_slot_ = state.now + period_for(state.energy);
    }

    const char* name() const override { return label_; }

private:
    double period_for(int energy) const {
        if (uniform_period_ > 0.0) {
            return uniform_period_;
        }
        return energy_aware_period(energy, battery_, beta_);
    }

    double uniform_period_ = 0.0;
    double beta_ = 0.0;
    int battery_;
    bool restart_on_delivery_ = false;
    const char* label_;
    double anchor_ = 0.0;
    double next_slot_ = 0.0;
};

struct RuntimeBuilder {
    const SystemParams& params;
    std::string* warnings;

    std::unique_ptr<PolicyRuntime> operator()(const ThresholdB2Params& p) const {
        require_capacity(2, params.battery_capacity, "threshold_b2");
        if (!(p.lambda > 0.0) || !(p.x1 >= p.lambda)) {
            throw std::invalid_argument("threshold_b2 requires x1 >= lambda > 0");
        }
        return std::make_unique<ThresholdB2Runtime>(p, params.battery_capacity);
    }
    std::unique_ptr<PolicyRuntime> operator()(const SingleThresholdParams& p) const {
        require_capacity(1, params.battery_capacity, "single_threshold");
        if (!(p.threshold > 0.0)) {
            throw std::invalid_argument("single_threshold requires a positive threshold");
        }
        return std::make_unique<SingleThresholdRuntime>(p, params.battery_capacity);
    }
    std::unique_ptr<PolicyRuntime> operator()(const GeneralThresholdParams& p) const {
        if (static_cast<int>(p.thresholds.size()) != params.battery_capacity) {
            throw IncompatibleError("general_threshold needs one threshold per energy level");
        }
        for (double t : p.thresholds) {
            if (!(t > 0.0)) {
                throw std::invalid_argument("general_threshold thresholds must be positive");
            }
        }
        if (!std::is_sorted(p.thresholds.rbegin(), p.thresholds.rend()) && warnings != nullptr) {
            *warnings += "general_threshold: thresholds are not nonincreasing in energy; "
                         "monotone structure is only proven for B=2\n";
        }
        return std::make_unique<GeneralThresholdRuntime>(p, params.battery_capacity);
    }
    std::unique_ptr<PolicyRuntime> operator()(const UniformParams& p) const {
        if (!(p.period > 0.0)) {
            throw std::invalid_argument("uniform period must be positive");
        }
        return std::make_unique<SlotRuntime>(p.period, params.battery_capacity, "uniform");
    }
    std::unique_ptr<PolicyRuntime> operator()(const EnergyAwareParams& p) const {
        if (p.battery_capacity != 0 && p.battery_capacity != params.battery_capacity) {
            throw IncompatibleError("energy_aware battery_capacity disagrees with the system");
        }
        return std::make_unique<SlotRuntime>(p, params.battery_capacity);
    }
};

}  // namespace

std::unique_ptr<PolicyRuntime> make_policy_runtime(const PolicySpec& spec,
                                                   const SystemParams& params,
                                                   std::string* warnings) {
    return std::visit(RuntimeBuilder{params, warnings}, spec);
}

}  // namespace aoisim
