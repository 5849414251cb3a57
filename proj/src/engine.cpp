#include "aoisim/engine.hpp"

#include <cmath>
#include <ostream>

#include "aoisim/format.hpp"
#include "aoisim/stats.hpp"

namespace aoisim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kTimeBatches = 100;
constexpr std::size_t kMinEpochsForEpochCi = 1000;

struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

// Per-batch area under the age curve over equal time slices, for the
// batch-means CI used when no epoch decomposition is available.
class TimeBatchAccumulator {
public:
    TimeBatchAccumulator(double horizon, int batches)
        : width_(horizon / batches), areas_(static_cast<std::size_t>(batches), 0.0) {}

    // Adds the exact age integral over [from, to) given the current
    // last-update instant, split across batch boundaries.
    void add_segment(double from, double to, double last_update) {
        if (!(to > from)) {
            return;
        }
        auto index = static_cast<std::size_t>(from / width_);
        double cursor = from;
        while (cursor < to) {
            if (index >= areas_.size()) {
                index = areas_.size() - 1;  // guards the horizon endpoint
            }
            const double edge = std::min(to, width_ * static_cast<double>(index + 1));
            const double a = cursor - last_update;
            const double b = edge - last_update;
            areas_[index] += 0.5 * (b * b - a * a);
            cursor = edge;
            ++index;
        }
    }

    double ci_halfwidth() const {
        const auto n = static_cast<double>(areas_.size());
        double mean = 0.0;
        for (double a : areas_) {
            mean += a / width_;
        }
        mean /= n;
        double var = 0.0;
        for (double a : areas_) {
            const double d = a / width_ - mean;
            var += d * d;
        }
        var /= (n - 1.0);
        return student_t_975(static_cast<int>(areas_.size()) - 1) * std::sqrt(var / n);
    }

private:
    double width_;
    std::vector<double> areas_;
};

}  // namespace

SimResult simulate(const SystemParams& params, const PolicySpec& policy,
                   const SimulateOptions& options) {
    params.validate();
    auto runtime = make_policy_runtime(policy, params, options.warnings);
    const int capacity = params.battery_capacity;
    const double horizon = params.horizon;

    ArrivalStream stream(params.seed, params.arrival_rate);
    SensorState state;
    double next_arrival = stream.next_interarrival();
    PolicyDecision decision = runtime->decide(state);

    SimResult result;
    result.horizon_used = horizon;
    KahanSum area_total;
    TimeBatchAccumulator batches(horizon, kTimeBatches);
    const bool record_epochs = runtime->renewal_epochs();

    double epoch_start = 0.0;
    double epoch_area = 0.0;
    int epoch_updates = 0;
    double last_close = 0.0;
    KahanSum residual_area;  // area of updates since the last epoch boundary

    auto advance_to = [&](double t) {
        batches.add_segment(state.now, t, state.last_update_time);
        state.now = t;
    };

    while (true) {
        const double scheduled = decision.update_at.value_or(kInf);
        const double next_event = std::min(next_arrival, scheduled);
        if (next_event > horizon) {
            break;
        }
        if (next_arrival <= scheduled) {  // arrival first on ties
            advance_to(next_arrival);
            ++result.total_arrivals;
            if (state.energy == capacity) {
                ++result.discarded_arrivals;
            } else {
                apply_arrival(state, capacity);
            }
            next_arrival = state.now + stream.next_interarrival();
        } else {
            advance_to(scheduled);
            if (state.energy >= 1) {
                const double delay = state.now - state.last_update_time;
                apply_update(state);
                const double triangle = 0.5 * delay * delay;
                area_total.add(triangle);
                ++result.total_updates;
                if (options.update_observer) {
                    options.update_observer(state.now, delay);
                }
                if (record_epochs) {
                    epoch_area += triangle;
                    ++epoch_updates;
                    if (state.energy == 0) {
                        result.epochs.push_back(EpochRecord{state.now - epoch_start, epoch_area,
                                                            epoch_updates, epoch_updates});
                        epoch_start = state.now;
                        last_close = state.now;
                        epoch_area = 0.0;
                        epoch_updates = 0;
                    }
                } else {
                    residual_area.add(triangle);
                }
            } else {
                ++result.silent_slots;
            }
            if (runtime->slot_based()) {
                runtime->on_slot(state);
            }
        }
        decision = runtime->decide(state);
    }

    advance_to(horizon);
    const double tail_age = horizon - state.last_update_time;
    const double tail_triangle = 0.5 * tail_age * tail_age;
    area_total.add(tail_triangle);
    if (record_epochs) {
        residual_area.add(epoch_area);  // open partial epoch
    }
    residual_area.add(tail_triangle);

    result.area_total = area_total.sum;
    result.average_age = area_total.sum / horizon;
    result.residual_length = horizon - last_close;
    result.residual_area = residual_area.sum;

    if (record_epochs && result.epochs.size() >= kMinEpochsForEpochCi) {
        const RatioEstimate est = long_run_estimate(result.epochs);
        result.ci_halfwidth = est.ci_halfwidth;
        result.ci_method = est.method;
    } else {
        result.ci_halfwidth = batches.ci_halfwidth();
        result.ci_method = "time_batch_means";
    }
    return result;
}

void write_epoch_csv(std::ostream& out, const std::vector<EpochRecord>& epochs) {
    out << "epoch_index,length,area,update_count,pattern_index\n";
    for (std::size_t i = 0; i < epochs.size(); ++i) {
        const EpochRecord& e = epochs[i];
        out << i << ',' << format_double(e.length) << ',' << format_double(e.area) << ','
            << e.update_count << ',';
        if (e.truncated()) {
            out << "truncated";
        } else {
            out << e.pattern_index;
        }
        out << '\n';
    }
}

}  // namespace aoisim
