#include "aoisim/json_io.hpp"

#include <set>
#include <stdexcept>
#include <string>

namespace aoisim {

namespace {

void require_keys(const json& j, const std::set<std::string>& required,
                  const std::set<std::string>& optional = {}) {
    if (!j.is_object()) {
        throw std::invalid_argument("policy JSON must be an object");
    }
    for (const auto& [key, value] : j.items()) {
        if (required.count(key) == 0 && optional.count(key) == 0) {
            throw std::invalid_argument("unknown policy field: " + key);
        }
    }
    for (const std::string& key : required) {
        if (!j.contains(key)) {
            throw std::invalid_argument("missing policy field: " + key);
        }
    }
}

double as_number(const json& j, const char* key) {
    const json& v = j.at(key);
    if (!v.is_number()) {
        throw std::invalid_argument(std::string("policy field must be numeric: ") + key);
    }
    return v.get<double>();
}

int as_int(const json& j, const char* key) {
    const json& v = j.at(key);
    if (!v.is_number_integer()) {
        throw std::invalid_argument(std::string("policy field must be an integer: ") + key);
    }
    return v.get<int>();
}

}  // namespace

json policy_to_json(const PolicySpec& spec) {
    struct Visitor {
        json operator()(const ThresholdB2Params& p) const {
            return json{{"type", "threshold_b2"}, {"lambda", p.lambda}, {"x1", p.x1}};
        }
        json operator()(const SingleThresholdParams& p) const {
            return json{{"type", "single_threshold"}, {"threshold", p.threshold}};
        }
        json operator()(const GeneralThresholdParams& p) const {
            return json{{"type", "general_threshold"}, {"thresholds", p.thresholds}};
        }
        json operator()(const UniformParams& p) const {
            return json{{"type", "uniform"}, {"period", p.period}};
        }
        json operator()(const EnergyAwareParams& p) const {
            json out{{"type", "energy_aware"}, {"z", p.z}};
            if (p.battery_capacity != 0) {
                out["battery_capacity"] = p.battery_capacity;
            }
            if (p.restart_on_delivery) {
                out["restart_on_delivery"] = true;
            }
            return out;
        }
    };
    return std::visit(Visitor{}, spec);
}

PolicySpec policy_from_json(const json& j) {
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
        throw std::invalid_argument("policy JSON needs a string \"type\" field");
    }
    const std::string type = j.at("type").get<std::string>();
    if (type == "threshold_b2") {
        require_keys(j, {"type", "lambda", "x1"});
        return ThresholdB2Params{as_number(j, "lambda"), as_number(j, "x1")};
    }
    if (type == "single_threshold") {
        require_keys(j, {"type", "threshold"});
        return SingleThresholdParams{as_number(j, "threshold")};
    }
    if (type == "general_threshold") {
        require_keys(j, {"type", "thresholds"});
        const json& v = j.at("thresholds");
        if (!v.is_array() || v.empty()) {
            throw std::invalid_argument("general_threshold thresholds must be a nonempty array");
        }
        GeneralThresholdParams p;
        for (const json& item : v) {
            if (!item.is_number()) {
                throw std::invalid_argument("general_threshold thresholds must be numeric");
            }
            p.thresholds.push_back(item.get<double>());
        }
        return p;
    }
    if (type == "uniform") {
        require_keys(j, {"type"}, {"period"});
        UniformParams p;
        if (j.contains("period")) {
            p.period = as_number(j, "period");
        }
        return p;
    }
    if (type == "energy_aware") {
        require_keys(j, {"type", "z"}, {"battery_capacity", "restart_on_delivery"});
        EnergyAwareParams p;
        p.z = as_int(j, "z");
        if (j.contains("battery_capacity")) {
            p.battery_capacity = as_int(j, "battery_capacity");
        }
        if (j.contains("restart_on_delivery")) {
            if (!j.at("restart_on_delivery").is_boolean()) {
                throw std::invalid_argument("restart_on_delivery must be a boolean");
            }
            p.restart_on_delivery = j.at("restart_on_delivery").get<bool>();
        }
        return p;
    }
    throw std::invalid_argument("unknown policy type: " + type);
}

json to_json(const ThresholdSolution& solution) {
    return json{{"lambda_star", solution.lambda_star},
                {"x1_star", solution.x1_star},
                {"objective", solution.objective},
                {"solver_tolerance", solution.solver_tolerance}};
}

json to_json(const EpochExpectations& expectations) {
    return json{{"expected_area", expectations.expected_area},
                {"expected_length", expectations.expected_length},
                {"ratio", expectations.ratio}};
}

json to_json(const PatternSumResult& result) {
    json out = to_json(result.values);
    out["tail_bound_area"] = result.tail_bound_area;
    out["tail_bound_length"] = result.tail_bound_length;
    out["m_max"] = result.m_max;
    return out;
}

json to_json(const RenewalDiagnostics& diagnostics) {
    return json{{"lag1_autocorr_length", diagnostics.lag1_autocorr_length},
                {"lag1_autocorr_area", diagnostics.lag1_autocorr_area},
                {"split_half_ks_statistic", diagnostics.split_half_ks_statistic},
                {"n_epochs", diagnostics.n_epochs}};
}

json to_json(const SimResult& result) {
    json out{{"average_age", result.average_age},
             {"ci_halfwidth", result.ci_halfwidth},
             {"ci_method", result.ci_method},
             {"total_updates", result.total_updates},
             {"total_arrivals", result.total_arrivals},
             {"discarded_arrivals", result.discarded_arrivals},
             {"silent_slots", result.silent_slots},
             {"horizon_used", result.horizon_used},
             {"epoch_count", result.epochs.size()},
             {"residual_length", result.residual_length},
             {"residual_area", result.residual_area},
             {"area_total", result.area_total}};
    if (!result.epochs.empty()) {
        double length = 0.0;
        double area = 0.0;
        for (const EpochRecord& e : result.epochs) {
            length += e.length;
            area += e.area;
        }
        out["epoch_mean_length"] = length / static_cast<double>(result.epochs.size());
        out["epoch_mean_area"] = area / static_cast<double>(result.epochs.size());
    }
    return out;
}

}  // namespace aoisim
