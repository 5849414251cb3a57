#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <clocale>

#include "aoisim/format.hpp"
#include "aoisim/json_io.hpp"

using namespace aoisim;

TEST_CASE("policy JSON round trips preserve every variant") {
    const std::vector<PolicySpec> specs = {
        ThresholdB2Params{0.72, 1.48},
        SingleThresholdParams{0.9012},
        GeneralThresholdParams{{1.48, 0.72}},
        UniformParams{0.5},
        EnergyAwareParams{2, 2, true},
    };
    for (const PolicySpec& spec : specs) {
        const json encoded = policy_to_json(spec);
        const PolicySpec decoded = policy_from_json(encoded);
        CHECK(policy_to_json(decoded) == encoded);
    }
}

TEST_CASE("policy JSON uses the documented field names") {
    const json b2 = policy_to_json(ThresholdB2Params{0.72, 1.48});
    CHECK(b2.at("type") == "threshold_b2");
    CHECK(b2.at("lambda") == 0.72);
    CHECK(b2.at("x1") == 1.48);

    const PolicySpec single = policy_from_json(
        json::parse(R"({"type":"single_threshold","threshold":0.9012})"));
    CHECK(std::get<SingleThresholdParams>(single).threshold == 0.9012);

    const PolicySpec ea = policy_from_json(json::parse(R"({"type":"energy_aware","z":3})"));
    CHECK(std::get<EnergyAwareParams>(ea).z == 3);
    CHECK(std::get<EnergyAwareParams>(ea).battery_capacity == 0);
    CHECK_FALSE(std::get<EnergyAwareParams>(ea).restart_on_delivery);
}

TEST_CASE("policy parsing is strict") {
    CHECK_THROWS_AS(policy_from_json(json::parse(R"({"type":"threshold_b2","lambda":0.7})")),
                    std::invalid_argument);  // missing x1
    CHECK_THROWS_AS(
        policy_from_json(json::parse(R"({"type":"threshold_b2","lambda":0.7,"x1":1.4,"extra":1})")),
        std::invalid_argument);  // unknown field
    CHECK_THROWS_AS(policy_from_json(json::parse(R"({"type":"warp_drive"})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(policy_from_json(json::parse(R"({"lambda":0.7})")), std::invalid_argument);
    CHECK_THROWS_AS(policy_from_json(json::parse(R"({"type":"uniform","period":"fast"})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(policy_from_json(json::parse(R"({"type":"energy_aware","z":1.5})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(policy_from_json(json::parse(R"({"type":"general_threshold","thresholds":[]})")),
                    std::invalid_argument);
}

TEST_CASE("solution and expectation JSON carry the documented fields") {
    const json sol = to_json(ThresholdSolution{0.7197, 1.479, 0.7197, 1e-8});
    CHECK(sol.at("lambda_star") == 0.7197);
    CHECK(sol.at("x1_star") == 1.479);
    CHECK(sol.at("objective") == 0.7197);
    CHECK(sol.at("solver_tolerance") == 1e-8);

    const json ee = to_json(EpochExpectations{2.41, 3.35, 0.7197});
    CHECK(ee.at("expected_area") == 2.41);
    CHECK(ee.at("expected_length") == 3.35);
    CHECK(ee.at("ratio") == 0.7197);
}

TEST_CASE("sim result JSON summarizes the run") {
    SimResult r;
    r.average_age = 0.72;
    r.ci_halfwidth = 0.002;
    r.ci_method = "batch_means";
    r.total_updates = 10;
    r.total_arrivals = 12;
    r.discarded_arrivals = 1;
    r.horizon_used = 100.0;
    r.epochs = {{2.0, 2.0, 1, 1}, {3.0, 3.0, 2, 2}};
    r.residual_length = 5.0;
    r.residual_area = 1.0;
    r.area_total = 72.0;
    const json j = to_json(r);
    CHECK(j.at("average_age") == 0.72);
    CHECK(j.at("epoch_count") == 2);
    CHECK(j.at("epoch_mean_length") == 2.5);
    CHECK(j.at("total_updates") == 10);
    CHECK(j.at("ci_method") == "batch_means");
}

TEST_CASE("format_double is plain and locale independent") {
    // Even under a decimal-comma locale the output keeps the point.
    const char* previous = std::setlocale(LC_NUMERIC, "de_DE.UTF-8");
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(1e6) == "1000000");
    CHECK(format_double(1e13) == "1e+13");
    CHECK(format_double(0.71975404069605516) == "0.719754040696");
    if (previous != nullptr) {
        std::setlocale(LC_NUMERIC, "C");
    }
}
